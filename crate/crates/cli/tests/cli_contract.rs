//! Exit codes, diagnostics and CSV round trips.

mod common;

use common::{run, run_dir, CASES, DIR_CASES};
use donorspin::data::{parse_dataset, read_csv};
use donorspin::format::number;

#[test]
fn usage_and_validation_errors_exit_with_2() {
    for args in [
        &["levels", "--count", "0"][..],
        &["levels", "--start-mT", "10", "--stop-mT", "5"],
        &["esr", "--frequency-GHz", "-1"],
        &["frobnicate"],
        &["--format", "xml", "levels"],
    ] {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn missing_files_exit_with_1_and_name_the_path() {
    let r = run(&["sensitivity", "--sensitivity", "no/such/file.json"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no/such/file.json"), "{}", r.stderr);
    let r = run(&["--config", "missing.json", "levels"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("missing.json"));
}

#[test]
fn too_few_rows_is_a_precondition_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.csv");
    std::fs::write(&path, "T_mK,flux_shift_uPhi0\n30,1\n40,0.5\n50,0.2\n").unwrap();
    let r = run(&["fit", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("insufficient data"), "{}", r.stderr);
}

#[test]
fn malformed_rows_and_configs_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    std::fs::write(&data, "T_mK,flux_shift_uPhi0\n30,1\n40,x\n50,0.2\n60,0.1\n").unwrap();
    let r = run(&["fit", data.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("row 2"), "{}", r.stderr);

    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        "{\n  \"species\": [\"Bi\"],\n  \"field_mT\": \"high\"\n}\n",
    )
    .unwrap();
    let r = run(&["--config", cfg.to_str().unwrap(), "levels"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}

#[test]
fn log_grid_with_one_point_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.json");
    std::fs::write(
        &cfg,
        r#"{"species": ["Bi"], "field_mT": 0.2,
            "temperature_grid": {"start_mK": 100, "stop_mK": 200, "count": 1, "spacing": "log"}}"#,
    )
    .unwrap();
    let r = run(&["--config", cfg.to_str().unwrap(), "magnetization"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, rows) = read_csv(&r.stdout).unwrap();
    assert_eq!(header, ["T_K", "m_exact", "m_eq3", "m_eq4"]);
    assert_eq!(rows.len(), 1);
}

fn assert_cells_round_trip(label: &str, csv: &str) {
    let (header, rows) = read_csv(csv).unwrap_or_else(|e| panic!("{label}: {e}"));
    assert!(!header.is_empty());
    for row in rows {
        assert_eq!(row.len(), header.len(), "{label}");
        for cell in row {
            if let Ok(x) = cell.parse::<f64>() {
                assert_eq!(number(x), cell, "{label}");
            }
        }
    }
}

#[test]
fn emitted_csv_parses_back() {
    for (name, args) in CASES {
        if args.contains(&"json") || args.contains(&"fit") {
            continue;
        }
        assert_cells_round_trip(name, &run(args).stdout);
    }
    for (name, args) in DIR_CASES {
        let tmp = tempfile::tempdir().unwrap();
        let (_, files) = run_dir(args, tmp.path());
        for (file, text) in files.iter().filter(|(f, _)| f.ends_with(".csv")) {
            assert_cells_round_trip(&format!("{name}/{file}"), text);
        }
    }
}

#[test]
fn synthetic_data_round_trips_through_the_fit_reader() {
    let text = run(&["synth"]).stdout;
    let data = parse_dataset(&text, "synth", 0.2).unwrap();
    assert_eq!(data.len(), 35);
    assert_eq!(
        donorspin::data::dataset_table("synthetic", &data).to_csv(),
        text
    );
}

#[test]
fn seed_flag_changes_only_the_noise() {
    let a = run(&["synth"]).stdout;
    let b = run(&["--seed", "8", "synth"]).stdout;
    assert_ne!(a, b);
    let (_, ra) = read_csv(&a).unwrap();
    let (_, rb) = read_csv(&b).unwrap();
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!(x[0], y[0]);
        let d = x[1].parse::<f64>().unwrap() - y[1].parse::<f64>().unwrap();
        assert!(d.abs() < 10.0 * 0.357);
    }
}

#[test]
fn json_tables_are_records() {
    let r = run(&["--format", "json", "magnetization"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 35);
    assert!(rows[0]["T_K"].is_number() && rows[0]["m_combined"].is_number());
}

#[test]
fn report_lists_units_and_digests() {
    let tmp = tempfile::tempdir().unwrap();
    let (r, files) = run_dir(&["fit", "data/synthetic_bi_e12.csv"], tmp.path());
    assert_eq!(r.code, 0);
    let report = &files.iter().find(|(f, _)| f == "report.json").unwrap().1;
    let v: serde_json::Value = serde_json::from_str(report).unwrap();
    assert_eq!(v["tool"], "donorspin");
    let inputs = v["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 2);
    let bytes = std::fs::read(common::package_root().join("data/synthetic_bi_e12.csv")).unwrap();
    assert_eq!(inputs[1]["sha256"], donorspin::report::sha256_hex(&bytes));
    for q in v["parameters"]
        .as_array()
        .unwrap()
        .iter()
        .chain(v["results"].as_array().unwrap())
    {
        assert!(q["unit"].as_str().is_some_and(|u| !u.is_empty()), "{q}");
    }
}
