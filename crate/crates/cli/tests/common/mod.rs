#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// Golden cases: name and arguments, run from the package root.
pub const CASES: &[(&str, &[&str])] = &[
    ("levels_bi", &["levels", "--count", "11"]),
    (
        "levels_zero_field",
        &["levels", "--stop-mT", "0", "--count", "1"],
    ),
    ("populations_bi", &["populations"]),
    ("magnetization_bi_e12", &["magnetization"]),
    ("magnetization_json", &["--format", "json", "magnetization"]),
    (
        "magnetization_pb0",
        &["--config", "configs/pb0.json", "magnetization"],
    ),
    ("qubit_reference", &["qubit", "--count", "21"]),
    ("esr_bi", &["esr"]),
    (
        "esr_pb0",
        &[
            "--config",
            "configs/pb0.json",
            "esr",
            "--frequency-GHz",
            "9.6",
        ],
    ),
    (
        "esr_empty_range",
        &["esr", "--start-mT", "600", "--stop-mT", "900"],
    ),
    ("fit_bundled", &["fit", "data/synthetic_bi_e12.csv"]),
    (
        "fit_bundled_json",
        &["--format", "json", "fit", "data/synthetic_bi_e12.csv"],
    ),
    (
        "sensitivity_reference",
        &[
            "sensitivity",
            "--sensitivity",
            "configs/sensitivity_reference.json",
            "--qubit",
            "configs/qubit_reference.json",
        ],
    ),
    (
        "sensitivity_enlarged",
        &[
            "sensitivity",
            "--sensitivity",
            "configs/sensitivity_reference.json",
            "--qubit",
            "configs/qubit_enlarged.json",
        ],
    ),
    ("synth_bundled", &["synth"]),
];

/// Cases run with `--out <dir>`; every written file is compared.
pub const DIR_CASES: &[(&str, &[&str])] = &[
    ("magnetization_files", &["magnetization"]),
    ("fit_files", &["fit", "data/synthetic_bi_e12.csv"]),
];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn package_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    package_root().join("tests").join("golden")
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_donorspin"))
        .args(args)
        .current_dir(package_root())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Runs a directory case into `dir` and returns (file name, contents), sorted.
pub fn run_dir(args: &[&str], dir: &Path) -> (Run, Vec<(String, String)>) {
    let mut full: Vec<&str> = vec!["--out", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    let r = run(&full);
    let mut files: Vec<(String, String)> = std::fs::read_dir(dir)
        .map(|it| {
            it.map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read_to_string(e.path()).unwrap(),
                )
            })
            .collect()
        })
        .unwrap_or_default();
    files.sort();
    (r, files)
}

pub fn updating() -> bool {
    std::env::var_os("DONORSPIN_UPDATE_GOLDEN").is_some()
}

/// Compares `actual` with the golden file, or rewrites it when updating.
pub fn check_golden(path: &Path, actual: &str) -> Result<(), String> {
    if updating() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(path).map_err(|e| {
        format!(
            "{}: {e} (set DONORSPIN_UPDATE_GOLDEN=1 to create)",
            path.display()
        )
    })?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "length".to_string(), |k| format!("line {}", k + 1));
        Err(format!("{} differs at {line}", path.display()))
    }
}
