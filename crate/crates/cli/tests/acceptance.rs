//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test -p donorspin --test acceptance`.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use donorspin::commands::{self, SensitivityArgs};
use donorspin::config::{load_run_config, Loaded, RunConfig};
use donorspin::data::read_dataset;
use donorspin_core::fit::compare_models;
use donorspin_core::qubit::{
    qubit_frequency, relative_difference, responsivity, responsivity_finite_difference, QubitParams,
};
use donorspin_core::spin::{
    breit_rabi_levels, resonance_fields, solve, Field, ResonanceSearch, SpinSpecies,
};
use donorspin_core::thermo::{
    crossover, magnetization_curie, magnetization_exact, max_curvature_in_x,
    temperature_from_reduced, CROSSOVER_GRID_POINTS, CROSSOVER_X_RANGE,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const BI_SPLITTING_MHZ: f64 = 7377.0;
const TRUE_RATIO: f64 = 0.873;

fn field(b: f64) -> Field {
    Field::from_millitesla(b).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_zero_field_splitting() -> Outcome {
    let es = solve(&SpinSpecies::bismuth(), Field::ZERO).map_err(|e| e.to_string())?;
    let e = es.energies();
    let split = e[9] - e[8];
    let rel = (split - BI_SPLITTING_MHZ).abs() / BI_SPLITTING_MHZ;
    check(
        rel <= 1e-6,
        format!("E(F=5)-E(F=4) = {split:.9} MHz, rel err {rel:.1e}"),
    )
}

fn c2_breit_rabi_equivalence() -> Outcome {
    let bi = SpinSpecies::bismuth();
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..50 {
        let b = 10f64.powf(-3.0 + 6.0 * k as f64 / 49.0);
        let numeric = solve(&bi, field(b)).map_err(|e| e.to_string())?;
        let closed = breit_rabi_levels(&bi, field(b)).map_err(|e| e.to_string())?;
        if closed.len() != 20 || numeric.energies().len() != 20 {
            return Err(format!("expected 20 levels at B = {b} mT"));
        }
        let scale = closed.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (x, y) in numeric.energies().iter().zip(&closed) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    check(
        worst <= 1e-8 && secs < 1.0,
        format!("50 fields 1e-3..1e3 mT x 20 levels, max rel err {worst:.1e}, {secs:.3} s"),
    )
}

fn c3_degeneracy() -> Outcome {
    let es = solve(&SpinSpecies::bismuth(), Field::ZERO).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = es
        .degenerate_clusters(1e-6)
        .iter()
        .map(|r| r.len())
        .collect();
    check(sizes == [9, 11], format!("multiplicities {sizes:?}"))
}

fn c4_limiting_slopes() -> Outcome {
    let bi = SpinSpecies::bismuth();
    let a = bi.hyperfine_mhz();
    let ratio = bi.zeeman_mhz(field(0.2)) / a;
    let m = |x: f64| magnetization_exact(&bi, field(0.2), temperature_from_reduced(a, x)).unwrap();
    let high = (1..=20)
        .map(|k| 0.05 * k as f64 / 20.0)
        .map(|x| ((m(x) / x) / (0.5 * ratio) - 1.0).abs())
        .fold(0.0, f64::max);
    let xs: Vec<f64> = (0..=40).map(|k| 3.0 + 2.0 * k as f64 / 40.0).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| m(x)).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let low = (sxy / sxx / ratio) / (2.0 / 15.0) - 1.0;
    check(
        high <= 0.01 && low.abs() <= 0.02,
        format!(
            "x<=0.05: max dev from 1/2 slope {:.3}%; x in [3,5]: slope dev from 2/15 {:.3}%",
            high * 100.0,
            low * 100.0
        ),
    )
}

fn c5_kink() -> Outcome {
    let c = crossover(
        &SpinSpecies::bismuth(),
        field(0.2),
        CROSSOVER_X_RANGE,
        CROSSOVER_GRID_POINTS,
    )
    .map_err(|e| e.to_string())?;
    let mk = c.temperature_k * 1e3;
    let (_, t_curv) =
        max_curvature_in_x(&SpinSpecies::bismuth(), field(0.2), CROSSOVER_X_RANGE, 2001)
            .map_err(|e| e.to_string())?;
    check(
        (70.0..=140.0).contains(&mk),
        format!(
            "log-log crossover at {mk:.2} mK (x = {:.4}, dlnm/dlnT = {:.3}); max |d2m/dx2| at {:.1} mK, diagnostic only",
            c.reduced_inverse_temperature,
            c.log_slope,
            t_curv * 1e3
        ),
    )
}

fn c6_universality() -> Outcome {
    let g = 2.0003;
    let hyperfine = [100.0, 1475.4, 5000.0];
    let mut worst = 0.0f64;
    for &a in &hyperfine {
        let sp = SpinSpecies::new("v", 0.5, 4.5, g, a).map_err(|e| e.to_string())?;
        for k in 1..=10 {
            let x = 0.005 * k as f64;
            let t = temperature_from_reduced(a, x);
            let exact = magnetization_exact(&sp, field(0.2), t).unwrap();
            let curie = magnetization_curie(g, field(0.2), t).unwrap().value;
            worst = worst.max((exact / curie - 1.0).abs());
            // Same temperature, other hyperfine constants, where x <= 0.05 for all.
            if x * 5000.0 / a <= 0.05 {
                for &other in &hyperfine {
                    let sp2 = SpinSpecies::new("w", 0.5, 4.5, g, other).unwrap();
                    let m2 = magnetization_exact(&sp2, field(0.2), t).unwrap();
                    worst = worst.max((m2 / exact - 1.0).abs());
                }
            }
        }
    }
    check(
        worst <= 0.01,
        format!(
            "A in {hyperfine:?} MHz, x <= 0.05: max deviation {:.3}%",
            worst * 100.0
        ),
    )
}

fn bundled_config() -> Result<Loaded<RunConfig>, String> {
    load_run_config(Some(&common::package_root().join("configs/bismuth.json")))
        .map_err(|e| e.to_string())
}

fn c7_fit_recovery() -> Outcome {
    let cfg = bundled_config()?;
    let t0 = Instant::now();
    let path = common::package_root().join("data/synthetic_bi_e12.csv");
    let (data, _) =
        read_dataset(&path, cfg.value.fit.reference_t_mk * 1e-3).map_err(|e| e.to_string())?;
    let model = cfg.value.fit_model();
    let reduced = [model.reduced_to(0).unwrap(), model.reduced_to(1).unwrap()];
    let cmp = compare_models(&data, &model, &reduced).map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    let r = cmp.full.ratio.ok_or("no ratio")?;
    let z = (r.value - TRUE_RATIO).abs() / r.sigma;
    let ratios: Vec<String> = cmp
        .reduced
        .iter()
        .map(|x| format!("{} {:.2}", x.model, x.rss_ratio))
        .collect();
    check(
        z <= 3.0 && cmp.reduced.iter().all(|x| x.rss_ratio >= 2.0) && secs < 1.0,
        format!(
            "r = {:.4} +/- {:.4} ({z:.2} sigma from {TRUE_RATIO}); RSS ratios {}; {secs:.3} s",
            r.value,
            r.sigma,
            ratios.join(", ")
        ),
    )
}

fn c8_qubit_transfer() -> Outcome {
    let q = QubitParams::reference();
    let f0 = qubit_frequency(&q, 0.0);
    let slope = q.flux_slope_ghz_per_mphi0();
    let slope_err = (slope / 2.8648 - 1.0).abs();
    let far = (responsivity(&q, 100.0) / slope - 1.0).abs();
    let fd = relative_difference(
        responsivity(&q, 0.5),
        responsivity_finite_difference(&q, 0.5, 1e-4),
    );
    check(
        (f0 - 1.91).abs() < 1e-12 && slope_err <= 1e-3 && far <= 1e-3 && fd <= 1e-6,
        format!(
            "f(0) = {f0} GHz; 2IpPhi0/h = {slope:.5} GHz/mPhi0 ({:.3}% from 2.8648); df/dPhi(100 mPhi0) within {:.1e}; FD rel diff {fd:.1e}",
            slope_err * 100.0, far
        ),
    )
}

fn c9_figures_of_merit() -> Outcome {
    let root = common::package_root();
    let cfg = bundled_config()?;
    let run = |qubit: &str| -> Result<donorspin::report::Report, String> {
        let args = SensitivityArgs {
            sensitivity: Some(root.join("configs/sensitivity_reference.json")),
            qubit: Some(root.join(Path::new("configs").join(qubit))),
        };
        commands::sensitivity(&cfg, &args)
            .map(|o| o.report)
            .map_err(|e| e.to_string())
    };
    let reference = run("qubit_reference.json")?;
    let enlarged = run("qubit_enlarged.json")?;
    let v = |r: &donorspin::report::Report, n: &str| r.value(n).unwrap_or(f64::NAN);
    let exact = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y;
    let (s, vol, per) = (
        v(&reference, "spin_sensitivity"),
        v(&reference, "detection_volume"),
        v(&reference, "volume_sensitivity"),
    );
    let big = v(&enlarged, "detection_volume");
    check(
        exact(s, 12.0) && exact(vol, 5.0) && exact(per, 2.0) && exact(big, 50.0),
        format!("{s} spins/sqrt(Hz), {vol} um3, {per} spins/um3; enlarged loop {big} um3"),
    )
}

fn c10_esr_count() -> Outcome {
    let search =
        ResonanceSearch::new(0.0, 1000.0).with_intensity_floor(commands::DEFAULT_INTENSITY_FLOOR);
    let lines =
        resonance_fields(&SpinSpecies::bismuth(), 9.6, search).map_err(|e| e.to_string())?;
    let (lo, hi) = lines.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(r.intensity), hi.max(r.intensity))
    });
    let distinct_mi = {
        let mut m: Vec<i64> = lines
            .iter()
            .map(|r| (2.0 * r.nuclear_projection).round() as i64)
            .collect();
        m.sort();
        m.dedup();
        m.len()
    };
    check(
        lines.len() == 10 && hi / lo <= 2.0 && distinct_mi == 10,
        format!(
            "{} lines at 9.6 GHz ({:.1}-{:.1} mT), intensity max/min {:.3}, {distinct_mi} distinct m_I",
            lines.len(),
            lines.first().map_or(f64::NAN, |r| r.field_mt),
            lines.last().map_or(f64::NAN, |r| r.field_mt),
            hi / lo
        ),
    )
}

fn c11_determinism() -> Outcome {
    let mut runs = 0;
    for (name, args) in common::CASES {
        let a = common::run(args);
        let b = common::run(args);
        runs += 2;
        if a.code != 0 {
            return Err(format!("{name} exited with {}", a.code));
        }
        if a.stdout != b.stdout || a.stderr != b.stderr {
            return Err(format!("{name}: repeated runs differ"));
        }
        common::check_golden(
            &common::golden_dir().join(format!("{name}.stdout")),
            &a.stdout,
        )?;
    }
    for (name, args) in common::DIR_CASES {
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (_, f1) = common::run_dir(args, d1.path());
        let (_, f2) = common::run_dir(args, d2.path());
        runs += 2;
        if f1 != f2 {
            return Err(format!("{name}: output directories differ"));
        }
    }
    Ok(format!(
        "{} golden cases, {runs} runs, byte-identical and equal to golden files",
        common::CASES.len() + common::DIR_CASES.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("zero-field hyperfine splitting", c1_zero_field_splitting),
        ("Breit-Rabi oracle equivalence", c2_breit_rabi_equivalence),
        ("zero-field degeneracy 9 + 11", c3_degeneracy),
        ("limiting slopes 1/2 and 2/15", c4_limiting_slopes),
        ("kink location", c5_kink),
        ("high-temperature universality", c6_universality),
        ("fit recovery and model comparison", c7_fit_recovery),
        ("qubit transfer function", c8_qubit_transfer),
        ("figures of merit", c9_figures_of_merit),
        ("ESR line count", c10_esr_count),
        ("CLI determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("PASS {:>2} {name}: {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
