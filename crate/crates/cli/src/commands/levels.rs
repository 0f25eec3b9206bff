use std::fmt::Write;

use donorspin_core::spin::{solve, Field};

use super::{base_report, finish, species_parameters};
use crate::config::{Loaded, RunConfig};
use crate::error::{CliError, Result};
use crate::format::number;
use crate::output::{CommandOutput, Table};

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct LevelsArgs {
    /// Species name (default: first configured species)
    #[arg(long)]
    pub species: Option<String>,
    /// First field of the sweep, mT
    #[arg(long = "start-mT", default_value_t = 0.0)]
    pub start_mt: f64,
    /// Last field of the sweep, mT
    #[arg(long = "stop-mT", default_value_t = 500.0)]
    pub stop_mt: f64,
    /// Number of field points
    #[arg(long, default_value_t = 101)]
    pub count: usize,
}

pub fn field_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(CliError::Usage(
            "empty field range: count must be >= 1".into(),
        ));
    }
    if !(start.is_finite() && stop.is_finite() && start >= 0.0 && stop >= start) {
        return Err(CliError::Usage(format!(
            "empty field range: need 0 <= start <= stop, got {start} .. {stop} mT"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
        .collect())
}

pub fn levels(cfg: &Loaded<RunConfig>, args: &LevelsArgs) -> Result<CommandOutput> {
    let sp = cfg.value.select_species(args.species.as_deref())?;
    let grid = field_grid(args.start_mt, args.stop_mt, args.count)?;
    let mut report = base_report("levels", cfg);
    species_parameters(&mut report, &sp);
    report
        .parameter("field_start", args.start_mt, "mT")
        .parameter("field_stop", args.stop_mt, "mT")
        .parameter("field_points", args.count as f64, "1");

    let mut table = Table::new("levels", &["B_mT", "level", "E_MHz"]);
    for &b in &grid {
        let es = solve(&sp, Field::from_millitesla(b)?)?;
        for (k, &e) in es.energies().iter().enumerate() {
            table.push(vec![b.into(), k.into(), e.into()]);
        }
    }

    let zero = solve(&sp, Field::ZERO)?;
    let e = zero.energies();
    let scale = e.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let clusters = zero.degenerate_clusters(1e-6 * scale);
    let multiplicities: Vec<String> = clusters.iter().map(|c| c.len().to_string()).collect();
    let mut summary = String::new();
    writeln!(summary, "{}: {} levels", sp.name(), sp.dimension()).unwrap();
    writeln!(
        summary,
        "zero-field multiplicities: {}",
        multiplicities.join(", ")
    )
    .unwrap();
    report
        .result("levels", sp.dimension() as f64, "1")
        .result_text("zero_field_multiplicities", &multiplicities.join(","));
    if clusters.len() > 1 {
        let mean = |r: &std::ops::Range<usize>| e[r.clone()].iter().sum::<f64>() / r.len() as f64;
        let splitting = mean(clusters.last().unwrap()) - mean(&clusters[0]);
        report.result("zero_field_splitting", splitting, "MHz");
        writeln!(summary, "zero-field splitting: {} MHz", number(splitting)).unwrap();
    }
    Ok(finish(vec![table], Some(0), summary, report))
}
