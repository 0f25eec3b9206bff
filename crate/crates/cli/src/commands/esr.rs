use std::fmt::Write;

use donorspin_core::spin::{
    half_integer_label, resonance_field_for_g, resonance_fields, ResonanceSearch,
    DEFAULT_RESONANCE_GRID,
};

use super::{base_report, finish, species_parameters};
use crate::config::{Loaded, RunConfig};
use crate::error::{CliError, Result};
use crate::format::number;
use crate::output::{Cell, CommandOutput, Table};

/// Assumed X-band frequency when none is given.
pub const DEFAULT_FREQUENCY_GHZ: f64 = 9.6;
/// Default transition-strength floor: 10 % of the largest electron-flip
/// value |<u|Sx|l>|² = 1/4.
pub const DEFAULT_INTENSITY_FLOOR: f64 = 0.025;

/// Literature g-values drawn as annotation rows, not computed.
pub const REFERENCE_MARKERS: [(f64, &str); 3] = [
    (2.006, "P_b0 Si/SiO2 dangling bond"),
    (4.3, "Fe3+"),
    (2.07, "iron"),
];

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct EsrArgs {
    /// Species name (default: first configured species)
    #[arg(long)]
    pub species: Option<String>,
    /// Microwave frequency, GHz (default 9.6, an assumption)
    #[arg(long = "frequency-GHz")]
    pub frequency_ghz: Option<f64>,
    #[arg(long = "start-mT", default_value_t = 0.0)]
    pub start_mt: f64,
    #[arg(long = "stop-mT", default_value_t = 1000.0)]
    pub stop_mt: f64,
    /// Field grid used to bracket resonances
    #[arg(long, default_value_t = DEFAULT_RESONANCE_GRID)]
    pub grid: usize,
    /// Minimum |<u|Sx|l>|^2 for a computed row
    #[arg(long, default_value_t = DEFAULT_INTENSITY_FLOOR)]
    pub intensity_floor: f64,
}

pub fn esr(cfg: &Loaded<RunConfig>, args: &EsrArgs) -> Result<CommandOutput> {
    let sp = cfg.value.select_species(args.species.as_deref())?;
    let f = args.frequency_ghz.unwrap_or(DEFAULT_FREQUENCY_GHZ);
    if !(f.is_finite() && f > 0.0) {
        return Err(CliError::Usage("microwave frequency must be > 0".into()));
    }
    if !(args.start_mt >= 0.0 && args.stop_mt > args.start_mt) || args.grid < 2 {
        return Err(CliError::Usage(
            "field range needs 0 <= start < stop and at least 2 grid points".into(),
        ));
    }
    let mut report = base_report("esr", cfg);
    species_parameters(&mut report, &sp);
    report
        .parameter("frequency", f, "GHz")
        .parameter("field_start", args.start_mt, "mT")
        .parameter("field_stop", args.stop_mt, "mT")
        .parameter("intensity_floor", args.intensity_floor, "1");
    if args.frequency_ghz.is_none() {
        report.warn(format!(
            "microwave frequency not given; {} GHz assumed",
            number(DEFAULT_FREQUENCY_GHZ)
        ));
    }

    let search = ResonanceSearch::new(args.start_mt, args.stop_mt)
        .with_grid_points(args.grid)
        .with_intensity_floor(args.intensity_floor);
    let lines = resonance_fields(&sp, f, search)?;

    let mut table = Table::new(
        "esr",
        &[
            "kind",
            "B_mT",
            "g_eff",
            "intensity",
            "lower",
            "upper",
            "m_I",
            "label",
        ],
    );
    for r in &lines {
        let m_i = if sp.nuclear_spin() > 0.0 {
            half_integer_label(r.nuclear_projection)
        } else {
            String::new()
        };
        table.push(vec![
            "computed".into(),
            r.field_mt.into(),
            r.g_eff.into(),
            r.intensity.into(),
            r.lower.into(),
            r.upper.into(),
            m_i.into(),
            sp.name().into(),
        ]);
    }
    for (g, label) in REFERENCE_MARKERS {
        table.push(vec![
            "reference".into(),
            resonance_field_for_g(f, g).into(),
            g.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            label.into(),
        ]);
    }

    report.result("computed_lines", lines.len() as f64, "1");
    let mut summary = String::new();
    writeln!(
        summary,
        "{}: {} lines at {} GHz between {} and {} mT",
        sp.name(),
        lines.len(),
        number(f),
        number(args.start_mt),
        number(args.stop_mt)
    )
    .unwrap();
    if !lines.is_empty() {
        let (lo, hi) = lines.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r.intensity), hi.max(r.intensity))
        });
        report
            .result("intensity_min", lo, "1")
            .result("intensity_max", hi, "1")
            .result("intensity_spread", hi / lo, "1");
        writeln!(
            summary,
            "intensities {} .. {} (max/min {})",
            number(lo),
            number(hi),
            number(hi / lo)
        )
        .unwrap();
    }
    for w in &report.warnings {
        writeln!(summary, "note: {w}").unwrap();
    }
    Ok(finish(vec![table], Some(0), summary, report))
}
