use std::fmt::Write;
use std::path::{Path, PathBuf};

use donorspin_core::qubit::{
    detuning_for_responsivity, qubit_frequency, responsivity, QubitParams,
    OPERATING_RESPONSIVITY_FRACTION,
};

use super::{base_report, finish};
use crate::config::{load_json, Loaded, QubitConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::format::number;
use crate::output::{CommandOutput, Table};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct QubitArgs {
    /// Qubit parameter file (overrides the config's `qubit` section)
    #[arg(long)]
    pub qubit: Option<PathBuf>,
    /// First flux detuning from the sweet spot, mPhi0
    #[arg(long = "start-mPhi0", default_value_t = -10.0, allow_hyphen_values = true)]
    pub start_mphi0: f64,
    /// Last flux detuning, mPhi0
    #[arg(
        long = "stop-mPhi0",
        default_value_t = 10.0,
        allow_hyphen_values = true
    )]
    pub stop_mphi0: f64,
    /// Number of flux points
    #[arg(long, default_value_t = 201)]
    pub count: usize,
}

/// Qubit parameters from an explicit file, the run config, or the reference set.
pub(super) fn resolve_qubit(
    cfg: &Loaded<RunConfig>,
    path: Option<&Path>,
    report: &mut Report,
) -> Result<QubitParams> {
    let params = if let Some(p) = path {
        let loaded = load_json::<QubitConfig>(p)?;
        report.inputs.push(loaded.input.clone());
        loaded.value.params().map_err(|e| CliError::Config {
            origin: loaded.input.path.clone(),
            message: e.to_string(),
        })?
    } else if let Some(q) = &cfg.value.qubit {
        q.params()?
    } else {
        report.warn(
            "no qubit parameters given; using the reference set (459 nA, 1.91 GHz, 5 um2, 1 um)",
        );
        QubitParams::reference()
    };
    report
        .parameter("Ip", params.persistent_current_na(), "nA")
        .parameter("Delta", params.gap_ghz(), "GHz")
        .parameter("loop_area", params.loop_area_um2(), "um2")
        .parameter("effective_depth", params.effective_depth_um(), "um");
    Ok(params)
}

pub fn qubit(cfg: &Loaded<RunConfig>, args: &QubitArgs) -> Result<CommandOutput> {
    let finite = args.start_mphi0.is_finite() && args.stop_mphi0.is_finite();
    if args.count == 0 || !finite || args.stop_mphi0 < args.start_mphi0 {
        return Err(CliError::Usage(
            "empty flux range: need count >= 1 and finite start <= stop".into(),
        ));
    }
    let mut report = base_report("qubit", cfg);
    let q = resolve_qubit(cfg, args.qubit.as_deref(), &mut report)?;

    let mut table = Table::new(
        "qubit",
        &["flux_mPhi0", "f_GHz", "responsivity_GHz_per_mPhi0"],
    );
    for k in 0..args.count {
        let d = if args.count == 1 {
            args.start_mphi0
        } else {
            args.start_mphi0
                + (args.stop_mphi0 - args.start_mphi0) * k as f64 / (args.count - 1) as f64
        };
        table.push(vec![
            d.into(),
            qubit_frequency(&q, d).into(),
            responsivity(&q, d).into(),
        ]);
    }

    let slope = q.flux_slope_ghz_per_mphi0();
    let op = detuning_for_responsivity(&q, OPERATING_RESPONSIVITY_FRACTION)?;
    report
        .result("f_sweet_spot", qubit_frequency(&q, 0.0), "GHz")
        .result("responsivity_asymptote", slope, "GHz/mPhi0")
        .result("operating_detuning", op, "mPhi0")
        .result("operating_frequency", qubit_frequency(&q, op), "GHz")
        .result("f_at_1_mPhi0", qubit_frequency(&q, 1.0), "GHz");
    let mut summary = String::new();
    writeln!(summary, "f(0) = {} GHz", number(qubit_frequency(&q, 0.0))).unwrap();
    writeln!(
        summary,
        "asymptotic slope 2 Ip Phi0/h = {} GHz/mPhi0",
        number(slope)
    )
    .unwrap();
    writeln!(
        summary,
        "operating point ({}% of slope): {} mPhi0, f = {} GHz",
        number(OPERATING_RESPONSIVITY_FRACTION * 100.0),
        number(op),
        number(qubit_frequency(&q, op))
    )
    .unwrap();
    Ok(finish(vec![table], Some(0), summary, report))
}
