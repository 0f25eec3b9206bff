use std::fmt::Write;
use std::path::PathBuf;

use donorspin_core::qubit::{detection_volume, spin_sensitivity, volume_sensitivity};

use super::base_report;
use super::qubit::resolve_qubit;
use crate::config::{load_json, Loaded, RunConfig, SensitivityConfig};
use crate::error::{CliError, Result};
use crate::format::number;
use crate::output::{CommandOutput, Table};

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct SensitivityArgs {
    /// Sensitivity input file (overrides the config's `sensitivity` section)
    #[arg(long)]
    pub sensitivity: Option<PathBuf>,
    /// Qubit parameter file (overrides the config's `qubit` section)
    #[arg(long)]
    pub qubit: Option<PathBuf>,
}

pub fn sensitivity(cfg: &Loaded<RunConfig>, args: &SensitivityArgs) -> Result<CommandOutput> {
    let mut report = base_report("sensitivity", cfg);
    let q = resolve_qubit(cfg, args.qubit.as_deref(), &mut report)?;
    let s =
        match (&args.sensitivity, &cfg.value.sensitivity) {
            (Some(p), _) => {
                let loaded = load_json::<SensitivityConfig>(p)?;
                report.inputs.push(loaded.input.clone());
                loaded.value.inputs().map_err(|e| CliError::Config {
                    origin: loaded.input.path.clone(),
                    message: e.to_string(),
                })?
            }
            (None, Some(c)) => c.inputs()?,
            (None, None) => return Err(CliError::Usage(
                "no sensitivity inputs: pass --sensitivity <file> or add a `sensitivity` section"
                    .into(),
            )),
        };
    report
        .parameter(
            "flux_noise",
            s.flux_noise_uphi0_per_rt_hz(),
            "uPhi0/sqrt(Hz)",
        )
        .parameter("per_spin_flux", s.per_spin_flux_uphi0(), "uPhi0")
        .parameter("integration_cap", s.integration_cap_s(), "s");

    let sens = spin_sensitivity(&q, &s)?;
    let volume = detection_volume(&q);
    let per_volume = volume_sensitivity(sens.min_detectable_spins, volume)?;
    let rows: [(&str, f64, &str); 6] = [
        ("spin_sensitivity", sens.spins_per_rt_hz, "spins/sqrt(Hz)"),
        ("min_detectable_spins", sens.min_detectable_spins, "spins"),
        ("detection_volume", volume, "um3"),
        ("volume_sensitivity", per_volume, "spins/um3"),
        ("operating_detuning", sens.operating_detuning_mphi0, "mPhi0"),
        ("operating_frequency", sens.operating_frequency_ghz, "GHz"),
    ];
    let mut table = Table::new("sensitivity", &["quantity", "value", "unit"]);
    let mut summary = String::new();
    for (name, value, unit) in rows {
        report.result(name, value, unit);
        table.push(vec![name.into(), value.into(), unit.into()]);
        writeln!(summary, "{name}: {} {unit}", number(value)).unwrap();
    }
    Ok(CommandOutput {
        tables: vec![table],
        documents: Vec::new(),
        primary_table: Some(0),
        primary_document: None,
        summary,
        report,
    })
}
