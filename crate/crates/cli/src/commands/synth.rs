use std::fmt::Write;

use donorspin_core::fit::{generate_synthetic, FitModel};

use super::{base_report, finish};
use crate::config::{Loaded, RunConfig, SynthConfig};
use crate::data::dataset_table;
use crate::error::{CliError, Result};
use crate::format::number;
use crate::output::CommandOutput;

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct SynthArgs {
    /// Override the configured noise standard deviation, uPhi0
    #[arg(long = "noise-uPhi0")]
    pub noise_uphi0: Option<f64>,
}

/// Truth vector for a two-species model: c₁ = r·K, c₂ = (1-r)·K and, with an
/// offset, c₀ chosen so the shift vanishes at the reference temperature.
pub fn synthetic_truth(model: &FitModel, s: &SynthConfig, reference_k: f64) -> Result<Vec<f64>> {
    if model.basis.len() != 2 {
        return Err(CliError::Usage(format!(
            "synthetic data needs exactly two species, model '{}' has {}",
            model.name,
            model.basis.len()
        )));
    }
    let c1 = s.ratio * s.scale_uphi0;
    let c2 = (1.0 - s.ratio) * s.scale_uphi0;
    let mut truth = Vec::with_capacity(3);
    if model.include_offset {
        let f1 = model.basis[0].evaluate(reference_k)?;
        let f2 = model.basis[1].evaluate(reference_k)?;
        truth.push(-(c1 * f1 + c2 * f2));
    }
    truth.extend([c1, c2]);
    Ok(truth)
}

pub fn synth(
    cfg: &Loaded<RunConfig>,
    args: &SynthArgs,
    seed: Option<u64>,
) -> Result<CommandOutput> {
    let s = cfg
        .value
        .synth
        .ok_or_else(|| CliError::Usage("config has no `synth` section".into()))?;
    let noise = args.noise_uphi0.unwrap_or(s.noise_uphi0);
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(CliError::Usage("noise must be finite and >= 0".into()));
    }
    let seed = seed.unwrap_or(s.seed);
    let model = cfg.value.fit_model();
    let reference_k = cfg.value.fit.reference_t_mk * 1e-3;
    let truth = synthetic_truth(&model, &s, reference_k)?;
    let data = generate_synthetic(
        &model,
        &truth,
        &cfg.value.temperatures_k(),
        noise,
        seed,
        reference_k,
    )?;

    let mut report = base_report("synth", cfg);
    report
        .parameter_text("model", &model.name)
        .parameter("ratio", s.ratio, "1")
        .parameter("scale", s.scale_uphi0, "uPhi0")
        .parameter("noise", noise, "uPhi0")
        .parameter_text("seed", &seed.to_string())
        .parameter("reference_T", cfg.value.fit.reference_t_mk, "mK");
    let labels = model.parameter_labels();
    let mut summary = String::new();
    writeln!(
        summary,
        "synthetic {} data, {} points, seed {seed}",
        model.name,
        data.len()
    )
    .unwrap();
    for (label, c) in labels.iter().zip(&truth) {
        report.result(&format!("truth.{label}"), *c, "uPhi0");
        writeln!(summary, "truth {label} = {} uPhi0", number(*c)).unwrap();
    }
    Ok(finish(
        vec![dataset_table("synthetic", &data)],
        Some(0),
        summary,
        report,
    ))
}
