use std::fmt::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

use donorspin_core::fit::{compare_models, design_matrix, FitResult};

use super::base_report;
use crate::config::{Loaded, RunConfig};
use crate::data::read_dataset;
use crate::error::Result;
use crate::format::{json_number, number};
use crate::output::{CommandOutput, Table};

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct FitArgs {
    /// CSV with header `T_mK,flux_shift_uPhi0[,sigma_uPhi0]`
    pub data: PathBuf,
}

const UNIT: &str = "uPhi0";

pub fn fit(cfg: &Loaded<RunConfig>, args: &FitArgs) -> Result<CommandOutput> {
    let reference_k = cfg.value.fit.reference_t_mk * 1e-3;
    let (data, input) = read_dataset(&args.data, reference_k)?;
    let model = cfg.value.fit_model();
    let reduced = if model.basis.len() > 1 {
        (0..model.basis.len())
            .map(|i| model.reduced_to(i))
            .collect::<donorspin_core::Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let cmp = compare_models(&data, &model, &reduced)?;
    let full = &cmp.full;

    let mut report = base_report("fit", cfg);
    report.inputs.push(input);
    report
        .parameter_text("model", &model.name)
        .parameter("field", cfg.value.field_mt, "mT")
        .parameter_text(
            "weights",
            if data.has_sigma() {
                "inverse-variance"
            } else {
                "unit"
            },
        );
    for c in &full.coefficients {
        report
            .result(&c.label, c.value, UNIT)
            .result(&format!("{}.sigma", c.label), c.sigma, UNIT);
    }
    if let Some(r) = full.ratio {
        report
            .result("ratio", r.value, "1")
            .result("ratio.sigma", r.sigma, "1");
    }
    report
        .result("rss", full.rss, "uPhi0^2")
        .result("n", full.n as f64, "1")
        .result("condition_number", full.condition_number, "1");
    for red in &cmp.reduced {
        report.result(&format!("rss_ratio.{}", red.model), red.rss_ratio, "1");
        if red.rss_ratio < 2.0 {
            report.warn(format!(
                "reduced model {} raises RSS by only {}x",
                red.model,
                number(red.rss_ratio)
            ));
        }
    }

    let temps = data.temperatures();
    let values = data.values();
    let design = design_matrix(&model, &temps)?;
    let fitted = design.predict(&full.values());
    let mut curve = Table::new(
        "fit_curve",
        &["T_mK", "flux_shift_uPhi0", "fitted_uPhi0", "residual_uPhi0"],
    );
    for k in 0..data.len() {
        curve.push(vec![
            (temps[k] * 1e3).into(),
            values[k].into(),
            fitted[k].into(),
            full.residuals[k].into(),
        ]);
    }

    let document = fit_document(&model.name, full, &cmp, data.has_sigma());
    let summary = fit_table(&model.name, full, &cmp, data.has_sigma());
    Ok(CommandOutput {
        tables: vec![curve],
        documents: vec![("fit_report".to_string(), document)],
        primary_table: None,
        primary_document: Some(0),
        summary,
        report,
    })
}

fn fit_document(
    model: &str,
    full: &FitResult,
    cmp: &donorspin_core::fit::ModelComparison,
    weighted: bool,
) -> Value {
    let p = full.coefficients.len();
    let covariance: Vec<Vec<Value>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| json_number(full.covariance[(i, j)]))
                .collect()
        })
        .collect();
    let mut comparison = vec![json!({
        "model": model,
        "rss": json_number(full.rss),
        "rss_ratio": json_number(1.0),
    })];
    comparison.extend(cmp.reduced.iter().map(|r| {
        json!({
            "model": r.model,
            "rss": json_number(r.result.rss),
            "rss_ratio": json_number(r.rss_ratio),
        })
    }));
    json!({
        "model": model,
        "weights": if weighted { "inverse-variance" } else { "unit" },
        "coefficients": full.coefficients.iter().map(|c| json!({
            "label": c.label,
            "value": json_number(c.value),
            "sigma": json_number(c.sigma),
            "unit": UNIT,
        })).collect::<Vec<_>>(),
        "covariance": covariance,
        "covariance_unit": "uPhi0^2",
        "ratio": full.ratio.map_or(Value::Null, |r| json_number(r.value)),
        "ratio_sigma": full.ratio.map_or(Value::Null, |r| json_number(r.sigma)),
        "rss": json_number(full.rss),
        "rss_unit": "uPhi0^2",
        "n": full.n,
        "dof": full.dof,
        "condition_number": json_number(full.condition_number),
        "residuals": full.residuals.iter().map(|r| json_number(*r)).collect::<Vec<_>>(),
        "residuals_unit": UNIT,
        "comparison": comparison,
    })
}

fn fit_table(
    model: &str,
    full: &FitResult,
    cmp: &donorspin_core::fit::ModelComparison,
    weighted: bool,
) -> String {
    let mut s = String::new();
    let weights = if weighted { "inverse-variance" } else { "unit" };
    writeln!(
        s,
        "model {model}: n = {}, dof = {}, {weights} weights",
        full.n, full.dof
    )
    .unwrap();
    writeln!(
        s,
        "{:<14} {:>16} {:>16}  unit",
        "parameter", "value", "sigma"
    )
    .unwrap();
    for c in &full.coefficients {
        writeln!(
            s,
            "{:<14} {:>16} {:>16}  {UNIT}",
            c.label,
            number(c.value),
            number(c.sigma)
        )
        .unwrap();
    }
    if let Some(r) = full.ratio {
        let names: Vec<&str> = full
            .coefficients
            .iter()
            .map(|c| c.label.as_str())
            .filter(|l| *l != "offset")
            .collect();
        let (a, b) = (names[0], names[1]);
        writeln!(
            s,
            "ratio {a}/({a}+{b}) = {} +/- {}",
            number(r.value),
            number(r.sigma)
        )
        .unwrap();
    }
    writeln!(s, "RSS = {} uPhi0^2", number(full.rss)).unwrap();
    writeln!(s, "condition number = {}", number(full.condition_number)).unwrap();
    if !cmp.reduced.is_empty() {
        writeln!(s, "model comparison").unwrap();
        writeln!(s, "{:<14} {:>16} {:>16}", "model", "RSS", "RSS/RSS_full").unwrap();
        writeln!(s, "{:<14} {:>16} {:>16}", model, number(full.rss), "1").unwrap();
        for r in &cmp.reduced {
            writeln!(
                s,
                "{:<14} {:>16} {:>16}",
                r.model,
                number(r.result.rss),
                number(r.rss_ratio)
            )
            .unwrap();
        }
    }
    s
}
