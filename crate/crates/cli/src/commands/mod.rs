//! One function per subcommand. Each takes parsed inputs and returns a
//! [`CommandOutput`]; nothing here prints or touches the filesystem except
//! reading inputs.

mod esr;
mod fit;
mod levels;
mod magnetization;
mod populations;
mod qubit;
mod sensitivity;
mod synth;

pub use esr::{esr, EsrArgs, DEFAULT_FREQUENCY_GHZ, DEFAULT_INTENSITY_FLOOR, REFERENCE_MARKERS};
pub use fit::{fit, FitArgs};
pub use levels::{levels, LevelsArgs};
pub use magnetization::magnetization;
pub use populations::{populations, PopulationsArgs};
pub use qubit::{qubit, QubitArgs};
pub use sensitivity::{sensitivity, SensitivityArgs};
pub use synth::{synth, synthetic_truth, SynthArgs};

use donorspin_core::spin::SpinSpecies;

use crate::config::{Loaded, RunConfig};
use crate::output::CommandOutput;
use crate::report::Report;

fn base_report(command: &str, cfg: &Loaded<RunConfig>) -> Report {
    let mut r = Report::new(command);
    r.inputs.push(cfg.input.clone());
    r
}

fn species_parameters(r: &mut Report, sp: &SpinSpecies) {
    let prefix = sp.name();
    r.parameter(&format!("{prefix}.S"), sp.electron_spin(), "hbar")
        .parameter(&format!("{prefix}.I"), sp.nuclear_spin(), "hbar")
        .parameter(&format!("{prefix}.g"), sp.g(), "1")
        .parameter(&format!("{prefix}.A"), sp.hyperfine_mhz(), "MHz");
}

fn finish(
    tables: Vec<crate::output::Table>,
    primary_table: Option<usize>,
    summary: String,
    report: Report,
) -> CommandOutput {
    CommandOutput {
        tables,
        documents: Vec::new(),
        primary_table,
        primary_document: None,
        summary,
        report,
    }
}
