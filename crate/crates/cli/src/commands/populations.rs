use donorspin_core::thermo::thermal_state;

use super::{base_report, finish, species_parameters};
use crate::config::{Loaded, RunConfig};
use crate::error::Result;
use crate::output::{CommandOutput, Table};

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct PopulationsArgs {
    /// Species name (default: first configured species)
    #[arg(long)]
    pub species: Option<String>,
}

/// Boltzmann populations of every level on the configured temperature grid.
pub fn populations(cfg: &Loaded<RunConfig>, args: &PopulationsArgs) -> Result<CommandOutput> {
    let sp = cfg.value.select_species(args.species.as_deref())?;
    let field = cfg.value.field();
    let mut report = base_report("populations", cfg);
    species_parameters(&mut report, &sp);
    report.parameter("field", field.millitesla(), "mT");

    let mut temps = cfg.value.temperatures_k();
    temps.sort_by(f64::total_cmp);
    let mut table = Table::new("populations", &["T_K", "level", "E_MHz", "population"]);
    let mut ground = Vec::with_capacity(temps.len());
    for &t in &temps {
        let s = thermal_state(&sp, field, t)?;
        for (k, (e, p)) in s.energies_mhz.iter().zip(&s.populations).enumerate() {
            table.push(vec![t.into(), k.into(), (*e).into(), (*p).into()]);
        }
        ground.push(s.populations[0]);
    }
    report
        .result("ground_population_at_lowest_T", ground[0], "1")
        .result(
            "ground_population_at_highest_T",
            *ground.last().unwrap(),
            "1",
        );
    let summary = format!(
        "{}: {} levels x {} temperatures at {} mT\n",
        sp.name(),
        sp.dimension(),
        temps.len(),
        crate::format::number(field.millitesla())
    );
    Ok(finish(vec![table], Some(0), summary, report))
}
