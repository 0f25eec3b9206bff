use std::fmt::Write;

use donorspin_core::thermo::{
    crossover, max_curvature_in_x, sweep_magnetization, CROSSOVER_GRID_POINTS, CROSSOVER_X_RANGE,
};

use super::{base_report, finish, species_parameters};
use crate::config::{Loaded, RunConfig};
use crate::error::Result;
use crate::format::number;
use crate::output::{Cell, CommandOutput, Table};

/// Points for the |d²m/dx²| diagnostic reported next to the kink.
const CURVATURE_GRID_POINTS: usize = 2001;

pub fn magnetization(cfg: &Loaded<RunConfig>) -> Result<CommandOutput> {
    let species = cfg.value.species_list();
    let field = cfg.value.field();
    let mut report = base_report("magnetization", cfg);
    for (sp, w) in &species {
        species_parameters(&mut report, sp);
        report.parameter(&format!("{}.weight", sp.name()), *w, "1");
    }
    report.parameter("field", field.millitesla(), "mT");
    let g = &cfg.value.temperature_grid;
    report
        .parameter("T_start", g.start_mk, "mK")
        .parameter("T_stop", g.stop_mk, "mK")
        .parameter("T_points", g.count as f64, "1");

    let sweep = sweep_magnetization(&species, field, &cfg.value.temperatures_k())?;
    let mut tables = Vec::new();
    for curve in &sweep.curves {
        let closed = curve.has_closed_form();
        let columns: &[&str] = if closed {
            &["T_K", "m_exact", "m_eq3", "m_eq4"]
        } else {
            &["T_K", "m_exact", "m_eq4"]
        };
        let mut t = Table::new(format!("magnetization_{}", curve.species), columns);
        for row in &curve.rows {
            let mut cells: Vec<Cell> = vec![row.temperature_k.into(), row.exact.into()];
            if closed {
                cells.push(row.closed_form.map_or(Cell::Empty, Cell::Num));
            }
            cells.push(row.curie.into());
            t.push(cells);
        }
        tables.push(t);
        for w in &curve.warnings {
            report.warn(w.clone());
        }
    }
    let mut combined = Table::new("magnetization_combined", &["T_K", "m_combined"]);
    for &(t, m) in &sweep.combined {
        combined.push(vec![t.into(), m.into()]);
    }
    tables.push(combined);

    let mut summary = String::new();
    for (sp, _) in &species {
        if !(sp.is_spin_half() && sp.nuclear_spin() > 0.0 && sp.hyperfine_mhz() > 0.0) {
            continue;
        }
        let c = crossover(sp, field, CROSSOVER_X_RANGE, CROSSOVER_GRID_POINTS)?;
        let (_, t_curv) = max_curvature_in_x(sp, field, CROSSOVER_X_RANGE, CURVATURE_GRID_POINTS)?;
        let name = sp.name();
        report
            .result(
                &format!("{name}.kink_temperature"),
                c.temperature_k * 1e3,
                "mK",
            )
            .result(
                &format!("{name}.kink_x"),
                c.reduced_inverse_temperature,
                "1",
            )
            .result(&format!("{name}.kink_log_slope"), c.log_slope, "1")
            .result(
                &format!("{name}.max_abs_d2m_dx2_temperature"),
                t_curv * 1e3,
                "mK",
            );
        writeln!(
            summary,
            "{name}: kink (log-log crossover) at {} mK, x = A/kT = {}, dlnm/dlnT = {}",
            number(c.temperature_k * 1e3),
            number(c.reduced_inverse_temperature),
            number(c.log_slope)
        )
        .unwrap();
        writeln!(
            summary,
            "{name}: max |d2m/dx2| on x in [{}, {}] at {} mK (diagnostic)",
            number(CROSSOVER_X_RANGE.0),
            number(CROSSOVER_X_RANGE.1),
            number(t_curv * 1e3)
        )
        .unwrap();
    }
    for w in &report.warnings {
        writeln!(summary, "warning: {w}").unwrap();
    }
    let primary = if species.len() == 1 {
        0
    } else {
        tables.len() - 1
    };
    Ok(finish(tables, Some(primary), summary, report))
}
