//! Boltzmann populations and normalized magnetization.
//!
//! Normalized magnetization is `m = -⟨S_z⟩ / S`: it saturates at 1 and its
//! high-temperature limit is `g μ_B B / (2 k_B T)` for every species.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{exp, fabs, log, tanh};

use crate::constants::BOLTZMANN_MHZ_PER_K;
use crate::error::{invalid, Error, Result};
use crate::spin::{electron_sz, solve, EigenSystem, Field, SpinSpecies};

/// The closed form assumes g μ_B B ≪ A; beyond this ratio it is flagged.
pub const WEAK_FIELD_LIMIT: f64 = 0.05;
/// Above this value the linear Curie form is flagged as saturating.
pub const CURIE_SATURATION_FLAG: f64 = 0.1;

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("temperature must be > 0 K, got {t}")))
    }
}

/// k_B T / h in MHz.
pub fn thermal_energy_mhz(temperature_k: f64) -> f64 {
    BOLTZMANN_MHZ_PER_K * temperature_k
}

/// Reduced inverse temperature x = A / k_B T.
pub fn reduced_inverse_temperature(hyperfine_mhz: f64, temperature_k: f64) -> f64 {
    hyperfine_mhz / thermal_energy_mhz(temperature_k)
}

/// Temperature (K) at which A / k_B T equals `x`.
pub fn temperature_from_reduced(hyperfine_mhz: f64, x: f64) -> f64 {
    hyperfine_mhz / (BOLTZMANN_MHZ_PER_K * x)
}

/// Boltzmann populations of the levels of `es` at temperature `t` (K).
/// Energies are measured from the ground level before exponentiation.
pub fn populations(es: &EigenSystem, temperature_k: f64) -> Result<Vec<f64>> {
    check_temperature(temperature_k)?;
    let kt = thermal_energy_mhz(temperature_k);
    let e = es.energies();
    let ground = e.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = e.iter().map(|ek| exp(-(ek - ground) / kt)).collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub temperature_k: f64,
    pub field_mt: f64,
    pub energies_mhz: Vec<f64>,
    pub populations: Vec<f64>,
    pub magnetization: f64,
}

pub fn thermal_state(
    species: &SpinSpecies,
    field: Field,
    temperature_k: f64,
) -> Result<ThermalState> {
    check_temperature(temperature_k)?;
    let es = solve(species, field)?;
    let populations = populations(&es, temperature_k)?;
    let magnetization = magnetization_from(&es, species, &populations);
    Ok(ThermalState {
        temperature_k,
        field_mt: field.millitesla(),
        energies_mhz: es.energies().to_vec(),
        populations,
        magnetization,
    })
}

fn magnetization_from(es: &EigenSystem, species: &SpinSpecies, populations: &[f64]) -> f64 {
    let sz = es.diagonal_expectations(&electron_sz(species));
    let mean: f64 = populations.iter().zip(&sz).map(|(p, s)| p * s).sum();
    -mean / species.electron_spin()
}

/// Normalized magnetization from exact diagonalization.
pub fn magnetization_exact(species: &SpinSpecies, field: Field, temperature_k: f64) -> Result<f64> {
    check_temperature(temperature_k)?;
    let es = solve(species, field)?;
    let p = populations(&es, temperature_k)?;
    Ok(magnetization_from(&es, species, &p))
}

/// Closed-form weak-field value together with its applicability flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    /// False when g μ_B B exceeds [`WEAK_FIELD_LIMIT`] · A.
    pub weak_field: bool,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + exp(-z))
}

/// Weak-field closed form m = m_L(x) + m_H(x), x = A / k_B T, for an
/// S = 1/2 species with hyperfine partner I > 0:
///
/// ```text
/// m_L = (gμ_B B/A) [16(I+1) + (2I+1)(2I-1) x] / [6 (2I+1)²]
/// m_H = (gμ_B B/A) 2(x-4) / [3(2I+1)] · σ(-(I+1/2) x + ln((I+1)/I))
/// ```
pub fn magnetization_closed_form(
    species: &SpinSpecies,
    field: Field,
    temperature_k: f64,
) -> Result<ClosedForm> {
    check_temperature(temperature_k)?;
    if !species.is_spin_half() {
        return Err(Error::UnsupportedSpecies(format!(
            "{}: closed form needs S = 1/2",
            species.name()
        )));
    }
    let a = species.hyperfine_mhz();
    let i = species.nuclear_spin();
    if a == 0.0 || i == 0.0 {
        return Err(Error::UnsupportedSpecies(format!(
            "{}: closed form needs a hyperfine partner; use the Curie law",
            species.name()
        )));
    }
    let x = reduced_inverse_temperature(a, temperature_k);
    let zeeman = species.zeeman_mhz(field);
    let ratio = zeeman / a;
    let n = 2.0 * i + 1.0;
    let low = ratio * (16.0 * (i + 1.0) + n * (2.0 * i - 1.0) * x) / (6.0 * n * n);
    let high = ratio * 2.0 * (x - 4.0) / (3.0 * n) * sigmoid(-(i + 0.5) * x + log((i + 1.0) / i));
    Ok(ClosedForm {
        value: low + high,
        weak_field: zeeman <= WEAK_FIELD_LIMIT * a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurieValue {
    pub value: f64,
    /// The linear form exceeded [`CURIE_SATURATION_FLAG`].
    pub saturating: bool,
}

/// High-temperature law m = g μ_B B / (2 k_B T), capped at 1.
pub fn magnetization_curie(g: f64, field: Field, temperature_k: f64) -> Result<CurieValue> {
    check_temperature(temperature_k)?;
    let linear = g * crate::constants::BOHR_MAGNETON_MHZ_PER_MT * field.millitesla()
        / (2.0 * thermal_energy_mhz(temperature_k));
    Ok(CurieValue {
        value: linear.min(1.0),
        saturating: linear > CURIE_SATURATION_FLAG,
    })
}

/// Exact two-level result for a bare spin-1/2: tanh(g μ_B B / 2 k_B T).
pub fn magnetization_two_level(g: f64, field: Field, temperature_k: f64) -> Result<f64> {
    check_temperature(temperature_k)?;
    Ok(tanh(
        g * crate::constants::BOHR_MAGNETON_MHZ_PER_MT * field.millitesla()
            / (2.0 * thermal_energy_mhz(temperature_k)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationRow {
    pub temperature_k: f64,
    pub exact: f64,
    /// Absent for species without a hyperfine partner.
    pub closed_form: Option<f64>,
    pub curie: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationCurve {
    pub species: String,
    pub field_mt: f64,
    pub rows: Vec<MagnetizationRow>,
    pub warnings: Vec<String>,
}

impl MagnetizationCurve {
    pub fn has_closed_form(&self) -> bool {
        self.rows.iter().all(|r| r.closed_form.is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationSweep {
    pub curves: Vec<MagnetizationCurve>,
    /// (T, Σ w_s m_s / Σ w_s) over the exact curves.
    pub combined: Vec<(f64, f64)>,
}

/// Tabulates exact, closed-form and Curie magnetization for every species on
/// the (ascending-sorted) temperature grid.
pub fn sweep_magnetization(
    species: &[(SpinSpecies, f64)],
    field: Field,
    temperatures_k: &[f64],
) -> Result<MagnetizationSweep> {
    if temperatures_k.is_empty() {
        return Err(invalid("temperature grid is empty"));
    }
    if species.is_empty() {
        return Err(invalid("no species to sweep"));
    }
    for &t in temperatures_k {
        check_temperature(t)?;
    }
    let total_weight: f64 = species.iter().map(|(_, w)| *w).sum();
    if species.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0)) || total_weight <= 0.0 {
        return Err(invalid("species weights must be >= 0 with a positive sum"));
    }
    let mut grid = temperatures_k.to_vec();
    grid.sort_by(f64::total_cmp);

    let mut curves = Vec::with_capacity(species.len());
    for (sp, _) in species {
        let es = solve(sp, field)?;
        let applies = sp.is_spin_half() && sp.hyperfine_mhz() > 0.0 && sp.nuclear_spin() > 0.0;
        let mut warnings = Vec::new();
        let mut weak_warned = false;
        let mut saturation_warned = false;
        let mut rows = Vec::with_capacity(grid.len());
        for &t in &grid {
            let p = populations(&es, t)?;
            let exact = magnetization_from(&es, sp, &p);
            let closed_form = if applies {
                let cf = magnetization_closed_form(sp, field, t)?;
                if !cf.weak_field && !weak_warned {
                    weak_warned = true;
                    warnings.push(format!(
                        "{}: g muB B exceeds {} A; closed form outside its weak-field regime",
                        sp.name(),
                        WEAK_FIELD_LIMIT
                    ));
                }
                Some(cf.value)
            } else {
                None
            };
            let curie = magnetization_curie(sp.g(), field, t)?;
            if curie.saturating && !saturation_warned {
                saturation_warned = true;
                warnings.push(format!(
                    "{}: Curie law exceeds {} at T = {} K; linear form saturating",
                    sp.name(),
                    CURIE_SATURATION_FLAG,
                    t
                ));
            }
            rows.push(MagnetizationRow {
                temperature_k: t,
                exact,
                closed_form,
                curie: curie.value,
            });
        }
        curves.push(MagnetizationCurve {
            species: String::from(sp.name()),
            field_mt: field.millitesla(),
            rows,
            warnings,
        });
    }

    let combined = grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let m: f64 = curves
                .iter()
                .zip(species)
                .map(|(c, (_, w))| w * c.rows[k].exact)
                .sum();
            (t, m / total_weight)
        })
        .collect();
    Ok(MagnetizationSweep { curves, combined })
}

/// Location of the intra-/inter-manifold crossover of a hyperfine species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub temperature_k: f64,
    /// x = A / k_B T at the crossover.
    pub reduced_inverse_temperature: f64,
    /// d ln m / d ln T at the crossover.
    pub log_slope: f64,
}

/// Default search window in x = A / k_B T for [`crossover`].
pub const CROSSOVER_X_RANGE: (f64, f64) = (0.05, 10.0);
pub const CROSSOVER_GRID_POINTS: usize = 801;

/// Log-log slope d ln m / d ln T on a uniform grid in ln x using centered
/// differences. Returns `(x, slope)` pairs for the interior grid points.
pub fn log_slope_profile(
    species: &SpinSpecies,
    field: Field,
    x_range: (f64, f64),
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    let (ln_x, ln_m) = log_curve(species, field, x_range, points)?;
    let h = ln_x[1] - ln_x[0];
    // ln T = ln A/k_B - ln x, so d/d ln T = -d/d ln x.
    Ok((1..points - 1)
        .map(|k| (exp(ln_x[k]), -(ln_m[k + 1] - ln_m[k - 1]) / (2.0 * h)))
        .collect())
}

fn log_curve(
    species: &SpinSpecies,
    field: Field,
    (x_lo, x_hi): (f64, f64),
    points: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = species.hyperfine_mhz();
    if a == 0.0 {
        return Err(Error::UnsupportedSpecies(format!(
            "{}: no hyperfine crossover without hyperfine coupling",
            species.name()
        )));
    }
    if field.millitesla() == 0.0 {
        return Err(invalid("crossover needs a non-zero field"));
    }
    if !(x_lo > 0.0 && x_hi > x_lo) || points < 5 {
        return Err(invalid(
            "crossover search needs 0 < x_lo < x_hi and >= 5 points",
        ));
    }
    let es = solve(species, field)?;
    let (l0, l1) = (log(x_lo), log(x_hi));
    let step = (l1 - l0) / (points - 1) as f64;
    let ln_x: Vec<f64> = (0..points).map(|k| l0 + step * k as f64).collect();
    let ln_m = ln_x
        .iter()
        .map(|&lx| {
            let t = temperature_from_reduced(a, exp(lx));
            let p = populations(&es, t)?;
            let m = magnetization_from(&es, species, &p);
            if m > 0.0 {
                Ok(log(m))
            } else {
                Err(invalid(
                    "magnetization must be positive to take its logarithm",
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ln_x, ln_m))
}

/// The kink between the low-temperature (intra-manifold) and the
/// high-temperature (inter-manifold) regimes.
///
/// In log-log axes both regimes are straight lines of slope -1 with different
/// offsets. The kink is the inflection joining them: the point where the local
/// slope d ln m / d ln T is farthest from -1 and d² ln m / d(ln T)² changes
/// sign. Located on a uniform grid in ln x with centered differences and
/// refined by a parabola through the three slopes around the extremum.
pub fn crossover(
    species: &SpinSpecies,
    field: Field,
    x_range: (f64, f64),
    points: usize,
) -> Result<Crossover> {
    let profile = log_slope_profile(species, field, x_range, points)?;
    let (k, _) = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("profile has interior points");
    if k == 0 || k + 1 == profile.len() {
        return Err(invalid(
            "slope extremum lies on the edge of the search window",
        ));
    }
    let (x0, s0) = profile[k - 1];
    let (x1, s1) = profile[k];
    let (_, s2) = profile[k + 1];
    let h = log(x1) - log(x0);
    let denom = s0 - 2.0 * s1 + s2;
    let shift = if denom != 0.0 {
        0.5 * (s0 - s2) / denom
    } else {
        0.0
    };
    let ln_x = log(x1) + shift * h;
    let x = exp(ln_x);
    let slope = s1 - 0.25 * (s0 - s2) * shift;
    Ok(Crossover {
        temperature_k: temperature_from_reduced(species.hyperfine_mhz(), x),
        reduced_inverse_temperature: x,
        log_slope: slope,
    })
}

/// Location of max |d²m/dx²| on a uniform grid in x (centered second
/// differences), as `(x, T)`. Kept as a diagnostic next to [`crossover`].
pub fn max_curvature_in_x(
    species: &SpinSpecies,
    field: Field,
    (x_lo, x_hi): (f64, f64),
    points: usize,
) -> Result<(f64, f64)> {
    let a = species.hyperfine_mhz();
    if a == 0.0 || !(x_lo > 0.0 && x_hi > x_lo) || points < 3 {
        return Err(invalid(
            "curvature search needs A > 0, 0 < x_lo < x_hi, >= 3 points",
        ));
    }
    let es = solve(species, field)?;
    let h = (x_hi - x_lo) / (points - 1) as f64;
    let m = (0..points)
        .map(|k| {
            let t = temperature_from_reduced(a, x_lo + h * k as f64);
            Ok(magnetization_from(&es, species, &populations(&es, t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (k, _) = (1..points - 1)
        .map(|k| (k, fabs(m[k + 1] - 2.0 * m[k] + m[k - 1])))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("interior points");
    let x = x_lo + h * k as f64;
    Ok((x, temperature_from_reduced(a, x)))
}
