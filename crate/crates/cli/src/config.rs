//! JSON run configuration. Keys carry their unit as a suffix (`field_mT`,
//! `A_MHz`) so that mK/K or GHz/MHz mix-ups show up in the file itself.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use donorspin_core::fit::{BasisFunction, FitModel, Method};
use donorspin_core::qubit::{QubitParams, SensitivityInputs, DEFAULT_INTEGRATION_CAP_S};
use donorspin_core::spin::{Field, SpinSpecies};

use crate::error::{CliError, Result};
use crate::output::Format;
use crate::report::Input;

/// The configuration used when `--config` is not given.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/bismuth.json");
pub const DEFAULT_CONFIG_NAME: &str = "<builtin:bismuth.json>";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub species: Vec<SpeciesEntry>,
    #[serde(rename = "field_mT")]
    pub field_mt: f64,
    pub temperature_grid: GridSpec,
    #[serde(default)]
    pub qubit: Option<QubitConfig>,
    #[serde(default)]
    pub sensitivity: Option<SensitivityConfig>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub synth: Option<SynthConfig>,
}

/// Either a bundled species name or a full definition.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SpeciesEntry {
    Name(String),
    Definition(SpeciesDefinition),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesDefinition {
    pub name: String,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "I")]
    pub i: Option<f64>,
    pub g: Option<f64>,
    #[serde(rename = "A_MHz")]
    pub a_mhz: Option<f64>,
    /// Relative abundance in the combined curve (dimensionless).
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Spacing {
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "log")]
    Log,
    #[serde(rename = "inverse-T")]
    InverseT,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "start_mK")]
    pub start_mk: f64,
    #[serde(rename = "stop_mK")]
    pub stop_mk: f64,
    pub count: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    #[serde(rename = "Ip_nA")]
    pub ip_na: f64,
    #[serde(rename = "Delta_GHz")]
    pub delta_ghz: f64,
    pub loop_area_um2: f64,
    pub effective_depth_um: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityConfig {
    #[serde(rename = "flux_noise_uPhi0_per_rtHz")]
    pub flux_noise_uphi0_per_rt_hz: f64,
    #[serde(rename = "per_spin_flux_uPhi0")]
    pub per_spin_flux_uphi0: f64,
    #[serde(default = "default_cap")]
    pub integration_cap_s: f64,
}

fn default_cap() -> f64 {
    DEFAULT_INTEGRATION_CAP_S
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    #[serde(rename = "reference_T_mK", default = "default_reference_mk")]
    pub reference_t_mk: f64,
    #[serde(default = "yes")]
    pub include_offset: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            reference_t_mk: default_reference_mk(),
            include_offset: true,
        }
    }
}

fn default_reference_mk() -> f64 {
    200.0
}

fn yes() -> bool {
    true
}

/// Truth and noise for the synthetic two-species dataset.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    /// c₁ / (c₁ + c₂).
    pub ratio: f64,
    #[serde(rename = "scale_uPhi0")]
    pub scale_uphi0: f64,
    #[serde(rename = "noise_uPhi0")]
    pub noise_uphi0: f64,
    pub seed: u64,
}

/// A config together with where it came from.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub input: Input,
}

pub fn read_input(path: &Path) -> Result<(String, Input)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let input = Input::new(path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Data {
        path: path.display().to_string(),
        message: "not valid UTF-8".into(),
    })?;
    Ok((text, input))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::Config {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>> {
    let (text, input) = read_input(path)?;
    let value = parse_json(&text, &input.path)?;
    Ok(Loaded { value, input })
}

/// Loads `path`, or the bundled default when `None`, and validates it.
pub fn load_run_config(path: Option<&Path>) -> Result<Loaded<RunConfig>> {
    let loaded = match path {
        Some(p) => load_json::<RunConfig>(p)?,
        None => Loaded {
            value: parse_json(DEFAULT_CONFIG, DEFAULT_CONFIG_NAME)?,
            input: Input::new(DEFAULT_CONFIG_NAME, DEFAULT_CONFIG.as_bytes()),
        },
    };
    loaded.value.validate(&loaded.input.path)?;
    Ok(loaded)
}

fn invalid(origin: &str, field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config {
        origin: origin.to_string(),
        message: format!("{field}: {message}"),
    }
}

impl RunConfig {
    pub fn validate(&self, origin: &str) -> Result<()> {
        if self.species.is_empty() {
            return Err(invalid(
                origin,
                "species",
                "at least one species is required",
            ));
        }
        for (k, _) in self.species.iter().enumerate() {
            self.species_at(k, origin)?;
        }
        if !(self.field_mt.is_finite() && self.field_mt >= 0.0) {
            return Err(invalid(origin, "field_mT", "must be finite and >= 0"));
        }
        self.temperature_grid.validate(origin)?;
        if let Some(q) = &self.qubit {
            q.params().map_err(|e| invalid(origin, "qubit", e))?;
        }
        if let Some(s) = &self.sensitivity {
            s.inputs().map_err(|e| invalid(origin, "sensitivity", e))?;
        }
        if !(self.fit.reference_t_mk.is_finite() && self.fit.reference_t_mk > 0.0) {
            return Err(invalid(origin, "fit.reference_T_mK", "must be > 0"));
        }
        if let Some(s) = &self.synth {
            if !(0.0..=1.0).contains(&s.ratio) {
                return Err(invalid(origin, "synth.ratio", "must lie in [0, 1]"));
            }
            if !(s.scale_uphi0.is_finite() && s.noise_uphi0.is_finite() && s.noise_uphi0 >= 0.0) {
                return Err(invalid(
                    origin,
                    "synth",
                    "scale and noise must be finite, noise >= 0",
                ));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        Field::from_millitesla(self.field_mt).expect("validated field")
    }

    fn species_at(&self, k: usize, origin: &str) -> Result<(SpinSpecies, f64)> {
        let field = format!("species[{k}]");
        let (sp, weight) = match &self.species[k] {
            SpeciesEntry::Name(n) => (bundled(n).map_err(|m| invalid(origin, &field, m))?, 1.0),
            SpeciesEntry::Definition(d) => {
                let sp = match (d.s, d.i, d.g, d.a_mhz) {
                    (None, None, None, None) => {
                        bundled(&d.name).map_err(|m| invalid(origin, &field, m))?
                    }
                    (Some(s), Some(i), Some(g), Some(a)) => {
                        SpinSpecies::new(&d.name, s, i, g, a)
                            .map_err(|e| invalid(origin, &field, e))?
                    }
                    _ => {
                        return Err(invalid(
                            origin,
                            &field,
                            "give all of S, I, g, A_MHz or none (bundled species)",
                        ))
                    }
                };
                (sp, d.weight.unwrap_or(1.0))
            }
        };
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(invalid(origin, &format!("{field}.weight"), "must be >= 0"));
        }
        Ok((sp, weight))
    }

    /// Species with their weights, in config order.
    pub fn species_list(&self) -> Vec<(SpinSpecies, f64)> {
        (0..self.species.len())
            .map(|k| self.species_at(k, "").expect("validated species"))
            .collect()
    }

    /// The configured species called `name`, or the first one.
    pub fn select_species(&self, name: Option<&str>) -> Result<SpinSpecies> {
        let list = self.species_list();
        match name {
            None => Ok(list[0].0.clone()),
            Some(n) => list
                .into_iter()
                .map(|(s, _)| s)
                .find(|s| s.name() == n)
                .or_else(|| bundled(n).ok())
                .ok_or_else(|| CliError::Usage(format!("unknown species '{n}'"))),
        }
    }

    /// Offset plus one basis function per species: exact diagonalization for
    /// hyperfine-coupled species, Curie law for bare spin-1/2.
    pub fn fit_model(&self) -> FitModel {
        let field = self.field();
        let basis: Vec<BasisFunction> = self
            .species_list()
            .into_iter()
            .map(|(sp, _)| {
                let method = if sp.is_spin_half() && sp.nuclear_spin() == 0.0 {
                    Method::Curie
                } else {
                    Method::Exact
                };
                BasisFunction::new(sp, field, method)
            })
            .collect();
        let name = basis
            .iter()
            .map(|b| b.species.name())
            .collect::<Vec<_>>()
            .join("+");
        FitModel::new(name, basis, self.fit.include_offset)
    }

    pub fn temperatures_k(&self) -> Vec<f64> {
        self.temperature_grid.temperatures_k()
    }
}

pub fn bundled(name: &str) -> std::result::Result<SpinSpecies, String> {
    match name {
        "Bi" => Ok(SpinSpecies::bismuth()),
        "e12" => Ok(SpinSpecies::bare_spin_half()),
        other => Err(format!(
            "unknown bundled species '{other}' (known: Bi, e12)"
        )),
    }
}

impl GridSpec {
    pub fn validate(&self, origin: &str) -> Result<()> {
        if self.count < 1 {
            return Err(invalid(origin, "temperature_grid.count", "must be >= 1"));
        }
        for (k, v) in [("start_mK", self.start_mk), ("stop_mK", self.stop_mk)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    origin,
                    &format!("temperature_grid.{k}"),
                    "must be > 0",
                ));
            }
        }
        Ok(())
    }

    /// Grid points in kelvin, in generation order.
    pub fn temperatures_k(&self) -> Vec<f64> {
        let (a, b, n) = (self.start_mk, self.stop_mk, self.count);
        let mk: Vec<f64> = if n == 1 {
            vec![a]
        } else {
            let t = |k: usize| k as f64 / (n - 1) as f64;
            match self.spacing {
                Spacing::Linear => (0..n).map(|k| a + (b - a) * t(k)).collect(),
                Spacing::Log => (0..n)
                    .map(|k| (a.ln() + (b.ln() - a.ln()) * t(k)).exp())
                    .collect(),
                Spacing::InverseT => (0..n)
                    .map(|k| 1.0 / (1.0 / a + (1.0 / b - 1.0 / a) * t(k)))
                    .collect(),
            }
        };
        mk.into_iter().map(|t| t * 1e-3).collect()
    }
}

impl QubitConfig {
    pub fn params(&self) -> donorspin_core::Result<QubitParams> {
        QubitParams::new(
            self.ip_na,
            self.delta_ghz,
            self.loop_area_um2,
            self.effective_depth_um,
        )
    }
}

impl SensitivityConfig {
    pub fn inputs(&self) -> donorspin_core::Result<SensitivityInputs> {
        SensitivityInputs::new(
            self.flux_noise_uphi0_per_rt_hz,
            self.per_spin_flux_uphi0,
            self.integration_cap_s,
        )
    }
}
