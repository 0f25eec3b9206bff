//! Decomposition of a flux-shift-vs-temperature curve into species
//! contributions, y(T) = c₀ + Σ_j c_j f_j(T), by weighted linear least squares.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{cos, log, sin, sqrt};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Error, Result};
use crate::linalg::{condition_number, qr_least_squares, upper_triangular_inverse, Matrix};
use crate::spin::{Field, SpinSpecies};
use crate::thermo::{magnetization_closed_form, magnetization_curie, magnetization_exact};

/// Design matrices above this 2-norm condition number are rejected.
pub const MAX_CONDITION_NUMBER: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataPoint {
    pub temperature_k: f64,
    /// Flux shift in μΦ₀.
    pub value: f64,
    pub sigma: Option<f64>,
}

/// Measured (or synthetic) curve, sorted by strictly increasing temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    points: Vec<DataPoint>,
    reference_temperature_k: f64,
}

impl DataSet {
    /// Sorts by temperature. Rejects non-positive or repeated temperatures,
    /// non-positive sigmas and a mix of rows with and without sigma.
    pub fn new(mut points: Vec<DataPoint>, reference_temperature_k: f64) -> Result<Self> {
        if !(reference_temperature_k.is_finite() && reference_temperature_k > 0.0) {
            return Err(invalid("reference temperature must be > 0 K"));
        }
        for (row, p) in points.iter().enumerate() {
            if !(p.temperature_k.is_finite() && p.temperature_k > 0.0) {
                return Err(invalid(format!("row {}: temperature must be > 0", row + 1)));
            }
            if !p.value.is_finite() {
                return Err(invalid(format!("row {}: value is not finite", row + 1)));
            }
            if let Some(s) = p.sigma {
                if !(s.is_finite() && s > 0.0) {
                    return Err(invalid(format!("row {}: sigma must be > 0", row + 1)));
                }
            }
        }
        let with_sigma = points.iter().filter(|p| p.sigma.is_some()).count();
        if with_sigma != 0 && with_sigma != points.len() {
            return Err(invalid("either every row or no row carries a sigma"));
        }
        points.sort_by(|a, b| a.temperature_k.total_cmp(&b.temperature_k));
        if points
            .windows(2)
            .any(|w| w[0].temperature_k == w[1].temperature_k)
        {
            return Err(invalid("temperatures must be distinct"));
        }
        Ok(Self {
            points,
            reference_temperature_k,
        })
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn reference_temperature_k(&self) -> f64 {
        self.reference_temperature_k
    }

    pub fn temperatures(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.temperature_k).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn has_sigma(&self) -> bool {
        self.points.first().is_some_and(|p| p.sigma.is_some())
    }

    /// Same temperatures and sigmas, new values.
    pub fn with_values(&self, values: &[f64]) -> Result<Self> {
        if values.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                found: values.len(),
            });
        }
        let points = self
            .points
            .iter()
            .zip(values)
            .map(|(p, &value)| DataPoint { value, ..*p })
            .collect();
        Self::new(points, self.reference_temperature_k)
    }
}

/// How a basis function turns a species into a temperature dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact diagonalization.
    Exact,
    /// Weak-field closed form for hyperfine species.
    ClosedForm,
    /// m = g μ_B B / 2 k_B T.
    Curie,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub species: SpinSpecies,
    pub field: Field,
    pub method: Method,
}

impl BasisFunction {
    pub fn new(species: SpinSpecies, field: Field, method: Method) -> Self {
        Self {
            species,
            field,
            method,
        }
    }

    pub fn label(&self) -> String {
        let method = match self.method {
            Method::Exact => "exact",
            Method::ClosedForm => "closed-form",
            Method::Curie => "curie",
        };
        format!("{}[{}]", self.species.name(), method)
    }

    pub fn evaluate(&self, temperature_k: f64) -> Result<f64> {
        match self.method {
            Method::Exact => magnetization_exact(&self.species, self.field, temperature_k),
            Method::ClosedForm => {
                magnetization_closed_form(&self.species, self.field, temperature_k).map(|c| c.value)
            }
            Method::Curie => {
                magnetization_curie(self.species.g(), self.field, temperature_k).map(|c| c.value)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    pub name: String,
    pub basis: Vec<BasisFunction>,
    pub include_offset: bool,
}

impl FitModel {
    pub fn new(name: impl Into<String>, basis: Vec<BasisFunction>, include_offset: bool) -> Self {
        Self {
            name: name.into(),
            basis,
            include_offset,
        }
    }

    /// Offset plus exact bismuth and Curie spin-1/2 terms.
    pub fn bismuth_and_spin_half(field: Field) -> Self {
        Self::new(
            "Bi+spin-1/2",
            alloc::vec![
                BasisFunction::new(SpinSpecies::bismuth(), field, Method::Exact),
                BasisFunction::new(SpinSpecies::bare_spin_half(), field, Method::Curie),
            ],
            true,
        )
    }

    /// The same model restricted to the basis function at `index`.
    pub fn reduced_to(&self, index: usize) -> Result<Self> {
        let f = self
            .basis
            .get(index)
            .ok_or_else(|| invalid(format!("basis index {index} out of range")))?;
        Ok(Self::new(
            format!("{}-only", f.species.name()),
            alloc::vec![f.clone()],
            self.include_offset,
        ))
    }

    pub fn parameter_count(&self) -> usize {
        self.basis.len() + usize::from(self.include_offset)
    }

    pub fn parameter_labels(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.parameter_count());
        if self.include_offset {
            out.push(String::from("offset"));
        }
        out.extend(self.basis.iter().map(BasisFunction::label));
        out
    }
}

/// Evaluated design matrix for one model on one temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub matrix: Matrix,
    pub labels: Vec<String>,
    pub include_offset: bool,
    pub condition_number: f64,
}

impl Design {
    /// Model prediction for coefficient vector `c`.
    pub fn predict(&self, coefficients: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(coefficients)
    }
}

/// Columns: all-ones (when the offset is on) followed by f_j(T).
pub fn design_matrix(model: &FitModel, temperatures_k: &[f64]) -> Result<Design> {
    if model.parameter_count() == 0 {
        return Err(invalid("model has no parameters"));
    }
    if temperatures_k.is_empty() {
        return Err(invalid("empty temperature grid"));
    }
    let p = model.parameter_count();
    let offset = usize::from(model.include_offset);
    let mut matrix = Matrix::zeros(temperatures_k.len(), p);
    for (i, &t) in temperatures_k.iter().enumerate() {
        if offset == 1 {
            matrix[(i, 0)] = 1.0;
        }
        for (j, f) in model.basis.iter().enumerate() {
            matrix[(i, offset + j)] = f.evaluate(t)?;
        }
    }
    let condition_number = condition_number(&matrix);
    if condition_number.is_nan() || condition_number > MAX_CONDITION_NUMBER {
        return Err(Error::DegenerateBasis { condition_number });
    }
    Ok(Design {
        matrix,
        labels: model.parameter_labels(),
        include_offset: model.include_offset,
        condition_number,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub label: String,
    pub value: f64,
    pub sigma: f64,
}

/// c₁ / (c₁ + c₂) with first-order propagated uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: Vec<Coefficient>,
    pub covariance: Matrix,
    /// Present when the model has exactly two species terms.
    pub ratio: Option<Ratio>,
    /// Σ w_i r_i² (unit weights without sigmas).
    pub rss: f64,
    pub n: usize,
    pub dof: usize,
    /// y_i - ŷ_i, unweighted.
    pub residuals: Vec<f64>,
    pub weights: Vec<f64>,
    pub condition_number: f64,
}

impl FitResult {
    pub fn values(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.value).collect()
    }
}

pub fn fit_linear(data: &DataSet, model: &FitModel) -> Result<FitResult> {
    let required = model.parameter_count() + 1;
    if data.len() < required {
        return Err(Error::InsufficientData {
            rows: data.len(),
            required,
        });
    }
    let design = design_matrix(model, &data.temperatures())?;
    fit_design(data, &design)
}

/// Weighted least squares on a precomputed design, solved through a
/// Householder QR of √W X. Covariance is (XᵀWX)⁻¹ with per-point sigmas and
/// s²(XᵀX)⁻¹, s² = RSS/(n-p), without.
pub fn fit_design(data: &DataSet, design: &Design) -> Result<FitResult> {
    let (n, p) = (design.matrix.rows(), design.matrix.cols());
    if data.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: data.len(),
        });
    }
    if n < p + 1 {
        return Err(Error::InsufficientData {
            rows: n,
            required: p + 1,
        });
    }
    let y = data.values();
    let weights: Vec<f64> = data
        .points()
        .iter()
        .map(|pt| pt.sigma.map_or(1.0, |s| 1.0 / (s * s)))
        .collect();
    let root_w: Vec<f64> = weights.iter().map(|w| sqrt(*w)).collect();
    let xw = Matrix::from_fn(n, p, |i, j| root_w[i] * design.matrix[(i, j)]);
    let yw: Vec<f64> = y.iter().zip(&root_w).map(|(v, w)| v * w).collect();
    let qr = qr_least_squares(&xw, &yw)?;
    let c = qr.solution;

    let fitted = design.predict(&c);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss: f64 = residuals.iter().zip(&weights).map(|(r, w)| w * r * r).sum();
    let dof = n - p;

    let r_inv = upper_triangular_inverse(&qr.r)?;
    let unscaled = r_inv.matmul(&r_inv.transpose());
    let scale = if data.has_sigma() {
        1.0
    } else {
        rss / dof as f64
    };
    let mut covariance = unscaled.scaled(scale);
    symmetrize(&mut covariance);

    let coefficients = design
        .labels
        .iter()
        .zip(&c)
        .enumerate()
        .map(|(j, (label, &value))| Coefficient {
            label: label.clone(),
            value,
            sigma: sqrt(covariance[(j, j)].max(0.0)),
        })
        .collect();

    let offset = usize::from(design.include_offset);
    let ratio = (p - offset == 2).then(|| species_ratio(&c, &covariance, offset, offset + 1));

    Ok(FitResult {
        coefficients,
        covariance,
        ratio,
        rss,
        n,
        dof,
        residuals,
        weights,
        condition_number: design.condition_number,
    })
}

fn symmetrize(m: &mut Matrix) {
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// r = c_a/(c_a + c_b), σ_r² = Jᵀ Σ J with J = (c_b, -c_a)/(c_a + c_b)².
pub fn species_ratio(c: &[f64], covariance: &Matrix, a: usize, b: usize) -> Ratio {
    let (ca, cb) = (c[a], c[b]);
    let sum = ca + cb;
    let ja = cb / (sum * sum);
    let jb = -ca / (sum * sum);
    let var = ja * ja * covariance[(a, a)]
        + 2.0 * ja * jb * covariance[(a, b)]
        + jb * jb * covariance[(b, b)];
    Ratio {
        value: ca / sum,
        sigma: sqrt(var.max(0.0)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFit {
    pub model: String,
    pub result: FitResult,
    /// RSS(reduced) / RSS(full).
    pub rss_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub full_model: String,
    pub full: FitResult,
    pub reduced: Vec<ReducedFit>,
}

pub fn compare_models(
    data: &DataSet,
    full: &FitModel,
    reduced: &[FitModel],
) -> Result<ModelComparison> {
    let full_fit = fit_linear(data, full)?;
    let reduced = reduced
        .iter()
        .map(|m| {
            let result = fit_linear(data, m)?;
            Ok(ReducedFit {
                model: m.name.clone(),
                rss_ratio: result.rss / full_fit.rss,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelComparison {
        full_model: full.name.clone(),
        full: full_fit,
        reduced,
    })
}

/// Standard-normal deviates from a seeded ChaCha8 stream.
///
/// Seeding: `ChaCha8Rng::seed_from_u64(seed)` (rand_core's PCG32-based seed
/// expansion). Each pair of deviates consumes two `next_u64` draws turned into
/// uniforms `u = (1 + (w >> 11)) · 2⁻⁵³ ∈ (0, 1]`, then Box–Muller:
/// `z₀ = √(-2 ln u₁) cos 2πu₂`, `z₁ = √(-2 ln u₁) sin 2πu₂`, emitted in that
/// order.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = sqrt(-2.0 * log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(r * sin(theta));
        r * cos(theta)
    }
}

/// Noise-free model curve that can be resampled with different seeds.
#[derive(Debug, Clone)]
pub struct SyntheticGenerator {
    temperatures_k: Vec<f64>,
    clean: Vec<f64>,
    reference_temperature_k: f64,
}

impl SyntheticGenerator {
    pub fn new(
        model: &FitModel,
        truth: &[f64],
        temperatures_k: &[f64],
        reference_temperature_k: f64,
    ) -> Result<Self> {
        if truth.len() != model.parameter_count() {
            return Err(Error::DimensionMismatch {
                expected: model.parameter_count(),
                found: truth.len(),
            });
        }
        let mut temperatures_k = temperatures_k.to_vec();
        temperatures_k.sort_by(f64::total_cmp);
        let design = design_matrix(model, &temperatures_k)?;
        Ok(Self {
            clean: design.predict(truth),
            temperatures_k,
            reference_temperature_k,
        })
    }

    pub fn clean(&self) -> &[f64] {
        &self.clean
    }

    pub fn sample(&self, noise_sd: f64, seed: u64) -> Result<DataSet> {
        if !(noise_sd.is_finite() && noise_sd >= 0.0) {
            return Err(invalid("noise standard deviation must be >= 0"));
        }
        let mut noise = GaussianStream::new(seed);
        let points = self
            .temperatures_k
            .iter()
            .zip(&self.clean)
            .map(|(&t, &y)| DataPoint {
                temperature_k: t,
                value: if noise_sd > 0.0 {
                    y + noise_sd * noise.next_normal()
                } else {
                    y
                },
                sigma: None,
            })
            .collect();
        DataSet::new(points, self.reference_temperature_k)
    }
}

/// `truth` holds c₀ (when the offset is on) followed by the species coefficients.
pub fn generate_synthetic(
    model: &FitModel,
    truth: &[f64],
    temperatures_k: &[f64],
    noise_sd: f64,
    seed: u64,
    reference_temperature_k: f64,
) -> Result<DataSet> {
    SyntheticGenerator::new(model, truth, temperatures_k, reference_temperature_k)?
        .sample(noise_sd, seed)
}
