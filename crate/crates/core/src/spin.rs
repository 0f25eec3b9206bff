//! Electron–nuclear spin Hamiltonian with isotropic hyperfine coupling,
//!
//! ```text
//! H/h = (g μ_B B / h) S_z ⊗ 1 + (A/h) (S_z ⊗ I_z + (S_+ ⊗ I_- + S_- ⊗ I_+) / 2)
//! ```
//!
//! with the field along z. Energies are frequencies in MHz. The product basis
//! is `|m_S, m_I⟩` with both projections running from +j down to -j and the
//! nuclear index varying fastest.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::constants::BOHR_MAGNETON_MHZ_PER_MT;
use crate::error::{invalid, Error, Result};
use crate::linalg::{jacobi_eigen, Matrix};

/// Symmetry tolerance (relative to max |H|) accepted by [`eigensystem`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm is below this times ‖H‖.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues closer than this (relative to max |H|) form one degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
/// Transitions weaker than this |⟨i|S_x|j⟩|² are flagged forbidden.
pub const DEFAULT_INTENSITY_FLOOR: f64 = 1e-6;
pub const DEFAULT_RESONANCE_GRID: usize = 2000;
/// Root refinement stops once |f_ij(B) - f_mw| is below this (MHz, i.e. 1 kHz).
pub const RESONANCE_FREQUENCY_TOLERANCE_MHZ: f64 = 1e-3;

fn twice_integer(j: f64) -> Option<usize> {
    let twice = 2.0 * j;
    let rounded = libm::round(twice);
    (j.is_finite() && j >= 0.0 && fabs(twice - rounded) < 1e-9).then_some(rounded as usize)
}

/// One impurity type: spin quantum numbers plus g-factor and hyperfine constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSpecies {
    name: String,
    electron_spin: f64,
    nuclear_spin: f64,
    g: f64,
    hyperfine_mhz: f64,
}

impl SpinSpecies {
    /// `electron_spin` and `nuclear_spin` must be non-negative half-integers
    /// (electron spin at least 1/2), `g > 0` and `hyperfine_mhz >= 0`.
    pub fn new(
        name: impl Into<String>,
        electron_spin: f64,
        nuclear_spin: f64,
        g: f64,
        hyperfine_mhz: f64,
    ) -> Result<Self> {
        let name = name.into();
        match twice_integer(electron_spin) {
            Some(n) if n >= 1 => {}
            _ => {
                return Err(invalid(format!(
                    "species {name}: electron spin {electron_spin} is not a positive half-integer"
                )))
            }
        }
        if twice_integer(nuclear_spin).is_none() {
            return Err(invalid(format!(
                "species {name}: nuclear spin {nuclear_spin} is not a non-negative half-integer"
            )));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid(format!("species {name}: g-factor must be > 0")));
        }
        if !(hyperfine_mhz.is_finite() && hyperfine_mhz >= 0.0) {
            return Err(invalid(format!(
                "species {name}: hyperfine constant must be >= 0"
            )));
        }
        Ok(Self {
            name,
            electron_spin,
            nuclear_spin,
            g,
            hyperfine_mhz,
        })
    }

    /// Bismuth donor in silicon: S = 1/2, I = 9/2, g = 2.0003, A/h = 1475.4 MHz.
    pub fn bismuth() -> Self {
        Self::new("Bi", 0.5, 4.5, 2.0003, 1475.4).expect("valid constants")
    }

    /// Bare spin-1/2 with g = 2 and no hyperfine partner.
    pub fn bare_spin_half() -> Self {
        Self::new("e12", 0.5, 0.0, 2.0, 0.0).expect("valid constants")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn electron_spin(&self) -> f64 {
        self.electron_spin
    }

    pub fn nuclear_spin(&self) -> f64 {
        self.nuclear_spin
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn hyperfine_mhz(&self) -> f64 {
        self.hyperfine_mhz
    }

    pub fn with_g(mut self, g: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("g-factor must be > 0"));
        }
        self.g = g;
        Ok(self)
    }

    pub fn with_hyperfine(mut self, hyperfine_mhz: f64) -> Result<Self> {
        if !(hyperfine_mhz.is_finite() && hyperfine_mhz >= 0.0) {
            return Err(invalid("hyperfine constant must be >= 0"));
        }
        self.hyperfine_mhz = hyperfine_mhz;
        Ok(self)
    }

    pub fn electron_multiplicity(&self) -> usize {
        (2.0 * self.electron_spin) as usize + 1
    }

    pub fn nuclear_multiplicity(&self) -> usize {
        (2.0 * self.nuclear_spin) as usize + 1
    }

    /// (2S+1)(2I+1).
    pub fn dimension(&self) -> usize {
        self.electron_multiplicity() * self.nuclear_multiplicity()
    }

    pub fn is_spin_half(&self) -> bool {
        self.electron_multiplicity() == 2
    }

    /// Electron Zeeman splitting g μ_B B / h in MHz.
    pub fn zeeman_mhz(&self, field: Field) -> f64 {
        self.g * BOHR_MAGNETON_MHZ_PER_MT * field.millitesla()
    }

    /// Electron m_S of product-basis state `index`.
    pub fn electron_projection(&self, index: usize) -> f64 {
        self.electron_spin - (index / self.nuclear_multiplicity()) as f64
    }

    /// Nuclear m_I of product-basis state `index`.
    pub fn nuclear_projection(&self, index: usize) -> f64 {
        self.nuclear_spin - (index % self.nuclear_multiplicity()) as f64
    }

    fn require_spin_half(&self, what: &str) -> Result<()> {
        if self.is_spin_half() {
            Ok(())
        } else {
            Err(Error::UnsupportedSpecies(format!(
                "{what} needs S = 1/2, species {} has S = {}",
                self.name, self.electron_spin
            )))
        }
    }
}

/// Magnetic field magnitude along the quantization axis, in mT.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Field(f64);

impl Field {
    pub const ZERO: Field = Field(0.0);

    pub fn from_millitesla(b: f64) -> Result<Self> {
        if b.is_finite() && b >= 0.0 {
            Ok(Field(b))
        } else {
            Err(invalid(format!(
                "field must be finite and >= 0 mT, got {b}"
            )))
        }
    }

    pub fn millitesla(self) -> f64 {
        self.0
    }
}

/// Angular-momentum matrices for one spin `s` in the basis m = s, s-1, …, -s.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sz: Matrix,
    pub sx: Matrix,
    /// Imaginary part of S_y: S_y = i · `sy_imag`.
    pub sy_imag: Matrix,
    pub raise: Matrix,
    pub lower: Matrix,
}

pub fn spin_operators(s: f64) -> Result<SpinOperators> {
    let twice = twice_integer(s).ok_or_else(|| invalid(format!("{s} is not a half-integer")))?;
    let n = twice + 1;
    let m = |k: usize| s - k as f64;
    let sz = Matrix::from_fn(n, n, |i, j| if i == j { m(i) } else { 0.0 });
    // ⟨m+1|S+|m⟩ sits at (k-1, k) where m = s - k.
    let raise = Matrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            let mj = m(j);
            sqrt(s * (s + 1.0) - mj * (mj + 1.0))
        } else {
            0.0
        }
    });
    let lower = raise.transpose();
    let mut sx = raise.clone();
    sx.add_scaled(1.0, &lower);
    let sx = sx.scaled(0.5);
    let mut sy_imag = lower.clone();
    sy_imag.add_scaled(-1.0, &raise);
    let sy_imag = sy_imag.scaled(0.5);
    Ok(SpinOperators {
        sz,
        sx,
        sy_imag,
        raise,
        lower,
    })
}

fn operator_pair(species: &SpinSpecies) -> (SpinOperators, SpinOperators) {
    // Both spins were validated as half-integers at construction.
    let s = spin_operators(species.electron_spin).expect("validated electron spin");
    let i = spin_operators(species.nuclear_spin).expect("validated nuclear spin");
    (s, i)
}

/// S_z ⊗ 1 in the product basis.
pub fn electron_sz(species: &SpinSpecies) -> Matrix {
    let (s, _) = operator_pair(species);
    s.sz.kron(&Matrix::identity(species.nuclear_multiplicity()))
}

/// S_x ⊗ 1 in the product basis.
pub fn electron_sx(species: &SpinSpecies) -> Matrix {
    let (s, _) = operator_pair(species);
    s.sx.kron(&Matrix::identity(species.nuclear_multiplicity()))
}

/// Real symmetric Hamiltonian in MHz.
pub fn build_hamiltonian(species: &SpinSpecies, field: Field) -> Matrix {
    let (s, i) = operator_pair(species);
    let one_i = Matrix::identity(species.nuclear_multiplicity());
    let mut h = s.sz.kron(&one_i).scaled(species.zeeman_mhz(field));
    let a = species.hyperfine_mhz;
    if a != 0.0 {
        h.add_scaled(a, &s.sz.kron(&i.sz));
        h.add_scaled(0.5 * a, &s.raise.kron(&i.lower));
        h.add_scaled(0.5 * a, &s.lower.kron(&i.raise));
    }
    h
}

/// Total angular momentum squared F² = (S + I)² in the product basis.
pub fn total_f_squared(species: &SpinSpecies) -> Matrix {
    let (s, i) = operator_pair(species);
    let (ds, di) = (
        species.electron_multiplicity(),
        species.nuclear_multiplicity(),
    );
    let sj = species.electron_spin;
    let ij = species.nuclear_spin;
    let mut f2 = Matrix::identity(ds * di).scaled(sj * (sj + 1.0) + ij * (ij + 1.0));
    f2.add_scaled(2.0, &s.sz.kron(&i.sz));
    f2.add_scaled(1.0, &s.raise.kron(&i.lower));
    f2.add_scaled(1.0, &s.lower.kron(&i.raise));
    f2
}

/// Sorted spectrum and eigenvectors (columns) of a spin Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    energies: Vec<f64>,
    vectors: Matrix,
}

impl EigenSystem {
    /// Energies in MHz, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Column `k` is the eigenvector of `energies()[k]`.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// ⟨k|op|k⟩ for every level.
    pub fn diagonal_expectations(&self, op: &Matrix) -> Vec<f64> {
        let projected = self.vectors.transpose().matmul(&op.matmul(&self.vectors));
        (0..self.dimension()).map(|k| projected[(k, k)]).collect()
    }

    /// ⟨i|op|j⟩ for all level pairs.
    pub fn matrix_elements(&self, op: &Matrix) -> Matrix {
        self.vectors.transpose().matmul(&op.matmul(&self.vectors))
    }

    /// Groups level indices whose energies differ by at most `tolerance` (MHz).
    pub fn degenerate_clusters(&self, tolerance: f64) -> Vec<core::ops::Range<usize>> {
        clusters(&self.energies, tolerance)
    }
}

fn clusters(sorted: &[f64], tolerance: f64) -> Vec<core::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || sorted[k] - sorted[k - 1] > tolerance {
            out.push(start..k);
            start = k;
        }
    }
    out
}

fn dominant_component(v: &[f64]) -> usize {
    let max = v.iter().fold(0.0f64, |m, x| m.max(fabs(*x)));
    v.iter()
        .position(|x| fabs(*x) >= max - 1e-9 * max)
        .unwrap_or(0)
}

/// Full diagonalization with deterministic ordering: ascending energy; inside
/// a degenerate cluster, ascending index of each vector's largest component,
/// whose sign is made positive.
pub fn eigensystem(h: &Matrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    let scale = h.max_abs();
    let asym = h.max_asymmetry();
    if asym > SYMMETRY_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    let raw = jacobi_eigen(h, JACOBI_TOLERANCE, JACOBI_MAX_SWEEPS)?;
    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw.values[a].total_cmp(&raw.values[b]).then(a.cmp(&b)));
    let energies: Vec<f64> = order.iter().map(|&k| raw.values[k]).collect();

    let mut columns: Vec<Vec<f64>> = order.iter().map(|&k| raw.vectors.column(k)).collect();
    for v in columns.iter_mut() {
        let d = dominant_component(v);
        if v[d] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    for range in clusters(&energies, DEGENERACY_TOLERANCE * scale) {
        columns[range].sort_by_key(|v| dominant_component(v));
    }

    let vectors = Matrix::from_fn(n, n, |i, k| columns[k][i]);
    Ok(EigenSystem { energies, vectors })
}

/// Diagonalizes the species Hamiltonian at `field`.
pub fn solve(species: &SpinSpecies, field: Field) -> Result<EigenSystem> {
    eigensystem(&build_hamiltonian(species, field))
}

/// Closed-form Breit–Rabi energies (MHz, ascending) for an S = 1/2 species
/// without nuclear Zeeman term.
pub fn breit_rabi_levels(species: &SpinSpecies, field: Field) -> Result<Vec<f64>> {
    species.require_spin_half("Breit-Rabi")?;
    let a = species.hyperfine_mhz;
    let i = species.nuclear_spin;
    let zeeman = species.zeeman_mhz(field);
    let ni = species.nuclear_multiplicity();
    let mut levels = Vec::with_capacity(2 * ni);

    if a == 0.0 {
        for _ in 0..ni {
            levels.push(-0.5 * zeeman);
            levels.push(0.5 * zeeman);
        }
    } else {
        let half_split = 0.5 * a * (i + 0.5);
        let xi = zeeman / (a * (i + 0.5));
        let edge = i + 0.5;
        // m_F = ±(I + 1/2) are pure product states: linear in the field.
        levels.push(-0.25 * a + half_split * (1.0 + xi));
        levels.push(-0.25 * a + half_split * (1.0 - xi));
        let nf = ni + 1;
        for k in 1..nf - 1 {
            let mf = edge - k as f64;
            let root = sqrt(1.0 + 4.0 * mf * xi / (2.0 * i + 1.0) + xi * xi);
            levels.push(-0.25 * a + half_split * root);
            levels.push(-0.25 * a - half_split * root);
        }
    }
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub lower: usize,
    pub upper: usize,
    /// energies[upper] - energies[lower], MHz.
    pub frequency_mhz: f64,
    /// |⟨lower|S_x ⊗ 1|upper⟩|².
    pub intensity: f64,
    pub allowed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    pub rows: Vec<Transition>,
}

impl TransitionTable {
    pub fn allowed(&self) -> impl Iterator<Item = &Transition> {
        self.rows.iter().filter(|t| t.allowed)
    }
}

/// All level pairs `lower < upper` with electron-drive intensities.
pub fn transition_table(
    es: &EigenSystem,
    species: &SpinSpecies,
    intensity_floor: f64,
) -> Result<TransitionTable> {
    if es.dimension() != species.dimension() {
        return Err(Error::DimensionMismatch {
            expected: species.dimension(),
            found: es.dimension(),
        });
    }
    let elements = es.matrix_elements(&electron_sx(species));
    let e = es.energies();
    let n = es.dimension();
    let mut rows = Vec::with_capacity(n * (n - 1) / 2);
    for lower in 0..n {
        for upper in lower + 1..n {
            let amp = elements[(lower, upper)];
            let intensity = amp * amp;
            rows.push(Transition {
                lower,
                upper,
                frequency_mhz: e[upper] - e[lower],
                intensity,
                allowed: intensity >= intensity_floor,
            });
        }
    }
    Ok(TransitionTable { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub field_mt: f64,
    pub lower: usize,
    pub upper: usize,
    pub intensity: f64,
    /// Effective g: h f_mw = g_eff μ_B B_res.
    pub g_eff: f64,
    /// Dominant nuclear projection of the lower level.
    pub nuclear_projection: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSearch {
    pub field_start_mt: f64,
    pub field_stop_mt: f64,
    pub grid_points: usize,
    pub intensity_floor: f64,
}

impl ResonanceSearch {
    pub fn new(field_start_mt: f64, field_stop_mt: f64) -> Self {
        Self {
            field_start_mt,
            field_stop_mt,
            grid_points: DEFAULT_RESONANCE_GRID,
            intensity_floor: DEFAULT_INTENSITY_FLOOR,
        }
    }

    pub fn with_grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    pub fn with_intensity_floor(mut self, floor: f64) -> Self {
        self.intensity_floor = floor;
        self
    }
}

/// Fields inside the search window where an allowed transition matches the
/// microwave frequency. Roots are bracketed by sign changes on a uniform grid
/// and refined by bisection to within 1 kHz. Level indices refer to the
/// energy ordering at the resonance field.
pub fn resonance_fields(
    species: &SpinSpecies,
    microwave_ghz: f64,
    search: ResonanceSearch,
) -> Result<Vec<Resonance>> {
    if !(microwave_ghz.is_finite() && microwave_ghz > 0.0) {
        return Err(invalid("microwave frequency must be > 0"));
    }
    let (lo, hi) = (search.field_start_mt, search.field_stop_mt);
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
        return Err(invalid(format!(
            "field range [{lo}, {hi}] mT must be ascending and non-negative"
        )));
    }
    if search.grid_points < 2 {
        return Err(invalid("resonance search grid needs at least 2 points"));
    }
    let f_mw = microwave_ghz * 1e3;
    let n = species.dimension();
    let step = (hi - lo) / (search.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..search.grid_points)
        .map(|k| {
            if k + 1 == search.grid_points {
                hi
            } else {
                lo + step * k as f64
            }
        })
        .collect();
    let spectra = grid
        .iter()
        .map(|&b| Ok(solve(species, Field(b))?.energies))
        .collect::<Result<Vec<_>>>()?;

    let sx = electron_sx(species);
    let mut found = Vec::new();
    for lower in 0..n {
        for upper in lower + 1..n {
            let detuning = |e: &[f64]| e[upper] - e[lower] - f_mw;
            for k in 0..grid.len() - 1 {
                let d0 = detuning(&spectra[k]);
                let d1 = detuning(&spectra[k + 1]);
                let root = if d0 == 0.0 {
                    Some(grid[k])
                } else if (d0 < 0.0) != (d1 < 0.0) && d1 != 0.0 {
                    Some(bisect(
                        species,
                        lower,
                        upper,
                        f_mw,
                        grid[k],
                        grid[k + 1],
                        d0,
                    )?)
                } else if d1 == 0.0 && k + 2 == grid.len() {
                    Some(grid[k + 1])
                } else {
                    None
                };
                let Some(b) = root else { continue };
                let es = solve(species, Field(b))?;
                let amp = es.matrix_elements(&sx)[(lower, upper)];
                let intensity = amp * amp;
                if intensity < search.intensity_floor {
                    continue;
                }
                let v = es.vector(lower);
                found.push(Resonance {
                    field_mt: b,
                    lower,
                    upper,
                    intensity,
                    g_eff: effective_g(microwave_ghz, b),
                    nuclear_projection: species.nuclear_projection(dominant_component(&v)),
                });
            }
        }
    }
    found.sort_by(|a, b| {
        a.field_mt
            .total_cmp(&b.field_mt)
            .then(a.lower.cmp(&b.lower))
            .then(a.upper.cmp(&b.upper))
    });
    Ok(found)
}

fn bisect(
    species: &SpinSpecies,
    lower: usize,
    upper: usize,
    f_mw: f64,
    mut a: f64,
    mut b: f64,
    da: f64,
) -> Result<f64> {
    let neg_at_a = da < 0.0;
    let mut mid = 0.5 * (a + b);
    for _ in 0..200 {
        mid = 0.5 * (a + b);
        let e = solve(species, Field(mid))?;
        let d = e.energies[upper] - e.energies[lower] - f_mw;
        if fabs(d) <= RESONANCE_FREQUENCY_TOLERANCE_MHZ || b - a <= 1e-12 * b.max(1.0) {
            break;
        }
        if (d < 0.0) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(mid)
}

/// g_eff = h f / (μ_B B).
pub fn effective_g(frequency_ghz: f64, field_mt: f64) -> f64 {
    frequency_ghz * 1e3 / (BOHR_MAGNETON_MHZ_PER_MT * field_mt)
}

/// Resonance field h f / (g μ_B) in mT of a bare g-factor line.
pub fn resonance_field_for_g(frequency_ghz: f64, g: f64) -> f64 {
    frequency_ghz * 1e3 / (g * BOHR_MAGNETON_MHZ_PER_MT)
}

/// Text label of a half-integer, e.g. `9/2`, `-1/2`, `3`.
pub fn half_integer_label(j: f64) -> String {
    let twice = libm::round(2.0 * j) as i64;
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi() -> SpinSpecies {
        SpinSpecies::bismuth()
    }

    #[test]
    fn spin_half_operators_are_pauli_over_two() {
        let ops = spin_operators(0.5).unwrap();
        assert_eq!(ops.sz, Matrix::from_diagonal(&[0.5, -0.5]));
        assert_eq!(ops.sx[(0, 1)], 0.5);
        assert_eq!(ops.sx[(1, 0)], 0.5);
        assert_eq!(ops.sy_imag[(0, 1)], -0.5);
        assert_eq!(ops.sy_imag[(1, 0)], 0.5);
    }

    #[test]
    fn nine_halves_ladder_coefficient() {
        let ops = spin_operators(4.5).unwrap();
        // ⟨9/2|S+|7/2⟩
        assert!((ops.raise[(0, 1)] - 3.0).abs() < 1e-14);
        assert_eq!(ops.sz[(0, 0)], 4.5);
        assert_eq!(ops.sz[(9, 9)], -4.5);
    }

    #[test]
    fn operators_satisfy_commutator() {
        // [S+, S-] = 2 S_z
        for s in [0.5, 1.0, 1.5, 4.5] {
            let ops = spin_operators(s).unwrap();
            let comm = ops
                .raise
                .matmul(&ops.lower)
                .sub(&ops.lower.matmul(&ops.raise));
            assert!(comm.sub(&ops.sz.scaled(2.0)).max_abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn rejects_non_half_integer_spin() {
        assert!(matches!(
            spin_operators(0.3),
            Err(Error::InvalidArgument(_))
        ));
        assert!(SpinSpecies::new("x", 0.5, 1.2, 2.0, 1.0).is_err());
        assert!(SpinSpecies::new("x", 0.0, 0.5, 2.0, 1.0).is_err());
        assert!(SpinSpecies::new("x", 0.5, 0.5, 0.0, 1.0).is_err());
        assert!(SpinSpecies::new("x", 0.5, 0.5, 2.0, -1.0).is_err());
        assert!(Field::from_millitesla(-1.0).is_err());
    }

    #[test]
    fn bismuth_dimension() {
        assert_eq!(bi().dimension(), 20);
        assert_eq!(SpinSpecies::bare_spin_half().dimension(), 2);
    }

    #[test]
    fn hamiltonian_is_symmetric_and_traceless() {
        let h = build_hamiltonian(&bi(), Field::from_millitesla(37.0).unwrap());
        assert_eq!(h.max_asymmetry(), 0.0);
        assert!(h.trace().abs() < 1e-9);
    }

    #[test]
    fn zeeman_scale_at_point_two_millitesla() {
        let z = bi().zeeman_mhz(Field::from_millitesla(0.2).unwrap());
        assert!((z - 5.599).abs() < 1e-3, "{z}");
    }

    #[test]
    fn pure_zeeman_without_hyperfine() {
        let sp = SpinSpecies::new("x", 0.5, 1.5, 2.0, 0.0).unwrap();
        let field = Field::from_millitesla(10.0).unwrap();
        let es = solve(&sp, field).unwrap();
        let z = sp.zeeman_mhz(field);
        for (k, e) in es.energies().iter().enumerate() {
            let expected = if k < 4 { -0.5 * z } else { 0.5 * z };
            assert!((e - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_input_gives_identity_vectors() {
        let es = eigensystem(&Matrix::from_diagonal(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(es.energies(), [1.0, 2.0, 3.0]);
        assert_eq!(es.vectors(), &Matrix::identity(3));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let h = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(eigensystem(&h), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn zero_field_levels_and_multiplicities() {
        let es = solve(&bi(), Field::ZERO).unwrap();
        let a = 1475.4;
        let clusters = es.degenerate_clusters(1e-6);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].len(), 9);
        assert_eq!(clusters[1].len(), 11);
        for &e in &es.energies()[..9] {
            assert!((e + 2.75 * a).abs() < 1e-8);
        }
        for &e in &es.energies()[9..] {
            assert!((e - 2.25 * a).abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_vectors_are_ordered_and_sign_fixed() {
        let es = solve(&bi(), Field::ZERO).unwrap();
        for range in es.degenerate_clusters(1e-6) {
            let keys: Vec<usize> = range
                .clone()
                .map(|k| dominant_component(&es.vector(k)))
                .collect();
            assert!(keys.windows(2).all(|w| w[0] <= w[1]));
            for k in range {
                let v = es.vector(k);
                assert!(v[dominant_component(&v)] > 0.0);
            }
        }
    }

    #[test]
    fn breit_rabi_rejects_higher_electron_spin() {
        let sp = SpinSpecies::new("s1", 1.0, 0.5, 2.0, 10.0).unwrap();
        assert!(matches!(
            breit_rabi_levels(&sp, Field::ZERO),
            Err(Error::UnsupportedSpecies(_))
        ));
    }

    #[test]
    fn breit_rabi_zero_field() {
        let levels = breit_rabi_levels(&bi(), Field::ZERO).unwrap();
        let a = 1475.4;
        assert_eq!(levels.len(), 20);
        assert!(levels[..9].iter().all(|e| (e + 2.75 * a).abs() < 1e-9));
        assert!(levels[9..].iter().all(|e| (e - 2.25 * a).abs() < 1e-9));
    }

    #[test]
    fn breit_rabi_without_hyperfine_is_pure_zeeman() {
        let sp = SpinSpecies::bare_spin_half();
        let f = Field::from_millitesla(100.0).unwrap();
        let z = sp.zeeman_mhz(f);
        assert_eq!(breit_rabi_levels(&sp, f).unwrap(), [-0.5 * z, 0.5 * z]);
    }

    #[test]
    fn single_allowed_line_for_bare_spin() {
        let sp = SpinSpecies::bare_spin_half();
        let f = Field::from_millitesla(50.0).unwrap();
        let table =
            transition_table(&solve(&sp, f).unwrap(), &sp, DEFAULT_INTENSITY_FLOOR).unwrap();
        let allowed: Vec<_> = table.allowed().collect();
        assert_eq!(allowed.len(), 1);
        assert!((allowed[0].frequency_mhz - sp.zeeman_mhz(f)).abs() < 1e-12);
        assert!((allowed[0].intensity - 0.25).abs() < 1e-14);
    }

    #[test]
    fn transition_table_checks_dimension() {
        let es = solve(&SpinSpecies::bare_spin_half(), Field::ZERO).unwrap();
        assert!(matches!(
            transition_table(&es, &bi(), 1e-6),
            Err(Error::DimensionMismatch {
                expected: 20,
                found: 2
            })
        ));
    }

    #[test]
    fn resonance_of_bare_spin() {
        let sp = SpinSpecies::new("e", 0.5, 0.0, 2.0003, 0.0).unwrap();
        let res = resonance_fields(&sp, 9.6, ResonanceSearch::new(0.0, 1000.0)).unwrap();
        assert_eq!(res.len(), 1);
        let expected = 9600.0 / (2.0003 * BOHR_MAGNETON_MHZ_PER_MT);
        assert!((res[0].field_mt - expected).abs() < 1e-4);
        assert!((res[0].field_mt - 342.9).abs() < 0.05);
        assert!((res[0].g_eff - 2.0003).abs() < 1e-6);
    }

    #[test]
    fn resonance_search_validates_inputs() {
        let sp = SpinSpecies::bare_spin_half();
        assert!(resonance_fields(&sp, 0.0, ResonanceSearch::new(0.0, 10.0)).is_err());
        assert!(resonance_fields(&sp, 9.6, ResonanceSearch::new(10.0, 5.0)).is_err());
    }

    #[test]
    fn resonance_out_of_range_is_empty() {
        let sp = SpinSpecies::bare_spin_half();
        let res = resonance_fields(&sp, 500.0, ResonanceSearch::new(0.0, 1000.0)).unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn half_integer_labels() {
        assert_eq!(half_integer_label(4.5), "9/2");
        assert_eq!(half_integer_label(-0.5), "-1/2");
        assert_eq!(half_integer_label(2.0), "2");
    }
}
