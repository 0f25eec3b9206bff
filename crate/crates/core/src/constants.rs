//! Physical constants in the crate's unit system.

/// Bohr magneton over Planck constant, μ_B/h, in MHz/mT (13.996245 GHz/T).
pub const BOHR_MAGNETON_MHZ_PER_MT: f64 = 13.996245;

/// Boltzmann constant over Planck constant, k_B/h, in MHz/K (20.836619 GHz/K).
pub const BOLTZMANN_MHZ_PER_K: f64 = 20_836.619;

/// Magnetic flux quantum h/2e in Wb.
pub const FLUX_QUANTUM_WB: f64 = 2.067834e-15;

/// Planck constant in J·s.
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
