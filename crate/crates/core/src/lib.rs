//! Thermodynamics of hyperfine-coupled donor spins, flux-qubit magnetometer
//! transfer functions and multi-species magnetization decomposition.
//!
//! The crate is `no_std` and only needs `alloc`. Every quantity is carried in
//! a fixed unit system:
//!
//! | quantity          | unit          |
//! |-------------------|---------------|
//! | energy            | MHz (E/h)     |
//! | magnetic field    | mT            |
//! | temperature       | K             |
//! | flux detuning     | mΦ₀           |
//! | qubit frequency   | GHz           |
//!
//! Modules:
//!
//! * [`spin`]: spin operators, the electron–nuclear Hamiltonian, its exact
//!   diagonalization, the Breit–Rabi closed form and ESR transitions.
//! * [`thermo`]: Boltzmann populations and normalized magnetization, exact and
//!   closed-form.
//! * [`qubit`]: flux-qubit spectrum and magnetometer figures of merit.
//! * [`fit`]: linear least-squares decomposition of magnetization curves.
//! * [`linalg`]: the small dense matrix kernels the above are built on.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constants;
mod error;
pub mod fit;
pub mod linalg;
pub mod qubit;
pub mod spin;
pub mod thermo;

pub use error::{Error, Result};
