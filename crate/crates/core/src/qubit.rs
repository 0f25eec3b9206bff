//! Flux-qubit transfer function f(δ) = √(ε² + Δ²), ε = 2 I_p Φ₀ δ / h, and the
//! magnetometer figures of merit built on it.

use alloc::format;

use libm::{fabs, sqrt};

use crate::constants::{FLUX_QUANTUM_WB, PLANCK_J_S};
use crate::error::{invalid, Error, Result};

/// Responsivity fraction of the asymptote defining the magnetometer operating point.
pub const OPERATING_RESPONSIVITY_FRACTION: f64 = 0.99;
pub const DEFAULT_INTEGRATION_CAP_S: f64 = 1.0;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be > 0, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    persistent_current_na: f64,
    gap_ghz: f64,
    loop_area_um2: f64,
    effective_depth_um: f64,
}

impl QubitParams {
    pub fn new(
        persistent_current_na: f64,
        gap_ghz: f64,
        loop_area_um2: f64,
        effective_depth_um: f64,
    ) -> Result<Self> {
        Ok(Self {
            persistent_current_na: positive("persistent current", persistent_current_na)?,
            gap_ghz: positive("gap", gap_ghz)?,
            loop_area_um2: positive("loop area", loop_area_um2)?,
            effective_depth_um: positive("effective depth", effective_depth_um)?,
        })
    }

    /// I_p = 459 nA, Δ/h = 1.91 GHz, 1 × 5 μm loop, 1 μm interaction depth.
    pub fn reference() -> Self {
        Self::new(459.0, 1.91, 5.0, 1.0).expect("valid constants")
    }

    pub fn persistent_current_na(&self) -> f64 {
        self.persistent_current_na
    }

    pub fn gap_ghz(&self) -> f64 {
        self.gap_ghz
    }

    pub fn loop_area_um2(&self) -> f64 {
        self.loop_area_um2
    }

    pub fn effective_depth_um(&self) -> f64 {
        self.effective_depth_um
    }

    /// 2 I_p Φ₀ / h in GHz per mΦ₀: the slope of ε and the far-detuned
    /// responsivity.
    pub fn flux_slope_ghz_per_mphi0(&self) -> f64 {
        2.0 * self.persistent_current_na * 1e-9 * FLUX_QUANTUM_WB / PLANCK_J_S * 1e-3 * 1e-9
    }

    /// ε in GHz at detuning `delta` (mΦ₀) from the sweet spot.
    pub fn energy_bias_ghz(&self, delta_mphi0: f64) -> f64 {
        self.flux_slope_ghz_per_mphi0() * delta_mphi0
    }
}

/// Qubit transition frequency (GHz) at flux detuning `delta` (mΦ₀).
pub fn qubit_frequency(q: &QubitParams, delta_mphi0: f64) -> f64 {
    let eps = q.energy_bias_ghz(delta_mphi0);
    sqrt(eps * eps + q.gap_ghz * q.gap_ghz)
}

/// Non-negative detuning (mΦ₀) at which the qubit sits at `frequency_ghz`.
pub fn flux_from_frequency(q: &QubitParams, frequency_ghz: f64) -> Result<f64> {
    if frequency_ghz.is_nan() || frequency_ghz < q.gap_ghz {
        return Err(Error::OutOfBand {
            frequency_ghz,
            gap_ghz: q.gap_ghz,
        });
    }
    let eps = sqrt((frequency_ghz - q.gap_ghz) * (frequency_ghz + q.gap_ghz));
    Ok(eps / q.flux_slope_ghz_per_mphi0())
}

/// df/dδ in GHz per mΦ₀.
pub fn responsivity(q: &QubitParams, delta_mphi0: f64) -> f64 {
    let slope = q.flux_slope_ghz_per_mphi0();
    slope * slope * delta_mphi0 / qubit_frequency(q, delta_mphi0)
}

/// Detuning (mΦ₀, positive branch) where |df/dδ| reaches `fraction` of the
/// asymptotic slope.
pub fn detuning_for_responsivity(q: &QubitParams, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid("responsivity fraction must lie in (0, 1)"));
    }
    // ε / √(ε² + Δ²) = r  =>  ε = Δ r / √(1 - r²)
    let eps = q.gap_ghz * fraction / sqrt(1.0 - fraction * fraction);
    Ok(eps / q.flux_slope_ghz_per_mphi0())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityInputs {
    flux_noise_uphi0_per_rt_hz: f64,
    per_spin_flux_uphi0: f64,
    integration_cap_s: f64,
}

impl SensitivityInputs {
    pub fn new(
        flux_noise_uphi0_per_rt_hz: f64,
        per_spin_flux_uphi0: f64,
        integration_cap_s: f64,
    ) -> Result<Self> {
        Ok(Self {
            flux_noise_uphi0_per_rt_hz: positive("flux noise density", flux_noise_uphi0_per_rt_hz)?,
            per_spin_flux_uphi0: positive("per-spin flux", per_spin_flux_uphi0)?,
            integration_cap_s: positive("integration cap", integration_cap_s)?,
        })
    }

    pub fn flux_noise_uphi0_per_rt_hz(&self) -> f64 {
        self.flux_noise_uphi0_per_rt_hz
    }

    pub fn per_spin_flux_uphi0(&self) -> f64 {
        self.per_spin_flux_uphi0
    }

    pub fn integration_cap_s(&self) -> f64 {
        self.integration_cap_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity {
    pub spins_per_rt_hz: f64,
    /// Spins resolvable within the integration cap.
    pub min_detectable_spins: f64,
    /// Detuning where responsivity reaches 99 % of its asymptote (mΦ₀).
    pub operating_detuning_mphi0: f64,
    pub operating_frequency_ghz: f64,
}

pub fn spin_sensitivity(q: &QubitParams, s: &SensitivityInputs) -> Result<Sensitivity> {
    let spins_per_rt_hz = s.flux_noise_uphi0_per_rt_hz / s.per_spin_flux_uphi0;
    let operating = detuning_for_responsivity(q, OPERATING_RESPONSIVITY_FRACTION)?;
    Ok(Sensitivity {
        spins_per_rt_hz,
        min_detectable_spins: spins_per_rt_hz / sqrt(s.integration_cap_s),
        operating_detuning_mphi0: operating,
        operating_frequency_ghz: qubit_frequency(q, operating),
    })
}

/// Loop area × effective interaction depth, μm³.
pub fn detection_volume(q: &QubitParams) -> f64 {
    q.loop_area_um2 * q.effective_depth_um
}

/// Spins per μm³.
pub fn volume_sensitivity(min_spins: f64, volume_um3: f64) -> Result<f64> {
    positive("volume", volume_um3)?;
    if !(min_spins.is_finite() && min_spins >= 0.0) {
        return Err(invalid("spin count must be >= 0"));
    }
    Ok(min_spins / volume_um3)
}

/// Centered finite-difference derivative of [`qubit_frequency`], for checks.
pub fn responsivity_finite_difference(q: &QubitParams, delta_mphi0: f64, step: f64) -> f64 {
    (qubit_frequency(q, delta_mphi0 + step) - qubit_frequency(q, delta_mphi0 - step)) / (2.0 * step)
}

/// Relative difference helper used by the qubit checks.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    fabs(a - b) / fabs(b).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweet_spot_frequency_is_gap() {
        assert_eq!(qubit_frequency(&QubitParams::reference(), 0.0), 1.91);
    }

    #[test]
    fn slope_matches_hand_arithmetic() {
        // 2 · 459e-9 A · 2.067834e-15 Wb / 6.62607015e-34 J s = 2.8649e12 Hz/Φ₀
        let s = QubitParams::reference().flux_slope_ghz_per_mphi0();
        let expected = 2.0 * 459e-9 * 2.067834e-15 / 6.62607015e-34 / 1e12;
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 2.865).abs() < 5e-4);
    }

    #[test]
    fn one_milli_flux_quantum() {
        let q = QubitParams::reference();
        let f = qubit_frequency(&q, 1.0);
        let s = q.flux_slope_ghz_per_mphi0();
        assert!((f - (s * s + 1.91 * 1.91).sqrt()).abs() < 1e-14);
        assert!((f - 3.443).abs() < 1e-3);
        assert!((flux_from_frequency(&q, f).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bias_equal_to_gap() {
        let q = QubitParams::reference();
        let delta = 1.91 / q.flux_slope_ghz_per_mphi0();
        assert!((qubit_frequency(&q, delta) - 2f64.sqrt() * 1.91).abs() < 1e-14);
        let back = flux_from_frequency(&q, 2f64.sqrt() * 1.91).unwrap();
        assert!(relative_difference(back, delta) < 1e-12);
        assert_eq!(flux_from_frequency(&q, 1.91).unwrap(), 0.0);
    }

    #[test]
    fn below_gap_is_out_of_band() {
        assert!(matches!(
            flux_from_frequency(&QubitParams::reference(), 1.0),
            Err(Error::OutOfBand { .. })
        ));
    }

    #[test]
    fn responsivity_limits() {
        let q = QubitParams::reference();
        assert_eq!(responsivity(&q, 0.0), 0.0);
        let far = responsivity(&q, 100.0);
        assert!(relative_difference(far, q.flux_slope_ghz_per_mphi0()) < 1e-3);
        assert!(relative_difference(far, 2.865) < 1e-3);
    }

    #[test]
    fn responsivity_matches_finite_difference() {
        let q = QubitParams::reference();
        let fd = responsivity_finite_difference(&q, 0.5, 1e-4);
        assert!(relative_difference(responsivity(&q, 0.5), fd) < 1e-6);
    }

    #[test]
    fn operating_point_reaches_ninety_nine_percent() {
        let q = QubitParams::reference();
        let d = detuning_for_responsivity(&q, 0.99).unwrap();
        let r = responsivity(&q, d) / q.flux_slope_ghz_per_mphi0();
        assert!((r - 0.99).abs() < 1e-12);
    }

    #[test]
    fn sensitivity_ratio_and_scaling() {
        let q = QubitParams::reference();
        let p = 0.0078125;
        let s = spin_sensitivity(&q, &SensitivityInputs::new(12.0 * p, p, 1.0).unwrap()).unwrap();
        assert_eq!(s.spins_per_rt_hz, 12.0);
        assert_eq!(s.min_detectable_spins, 12.0);
        let half = spin_sensitivity(&q, &SensitivityInputs::new(6.0 * p, p, 1.0).unwrap()).unwrap();
        assert_eq!(half.spins_per_rt_hz, 6.0);
        let dbl =
            spin_sensitivity(&q, &SensitivityInputs::new(12.0 * p, 2.0 * p, 1.0).unwrap()).unwrap();
        assert_eq!(dbl.spins_per_rt_hz, 6.0);
        assert!(SensitivityInputs::new(0.0, p, 1.0).is_err());
        assert!(SensitivityInputs::new(1.0, -p, 1.0).is_err());
        assert!(SensitivityInputs::new(1.0, p, 0.0).is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(detection_volume(&QubitParams::reference()), 5.0);
        let big = QubitParams::new(459.0, 1.91, 50.0, 1.0).unwrap();
        assert_eq!(detection_volume(&big), 50.0);
        assert_eq!(
            detection_volume(&QubitParams::new(1.0, 1.0, 1.0, 1.0).unwrap()),
            1.0
        );
        assert_eq!(volume_sensitivity(10.0, 5.0).unwrap(), 2.0);
        assert_eq!(volume_sensitivity(0.0, 5.0).unwrap(), 0.0);
        assert!((volume_sensitivity(10.0, 50.0).unwrap() - 0.2).abs() < 1e-15);
        assert!(volume_sensitivity(1.0, 0.0).is_err());
    }

    #[test]
    fn params_validate() {
        assert!(QubitParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(QubitParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(QubitParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
    }
}
