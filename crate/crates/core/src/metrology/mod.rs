//! Noise and error-budget machinery: vibration sensitivity, Allan deviation,
//! shot noise, budget aggregation and one-line estimates for budget rows.

pub mod allan;
pub mod budget;
pub mod noise;

pub use allan::{allan_deviation, log_log_slope, octave_taus, AllanError};
pub use budget::{budget_combine, BudgetEntry, BudgetError, ErrorBudget, Unit};
pub use noise::{
    sensitivity_function, sensitivity_mach_zehnder, vibration_phase_noise, NoiseBand, NoiseError, NoiseModel,
};

use crate::constants::HBAR;
use std::f64::consts::PI;

/// Phase uncertainty `1/(C√N)` per run, reduced by `√R` over `R` runs.
pub fn shot_noise(n_atoms: f64, contrast: f64, repetitions: u64) -> f64 {
    assert!(n_atoms >= 1.0, "need at least one atom");
    assert!(contrast > 0.0 && contrast <= 1.0, "contrast must lie in (0, 1]");
    assert!(repetitions >= 1, "need at least one run");
    1.0 / (contrast * n_atoms.sqrt()) / (repetitions as f64).sqrt()
}

/// Mean-field phase `4πħ a n T/m` for scattering length `a` [m], density `n` [m⁻³].
pub fn mean_field_phase(scattering_length: f64, density: f64, t: f64, mass: f64) -> f64 {
    4.0 * PI * HBAR * scattering_length * density * t / mass
}

/// Rotation phase `k_eff v₀ Ω (t₁ − t₀)` for a transverse velocity `v₀` and rotation rate `Ω`.
pub fn rotation_phase(k_eff: f64, v0: f64, omega_rot: f64, t0: f64, t1: f64) -> f64 {
    k_eff * v0 * omega_rot * (t1 - t0)
}

/// Quadratic Zeeman phase difference `γ₂ T · 2B₀δB` for a field difference δB
/// between the arms; `gamma2` in rad s⁻¹ G⁻², fields in G.
pub fn quadratic_zeeman_phase(gamma2: f64, b0: f64, delta_b: f64, t: f64) -> f64 {
    gamma2 * t * 2.0 * b0 * delta_b
}

/// Quadratic Zeeman coefficient of the cesium clock transition, 2π × 430 Hz/G².
pub const CS_QUADRATIC_ZEEMAN: f64 = 2.0 * PI * 430.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shot_noise_figures() {
        assert!((shot_noise(1e4, 1.0, 1) - 0.01).abs() < 1e-15);
        assert!((shot_noise(1e4, 1.0, 2500) - 0.01 / 50.0).abs() < 1e-15);
        assert!((shot_noise(1e4, 1.0, 1200) - 2.887e-4).abs() < 1e-6);
    }
}
