//! Gravitational Aharonov-Bohm geometry: two uniform spheres on an axis, a
//! potential maximum at the midpoint and force-free minima near the sphere
//! centers.

use crate::constants::{G, HBAR};
use crate::constants::Species;
use crate::numeric::maximize_golden;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AbError {
    #[error("point x = {x} m lies inside a source sphere")]
    InsideSource { x: f64 },
    #[error("invalid source configuration: {0}")]
    InvalidConfig(String),
    #[error("no force-free point found near the sphere")]
    NoSaddle,
}

/// Two identical uniform spheres centered at `±L/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMassConfig {
    /// Sphere radius R [m].
    pub sphere_radius: f64,
    /// Separation s of the two wave packets [m].
    pub separation: f64,
    /// Distance L between sphere centers [m].
    pub center_spacing: f64,
    /// Density ρ [kg/m³].
    pub density: f64,
    /// Hold time T [s].
    pub hold_time: f64,
}

impl SourceMassConfig {
    pub fn validate(&self) -> Result<(), AbError> {
        if !(self.sphere_radius > 0.0) {
            return Err(AbError::InvalidConfig("sphere radius must be positive".into()));
        }
        if !(self.center_spacing > 2.0 * self.sphere_radius) {
            return Err(AbError::InvalidConfig("spheres overlap (L ≤ 2R)".into()));
        }
        if !(self.density > 0.0) {
            return Err(AbError::InvalidConfig("density must be positive".into()));
        }
        Ok(())
    }

    /// Mass of one sphere [kg].
    pub fn sphere_mass(&self) -> f64 {
        4.0 / 3.0 * PI * self.density * self.sphere_radius.powi(3)
    }

    fn centers(&self) -> [f64; 2] {
        [0.5 * self.center_spacing, -0.5 * self.center_spacing]
    }
}

/// Potential of one uniform sphere at distance `r` from its center [J/kg].
fn sphere_potential(gm: f64, radius: f64, r: f64) -> f64 {
    if r >= radius {
        -gm / r
    } else {
        -gm * (3.0 * radius * radius - r * r) / (2.0 * radius.powi(3))
    }
}

/// On-axis potential of the sphere pair [J/kg], including the interior of the
/// (slotted) spheres.
pub fn sphere_pair_potential(cfg: &SourceMassConfig, x: f64) -> f64 {
    let gm = G * cfg.sphere_mass();
    cfg.centers()
        .iter()
        .map(|c| sphere_potential(gm, cfg.sphere_radius, (x - c).abs()))
        .sum()
}

/// Exterior-only evaluation: fails for points inside either sphere.
pub fn sphere_pair_potential_exterior(cfg: &SourceMassConfig, x: f64) -> Result<f64, AbError> {
    if cfg.centers().iter().any(|c| (x - c).abs() < cfg.sphere_radius) {
        return Err(AbError::InsideSource { x });
    }
    Ok(sphere_pair_potential(cfg, x))
}

/// Axial field `dU/dx` [m/s²].
pub fn sphere_pair_gradient(cfg: &SourceMassConfig, x: f64) -> f64 {
    let gm = G * cfg.sphere_mass();
    let r3 = cfg.sphere_radius.powi(3);
    cfg.centers()
        .iter()
        .map(|c| {
            let d = x - c;
            if d.abs() >= cfg.sphere_radius {
                gm * d.signum() / (d * d)
            } else {
                gm * d / r3
            }
        })
        .sum()
}

/// Diagonal Hessian `(U_xx, U_yy = U_zz)` of the potential at an axis point.
pub fn sphere_pair_hessian(cfg: &SourceMassConfig, x: f64) -> (f64, f64) {
    let gm = G * cfg.sphere_mass();
    let r3 = cfg.sphere_radius.powi(3);
    cfg.centers().iter().fold((0.0, 0.0), |(axx, arr), c| {
        let d = (x - c).abs();
        if d >= cfg.sphere_radius {
            (axx - 2.0 * gm / d.powi(3), arr + gm / d.powi(3))
        } else {
            (axx + gm / r3, arr + gm / r3)
        }
    })
}

/// Force-free point inside the sphere at `+L/2`, found by safeguarded Newton
/// iteration on the axial field.
pub fn near_sphere_saddle(cfg: &SourceMassConfig) -> Result<f64, AbError> {
    cfg.validate()?;
    let half = 0.5 * cfg.center_spacing;
    let (mut a, mut b) = (half - cfg.sphere_radius, half);
    if sphere_pair_gradient(cfg, a) >= 0.0 || sphere_pair_gradient(cfg, b) <= 0.0 {
        return Err(AbError::NoSaddle);
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let g = sphere_pair_gradient(cfg, x);
        if g > 0.0 {
            b = x;
        } else {
            a = x;
        }
        let curv = sphere_pair_hessian(cfg, x).0;
        let mut next = x - g / curv;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= 1e-12 * half {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Potential difference `U(0) − U(x_B)` between the midpoint maximum and the
/// near-sphere minimum [J/kg].
pub fn potential_difference(cfg: &SourceMassConfig) -> Result<f64, AbError> {
    let xb = near_sphere_saddle(cfg)?;
    Ok(sphere_pair_potential(cfg, 0.0) - sphere_pair_potential(cfg, xb))
}

/// Result of the geometry optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalGeometry {
    pub config: SourceMassConfig,
    /// `ΔU / (G ρ s²)` at the optimum.
    pub du_over_g_rho_s2: f64,
}

/// `ΔU / (G ρ s²)` as a function of `L/R` (scale free).
pub fn normalized_potential_difference(l_over_r: f64) -> Result<f64, AbError> {
    let cfg = SourceMassConfig {
        sphere_radius: 1.0,
        separation: 0.0,
        center_spacing: l_over_r,
        density: 1.0,
        hold_time: 1.0,
    };
    let xb = near_sphere_saddle(&cfg)?;
    Ok(potential_difference(&cfg)? / (G * xb * xb))
}

/// Sphere spacing that maximizes `ΔU` at fixed packet separation, for radius `R`.
pub fn ab_optimal_geometry(radius: f64, density: f64, hold_time: f64) -> Result<OptimalGeometry, AbError> {
    if !(radius > 0.0) {
        return Err(AbError::InvalidConfig("sphere radius must be positive".into()));
    }
    let f = |l: f64| normalized_potential_difference(l).unwrap_or(f64::NEG_INFINITY);
    let (l_over_r, ratio) = maximize_golden(f, 2.05, 4.0, 1e-10);
    let mut config = SourceMassConfig {
        sphere_radius: radius,
        separation: 0.0,
        center_spacing: l_over_r * radius,
        density,
        hold_time,
    };
    config.separation = near_sphere_saddle(&config)?;
    Ok(OptimalGeometry { config, du_over_g_rho_s2: ratio })
}

/// Aharonov-Bohm phase `m ΔU T / ħ` [rad].
pub fn ab_phase(cfg: &SourceMassConfig, species: &Species) -> Result<f64, AbError> {
    Ok(species.mass * potential_difference(cfg)? * cfg.hold_time / HBAR)
}

/// Rule of thumb `0.33 (s/cm)² (ρ / 20 g cm⁻³) (m/m_Cs) (T/s)` [rad].
pub fn ab_phase_rule_of_thumb(separation: f64, density: f64, mass_ratio_to_cs: f64, hold_time: f64) -> f64 {
    0.33 * (separation / 0.01).powi(2) * (density / 20e3) * mass_ratio_to_cs * hold_time
}

/// Closed-form mean and standard deviation of the relative phase error from
/// Gaussian atom-position errors `σ_x` (axial) and `σ_r` (transverse):
/// mean `(0.04 σ_r² − 3.89 σ_x²)/R²`, std `√(5.76 σ_r⁴ + 16.11 σ_x⁴)/R²`.
pub fn ab_position_systematic(sigma_x: f64, sigma_r: f64, radius: f64) -> (f64, f64) {
    let r2 = radius * radius;
    let mean = (0.04 * sigma_r * sigma_r - 3.89 * sigma_x * sigma_x) / r2;
    let std = (5.76 * sigma_r.powi(4) + 16.11 * sigma_x.powi(4)).sqrt() / r2;
    (mean, std)
}

/// Coefficients of the position systematic computed from the curvature of the
/// potential at both saddles, in the form of `ab_position_systematic`:
/// `(mean_r, mean_x, var_r, var_x)` with mean `(mean_r σ_r² + mean_x σ_x²)/R²`
/// and std `√(var_r σ_r⁴ + var_x σ_x⁴)/R²`.
pub fn ab_position_coefficients(cfg: &SourceMassConfig) -> Result<[f64; 4], AbError> {
    let xb = near_sphere_saddle(cfg)?;
    let du = potential_difference(cfg)?;
    let (axx, arr) = sphere_pair_hessian(cfg, 0.0);
    let (bxx, brr) = sphere_pair_hessian(cfg, xb);
    let r2 = cfg.sphere_radius.powi(2);
    // δ(ΔU) = ½ U_A'' δ_A² − ½ U_B'' δ_B² per direction; two transverse directions
    let mean_x = 0.5 * (axx - bxx) / du * r2;
    let mean_r = (arr - brr) / du * r2;
    let var_x = 0.5 * (axx * axx + bxx * bxx) / (du * du) * r2 * r2;
    let var_r = (arr * arr + brr * brr) / (du * du) * r2 * r2;
    Ok([mean_r, mean_x, var_r, var_x])
}

/// Monte-Carlo moments of the second-order-expanded relative phase error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionMonteCarlo {
    pub mean: f64,
    pub std: f64,
    pub standard_error: f64,
}

/// Draw Gaussian position errors of both packets (axial `σ_x`, each transverse
/// direction `σ_r`) and evaluate the second-order change of `ΔU`, relative to `ΔU`.
pub fn ab_position_monte_carlo(
    cfg: &SourceMassConfig,
    sigma_x: f64,
    sigma_r: f64,
    samples: usize,
    seed: u64,
) -> Result<PositionMonteCarlo, AbError> {
    let xb = near_sphere_saddle(cfg)?;
    let du = potential_difference(cfg)?;
    let (axx, arr) = sphere_pair_hessian(cfg, 0.0);
    let (bxx, brr) = sphere_pair_hessian(cfg, xb);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let (xa, ya, za) = (sigma_x * draw(), sigma_r * draw(), sigma_r * draw());
        let (xb_, yb, zb) = (sigma_x * draw(), sigma_r * draw(), sigma_r * draw());
        let ua = 0.5 * (axx * xa * xa + arr * (ya * ya + za * za));
        let ub = 0.5 * (bxx * xb_ * xb_ + brr * (yb * yb + zb * zb));
        let rel = (ua - ub) / du;
        sum += rel;
        sum2 += rel * rel;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(PositionMonteCarlo { mean, std: var.sqrt(), standard_error: (var / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SourceMassConfig {
        SourceMassConfig {
            sphere_radius: 0.01,
            separation: 0.0114,
            center_spacing: 0.0262,
            density: 19.25e3,
            hold_time: 1.0,
        }
    }

    #[test]
    fn midpoint_value_and_far_field() {
        let c = cfg();
        let gm = G * c.sphere_mass();
        let u0 = sphere_pair_potential(&c, 0.0);
        assert!((u0 + 2.0 * gm / (c.center_spacing / 2.0)).abs() < 1e-14 * u0.abs());
        assert!(sphere_pair_potential(&c, 1e9).abs() < 1e-9 * u0.abs());
        assert_eq!(sphere_pair_gradient(&c, 0.0), 0.0);
    }

    #[test]
    fn exterior_check() {
        let c = cfg();
        assert!(matches!(
            sphere_pair_potential_exterior(&c, 0.0131),
            Err(AbError::InsideSource { .. })
        ));
        assert!(sphere_pair_potential_exterior(&c, 0.0).is_ok());
    }

    #[test]
    fn saddle_is_force_free() {
        let c = cfg();
        let xb = near_sphere_saddle(&c).unwrap();
        let scale = G * c.sphere_mass() / c.sphere_radius.powi(2);
        assert!(sphere_pair_gradient(&c, xb).abs() < 1e-12 * scale);
    }

    #[test]
    fn rejects_overlap() {
        let mut c = cfg();
        c.center_spacing = 0.015;
        assert!(c.validate().is_err());
    }
}
