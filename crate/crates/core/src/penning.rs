//! Electron interferometry in the axial well of a Penning trap: trajectories,
//! single and double-diffraction phases, anharmonic and closure systematics,
//! and the damping-limited operating point.

use crate::constants::{A0, C, EPS0, H, HBAR, KB};
use crate::numeric::GaussLegendre;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PenningError {
    #[error("perturbation parameter {name} = {value:e} is too large")]
    PerturbationInvalid { name: &'static str, value: f64 },
    #[error("invalid trap configuration: {0}")]
    InvalidConfig(String),
}

/// Axial trap potential `½mω_z²d²(z²/d² + D₃z³/d³ + D₄z⁴/d⁴)` and damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Axial angular frequency [rad/s].
    pub omega_z: f64,
    /// Trap length scale [m].
    pub d: f64,
    pub d3: f64,
    pub d4: f64,
    /// Axial damping rate [rad/s].
    pub gamma: f64,
    /// Loss resistance [Ω], informational.
    pub r_loss: f64,
}

impl TrapConfig {
    pub fn validate(&self) -> Result<(), PenningError> {
        if !(self.omega_z > 0.0) {
            return Err(PenningError::InvalidConfig("axial frequency must be positive".into()));
        }
        if !(self.d > 0.0) {
            return Err(PenningError::InvalidConfig("trap size must be positive".into()));
        }
        if !(self.gamma >= 0.0) {
            return Err(PenningError::InvalidConfig("damping must be non-negative".into()));
        }
        for (name, v) in [("D3", self.d3), ("D4", self.d4)] {
            if v.abs() > 0.1 {
                return Err(PenningError::PerturbationInvalid { name, value: v });
            }
        }
        Ok(())
    }

    /// True when an anharmonic coefficient exceeds 10⁻², where the first-order
    /// treatment starts to lose accuracy.
    pub fn weakly_perturbative(&self) -> bool {
        self.d3.abs() > 1e-2 || self.d4.abs() > 1e-2
    }
}

/// Initial axial motion `A₀ sin(ω_z t + φ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectronState {
    /// Amplitude A₀ [m].
    pub a0: f64,
    pub phi0: f64,
}

impl ElectronState {
    /// State with momentum amplitude `ħk₀`, i.e. `A₀ = ħk₀/(mω_z)`.
    pub fn from_k0(k0: f64, phi0: f64, mass: f64, omega_z: f64) -> Self {
        ElectronState { a0: HBAR * k0 / (mass * omega_z), phi0 }
    }

    pub fn k0(&self, mass: f64, omega_z: f64) -> f64 {
        mass * omega_z * self.a0 / HBAR
    }
}

/// Interferometer arm: 1 and 3 are kicked up and down, 2 is unkicked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    One,
    Two,
    Three,
}

/// Pulse sequence with kicks at 0, T and 2T (and the recombining kick at 3T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenningInterferometer {
    pub omega_z: f64,
    pub t: f64,
    /// Kick amplitude `A = ħk/(mω_z)` [m].
    pub a: f64,
    pub state: ElectronState,
}

impl PenningInterferometer {
    pub fn new(state: ElectronState, trap: &TrapConfig, k: f64, mass: f64, t: f64) -> Self {
        PenningInterferometer { omega_z: trap.omega_z, t, a: HBAR * k / (mass * trap.omega_z), state }
    }

    fn kick_sum(&self, t: f64, deriv: bool) -> f64 {
        let w = self.omega_z;
        let f = |s: f64| if deriv { w * (w * s).cos() } else { (w * s).sin() };
        let mut acc = 0.0;
        if t > 0.0 {
            acc += f(t);
        }
        if t > self.t {
            acc -= f(t - self.t);
        }
        if t > 2.0 * self.t {
            acc += f(t - 2.0 * self.t);
        }
        acc
    }

    /// Position of `arm` at time `t ≥ 0`.
    pub fn z(&self, arm: Arm, t: f64) -> f64 {
        let base = self.state.a0 * (self.omega_z * t + self.state.phi0).sin();
        base + self.arm_sign(arm) * self.a * self.kick_sum(t, false)
    }

    /// Velocity of `arm` at time `t ≥ 0` (kicks at `t` not yet applied).
    pub fn zdot(&self, arm: Arm, t: f64) -> f64 {
        let w = self.omega_z;
        let base = self.state.a0 * w * (w * t + self.state.phi0).cos();
        base + self.arm_sign(arm) * self.a * self.kick_sum(t, true)
    }

    fn arm_sign(&self, arm: Arm) -> f64 {
        match arm {
            Arm::One => 1.0,
            Arm::Two => 0.0,
            Arm::Three => -1.0,
        }
    }

    /// Position and velocity mismatch of `arm` relative to arm 2 at `3T`
    /// (velocity after the recombining kick).
    pub fn closure_residual(&self, arm: Arm) -> (f64, f64) {
        let t3 = 3.0 * self.t;
        let recombine = -self.arm_sign(arm) * self.a * self.omega_z;
        (
            self.z(arm, t3) - self.z(Arm::Two, t3),
            self.zdot(arm, t3) + recombine - self.zdot(Arm::Two, t3),
        )
    }
}

fn check_timing(t: f64, delta_z: f64) -> Result<(), PenningError> {
    if !(t > 0.0) {
        return Err(PenningError::InvalidConfig("pulse separation must be positive".into()));
    }
    if (delta_z * t).abs() > 0.1 {
        return Err(PenningError::PerturbationInvalid { name: "delta_z*T", value: delta_z * t });
    }
    Ok(())
}

/// Phase of one interferometer (arms 1 and 2), expanded to first order in the
/// frequency error `δ_z`. Sign chosen so that `k₀ = δ_z = 0` gives `−(4/π)ω_r T`.
pub fn single_phase(omega_r: f64, t: f64, k0_over_k: f64, phi0: f64, delta_z: f64) -> Result<f64, PenningError> {
    check_timing(t, delta_z)?;
    let (c, s) = (phi0.cos(), phi0.sin());
    let a = 4.0 / PI * omega_r * t * (1.0 - k0_over_k * (c - s));
    let b = 4.0 / (PI * PI)
        * omega_r
        * delta_z
        * t
        * t
        * (2.0 * (PI - 1.0) + k0_over_k * (2.0 * (PI + 1.0) * c + (PI - 2.0) * s));
    Ok(-a - b)
}

/// Phase of arms 1 and 2 computed directly: the action difference of the two
/// arms plus the laser phase `Σ ±kz` at the four kicks. Dimensionless form with
/// `z = A u`, so that `L/ħ = (ω_r/ω_z²)(u̇² − ω_z²u²)` and `kA = 2ω_r/ω_z`.
pub fn single_phase_from_trajectories(omega_r: f64, omega_z: f64, t: f64, k0_over_k: f64, phi0: f64) -> f64 {
    let ifm = PenningInterferometer {
        omega_z,
        t,
        a: 1.0,
        state: ElectronState { a0: k0_over_k, phi0 },
    };
    let gl = GaussLegendre::new(24);
    let lagr = |arm: Arm, tt: f64| {
        let (u, ud) = (ifm.z(arm, tt), ifm.zdot(arm, tt));
        omega_r / (omega_z * omega_z) * (ud * ud - omega_z * omega_z * u * u)
    };
    let mut action = 0.0;
    for seg in 0..3 {
        let (a, b) = (seg as f64 * t, (seg + 1) as f64 * t);
        action += gl.integrate(|tt| lagr(Arm::One, tt) - lagr(Arm::Two, tt), a, b, 4);
    }
    let ka = 2.0 * omega_r / omega_z;
    let kicks = [(0.0, 1.0), (t, -1.0), (2.0 * t, 1.0), (3.0 * t, -1.0)];
    let laser: f64 = kicks.iter().map(|&(tk, sgn)| sgn * ka * ifm.z(Arm::One, tk)).sum();
    action + laser
}

/// Exact double-diffraction phase for `ω_z = π/(2T) + δ_z`.
pub fn double_diffraction_phase(omega_r: f64, t: f64, delta_z: f64) -> Result<f64, PenningError> {
    check_timing(t, delta_z)?;
    let wz = PI / (2.0 * t) + delta_z;
    let x = wz * t;
    let h = 0.5 * x;
    Ok(2.0 * omega_r / wz
        * h.sin()
        * (3.0 * h.cos() - (3.0 * h).cos() + 2.0 * (7.0 * h).cos() - (9.0 * h).cos() + (11.0 * h).cos()))
}

/// Second-order expansion of the double-diffraction phase in `δ_z`:
/// `(8/π)ω_rT + (16/π²)(π−1)ω_rT²δ_z + (4/π³)ω_rT³δ_z²(8−8π+7π²)`.
pub fn double_diffraction_expansion(omega_r: f64, t: f64, delta_z: f64) -> f64 {
    8.0 / PI * omega_r * t
        + 16.0 / (PI * PI) * (PI - 1.0) * omega_r * t * t * delta_z
        + 4.0 / PI.powi(3) * omega_r * t.powi(3) * delta_z * delta_z * (8.0 - 8.0 * PI + 7.0 * PI * PI)
}

/// Double-diffraction phase assembled from the two single interferometers with
/// opposite recoil; the second behaves like the first with `k₀ → −k₀`.
pub fn double_from_singles(omega_r: f64, t: f64, k0_over_k: f64, phi0: f64, delta_z: f64) -> Result<f64, PenningError> {
    let sum = single_phase(omega_r, t, k0_over_k, phi0, delta_z)? + single_phase(omega_r, t, -k0_over_k, phi0, delta_z)?;
    Ok(-sum)
}

/// First-order anharmonic phase shift of the double-diffraction interferometer.
pub fn anharmonic_shift(trap: &TrapConfig, omega_r: f64, t: f64, k: f64, k0: f64, phi0: f64) -> Result<f64, PenningError> {
    trap.validate()?;
    check_timing(t, trap.omega_z - PI / (2.0 * t))?;
    let d = trap.d;
    let q = (k0 / k).powi(2);
    let pref = 8.0 * omega_r * omega_r * t * t / (k * k * PI.powi(3) * d * d);
    let cubic = 4.0 * trap.d3 * k0 * PI * d * (phi0.cos() - phi0.sin());
    let quartic = trap.d4
        * omega_r
        * t
        * (9.0 * PI - 16.0 + 24.0 * q * (PI - 1.0) + 6.0 * q * PI * (2.0 * phi0).sin());
    Ok(pref * (cubic + quartic))
}

/// Upper limit on the electron temperature, or none when `D₄ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TemperatureLimit {
    Kelvin(f64),
    NoConstraint,
}

/// Closure gap `32√2 D₄v_r²v₀T³/(d²π³)·sin(φ₀−π/4)` [m] and the temperature at
/// which it equals the thermal de Broglie wavelength,
/// `T_e = h d² π^{5/2}/(64 D₄ v_r² T³ k_B)`.
pub fn closure_gap_and_temperature(trap: &TrapConfig, v_r: f64, v0: f64, t: f64, phi0: f64) -> (f64, TemperatureLimit) {
    let d2 = trap.d * trap.d;
    let gap = 32.0 * 2f64.sqrt() * trap.d4 * v_r * v_r * v0 * t.powi(3) / (d2 * PI.powi(3)) * (phi0 - PI / 4.0).sin();
    let limit = if trap.d4 == 0.0 {
        TemperatureLimit::NoConstraint
    } else {
        TemperatureLimit::Kelvin(H * d2 * PI.powf(2.5) / (64.0 * trap.d4.abs() * v_r * v_r * t.powi(3) * KB))
    };
    (gap, limit)
}

/// Gap at `3T` between arms 1 and 2 from the quartic force, by direct
/// Green's-function integration over the unperturbed trajectories (per unit mass).
pub fn closure_gap_green(trap: &TrapConfig, mass: f64, k: f64, k0: f64, phi0: f64) -> f64 {
    let t = PI / (2.0 * trap.omega_z);
    let state = ElectronState::from_k0(k0, phi0, mass, trap.omega_z);
    let ifm = PenningInterferometer::new(state, trap, k, mass, t);
    let w = trap.omega_z;
    let force = |z: f64| -2.0 * w * w * trap.d4 * z.powi(3) / (trap.d * trap.d);
    let gl = GaussLegendre::new(32);
    let t3 = 3.0 * t;
    let delta = |arm: Arm| {
        let mut s = 0.0;
        for seg in 0..3 {
            let (a, b) = (seg as f64 * t, (seg + 1) as f64 * t);
            s += gl.integrate(|tp| force(ifm.z(arm, tp)) * (w * (t3 - tp)).sin(), a, b, 8);
        }
        s / w
    };
    delta(Arm::One) - delta(Arm::Two)
}

/// Self-consistent damping-limited operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingOptimum {
    pub t: f64,
    pub omega_z: f64,
    pub phi_opt: f64,
}

/// Coherence time `τ = ω_z/(ω_rγ)` with `4T = τ` and `ω_z = π/(2T)` gives
/// `T = √(π/(8ω_rγ))`, `ω_z = √(2πω_rγ)` and `Φ = (8/π)ω_rT = (2/π)ω_z/γ`.
pub fn damping_optimum(omega_r: f64, gamma: f64) -> Result<DampingOptimum, PenningError> {
    if !(gamma > 0.0) || !(omega_r > 0.0) {
        return Err(PenningError::InvalidConfig("ω_r and γ must be positive".into()));
    }
    let t = (PI / (8.0 * omega_r * gamma)).sqrt();
    let omega_z = PI / (2.0 * t);
    Ok(DampingOptimum { t, omega_z, phi_opt: 8.0 / PI * omega_r * t })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargedRabi {
    /// Two-photon Rabi frequency of the charged particle [rad/s].
    pub omega: f64,
    /// Hydrogen two-photon Rabi frequency at the same intensity [rad/s].
    pub omega_hydrogen: f64,
    /// `Ω/Ω_H` computed from the two frequencies.
    pub ratio: f64,
    /// `(256/81)(λ/λ₀)²` with λ₀ the Lyman-α wavelength.
    pub ratio_closed_form: f64,
}

/// Lyman-α wavelength `16πa₀²m_e c/(3ħ)` [m].
pub fn lyman_alpha_wavelength() -> f64 {
    16.0 * PI * A0 * A0 * crate::constants::M_E * C / (3.0 * HBAR)
}

/// `Ω = q²I/(ħε₀cω_L²m)` and the hydrogen value `½α_H I/(ħε₀c)` with
/// `α_H = (9/2)4πε₀a₀³`.
pub fn charged_rabi(q: f64, intensity: f64, omega_l: f64, mass: f64) -> ChargedRabi {
    assert!(intensity > 0.0 && omega_l > 0.0 && mass > 0.0, "inputs must be positive");
    let omega = q * q * intensity / (HBAR * EPS0 * C * omega_l * omega_l * mass);
    let alpha_h = 4.5 * 4.0 * PI * EPS0 * A0.powi(3);
    let omega_hydrogen = 0.5 * alpha_h * intensity / (HBAR * EPS0 * C);
    let lambda = 2.0 * PI * C / omega_l;
    let ratio_closed_form = 256.0 / 81.0 * (lambda / lyman_alpha_wavelength()).powi(2);
    ChargedRabi { omega, omega_hydrogen, ratio: omega / omega_hydrogen, ratio_closed_form }
}

/// Numerical example of an electron interferometer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectronParameters {
    pub wavelength: f64,
    pub wavenumber_k: f64,
    pub omega_r: f64,
    pub recoil_temperature: f64,
    pub omega_z: f64,
    pub amplitude: f64,
    pub trap_size: f64,
    pub loss_resistance: f64,
    pub gamma: f64,
    pub t: f64,
    /// Phase as printed in the reference table [rad].
    pub phi0_printed: f64,
}

impl ElectronParameters {
    pub fn builtin() -> Self {
        toml::from_str(include_str!("../data/electron_parameters.toml")).expect("bundled electron table is valid")
    }

    /// `Φ₀ = 8ω_rT/π`.
    pub fn phi0(&self) -> f64 {
        8.0 * self.omega_r * self.t / PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trap() -> TrapConfig {
        TrapConfig { omega_z: 2.0 * PI * 1e4, d: 0.1, d3: 0.0, d4: 0.0, gamma: 1e-3, r_loss: 1e4 }
    }

    #[test]
    fn kick_amplitude_at_t() {
        let tr = trap();
        let t = PI / (2.0 * tr.omega_z);
        let ifm = PenningInterferometer::new(ElectronState { a0: 0.0, phi0: 0.0 }, &tr, 1.2e7, 9.1e-31, t);
        assert!((ifm.z(Arm::One, t) / ifm.a - 1.0).abs() < 1e-12);
        assert_eq!(ifm.z(Arm::Two, t), 0.0);
    }

    #[test]
    fn leading_phases() {
        assert!((single_phase(10.0, 0.5, 0.0, 0.3, 0.0).unwrap() + 20.0 / PI).abs() < 1e-12);
        let dd = double_diffraction_phase(10.0, 0.5, 0.0).unwrap();
        assert!((dd - 40.0 / PI).abs() < 1e-12);
        assert!(single_phase(1.0, 1.0, 0.0, 0.0, 0.2).is_err());
    }

    #[test]
    fn zero_anharmonicity() {
        let mut tr = trap();
        tr.omega_z = PI / (2.0 * 25e-6);
        assert_eq!(anharmonic_shift(&tr, 7.5e9, 25e-6, 1.2e7, 1e5, 0.2).unwrap(), 0.0);
        tr.d4 = 0.5;
        assert!(matches!(anharmonic_shift(&tr, 7.5e9, 25e-6, 1.2e7, 0.0, 0.0), Err(PenningError::PerturbationInvalid { .. })));
    }

    #[test]
    fn no_constraint_without_d4() {
        let (gap, lim) = closure_gap_and_temperature(&trap(), 1.4e3, 10.0, 25e-6, 0.0);
        assert_eq!(gap, 0.0);
        assert_eq!(lim, TemperatureLimit::NoConstraint);
    }

    #[test]
    fn damping_consistency() {
        let o = damping_optimum(2.0 * PI * 1.2e9, 2.0 * PI * 1e-6).unwrap();
        assert!((o.omega_z * o.t - PI / 2.0).abs() < 1e-12);
    }
}
