//! Bragg diffraction on a truncated momentum ladder and the multiphoton
//! effective Rabi frequency.

use crate::constants::HBAR;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BraggError {
    #[error("invalid Bragg pulse: {0}")]
    InvalidPulse(String),
    #[error("initial state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("amplitude vector has length {got}, ladder needs {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("population {0:e} within two orders of the ladder boundary")]
    TruncationLeak(f64),
}

/// Gaussian Bragg pulse `Ω(t) = Ω_peak exp(−t²/2σ²)` with optional frequency chirp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraggPulse {
    /// Peak two-photon Rabi frequency [rad/s].
    pub two_photon_rabi_peak: f64,
    /// Gaussian time constant σ [s].
    pub envelope_sigma: f64,
    /// Chirp of the two-photon detuning [rad/s²].
    pub detuning_ramp: f64,
    /// Ladder runs over orders `−n_max ..= n_max`.
    pub order_truncation: usize,
    /// Single-beam wavenumber k [1/m]; adjacent orders differ by `2ħk`.
    pub effective_wavenumber: f64,
}

impl BraggPulse {
    pub fn new(
        two_photon_rabi_peak: f64,
        envelope_sigma: f64,
        detuning_ramp: f64,
        order_truncation: usize,
        effective_wavenumber: f64,
    ) -> Result<Self, BraggError> {
        if !(envelope_sigma > 0.0) {
            return Err(BraggError::InvalidPulse("envelope sigma must be positive".into()));
        }
        if order_truncation < 3 {
            return Err(BraggError::InvalidPulse("ladder needs at least orders −3..3".into()));
        }
        if !(effective_wavenumber > 0.0) {
            return Err(BraggError::InvalidPulse("wavenumber must be positive".into()));
        }
        Ok(BraggPulse {
            two_photon_rabi_peak,
            envelope_sigma,
            detuning_ramp,
            order_truncation,
            effective_wavenumber,
        })
    }

    /// Peak Rabi frequency that gives pulse area `area` (π for a mirror).
    pub fn peak_for_area(area: f64, sigma: f64) -> f64 {
        area / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    }

    /// `∫ Ω(t) dt`.
    pub fn area(&self) -> f64 {
        self.two_photon_rabi_peak * self.envelope_sigma * (2.0 * std::f64::consts::PI).sqrt()
    }

    pub fn rabi(&self, t: f64) -> f64 {
        let s = self.envelope_sigma;
        self.two_photon_rabi_peak * (-t * t / (2.0 * s * s)).exp()
    }

    pub fn ladder_size(&self) -> usize {
        2 * self.order_truncation + 1
    }
}

/// Number of time steps per envelope σ.
const STEPS_PER_SIGMA: usize = 200;
/// Integration window in units of σ on each side.
const WINDOW_SIGMAS: f64 = 6.0;

/// Evolve ladder amplitudes `c_n` (index `n + n_max`) through the pulse.
///
/// The Hamiltonian (in rad/s) has diagonal `(2nħk + mv)²/2mħ − n δ(t)` with
/// `δ(t) = detuning_ramp · t`, and couplings `Ω(t)/2` between adjacent orders.
/// Each step applies the exact exponential of the midpoint Hamiltonian.
pub fn bragg_pulse_evolve(
    initial: &[Complex64],
    pulse: &BraggPulse,
    mass: f64,
    atom_velocity: f64,
) -> Result<Vec<Complex64>, BraggError> {
    let size = pulse.ladder_size();
    if initial.len() != size {
        return Err(BraggError::WrongLength { got: initial.len(), expected: size });
    }
    let norm: f64 = initial.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(BraggError::NotNormalized(norm));
    }
    let nmax = pulse.order_truncation as i64;
    let hk = HBAR * pulse.effective_wavenumber;
    let kinetic: Vec<f64> = (-nmax..=nmax)
        .map(|n| {
            let p = 2.0 * n as f64 * hk + mass * atom_velocity;
            p * p / (2.0 * mass * HBAR)
        })
        .collect();

    let mut psi = initial.to_vec();
    if pulse.two_photon_rabi_peak == 0.0 && pulse.detuning_ramp == 0.0 {
        // no coupling: only the kinetic phase over the window
        let duration = 2.0 * WINDOW_SIGMAS * pulse.envelope_sigma;
        for (c, w) in psi.iter_mut().zip(&kinetic) {
            *c *= Complex64::from_polar(1.0, -w * duration);
        }
        return Ok(psi);
    }

    let t0 = -WINDOW_SIGMAS * pulse.envelope_sigma;
    let steps = (2.0 * WINDOW_SIGMAS) as usize * STEPS_PER_SIGMA;
    let dt = 2.0 * WINDOW_SIGMAS * pulse.envelope_sigma / steps as f64;
    let mut h = DMatrix::<f64>::zeros(size, size);
    let mut tmp = vec![Complex64::new(0.0, 0.0); size];
    for s in 0..steps {
        let t = t0 + (s as f64 + 0.5) * dt;
        let half_rabi = 0.5 * pulse.rabi(t);
        let delta = pulse.detuning_ramp * t;
        h.fill(0.0);
        for i in 0..size {
            let n = i as f64 - nmax as f64;
            h[(i, i)] = kinetic[i] - n * delta;
            if i + 1 < size {
                h[(i, i + 1)] = half_rabi;
                h[(i + 1, i)] = half_rabi;
            }
        }
        let eig = SymmetricEigen::new(h.clone());
        let v = &eig.eigenvectors;
        // tmp = Vᵀ ψ, scaled by e^{−iλ dt}; ψ = V tmp
        for (a, slot) in tmp.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, c) in psi.iter().enumerate() {
                acc += c * v[(i, a)];
            }
            *slot = acc * Complex64::from_polar(1.0, -eig.eigenvalues[a] * dt);
        }
        for (i, c) in psi.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, w) in tmp.iter().enumerate() {
                acc += w * v[(i, a)];
            }
            *c = acc;
        }
    }

    let leak: f64 = [0, 1, size - 2, size - 1].iter().map(|&i| psi[i].norm_sqr()).sum();
    if leak > 1e-4 {
        return Err(BraggError::TruncationLeak(leak));
    }
    Ok(psi)
}

/// Ladder state with all population in order `n`.
pub fn ladder_basis_state(order_truncation: usize, n: i64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * order_truncation + 1];
    v[(n + order_truncation as i64) as usize] = Complex64::new(1.0, 0.0);
    v
}

/// Population of order `n`.
pub fn population(amplitudes: &[Complex64], order_truncation: usize, n: i64) -> f64 {
    amplitudes[(n + order_truncation as i64) as usize].norm_sqr()
}

/// Effective Rabi frequency of an order-`n` Bragg transition,
/// `Ω^n / [(8ω_r)^{n−1} ((n−1)!)²]`, evaluated in log space.
pub fn effective_rabi(two_photon_rabi: f64, order_n: u32, omega_r: f64) -> f64 {
    assert!(order_n >= 1, "Bragg order must be at least 1");
    if order_n == 1 {
        return two_photon_rabi;
    }
    let n = order_n as f64;
    let ln_fact: f64 = (1..order_n).map(|i| (i as f64).ln()).sum();
    let sign = if two_photon_rabi < 0.0 && order_n % 2 == 1 { -1.0 } else { 1.0 };
    let ln = n * two_photon_rabi.abs().ln() - (n - 1.0) * (8.0 * omega_r).ln() - 2.0 * ln_fact;
    sign * ln.exp()
}
