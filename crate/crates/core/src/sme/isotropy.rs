//! Sidereal and annual signal of a vertical gravimeter from gravity-sector and
//! photon-sector Lorentz violation, and the fit of the seven σ combinations.

use super::fit::{weighted_least_squares, FitError, FitResult};
use super::photon::{levi_civita, KappaTilde};
use nalgebra::{DMatrix, Matrix4, SMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Sidereal rotation rate of the Earth [rad/s].
pub const OMEGA_EARTH: f64 = 2.0 * PI / 86_164.0905;
/// Orbital angular frequency of the Earth [rad/s].
pub const OMEGA_ORBIT: f64 = 2.0 * PI / (365.25 * 86_400.0);

/// Names of the fitted combinations, in parameter order.
pub const SIGMA_NAMES: [&str; 7] = ["sigma_TX", "sigma_TY", "sigma_TZ", "sigma_XX-YY", "sigma_XY", "sigma_XZ", "sigma_YZ"];

/// Names of the Fourier components, in amplitude order (C then D for each frequency).
pub const COMPONENT_NAMES: [&str; 12] = [
    "C_2w", "D_2w", "C_w", "D_w", "C_2w+W", "D_2w+W", "C_2w-W", "D_2w-W", "C_w+W", "D_w+W", "C_w-W", "D_w-W",
];

/// Laboratory and orbit geometry. Time `t = 0` is the epoch at which the
/// sidereal phase `ω⊕t + φ` and the orbital phase `Ωt` are referenced;
/// `phi` carries the local sidereal phase at that epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabFrame {
    /// Geographic colatitude χ [rad].
    pub colatitude_chi: f64,
    /// Sidereal phase φ at `t = 0` [rad].
    pub phi: f64,
    /// Obliquity η of the ecliptic [rad].
    pub eta: f64,
    /// Orbital speed of the Earth in units of c.
    pub v_earth: f64,
    /// `i₄ = 1 − 3I⊕/(M⊕R⊕²)`.
    pub i4: f64,
    pub omega_earth: f64,
    pub omega_orbit: f64,
}

impl LabFrame {
    /// Earth-bound laboratory at colatitude `chi`, with η = 23.44°, V⊕ = 10⁻⁴, i₄ = −½.
    pub fn earth(chi: f64, phi: f64) -> Self {
        assert!((0.0..=PI).contains(&chi), "colatitude must lie in [0, π]");
        LabFrame {
            colatitude_chi: chi,
            phi,
            eta: 23.44_f64.to_radians(),
            v_earth: 1e-4,
            i4: -0.5,
            omega_earth: OMEGA_EARTH,
            omega_orbit: OMEGA_ORBIT,
        }
    }

    /// Angular frequencies and phase offsets of the six components.
    pub fn frequencies(&self) -> [(f64, f64); 6] {
        let (w, o, p) = (self.omega_earth, self.omega_orbit, self.phi);
        [(2.0 * w, 2.0 * p), (w, p), (2.0 * w + o, 2.0 * p), (2.0 * w - o, 2.0 * p), (w + o, p), (w - o, p)]
    }

    /// Matrix mapping the seven σ combinations to the twelve amplitudes.
    pub fn amplitude_matrix(&self) -> SMatrix<f64, 12, 7> {
        let s2 = self.colatitude_chi.sin().powi(2);
        let sin2chi = (2.0 * self.colatitude_chi).sin();
        let (ce, se) = (self.eta.cos(), self.eta.sin());
        let v = self.v_earth;
        let i4 = self.i4;
        let mut m = SMatrix::<f64, 12, 7>::zeros();
        let (tx, ty, tz, xxyy, xy, xz, yz) = (0, 1, 2, 3, 4, 5, 6);
        m[(0, xxyy)] = 0.25 * s2 * i4;
        m[(1, xy)] = 0.5 * s2 * i4;
        m[(2, xz)] = 0.5 * sin2chi * i4;
        m[(3, yz)] = 0.5 * sin2chi * i4;
        m[(4, ty)] = -0.25 * (ce - 1.0) * v * s2 * i4;
        m[(5, tx)] = 0.25 * (ce - 1.0) * v * s2 * i4;
        m[(6, ty)] = -0.25 * (ce + 1.0) * v * s2 * i4;
        m[(7, tx)] = 0.25 * (ce + 1.0) * v * s2 * i4;
        m[(8, tx)] = 0.25 * v * se * s2 * i4;
        m[(9, tz)] = 0.25 * v * s2 * (1.0 - ce) * i4;
        m[(9, ty)] = -0.25 * v * s2 * se * i4;
        m[(10, tx)] = 0.25 * v * se * s2 * i4;
        m[(11, tz)] = 0.25 * v * s2 * (1.0 + ce) * i4;
        m[(11, ty)] = 0.25 * v * s2 * se * i4;
        m
    }

    /// `cos` and `sin` basis functions of the six components at time `t`.
    pub fn basis(&self, t: f64) -> [f64; 12] {
        let mut b = [0.0; 12];
        for (i, (w, p)) in self.frequencies().iter().enumerate() {
            let arg = w * t + p;
            b[2 * i] = arg.cos();
            b[2 * i + 1] = arg.sin();
        }
        b
    }
}

/// Gravity-sector `s̄^{μν}` (Sun-centered frame, index 0 = T) and photon κ̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmeCoefficients {
    pub s_bar: Matrix4<f64>,
    pub kappa: KappaTilde,
}

impl SmeCoefficients {
    pub fn zero() -> Self {
        SmeCoefficients { s_bar: Matrix4::zeros(), kappa: KappaTilde::zero() }
    }

    /// The seven combinations `σ^{TJ}`, `σ^{XX}−σ^{YY}`, `σ^{XY}`, `σ^{XZ}`, `σ^{YZ}`
    /// defined by `i₄σ^{JK} = i₄s̄^{JK} − κ̃_{e−}^{JK}` and
    /// `i₄σ^{TJ} = i₄s̄^{TJ} + ½ε_{JKL}κ̃_{o+}^{KL}`.
    pub fn sigma_params(&self, i4: f64) -> [f64; 7] {
        let s = &self.s_bar;
        let ke = &self.kappa.e_minus;
        let ko = &self.kappa.o_plus;
        let sjk = |j: usize, k: usize| (i4 * s[(j + 1, k + 1)] - ke[(j, k)]) / i4;
        let stj = |j: usize| {
            let mut e = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    e += 0.5 * levi_civita(j, k, l) * ko[(k, l)];
                }
            }
            (i4 * s[(0, j + 1)] + e) / i4
        };
        [stj(0), stj(1), stj(2), sjk(0, 0) - sjk(1, 1), sjk(0, 1), sjk(0, 2), sjk(1, 2)]
    }
}

/// Fourier amplitudes `(C_m, D_m)` for σ parameters `sigma`.
pub fn amplitudes(sigma: &[f64; 7], frame: &LabFrame) -> [f64; 12] {
    let m = frame.amplitude_matrix();
    let v = m * SMatrix::<f64, 7, 1>::from_column_slice(sigma);
    let mut out = [0.0; 12];
    out.copy_from_slice(v.as_slice());
    out
}

/// `δφ/φ₀` from σ parameters at each time.
pub fn signal_from_sigma(sigma: &[f64; 7], frame: &LabFrame, times: &[f64]) -> Vec<f64> {
    let a = amplitudes(sigma, frame);
    times.iter().map(|&t| frame.basis(t).iter().zip(&a).map(|(b, c)| b * c).sum()).collect()
}

/// `δφ/φ₀ = Σ C_m cos(ω_m t + φ_m) + D_m sin(ω_m t + φ_m)` at each time.
pub fn isotropy_signal(coeffs: &SmeCoefficients, frame: &LabFrame, times: &[f64]) -> Vec<f64> {
    signal_from_sigma(&coeffs.sigma_params(frame.i4), frame, times)
}

/// One observation: time [s], value, 1σ uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub value: f64,
    pub sigma: f64,
}

fn check_samples(samples: &[Sample], params: usize) -> Result<(), FitError> {
    if samples.len() < 2 * params {
        return Err(FitError::TooFewObservations { needed: 2 * params, got: samples.len() });
    }
    Ok(())
}

/// Weighted least-squares estimate of the seven σ combinations.
pub fn fit_isotropy(samples: &[Sample], frame: &LabFrame) -> Result<FitResult, FitError> {
    check_samples(samples, 7)?;
    let m = frame.amplitude_matrix();
    let a = DMatrix::from_fn(samples.len(), 7, |i, j| {
        let b = frame.basis(samples[i].t);
        (0..12).map(|r| b[r] * m[(r, j)]).sum()
    });
    let y: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let sig: Vec<f64> = samples.iter().map(|s| s.sigma).collect();
    weighted_least_squares(&a, &y, &sig)
}

/// Weighted least-squares estimate of the twelve Fourier amplitudes.
pub fn fit_fourier_components(samples: &[Sample], frame: &LabFrame) -> Result<FitResult, FitError> {
    check_samples(samples, 12)?;
    let a = DMatrix::from_fn(samples.len(), 12, |i, j| frame.basis(samples[i].t)[j]);
    let y: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let sig: Vec<f64> = samples.iter().map(|s| s.sigma).collect();
    weighted_least_squares(&a, &y, &sig)
}

/// Sample times on the windows `(start, duration)` with spacing `cadence` [s].
pub fn fragmented_times(windows: &[(f64, f64)], cadence: f64) -> Vec<f64> {
    assert!(cadence > 0.0, "cadence must be positive");
    let mut out = Vec::new();
    for &(start, len) in windows {
        let n = (len / cadence).floor() as usize;
        out.extend((0..n).map(|i| start + i as f64 * cadence));
    }
    out
}

/// Mean and standard deviation of fit pulls `(estimate − truth)/σ_estimate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullStatistics {
    pub mean: f64,
    pub width: f64,
    pub count: usize,
}

/// Inject Gaussian noise of width `noise` into the signal of `truth` on `times`
/// and fit, `trials` times, with per-trial seeds derived from `seed`.
pub fn pull_statistics(
    truth: &[f64; 7],
    frame: &LabFrame,
    times: &[f64],
    noise: f64,
    trials: usize,
    seed: u64,
) -> Result<PullStatistics, FitError> {
    let clean = signal_from_sigma(truth, frame, times);
    let normal = Normal::new(0.0, noise).map_err(|_| FitError::BadSigma)?;
    let mut pulls = Vec::with_capacity(trials * 7);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let samples: Vec<Sample> = times
            .iter()
            .zip(&clean)
            .map(|(&t, &v)| Sample { t, value: v + normal.sample(&mut rng), sigma: noise })
            .collect();
        let fit = fit_isotropy(&samples, frame)?;
        let se = fit.std_errors();
        pulls.extend((0..7).map(|i| (fit.estimates[i] - truth[i]) / se[i]));
    }
    let n = pulls.len() as f64;
    let mean = pulls.iter().sum::<f64>() / n;
    let width = (pulls.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    Ok(PullStatistics { mean, width, count: pulls.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_zero_signal() {
        let f = LabFrame::earth(0.8, 0.3);
        let s = isotropy_signal(&SmeCoefficients::zero(), &f, &[0.0, 1e4, 3e7]);
        assert!(s.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn xy_only_is_pure_2w_sine() {
        let f = LabFrame::earth(0.8, 0.0);
        let mut c = SmeCoefficients::zero();
        c.s_bar[(1, 2)] = 1e-9;
        c.s_bar[(2, 1)] = 1e-9;
        let a = amplitudes(&c.sigma_params(f.i4), &f);
        let expected = 0.5 * 0.8f64.sin().powi(2) * f.i4 * 1e-9;
        assert!((a[1] - expected).abs() < 1e-24);
        assert!(a.iter().enumerate().all(|(i, v)| i == 1 || *v == 0.0));
    }

    #[test]
    fn degenerate_combination_cancels() {
        let f = LabFrame::earth(0.8, 0.0);
        let mut c = SmeCoefficients::zero();
        c.s_bar[(1, 2)] = 2e-9;
        c.s_bar[(2, 1)] = 2e-9;
        c.kappa.e_minus[(0, 1)] = f.i4 * 2e-9;
        c.kappa.e_minus[(1, 0)] = f.i4 * 2e-9;
        let a = amplitudes(&c.sigma_params(f.i4), &f);
        assert!(a[1].abs() < 1e-25);
    }
}
