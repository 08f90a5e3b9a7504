//! Relativistic Compton-clock lock solver, the fine-structure-constant and
//! mass-standard formulas, and frequency-chain bookkeeping.

use crate::constants::{C, H};
use num_rational::Ratio;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClockError {
    #[error("invalid clock configuration: {0}")]
    InvalidConfig(String),
    #[error("frequency chain file: {0}")]
    Chain(String),
}

/// Bragg order `n`, rational divisor `N`, Compton frequency and pulse separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockConfig {
    pub bragg_order_n: u32,
    pub divisor_n: Ratio<i64>,
    /// Compton angular frequency ω_C [rad/s].
    pub omega_c: f64,
    /// Pulse separation T [s].
    pub t: f64,
}

impl ClockConfig {
    pub fn new(bragg_order_n: u32, divisor_n: Ratio<i64>, omega_c: f64, t: f64) -> Result<Self, ClockError> {
        if bragg_order_n < 1 {
            return Err(ClockError::InvalidConfig("Bragg order must be at least 1".into()));
        }
        if *divisor_n.numer() <= 0 || *divisor_n.denom() <= 0 {
            return Err(ClockError::InvalidConfig("divisor N must be positive".into()));
        }
        if !(omega_c > 0.0) {
            return Err(ClockError::InvalidConfig("Compton frequency must be positive".into()));
        }
        if !(t > 0.0) {
            return Err(ClockError::InvalidConfig("pulse separation T must be positive".into()));
        }
        Ok(ClockConfig { bragg_order_n, divisor_n, omega_c, t })
    }

    fn n_f64(&self) -> f64 {
        *self.divisor_n.numer() as f64 / *self.divisor_n.denom() as f64
    }

    /// Exact `ω_C/ω_m = 2nN²`.
    pub fn compton_to_modulation(&self) -> Ratio<i64> {
        Ratio::from_integer(2 * self.bragg_order_n as i64) * self.divisor_n * self.divisor_n
    }

    /// Exact `ω_L/ω_m = N`.
    pub fn laser_to_modulation(&self) -> Ratio<i64> {
        self.divisor_n
    }
}

/// Kinematics of one beam splitter seen from the symmetric frame and the lab frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterFrame {
    pub beta: f64,
    pub gamma: f64,
    pub beta_prime: f64,
    pub gamma_prime: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

/// Solve `βγ = nω_L/ω_C` for β and apply the Doppler shift to get `ω±`.
pub fn beamsplitter_frame(n: u32, omega_l: f64, omega_c: f64) -> BeamSplitterFrame {
    let x = n as f64 * omega_l / omega_c;
    let beta = x / (1.0 + x * x).sqrt();
    let b2 = beta * beta;
    BeamSplitterFrame {
        beta,
        gamma: (1.0 + x * x).sqrt(),
        beta_prime: 2.0 * beta / (1.0 + b2),
        gamma_prime: (1.0 + b2) / (1.0 - b2),
        omega_plus: omega_l * ((1.0 + beta) / (1.0 - beta)).sqrt(),
        omega_minus: omega_l * ((1.0 - beta) / (1.0 + beta)).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSolution {
    pub beta: f64,
    pub beta_prime: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub omega_l: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub omega_m: f64,
    pub phi_f: f64,
    pub phi_i: f64,
}

/// Locked operating point: `β = 1/√(1+4N²)`, `ω_L = ω_C/(2nN)`, `ω_m = ω_C/(2nN²)`.
pub fn solve_lock(cfg: &ClockConfig) -> ClockSolution {
    let n = cfg.bragg_order_n as f64;
    let big_n = cfg.n_f64();
    let beta = 1.0 / (1.0 + 4.0 * big_n * big_n).sqrt();
    let omega_l = cfg.omega_c / (2.0 * n * big_n);
    let omega_m = cfg.omega_c / (2.0 * n * big_n * big_n);
    let frame = beamsplitter_frame(cfg.bragg_order_n, omega_l, cfg.omega_c);
    let (phi_f, phi_i) = phases_at(cfg, beta, omega_l);
    ClockSolution {
        beta,
        beta_prime: frame.beta_prime,
        gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        gamma_prime: frame.gamma_prime,
        omega_l,
        omega_plus: frame.omega_plus,
        omega_minus: frame.omega_minus,
        omega_m,
        phi_f,
        phi_i,
    }
}

fn phases_at(cfg: &ClockConfig, beta: f64, omega_l: f64) -> (f64, f64) {
    let b2 = beta * beta;
    // 1/γ′ − 1 written without the cancellation of (1−β²)/(1+β²) − 1
    let phi_f = -4.0 * cfg.omega_c * cfg.t * b2 / (1.0 + b2);
    // laser phase summed at the emission times, propagation delay δ = β′T:
    // 2nω_L[r₋(δ+T) + r₊(δ−T)] with r± = √((1±β)/(1∓β)), regrouped as
    // 2nω_L[δ(r₊+r₋) − T(r₊−r₋)] where r₊+r₋ = 2γ and r₊−r₋ = 2βγ
    let gamma = 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt();
    let delta = 2.0 * beta / (1.0 + b2) * cfg.t;
    let n = cfg.bragg_order_n as f64;
    let phi_i = 2.0 * n * omega_l * (2.0 * gamma * delta - 2.0 * beta * gamma * cfg.t);
    (phi_f, phi_i)
}

/// Free-evolution and laser phases `(φ_F, φ_I)` of the locked interferometer.
pub fn clock_phases(cfg: &ClockConfig) -> (f64, f64) {
    let s = solve_lock(cfg);
    (s.phi_f, s.phi_i)
}

/// Closed form `4ω_C T β²/(1+β²)` of the laser phase.
pub fn laser_phase_closed_form(omega_c: f64, t: f64, beta: f64) -> f64 {
    4.0 * omega_c * t * beta * beta / (1.0 + beta * beta)
}

/// `α = √(2R∞c/ν_C · A_r(atom)/A_r(e))`, with ν_C in Hz.
pub fn alpha_from_compton(nu_c: f64, rinf: f64, ar_atom: f64, ar_e: f64) -> f64 {
    assert!(nu_c > 0.0 && rinf > 0.0 && ar_atom > 0.0 && ar_e > 0.0, "inputs must be positive");
    (2.0 * rinf * C / nu_c * ar_atom / ar_e).sqrt()
}

/// α and its standard uncertainty from the relative uncertainties of ν_C and A_r(atom).
pub fn alpha_with_uncertainty(nu_c: f64, sigma_nu: f64, rinf: f64, ar_atom: f64, sigma_ar: f64, ar_e: f64) -> (f64, f64) {
    let a = alpha_from_compton(nu_c, rinf, ar_atom, ar_e);
    let rel = 0.5 * ((sigma_nu / nu_c).powi(2) + (sigma_ar / ar_atom).powi(2)).sqrt();
    (a, a * rel)
}

/// Inverse of `alpha_from_compton`: the Compton frequency implied by α.
pub fn compton_from_alpha(alpha: f64, rinf: f64, ar_atom: f64, ar_e: f64) -> f64 {
    2.0 * rinf * C / (alpha * alpha) * ar_atom / ar_e
}

/// Mass `m = hν_C/c²` [kg] from the Compton frequency in Hz.
pub fn mass_from_compton(nu_c: f64) -> f64 {
    assert!(nu_c > 0.0, "Compton frequency must be positive");
    H * nu_c / (C * C)
}

#[derive(Debug, Clone, Deserialize)]
struct ChainFile {
    schema_version: u32,
    hyperfine: HyperfineChain,
    compton: ComptonChain,
}

/// Microwave chain of a conventional cesium clock: `ν_hfs = ν_ref(η₁η₂ + η₃)`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct HyperfineChain {
    pub nu_ref_hz: f64,
    pub eta1: i64,
    pub eta2: i64,
    pub eta3_numerator: i64,
    pub eta3_denominator: i64,
}

impl HyperfineChain {
    /// Total divisor `η = η₁η₂ + η₃`, exact.
    pub fn divisor(&self) -> Ratio<i64> {
        Ratio::from_integer(self.eta1 * self.eta2) + Ratio::new(self.eta3_numerator, self.eta3_denominator)
    }

    pub fn transition_frequency(&self) -> f64 {
        let d = self.divisor();
        self.nu_ref_hz * (*d.numer() as f64 / *d.denom() as f64)
    }
}

/// Optical chain of a Compton clock.
#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct ComptonChain {
    pub nu_ref_hz: f64,
    pub bragg_order: u32,
    pub comb_rep_multiplier: i64,
    pub comb_harmonic: i64,
    pub offsets: Vec<f64>,
    pub dds_numerator: u64,
    pub dds_bits: u32,
}

impl ComptonChain {
    /// Laser multiplier `N_c`: comb harmonic plus offsets, in units of ν_ref.
    pub fn laser_multiplier(&self) -> f64 {
        (self.comb_rep_multiplier * self.comb_harmonic) as f64 + self.offsets.iter().sum::<f64>()
    }

    /// DDS tuning word as a fraction of 2^bits.
    pub fn dds_ratio(&self) -> f64 {
        self.dds_numerator as f64 / 2f64.powi(self.dds_bits as i32)
    }

    /// Divisor between the Compton frequency and the reference, `4nN_c²/N_DDS`.
    pub fn compton_divisor(&self) -> f64 {
        let nc = self.laser_multiplier();
        4.0 * self.bragg_order as f64 * nc * nc / self.dds_ratio()
    }

    /// Reference frequency delivered when locked to Compton frequency `nu_c` [Hz].
    pub fn reference_from_compton(&self, nu_c: f64) -> f64 {
        nu_c / self.compton_divisor()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyChain {
    pub hyperfine: HyperfineChain,
    pub compton: ComptonChain,
}

impl FrequencyChain {
    pub fn builtin() -> Self {
        Self::from_toml_str(include_str!("../data/frequency_chain.toml")).expect("bundled chain file is valid")
    }

    pub fn from_toml_str(s: &str) -> Result<Self, ClockError> {
        let f: ChainFile = toml::from_str(s).map_err(|e| ClockError::Chain(e.to_string()))?;
        if f.schema_version != 1 {
            return Err(ClockError::Chain(format!("unsupported schema version {}", f.schema_version)));
        }
        Ok(FrequencyChain { hyperfine: f.hyperfine, compton: f.compton })
    }
}
