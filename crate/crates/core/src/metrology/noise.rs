//! Vibration sensitivity function and the rms phase from an acceleration-noise model.

use crate::numeric::GaussLegendre;
use serde::Deserialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("noise model does not cover {lo} Hz .. {hi} Hz")]
    CoverageGap { lo: f64, hi: f64 },
    #[error("invalid noise model: {0}")]
    InvalidModel(String),
    #[error("unknown noise model '{0}'")]
    UnknownModel(String),
    #[error("noise model file: {0}")]
    Parse(String),
}

/// Sensitivity to mirror displacement of the symmetric pulse sequence with
/// pulses at `t₀, t₁, −t₁, −t₀`: `F(ω) = 4 sin(ω(t₀+t₁)/2) sin(ω(t₀−t₁)/2)`.
pub fn sensitivity_function(t0: f64, t1: f64, omega: f64) -> f64 {
    4.0 * (0.5 * omega * (t0 + t1)).sin() * (0.5 * omega * (t0 - t1)).sin()
}

/// Mach-Zehnder special case `4 sin²(ωT/2)`.
pub fn sensitivity_mach_zehnder(t: f64, omega: f64) -> f64 {
    4.0 * (0.5 * omega * t).sin().powi(2)
}

/// One band of a piecewise power law, `a(f) = a0 (f/f_lo)^slope` on `[f_lo, f_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct NoiseBand {
    pub f_lo: f64,
    pub f_hi: f64,
    /// Acceleration amplitude spectral density at `f_lo` [m s⁻²/√Hz].
    pub a0: f64,
    pub slope: f64,
}

impl NoiseBand {
    pub fn amplitude(&self, f: f64) -> f64 {
        self.a0 * (f / self.f_lo).powf(self.slope)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct NoiseModel {
    pub name: String,
    pub bands: Vec<NoiseBand>,
}

#[derive(Deserialize)]
struct NoiseFile {
    schema_version: u32,
    model: Vec<NoiseModel>,
}

impl NoiseModel {
    pub fn new(name: impl Into<String>, mut bands: Vec<NoiseBand>) -> Result<Self, NoiseError> {
        if bands.is_empty() {
            return Err(NoiseError::InvalidModel("no bands".into()));
        }
        bands.sort_by(|a, b| a.f_lo.total_cmp(&b.f_lo));
        for b in &bands {
            if !(b.f_lo > 0.0 && b.f_hi > b.f_lo) {
                return Err(NoiseError::InvalidModel(format!("bad band {} .. {} Hz", b.f_lo, b.f_hi)));
            }
            if !(b.a0 >= 0.0) {
                return Err(NoiseError::InvalidModel("negative amplitude".into()));
            }
        }
        for w in bands.windows(2) {
            if w[1].f_lo < w[0].f_hi * (1.0 - 1e-12) {
                return Err(NoiseError::InvalidModel("overlapping bands".into()));
            }
        }
        Ok(NoiseModel { name: name.into(), bands })
    }

    /// Single band with constant amplitude.
    pub fn flat(a0: f64, f_lo: f64, f_hi: f64) -> Result<Self, NoiseError> {
        Self::new("custom", vec![NoiseBand { f_lo, f_hi, a0, slope: 0.0 }])
    }

    /// All models of a TOML file.
    pub fn load_all(s: &str) -> Result<Vec<Self>, NoiseError> {
        let f: NoiseFile = toml::from_str(s).map_err(|e| NoiseError::Parse(e.to_string()))?;
        if f.schema_version != 1 {
            return Err(NoiseError::Parse(format!("unsupported schema version {}", f.schema_version)));
        }
        f.model.into_iter().map(|m| Self::new(m.name, m.bands)).collect()
    }

    /// One of the bundled models: `high`, `low` or `very-low`.
    pub fn builtin(name: &str) -> Result<Self, NoiseError> {
        Self::load_all(include_str!("../../data/noise_models.toml"))?
            .into_iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| NoiseError::UnknownModel(name.into()))
    }

    /// Amplitude at `f`, or `None` outside every band.
    pub fn amplitude(&self, f: f64) -> Option<f64> {
        self.bands.iter().find(|b| f >= b.f_lo && f <= b.f_hi).map(|b| b.amplitude(f))
    }

    /// Frequency range covered without gaps.
    pub fn check_coverage(&self, lo: f64, hi: f64) -> Result<(), NoiseError> {
        let mut reach = lo;
        for b in &self.bands {
            if b.f_hi <= reach {
                continue;
            }
            if b.f_lo > reach * (1.0 + 1e-12) {
                return Err(NoiseError::CoverageGap { lo: reach, hi: b.f_lo.min(hi) });
            }
            reach = b.f_hi;
            if reach >= hi {
                return Ok(());
            }
        }
        Err(NoiseError::CoverageGap { lo: reach, hi })
    }

    /// Multiply every band amplitude by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut m = self.clone();
        for b in &mut m.bands {
            b.a0 *= factor;
        }
        m
    }
}

/// Relative tolerance of the panel-doubling quadrature.
const QUAD_RTOL: f64 = 1e-8;

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, min_panels: usize) -> f64 {
    let gl = GaussLegendre::new(16);
    let mut panels = min_panels.max(1);
    let mut prev = gl.integrate(f, a, b, panels);
    for _ in 0..12 {
        panels *= 2;
        let cur = gl.integrate(f, a, b, panels);
        if (cur - prev).abs() <= QUAD_RTOL * cur.abs().max(f64::MIN_POSITIVE) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Rms phase `k_eff [∫ (a(f) F(2πf) / (2πf)²)² df]^{1/2}` over `f_range` [Hz],
/// with `a(f)` an amplitude spectral density per √Hz.
pub fn vibration_phase_noise(
    model: &NoiseModel,
    t0: f64,
    t1: f64,
    k_eff: f64,
    f_range: (f64, f64),
) -> Result<f64, NoiseError> {
    let (lo, hi) = f_range;
    if !(lo > 0.0 && hi > lo) {
        return Err(NoiseError::InvalidModel("frequency range must be positive and increasing".into()));
    }
    model.check_coverage(lo, hi)?;
    // panels of at most a tenth of the fastest oscillation period of F²
    let period = 1.0 / (t0.abs() + t1.abs()).max(1e-12);
    let mut total = 0.0;
    for band in &model.bands {
        let (a, b) = (band.f_lo.max(lo), band.f_hi.min(hi));
        if b <= a || band.a0 == 0.0 {
            continue;
        }
        let integrand = |f: f64| {
            let w = 2.0 * PI * f;
            let x = band.amplitude(f) * sensitivity_function(t0, t1, w) / (w * w);
            x * x
        };
        let panels = ((b - a) / (0.1 * period)).ceil() as usize;
        total += adaptive(&integrand, a, b, panels.clamp(4, 2_000_000));
    }
    Ok(k_eff * total.sqrt())
}

/// Closed form of `∫ F(2πf)² df` on `[a, b]`, for use with a band whose
/// amplitude grows as `f²` so that `a(f)/ω²` is constant.
pub fn sensitivity_squared_integral(t0: f64, t1: f64, a: f64, b: f64) -> f64 {
    // F² = 4[1 + ½cos 2ωt₁ + ½cos 2ωt₀ − cos ω(t₀+t₁) − cos ω(t₀−t₁)]
    let anti = |f: f64| {
        let w = 2.0 * PI;
        let s = |c: f64| if c == 0.0 { f } else { (w * c * f).sin() / (w * c) };
        4.0 * (f + 0.5 * s(2.0 * t1) + 0.5 * s(2.0 * t0) - s(t0 + t1) - s(t0 - t1))
    };
    anti(b) - anti(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_dc() {
        assert_eq!(sensitivity_function(-0.6, -0.7, 0.0), 0.0);
    }

    #[test]
    fn coverage_gap_detected() {
        let m = NoiseModel::new(
            "gappy",
            vec![
                NoiseBand { f_lo: 0.1, f_hi: 1.0, a0: 1.0, slope: 0.0 },
                NoiseBand { f_lo: 2.0, f_hi: 10.0, a0: 1.0, slope: 0.0 },
            ],
        )
        .unwrap();
        assert!(matches!(m.check_coverage(0.1, 10.0), Err(NoiseError::CoverageGap { .. })));
        assert!(m.check_coverage(2.0, 5.0).is_ok());
    }

    #[test]
    fn builtin_models_load() {
        for name in ["high", "low", "very-low"] {
            let m = NoiseModel::builtin(name).unwrap();
            assert!(m.check_coverage(0.01, 1000.0).is_ok());
        }
        assert!(NoiseModel::builtin("nope").is_err());
    }

    #[test]
    fn zero_noise_zero_phase() {
        let m = NoiseModel::flat(0.0, 0.01, 100.0).unwrap();
        assert_eq!(vibration_phase_noise(&m, -0.6, -0.7, 2e8, (0.01, 100.0)).unwrap(), 0.0);
    }
}
