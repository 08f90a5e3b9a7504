//! Non-overlapping two-sample (Allan) deviation.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AllanError {
    #[error("tau = {tau} s leaves {bins} bins, need at least 3")]
    InsufficientData { tau: f64, bins: usize },
    #[error("tau = {tau} s is not a multiple of the sample interval {tau0} s")]
    NotMultiple { tau: f64, tau0: f64 },
    #[error("sample interval must be positive")]
    BadInterval,
}

/// Allan deviation of fractional-frequency samples `y` taken every `tau0`
/// seconds, at each averaging time in `taus`.
pub fn allan_deviation(y: &[f64], tau0: f64, taus: &[f64]) -> Result<Vec<(f64, f64)>, AllanError> {
    if !(tau0 > 0.0) {
        return Err(AllanError::BadInterval);
    }
    taus.iter()
        .map(|&tau| {
            let m = (tau / tau0).round();
            if m < 1.0 || (m * tau0 - tau).abs() > 1e-9 * tau {
                return Err(AllanError::NotMultiple { tau, tau0 });
            }
            let m = m as usize;
            let bins = y.len() / m;
            if bins < 3 {
                return Err(AllanError::InsufficientData { tau, bins });
            }
            let means: Vec<f64> = y.chunks_exact(m).map(|c| c.iter().sum::<f64>() / m as f64).collect();
            let sum: f64 = means.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
            Ok((tau, (0.5 * sum / (bins - 1) as f64).sqrt()))
        })
        .collect()
}

/// Averaging times `τ₀·m` for `m` = 1, 2, 4, … while at least `min_bins` bins remain.
pub fn octave_taus(n: usize, tau0: f64, min_bins: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = 1usize;
    while n / m >= min_bins.max(3) {
        out.push(m as f64 * tau0);
        m *= 2;
    }
    out
}

/// Least-squares slope of `log σ` against `log τ` for `τ` in `[lo, hi]`.
pub fn log_log_slope(points: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, s)| *t >= lo && *t <= hi && *s > 0.0)
        .map(|(t, s)| (t.ln(), s.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
