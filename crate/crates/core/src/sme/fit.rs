//! Weighted (generalized) linear least squares with rank diagnostics.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("design matrix is rank deficient (condition number {condition:e}); {} unconstrained direction(s)", null_space.len())]
    RankDeficient { condition: f64, null_space: Vec<Vec<f64>> },
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("uncertainties must be positive")]
    BadSigma,
    #[error("row length {got} does not match {expected} parameters")]
    RowLength { got: usize, expected: usize },
}

/// Condition-number threshold above which a fit is rejected.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub estimates: Vec<f64>,
    pub covariance: DMatrix<f64>,
    /// Condition number of the whitened design matrix.
    pub condition: f64,
    pub chi2: f64,
    pub dof: usize,
}

impl FitResult {
    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.estimates.len()).map(|i| self.covariance[(i, i)].sqrt()).collect()
    }

    pub fn correlation(&self) -> DMatrix<f64> {
        let s = self.std_errors();
        DMatrix::from_fn(s.len(), s.len(), |i, j| self.covariance[(i, j)] / (s[i] * s[j]))
    }
}

/// Minimize `Σ ((y − A x)/σ)²` by SVD of the whitened design matrix.
pub fn weighted_least_squares(a: &DMatrix<f64>, y: &[f64], sigma: &[f64]) -> Result<FitResult, FitError> {
    let (n, p) = a.shape();
    if n < p {
        return Err(FitError::TooFewObservations { needed: p, got: n });
    }
    if y.len() != n || sigma.len() != n {
        return Err(FitError::RowLength { got: y.len().min(sigma.len()), expected: n });
    }
    if sigma.iter().any(|s| !(*s > 0.0)) {
        return Err(FitError::BadSigma);
    }
    let aw = DMatrix::from_fn(n, p, |i, j| a[(i, j)] / sigma[i]);
    let yw = DVector::from_iterator(n, y.iter().zip(sigma).map(|(v, s)| v / s));
    let svd = aw.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    if !(condition <= MAX_CONDITION) {
        let null_space = (0..p)
            .filter(|&i| sv[i] * MAX_CONDITION < smax || sv[i] == 0.0)
            .map(|i| v_t.row(i).iter().copied().collect())
            .collect();
        return Err(FitError::RankDeficient { condition, null_space });
    }
    let u = svd.u.as_ref().expect("u requested");
    let uty = u.transpose() * &yw;
    let mut x = DVector::zeros(p);
    let mut cov = DMatrix::zeros(p, p);
    for k in 0..p {
        let vk = v_t.row(k).transpose();
        x += &vk * (uty[k] / sv[k]);
        cov += &vk * vk.transpose() / (sv[k] * sv[k]);
    }
    let resid = &yw - &aw * &x;
    Ok(FitResult {
        estimates: x.iter().copied().collect(),
        covariance: cov,
        condition,
        chi2: resid.norm_squared(),
        dof: n - p,
    })
}
