//! Dirac matrices in flat space and their curved-space generalization built
//! from a dreibein of the effective spatial metric.

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type CMat4 = Matrix4<Complex64>;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("inverse metric is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("g^00 must be negative, got {0}")]
    WrongSignature(f64),
    #[error("effective spatial metric is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
}

/// Inverse metric `g^{μν}` at one point, signature (−,+,+,+).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    g_inv: [[f64; 4]; 4],
}

impl MetricSample {
    pub fn new(g_inv: [[f64; 4]; 4]) -> Result<Self, MetricError> {
        let mut asym: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                asym = asym.max((g_inv[i][j] - g_inv[j][i]).abs());
                scale = scale.max(g_inv[i][j].abs());
            }
        }
        if asym > 1e-14 * scale.max(1.0) {
            return Err(MetricError::NotSymmetric(asym));
        }
        if !(g_inv[0][0] < 0.0) {
            return Err(MetricError::WrongSignature(g_inv[0][0]));
        }
        Ok(MetricSample { g_inv })
    }

    /// Minkowski `η^{μν} = diag(−1, 1, 1, 1)`.
    pub fn minkowski() -> Self {
        let mut g = [[0.0; 4]; 4];
        g[0][0] = -1.0;
        for (j, row) in g.iter_mut().enumerate().skip(1) {
            row[j] = 1.0;
        }
        MetricSample { g_inv: g }
    }

    /// Weak static field: `g^{00} = −(1 − h00)`, spatial block flat.
    pub fn weak_field(h00: f64) -> Result<Self, MetricError> {
        let mut g = Self::minkowski().g_inv;
        g[0][0] = -(1.0 - h00);
        Self::new(g)
    }

    pub fn g_inv(&self) -> &[[f64; 4]; 4] {
        &self.g_inv
    }

    /// `ḡ^{μν} = g^{μν} / (−g^{00})`.
    pub fn g_bar(&self) -> [[f64; 4]; 4] {
        let s = -self.g_inv[0][0];
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.g_inv[i][j] / s;
            }
        }
        out
    }

    /// Effective spatial metric `ḡ^{0j} ḡ^{0k} + ḡ^{jk}`.
    pub fn spatial_metric(&self) -> Matrix3<f64> {
        let gb = self.g_bar();
        Matrix3::from_fn(|j, k| gb[0][j + 1] * gb[0][k + 1] + gb[j + 1][k + 1])
    }
}

/// Dirac matrices, with the curved-space quantities when built from a metric.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracOperatorSet {
    pub alpha: [CMat4; 3],
    pub beta: CMat4,
    pub alpha_bar: [CMat4; 3],
    pub g0j_bar: [f64; 3],
    pub m_bar_over_m: f64,
    /// Dreibein `d^j_a`, row `j`, column `a`.
    pub dreibein: Matrix3<f64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        [[z, one], [one, z]],
        [[z, -i], [i, z]],
        [[one, z], [z, -one]],
    ]
}

/// Standard (Dirac) representation: `β = diag(1, 1, −1, −1)` and
/// `α^a` off-diagonal Pauli blocks.
pub fn dirac_flat() -> DiracOperatorSet {
    let sig = pauli();
    let mut alpha = [CMat4::zeros(); 3];
    for (a, al) in alpha.iter_mut().enumerate() {
        for r in 0..2 {
            for s in 0..2 {
                al[(r, s + 2)] = sig[a][r][s];
                al[(r + 2, s)] = sig[a][r][s];
            }
        }
    }
    let beta = CMat4::from_diagonal(&nalgebra::Vector4::new(
        c(1.0, 0.0),
        c(1.0, 0.0),
        c(-1.0, 0.0),
        c(-1.0, 0.0),
    ));
    DiracOperatorSet {
        alpha,
        beta,
        alpha_bar: alpha,
        g0j_bar: [0.0; 3],
        m_bar_over_m: 1.0,
        dreibein: Matrix3::identity(),
    }
}

/// Curved-space Dirac matrices `ᾱ^j = d^j_a α^a`, where the dreibein is the
/// principal square root of `ḡ^{0j} ḡ^{0k} + ḡ^{jk}`, and `m̄ = m / √(−g^{00})`.
pub fn dirac_curved(metric: &MetricSample) -> Result<DiracOperatorSet, MetricError> {
    let spatial = metric.spatial_metric();
    let eig = SymmetricEigen::new(spatial);
    let min_ev = eig.eigenvalues.min();
    let max_ev = eig.eigenvalues.max();
    if !(min_ev > 1e-14 * max_ev.abs().max(1.0)) {
        return Err(MetricError::NotPositiveDefinite(min_ev));
    }
    let sqrt_ev = eig.eigenvalues.map(f64::sqrt);
    let d = eig.eigenvectors * Matrix3::from_diagonal(&sqrt_ev) * eig.eigenvectors.transpose();
    let d = 0.5 * (d + d.transpose());

    let flat = dirac_flat();
    let mut alpha_bar = [CMat4::zeros(); 3];
    for (j, ab) in alpha_bar.iter_mut().enumerate() {
        for a in 0..3 {
            *ab += flat.alpha[a] * c(d[(j, a)], 0.0);
        }
    }
    let gb = metric.g_bar();
    Ok(DiracOperatorSet {
        alpha: flat.alpha,
        beta: flat.beta,
        alpha_bar,
        g0j_bar: [gb[0][1], gb[0][2], gb[0][3]],
        m_bar_over_m: 1.0 / (-metric.g_inv[0][0]).sqrt(),
        dreibein: d,
    })
}

/// `AB + BA`.
pub fn anticommutator(a: &CMat4, b: &CMat4) -> CMat4 {
    a * b + b * a
}

/// Max-norm of a complex matrix.
pub fn max_abs(m: &CMat4) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest residual among the flat-space relations `{α^a, α^b} = 2δ^{ab}`,
/// `{α^a, β} = 0`, `β² = 1`.
pub fn flat_residual(set: &DiracOperatorSet) -> f64 {
    let id = CMat4::identity();
    let mut r: f64 = max_abs(&(set.beta * set.beta - id));
    for a in 0..3 {
        r = r.max(max_abs(&anticommutator(&set.alpha[a], &set.beta)));
        for b in 0..3 {
            let target = if a == b { id * c(2.0, 0.0) } else { CMat4::zeros() };
            r = r.max(max_abs(&(anticommutator(&set.alpha[a], &set.alpha[b]) - target)));
        }
    }
    r
}

/// Largest residual among `{ᾱ^j, ᾱ^k} = 2(ḡ^{jk} + ḡ^{0j} ḡ^{0k})` and `{ᾱ^j, β} = 0`.
pub fn curved_residual(set: &DiracOperatorSet, metric: &MetricSample) -> f64 {
    let m = metric.spatial_metric();
    let id = CMat4::identity();
    let mut r: f64 = 0.0;
    for j in 0..3 {
        r = r.max(max_abs(&anticommutator(&set.alpha_bar[j], &set.beta)));
        for k in 0..3 {
            let target = id * c(2.0 * m[(j, k)], 0.0);
            r = r.max(max_abs(&(anticommutator(&set.alpha_bar[j], &set.alpha_bar[k]) - target)));
        }
    }
    r
}

/// `ᾱ^j p_j + β m̄ c` for covariant momentum `p` and mass term `m c` (same units).
pub fn curved_hamiltonian(set: &DiracOperatorSet, p: [f64; 3], mc: f64) -> CMat4 {
    let mut h = set.beta * c(set.m_bar_over_m * mc, 0.0);
    for (j, pj) in p.iter().enumerate() {
        h += set.alpha_bar[j] * c(*pj, 0.0);
    }
    h
}
