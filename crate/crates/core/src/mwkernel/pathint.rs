//! One-dimensional wave-packet propagation: iterated short-time path-integral
//! kernel and a Strang split-step Fourier reference.

use crate::constants::{C, HBAR};
use crate::numeric::GaussLegendre;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

/// Relative edge amplitude above which the grid is considered too narrow.
pub const EDGE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum PropagationError {
    #[error("wave packet reaches the grid boundary (relative edge amplitude {edge:e} at slice {slice})")]
    GridTooNarrow { slice: usize, edge: f64 },
    #[error("invalid propagation parameters: {0}")]
    InvalidInput(String),
}

/// Wave function sampled on a uniform grid `x_i = x0 + i dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket1D {
    pub x0: f64,
    pub dx: f64,
    pub amplitudes: Vec<Complex64>,
    /// Mass [kg].
    pub mass: f64,
    /// Coordinate time [s].
    pub t: f64,
}

impl WavePacket1D {
    /// Normalized Gaussian `(2πσ²)^{-1/4} exp(−(x−xc)²/4σ² + i k0 (x−xc))`.
    pub fn gaussian(n: usize, x_min: f64, x_max: f64, mass: f64, center: f64, sigma: f64, k0: f64) -> Self {
        let dx = (x_max - x_min) / n as f64;
        let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
        let amplitudes = (0..n)
            .map(|i| {
                let x = x_min + i as f64 * dx - center;
                Complex64::from_polar(norm * (-x * x / (4.0 * sigma * sigma)).exp(), k0 * x)
            })
            .collect();
        WavePacket1D { x0: x_min, dx, amplitudes, mass, t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// `Σ |ψ|² dx`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx
    }

    /// `Σ x |ψ|² dx / norm`.
    pub fn centroid(&self) -> f64 {
        let s: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| self.x(i) * a.norm_sqr())
            .sum();
        s * self.dx / self.norm()
    }

    /// Largest amplitude among the outer two samples on each side, relative to the peak.
    pub fn edge_fraction(&self) -> f64 {
        let n = self.len();
        let peak = self.amplitudes.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        if peak == 0.0 || n < 4 {
            return 0.0;
        }
        let edge = [0, 1, n - 2, n - 1]
            .iter()
            .fold(0.0f64, |m, &i| m.max(self.amplitudes[i].norm()));
        edge / peak
    }

    /// Largest `|ψ_a − ψ_b|`, divided by the peak of `self`.
    pub fn max_relative_difference(&self, other: &WavePacket1D) -> f64 {
        let peak = self.amplitudes.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
            / peak
    }

    fn check_edges(&self, slice: usize) -> Result<(), PropagationError> {
        let edge = self.edge_fraction();
        if edge > EDGE_TOLERANCE {
            return Err(PropagationError::GridTooNarrow { slice, edge });
        }
        Ok(())
    }
}

/// Free short-time kernel `K_j` for separations `j dx`, `j = 0..n`, restricted to
/// wavenumbers the grid can represent (`|k| ≤ π/dx`):
/// `K_j = (dx/π) ∫_0^{π/dx} cos(k j dx) exp(−i ħ ε k² / 2m) dk`.
/// For `ε → 0` this reduces to the Kronecker delta.
pub fn free_kernel(n: usize, dx: f64, mass: f64, epsilon: f64) -> Vec<Complex64> {
    let kmax = PI / dx;
    let beta = HBAR * epsilon / (2.0 * mass);
    // phase excursion of the integrand across [0, kmax] sets the panel count
    let span = (n as f64) * PI + beta * kmax * kmax;
    let panels = ((span / PI).ceil() as usize * 2).max(8);
    let gl = GaussLegendre::new(16);
    let h = kmax / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let lo = p as f64 * h;
        for (k, w) in gl.mapped(lo, lo + h) {
            nodes.push((k, w, Complex64::from_polar(w, -beta * k * k)));
        }
    }
    (0..n)
        .map(|j| {
            let d = j as f64 * dx;
            let mut s = Complex64::new(0.0, 0.0);
            for &(k, _, f) in &nodes {
                s += f * (k * d).cos();
            }
            s * (dx / PI)
        })
        .collect()
}

struct LinearConvolver {
    n: usize,
    kernel_hat: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
}

impl LinearConvolver {
    /// Prepare `out[i] = Σ_j K_{|i−j|} ψ_j` for `i, j ∈ [0, n)`.
    fn new(kernel: &[Complex64]) -> Self {
        let n = kernel.len();
        let m = 2 * n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let mut kc = vec![Complex64::new(0.0, 0.0); m];
        kc[0] = kernel[0];
        for j in 1..n {
            kc[j] = kernel[j];
            kc[m - j] = kernel[j];
        }
        fwd.process(&mut kc);
        LinearConvolver { n, kernel_hat: kc, fwd, inv, buf: vec![Complex64::new(0.0, 0.0); m] }
    }

    fn apply(&mut self, psi: &mut [Complex64]) {
        let m = 2 * self.n;
        self.buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        self.buf[..self.n].copy_from_slice(psi);
        self.fwd.process(&mut self.buf);
        for (b, k) in self.buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / m as f64;
        for (p, b) in psi.iter_mut().zip(&self.buf) {
            *p = b * scale;
        }
    }
}

/// Propagate by composing `slices` short-time kernels of length `ε = duration/slices`.
///
/// Each slice convolves with the free kernel and carries the potential phase
/// `exp(+i m c² ε h00(x) / 2ħ)`, which is the weak-field proper-time factor with the
/// global rest-mass phase `exp(−i ω_C t)` removed. The equivalent potential energy is
/// `V = −m c² h00 / 2`. The phase is split evenly between the two ends of each slice
/// (trapezoidal lattice action), so the slice error falls at least as fast as `1/slices`.
pub fn path_integral_propagate(
    psi0: &WavePacket1D,
    potential_h00: &[f64],
    duration: f64,
    slices: usize,
) -> Result<WavePacket1D, PropagationError> {
    if slices == 0 {
        return Err(PropagationError::InvalidInput("slices must be at least 1".into()));
    }
    if !(duration >= 0.0) {
        return Err(PropagationError::InvalidInput("duration must be non-negative".into()));
    }
    if potential_h00.len() != psi0.len() {
        return Err(PropagationError::InvalidInput("potential and grid lengths differ".into()));
    }
    psi0.check_edges(0)?;
    let eps = duration / slices as f64;
    let kernel = free_kernel(psi0.len(), psi0.dx, psi0.mass, eps);
    let mut conv = LinearConvolver::new(&kernel);
    let coef = psi0.mass * C * C * eps / (4.0 * HBAR);
    let half: Vec<Complex64> = potential_h00
        .iter()
        .map(|h| Complex64::from_polar(1.0, coef * h))
        .collect();
    let mut out = psi0.clone();
    for s in 1..=slices {
        for (a, p) in out.amplitudes.iter_mut().zip(&half) {
            *a *= p;
        }
        conv.apply(&mut out.amplitudes);
        for (a, p) in out.amplitudes.iter_mut().zip(&half) {
            *a *= p;
        }
        out.check_edges(s)?;
    }
    out.t += duration;
    Ok(out)
}

/// Strang split-step Fourier integration of `iħ ∂ψ/∂t = −ħ²/2m ∂²ψ/∂x² + U(x) ψ`
/// on a periodic grid. `potential_u` is the potential energy [J].
pub fn splitstep_schrodinger(
    psi0: &WavePacket1D,
    potential_u: &[f64],
    duration: f64,
    steps: usize,
) -> Result<WavePacket1D, PropagationError> {
    if steps == 0 {
        return Err(PropagationError::InvalidInput("steps must be at least 1".into()));
    }
    if potential_u.len() != psi0.len() {
        return Err(PropagationError::InvalidInput("potential and grid lengths differ".into()));
    }
    psi0.check_edges(0)?;
    let n = psi0.len();
    let dt = duration / steps as f64;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let dk = 2.0 * PI / (n as f64 * psi0.dx);
    let kinetic: Vec<Complex64> = (0..n)
        .map(|i| {
            let idx = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
            let k = idx * dk;
            Complex64::from_polar(1.0 / n as f64, -HBAR * k * k * dt / (2.0 * psi0.mass))
        })
        .collect();
    let half: Vec<Complex64> = potential_u
        .iter()
        .map(|u| Complex64::from_polar(1.0, -u * dt / (2.0 * HBAR)))
        .collect();
    let mut out = psi0.clone();
    for s in 1..=steps {
        for (a, p) in out.amplitudes.iter_mut().zip(&half) {
            *a *= p;
        }
        fwd.process(&mut out.amplitudes);
        for (a, k) in out.amplitudes.iter_mut().zip(&kinetic) {
            *a *= k;
        }
        inv.process(&mut out.amplitudes);
        for (a, p) in out.amplitudes.iter_mut().zip(&half) {
            *a *= p;
        }
        if s == steps {
            out.check_edges(s)?;
        }
    }
    out.t += duration;
    Ok(out)
}

/// Convert a potential energy [J] into the equivalent `h00` for a given mass.
pub fn h00_from_potential_energy(potential_u: &[f64], mass: f64) -> Vec<f64> {
    potential_u.iter().map(|u| -2.0 * u / (mass * C * C)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_kernel_is_delta() {
        let k = free_kernel(16, 1e-6, 1e-25, 0.0);
        assert!((k[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        for z in &k[1..] {
            assert!(z.norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_invalid_inputs() {
        let psi = WavePacket1D::gaussian(64, -10e-6, 10e-6, 1e-25, 0.0, 1e-6, 0.0);
        let v = vec![0.0; 64];
        assert!(path_integral_propagate(&psi, &v, 1e-3, 0).is_err());
        assert!(splitstep_schrodinger(&psi, &v, 1e-3, 0).is_err());
        assert!(path_integral_propagate(&psi, &v[..10], 1e-3, 1).is_err());
    }

    #[test]
    fn narrow_grid_detected() {
        let psi = WavePacket1D::gaussian(64, -3e-6, 3e-6, 1e-25, 0.0, 1e-6, 0.0);
        let v = vec![0.0; 64];
        assert!(matches!(
            path_integral_propagate(&psi, &v, 1e-3, 4),
            Err(PropagationError::GridTooNarrow { slice: 0, .. })
        ));
    }
}
