//! Photon-sector coefficient `k_F` and its κ̃ combinations; light dispersion.

use nalgebra::{Matrix3, Matrix4, Vector3};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SmeError {
    #[error("k_F violates {which}: residual {residual:e}")]
    SymmetryViolation { which: &'static str, residual: f64 },
    #[error("{0} must be {1}")]
    BlockShape(&'static str, &'static str),
    #[error("direction must be a unit vector (norm {0})")]
    NotUnit(f64),
}

/// Levi-Civita symbol over spatial indices 0..3.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    if i == j || j == k || i == k {
        0.0
    } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// Minkowski metric diag(+1, −1, −1, −1).
pub fn eta(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

/// `(k_F)^{κλμν}` with all indices up, time index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct KF {
    data: [f64; 256],
}

fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

impl Default for KF {
    fn default() -> Self {
        KF { data: [0.0; 256] }
    }
}

impl KF {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[idx(a, b, c, d)]
    }

    /// Set one component without symmetrizing.
    pub fn set_raw(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        self.data[idx(a, b, c, d)] = v;
    }

    /// Set a component together with its images under pair antisymmetry and pair exchange.
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        for (p, q) in [((a, b), (c, d)), ((c, d), (a, b))] {
            self.data[idx(p.0, p.1, q.0, q.1)] = v;
            self.data[idx(p.1, p.0, q.0, q.1)] = -v;
            self.data[idx(p.0, p.1, q.1, q.0)] = -v;
            self.data[idx(p.1, p.0, q.1, q.0)] = v;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Check pair antisymmetry, pair-exchange symmetry, the cyclic identity and the
    /// vanishing double trace, to `tol` relative to the largest component.
    pub fn check_symmetries(&self, tol: f64) -> Result<(), SmeError> {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let lim = tol * scale;
        let mut worst = [0.0f64; 4];
        let mut trace = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let k = self.get(a, b, c, d);
                        worst[0] = worst[0].max((k + self.get(b, a, c, d)).abs()).max((k + self.get(a, b, d, c)).abs());
                        worst[1] = worst[1].max((k - self.get(c, d, a, b)).abs());
                        worst[2] = worst[2].max((k + self.get(a, c, d, b) + self.get(a, d, b, c)).abs());
                        trace += eta(a, c) * eta(b, d) * k;
                    }
                }
            }
        }
        worst[3] = trace.abs();
        let names = ["pair antisymmetry", "pair exchange symmetry", "cyclic identity", "vanishing double trace"];
        for (w, name) in worst.iter().zip(names) {
            if *w > lim {
                return Err(SmeError::SymmetryViolation { which: name, residual: *w });
            }
        }
        Ok(())
    }
}

/// The 19 non-birefringent and birefringent combinations of `k_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaTilde {
    /// Symmetric, traceless.
    pub e_plus: Matrix3<f64>,
    /// Symmetric, traceless.
    pub e_minus: Matrix3<f64>,
    /// Antisymmetric.
    pub o_plus: Matrix3<f64>,
    /// Symmetric, traceless.
    pub o_minus: Matrix3<f64>,
    pub tr: f64,
}

impl KappaTilde {
    pub fn zero() -> Self {
        KappaTilde {
            e_plus: Matrix3::zeros(),
            e_minus: Matrix3::zeros(),
            o_plus: Matrix3::zeros(),
            o_minus: Matrix3::zeros(),
            tr: 0.0,
        }
    }

    fn validate(&self) -> Result<(), SmeError> {
        let scale = [self.e_plus, self.e_minus, self.o_plus, self.o_minus]
            .iter()
            .map(|m| m.amax())
            .fold(self.tr.abs(), f64::max)
            .max(f64::MIN_POSITIVE);
        let tol = 1e-12 * scale;
        let sym = |m: &Matrix3<f64>| (m - m.transpose()).amax() <= tol && m.trace().abs() <= tol;
        if !sym(&self.e_plus) {
            return Err(SmeError::BlockShape("κ̃_e+", "symmetric and traceless"));
        }
        if !sym(&self.e_minus) {
            return Err(SmeError::BlockShape("κ̃_e−", "symmetric and traceless"));
        }
        if !sym(&self.o_minus) {
            return Err(SmeError::BlockShape("κ̃_o−", "symmetric and traceless"));
        }
        if (self.o_plus + self.o_plus.transpose()).amax() > tol {
            return Err(SmeError::BlockShape("κ̃_o+", "antisymmetric"));
        }
        Ok(())
    }

    /// Rebuild `k_F` from the combinations.
    pub fn to_kf(&self) -> Result<KF, SmeError> {
        self.validate()?;
        let id = Matrix3::identity();
        let de = self.e_plus + self.e_minus + id * self.tr;
        let hb = self.e_plus - self.e_minus - id * self.tr;
        let db = self.o_plus + self.o_minus;
        let mut kf = KF::zero();
        for j in 0..3 {
            for k in 0..3 {
                kf.set(0, j + 1, 0, k + 1, -0.5 * de[(j, k)]);
            }
        }
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    for s in 0..3 {
                        let mut v = 0.0;
                        for j in 0..3 {
                            for k in 0..3 {
                                v += levi_civita(p, q, j) * levi_civita(r, s, k) * hb[(j, k)];
                            }
                        }
                        kf.set_raw(p + 1, q + 1, r + 1, s + 1, 0.5 * v);
                    }
                }
            }
        }
        for j in 0..3 {
            for p in 0..3 {
                for q in 0..3 {
                    let v: f64 = (0..3).map(|k| 0.5 * db[(j, k)] * levi_civita(k, p, q)).sum();
                    if v != 0.0 {
                        kf.set(0, j + 1, p + 1, q + 1, v);
                    }
                }
            }
        }
        Ok(kf)
    }
}

/// The 3×3 matrices `κ_DE`, `κ_HB`, `κ_DB` of `k_F`.
pub fn kappa_matrices(kf: &KF) -> (Matrix3<f64>, Matrix3<f64>, Matrix3<f64>) {
    let mut de = Matrix3::zeros();
    let mut hb = Matrix3::zeros();
    let mut db = Matrix3::zeros();
    for j in 0..3 {
        for k in 0..3 {
            de[(j, k)] = -2.0 * kf.get(0, j + 1, 0, k + 1);
            let mut h = 0.0;
            let mut d = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    d += kf.get(0, j + 1, p + 1, q + 1) * levi_civita(k, p, q);
                    for r in 0..3 {
                        for s in 0..3 {
                            h += levi_civita(j, p, q) * levi_civita(k, r, s) * kf.get(p + 1, q + 1, r + 1, s + 1);
                        }
                    }
                }
            }
            hb[(j, k)] = 0.5 * h;
            db[(j, k)] = d;
        }
    }
    (de, hb, db)
}

/// `κ̃_e± = ½(κ_DE ± κ_HB)` (traceless part for e−), `κ̃_o± = ½(κ_DB ∓ κ_DBᵀ)`,
/// `κ̃_tr = ⅓ tr κ_DE`.
pub fn kappa_combinations(kf: &KF) -> Result<KappaTilde, SmeError> {
    kf.check_symmetries(1e-12)?;
    let (de, hb, db) = kappa_matrices(kf);
    let tr = de.trace() / 3.0;
    Ok(KappaTilde {
        e_plus: 0.5 * (de + hb),
        e_minus: 0.5 * (de - hb) - Matrix3::identity() * tr,
        o_plus: 0.5 * (db - db.transpose()),
        o_minus: 0.5 * (db + db.transpose()),
        tr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub rho: f64,
    pub sigma: f64,
    /// `k⁰₊/|k| = 1 + ρ + σ`.
    pub k0_plus: f64,
    /// `k⁰₋/|k| = 1 + ρ − σ`.
    pub k0_minus: f64,
}

/// `k̃^{αβ} = k_F^{αμβν} p̂_μ p̂_ν` for the null covector `p̂_μ = (1, −n̂)`.
pub fn k_tilde(kf: &KF, direction: &Vector3<f64>) -> Matrix4<f64> {
    let p = [1.0, -direction[0], -direction[1], -direction[2]];
    let mut kt = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut s = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    s += kf.get(a, m, b, n) * p[m] * p[n];
                }
            }
            kt[(a, b)] = s;
        }
    }
    kt
}

/// Phase velocities of the two polarizations along `direction`, to first order in `k_F`.
pub fn photon_dispersion(kf: &KF, direction: &Vector3<f64>) -> Result<Dispersion, SmeError> {
    let norm = direction.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(SmeError::NotUnit(norm));
    }
    let kt = k_tilde(kf, direction);
    let mut trace = 0.0;
    let mut square = 0.0;
    for a in 0..4 {
        trace += eta(a, a) * kt[(a, a)];
        for b in 0..4 {
            square += eta(a, a) * eta(b, b) * kt[(a, b)] * kt[(a, b)];
        }
    }
    let rho = -0.5 * trace;
    let sigma = (0.5 * square - rho * rho).max(0.0).sqrt();
    Ok(Dispersion { rho, sigma, k0_plus: 1.0 + rho + sigma, k0_minus: 1.0 + rho - sigma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_values() {
        assert_eq!(levi_civita(0, 1, 2), 1.0);
        assert_eq!(levi_civita(1, 0, 2), -1.0);
        assert_eq!(levi_civita(1, 1, 2), 0.0);
    }

    #[test]
    fn zero_tensor() {
        let k = kappa_combinations(&KF::zero()).unwrap();
        assert_eq!(k, KappaTilde::zero());
        let d = photon_dispersion(&KF::zero(), &Vector3::z()).unwrap();
        assert_eq!((d.k0_plus, d.k0_minus), (1.0, 1.0));
    }

    #[test]
    fn isotropic_trace() {
        let mut k = KappaTilde::zero();
        k.tr = 1e-6;
        let kf = k.to_kf().unwrap();
        kf.check_symmetries(1e-12).unwrap();
        let d = photon_dispersion(&kf, &Vector3::new(0.6, 0.0, 0.8)).unwrap();
        assert!((d.rho + 1e-6).abs() < 1e-18);
        assert!(d.sigma < 1e-15);
    }

    #[test]
    fn detects_violation() {
        let mut kf = KF::zero();
        kf.set_raw(0, 1, 0, 1, 1.0);
        assert!(kf.check_symmetries(1e-12).is_err());
        assert!(matches!(kappa_combinations(&kf), Err(SmeError::SymmetryViolation { .. })));
    }
}
