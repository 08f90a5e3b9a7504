//! Analytic interferometer phases: Mach-Zehnder, Ramsey-Bordé, clock-comparison
//! decomposition, and the gravitational Aharonov-Bohm source-mass geometry.

pub mod ab;
pub mod trajectory;

pub use ab::{
    ab_optimal_geometry, ab_phase, ab_position_systematic, sphere_pair_potential, AbError,
    OptimalGeometry, SourceMassConfig,
};
pub use trajectory::{clock_comparison_decompose, ClockDecomposition, PhaseError, PiecewiseTrajectory};

/// Which arm of a Ramsey-Bordé interferometer pair (recoil up or down).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

/// Pulse timing and momentum transfer of a light-pulse interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerGeometry {
    /// Beam splitters transfer `2nħk`.
    pub order_n: u32,
    /// Single-photon wavenumber [1/m].
    pub wavenumber_k: f64,
    /// Pulse separation [s].
    pub t: f64,
    /// Middle interval of a Ramsey-Bordé sequence [s].
    pub t_prime: f64,
    /// Laser phase `φ_L` [rad].
    pub laser_phase_ref: f64,
    pub branch: Branch,
    /// Projection of the free-fall acceleration on the beam axis [m/s²].
    pub gravity_g: f64,
}

impl InterferometerGeometry {
    pub fn mach_zehnder(order_n: u32, wavenumber_k: f64, t: f64, gravity_g: f64) -> Self {
        InterferometerGeometry {
            order_n,
            wavenumber_k,
            t,
            t_prime: 0.0,
            laser_phase_ref: 0.0,
            branch: Branch::Upper,
            gravity_g,
        }
    }

    fn validate(&self) {
        assert!(self.t > 0.0, "pulse separation must be positive");
        assert!(self.order_n >= 1, "order must be at least 1");
    }
}

/// Mach-Zehnder phase `n (2 k g T² − φ_L)`.
pub fn mz_phase(geom: &InterferometerGeometry) -> f64 {
    geom.validate();
    let n = geom.order_n as f64;
    n * (2.0 * geom.wavenumber_k * geom.gravity_g * geom.t * geom.t - geom.laser_phase_ref)
}

/// Ramsey-Bordé phase `±8n²ω_r T + 2nkg(T + T′)T + nφ_L`.
pub fn rb_phase(geom: &InterferometerGeometry, omega_r: f64) -> f64 {
    geom.validate();
    let n = geom.order_n as f64;
    geom.branch.sign() * 8.0 * n * n * omega_r * geom.t
        + 2.0 * n * geom.wavenumber_k * geom.gravity_g * (geom.t + geom.t_prime) * geom.t
        + n * geom.laser_phase_ref
}

/// Difference of the recoil-up and recoil-down Ramsey-Bordé phases, `16 n² ω_r T`.
pub fn rb_conjugate_difference(geom: &InterferometerGeometry, omega_r: f64) -> f64 {
    let mut up = *geom;
    up.branch = Branch::Upper;
    let mut down = *geom;
    down.branch = Branch::Lower;
    rb_phase(&up, omega_r) - rb_phase(&down, omega_r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mz_null_cases() {
        let k = 2.0 * std::f64::consts::PI / 852e-9;
        let mut g = InterferometerGeometry::mach_zehnder(1, k, 0.5, 9.81);
        g.laser_phase_ref = 2.0 * k * 9.81 * 0.25;
        assert!(mz_phase(&g).abs() < 1e-6);
        let g0 = InterferometerGeometry::mach_zehnder(3, k, 0.5, 0.0);
        assert_eq!(mz_phase(&g0), 0.0);
    }

    #[test]
    fn rb_branches() {
        let mut g = InterferometerGeometry::mach_zehnder(1, 1e7, 0.1, 0.0);
        assert!((rb_phase(&g, 100.0) - 80.0).abs() < 1e-12);
        g.branch = Branch::Lower;
        assert!((rb_phase(&g, 100.0) + 80.0).abs() < 1e-12);
        g.gravity_g = 9.8;
        g.t_prime = 0.02;
        g.laser_phase_ref = 0.3;
        assert!((rb_conjugate_difference(&g, 100.0) - 160.0).abs() < 1e-9);
    }
}
