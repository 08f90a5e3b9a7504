use matterwave::constants::{compton_frequency, species, C, HBAR};
use matterwave::numeric::GaussLegendre;
use matterwave::phases::ab::{near_sphere_saddle, sphere_pair_gradient, sphere_pair_hessian, sphere_pair_potential};
use matterwave::phases::trajectory::{clock_comparison_decompose_in, Kick};
use matterwave::phases::{
    ab_optimal_geometry, ab_phase, clock_comparison_decompose, mz_phase, rb_conjugate_difference, InterferometerGeometry,
    PiecewiseTrajectory,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn cs_clock() -> f64 {
    compton_frequency(&species("Cs133"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laser_and_time_dilation_cancel(
        x0 in -1.0f64..1.0, v in -5.0f64..5.0, a in -20.0f64..20.0,
        kick in 1e-3f64..0.1, frac in 0.1f64..0.9, t_end in 0.05f64..2.0,
    ) {
        let (u, l) = PiecewiseTrajectory::mach_zehnder_pair(x0, v, a, kick, frac * t_end, t_end).unwrap();
        let d = clock_comparison_decompose(&u, &l, cs_clock()).unwrap();
        prop_assert!((d.phi_td + d.phi_i).abs() <= 1e-12 * d.phi_td.abs().max(d.phi_i.abs()));
        prop_assert_eq!(d.total, d.phi_u + d.phi_td + d.phi_i);
    }

    #[test]
    fn mz_phase_matches_decomposition(n in 1u32..6, t in 0.05f64..1.0, g in -15.0f64..15.0, v in -3.0f64..3.0) {
        let sp = species("Rb87");
        let k = 2.0 * PI / 780e-9;
        let kick = 2.0 * n as f64 * HBAR * k / sp.mass;
        let (u, l) = PiecewiseTrajectory::mach_zehnder_pair(0.0, v, g, kick, t, 2.0 * t).unwrap();
        let d = clock_comparison_decompose(&u, &l, compton_frequency(&sp)).unwrap();
        let mz = mz_phase(&InterferometerGeometry::mach_zehnder(n, k, t, g));
        prop_assert!((d.total - mz).abs() <= 1e-10 * mz.abs().max(1e-300));
    }

    #[test]
    fn constant_potential_offset_drops_out(offset in -1e3f64..1e3, g in -15.0f64..15.0) {
        let (u, l) = PiecewiseTrajectory::mach_zehnder_pair(0.0, 1.0, g, 0.01, 0.3, 0.6).unwrap();
        let base = clock_comparison_decompose_in(&u, &l, cs_clock(), |x| -g * x).unwrap();
        let shifted = clock_comparison_decompose_in(&u, &l, cs_clock(), |x| -g * x + offset).unwrap();
        prop_assert!((shifted.phi_u - base.phi_u).abs() <= 1e-9 * base.phi_u.abs().max(1.0));
    }

    #[test]
    fn ab_phase_scales_with_hold_time(t in 0.1f64..5.0) {
        let one = ab_optimal_geometry(0.01, 20e3, 1.0).unwrap();
        let mut cfg = one.config;
        cfg.hold_time = t;
        let cs = species("Cs133");
        let r = ab_phase(&cfg, &cs).unwrap() / ab_phase(&one.config, &cs).unwrap();
        prop_assert!((r / t - 1.0).abs() < 1e-12);
    }
}

#[test]
fn open_trajectories_are_rejected() {
    let u = PiecewiseTrajectory::new(0.0, 0.0, -9.8, vec![Kick { t: 0.0, dv: 0.01 }], 1.0).unwrap();
    let l = PiecewiseTrajectory::new(0.0, 0.0, -9.8, vec![], 1.0).unwrap();
    assert!(clock_comparison_decompose(&u, &l, cs_clock()).is_err());
}

#[test]
fn common_force_versus_potential_change() {
    let wc = cs_clock();
    let g = -9.81;
    let (u, l) = PiecewiseTrajectory::mach_zehnder_pair(0.0, 2.0, g, 0.02, 0.5, 1.0).unwrap();
    let (u2, l2) = PiecewiseTrajectory::mach_zehnder_pair(0.0, 2.0, 0.5 * g, 0.02, 0.5, 1.0).unwrap();
    let grav = |x: f64| -g * x;
    let base = clock_comparison_decompose_in(&u, &l, wc, grav).unwrap().total;
    let moved = clock_comparison_decompose_in(&u2, &l2, wc, grav).unwrap().total;
    assert!((moved - base).abs() <= 1e-10 * base.abs());
    let changed = clock_comparison_decompose_in(&u, &l, wc, |x| -g * x + 0.1 * x * x).unwrap().total;
    assert!((changed - base).abs() > 1e-3 * base.abs());
    // the added term contributes −(ω/c²)·0.1·∫(x_u² − x_l²)dt
    let gl = GaussLegendre::new(8);
    let f = |t: f64| u.position(t).powi(2) - l.position(t).powi(2);
    let extra = gl.integrate(f, 0.0, 0.5, 1) + gl.integrate(f, 0.5, 1.0, 1);
    let expected = base - wc / (C * C) * 0.1 * extra;
    assert!((changed - expected).abs() <= 1e-9 * changed.abs());
}

#[test]
fn optimal_geometry_sits_at_stationary_points() {
    let geo = ab_optimal_geometry(0.05, 20e3, 1.0).unwrap();
    let cfg = geo.config;
    let xb = near_sphere_saddle(&cfg).unwrap();
    let scale = sphere_pair_gradient(&cfg, 0.5 * xb).abs();
    assert!(sphere_pair_gradient(&cfg, xb).abs() <= 1e-10 * scale);
    assert!(sphere_pair_gradient(&cfg, 0.0).abs() <= 1e-12 * scale);
    // midpoint: maximum along the axis, minimum across it
    let (uxx, uyy) = sphere_pair_hessian(&cfg, 0.0);
    assert!(uxx < 0.0 && uyy > 0.0);
    let h = 1e-4 * cfg.sphere_radius;
    let fd = (sphere_pair_potential(&cfg, h) - 2.0 * sphere_pair_potential(&cfg, 0.0) + sphere_pair_potential(&cfg, -h)) / (h * h);
    assert!((fd / uxx - 1.0).abs() < 1e-4);
}

#[test]
fn ramsey_borde_recoil_splitting() {
    let k = 2.0 * PI / 852e-9;
    let geo = InterferometerGeometry::mach_zehnder(2, k, 0.1, 9.81);
    let wr = 2.0 * PI * 2e3;
    assert!((rb_conjugate_difference(&geo, wr) - 16.0 * 4.0 * wr * 0.1).abs() < 1e-9);
}
