use matterwave::constants::{recoil_frequency, species, HBAR};
use matterwave::mwkernel::bragg::{ladder_basis_state, population};
use matterwave::mwkernel::dirac::{anticommutator, curved_residual, flat_residual, max_abs, CMat4};
use matterwave::mwkernel::pathint::h00_from_potential_energy;
use matterwave::mwkernel::{
    bragg_pulse_evolve, dirac_curved, dirac_flat, path_integral_propagate, splitstep_schrodinger, BraggPulse,
    MetricSample, WavePacket1D,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn metric_strategy() -> impl Strategy<Value = [[f64; 4]; 4]> {
    (
        -2.0f64..-0.5,
        proptest::array::uniform3(0.5f64..2.0),
        proptest::array::uniform3(-0.3f64..0.3),
        proptest::array::uniform3(-0.3f64..0.3),
    )
        .prop_map(|(g00, diag, g0j, off)| {
            let mut g = [[0.0; 4]; 4];
            g[0][0] = g00;
            for j in 0..3 {
                g[j + 1][j + 1] = diag[j];
                g[0][j + 1] = g0j[j];
                g[j + 1][0] = g0j[j];
            }
            for (v, (a, b)) in off.iter().zip([(1, 2), (1, 3), (2, 3)]) {
                g[a][b] = *v;
                g[b][a] = *v;
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn curved_dirac_algebra(g in metric_strategy()) {
        let Ok(m) = MetricSample::new(g) else { return Ok(()) };
        let Ok(set) = dirac_curved(&m) else { return Ok(()) };
        prop_assert!(curved_residual(&set, &m) < 1e-12);
        prop_assert!((set.m_bar_over_m - 1.0 / (-g[0][0]).sqrt()).abs() < 1e-14);
        // symmetric factorization
        prop_assert!((set.dreibein - set.dreibein.transpose()).amax() < 1e-12);
    }
}

#[test]
fn flat_algebra_is_exact() {
    let set = dirac_flat();
    assert_eq!(flat_residual(&set), 0.0);
    let b2 = set.beta * set.beta;
    assert_eq!(max_abs(&(b2 - CMat4::identity())), 0.0);
}

#[test]
fn minkowski_reproduces_flat_set() {
    let set = dirac_curved(&MetricSample::minkowski()).unwrap();
    let flat = dirac_flat();
    for j in 0..3 {
        assert!(max_abs(&(set.alpha_bar[j] - flat.alpha[j])) < 1e-14);
        assert!(max_abs(&anticommutator(&set.alpha_bar[j], &set.beta)) < 1e-14);
    }
    assert_eq!(set.m_bar_over_m, 1.0);
}

#[test]
fn non_lorentzian_metric_is_rejected() {
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    assert!(MetricSample::new(g).is_err());
}

fn free_gaussian(x: f64, t: f64, mass: f64, sigma: f64) -> Complex64 {
    let s = Complex64::new(1.0, HBAR * t / (2.0 * mass * sigma * sigma));
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    norm / s.sqrt() * (-(x * x) / (4.0 * sigma * sigma * s)).exp()
}

#[test]
fn free_packet_matches_closed_form() {
    let mass = species("Rb87").mass;
    let sigma = 1e-6;
    let t = 3.0 * mass * sigma * sigma / HBAR;
    let psi = WavePacket1D::gaussian(512, -30.0 * sigma, 30.0 * sigma, mass, 0.0, sigma, 0.0);
    let out = path_integral_propagate(&psi, &vec![0.0; 512], t, 64).unwrap();
    let peak = out.amplitudes.iter().fold(0.0f64, |m, a| m.max(a.norm()));
    let worst = out
        .amplitudes
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (i, a)| m.max((a - free_gaussian(out.x(i), t, mass, sigma)).norm()));
    assert!(worst / peak < 1e-3, "{}", worst / peak);
    assert!((out.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn splitstep_is_unitary_and_tracks_gravity() {
    let mass = species("Cs133").mass;
    let sigma = 1e-6;
    let t = 2.0 * mass * sigma * sigma / HBAR;
    let psi = WavePacket1D::gaussian(512, -25.0 * sigma, 25.0 * sigma, mass, 0.0, sigma, 0.0);
    let g = 2.0 * sigma / (t * t);
    let u: Vec<f64> = psi.grid().iter().map(|x| mass * g * x).collect();
    let out = splitstep_schrodinger(&psi, &u, t, 200).unwrap();
    assert!((out.norm() - psi.norm()).abs() < 1e-10);
    // Ehrenfest: the centroid falls by g t²/2
    assert!((out.centroid() + 0.5 * g * t * t).abs() < 1e-3 * sigma);
}

#[test]
fn path_integral_matches_splitstep_in_a_weak_well() {
    let mass = species("Cs133").mass;
    let sigma = 1e-6;
    let t = 2.0 * mass * sigma * sigma / HBAR;
    let psi = WavePacket1D::gaussian(512, -25.0 * sigma, 25.0 * sigma, mass, sigma, sigma, 0.0);
    let w = 2.0 * PI / (8.0 * t);
    let u: Vec<f64> = psi.grid().iter().map(|x| 0.5 * mass * w * w * x * x).collect();
    let pi = path_integral_propagate(&psi, &h00_from_potential_energy(&u, mass), t, 128).unwrap();
    let ss = splitstep_schrodinger(&psi, &u, t, 128).unwrap();
    assert!(pi.max_relative_difference(&ss) < 1e-3);
}

#[test]
fn narrow_grid_is_reported() {
    let mass = species("Cs133").mass;
    let sigma = 1e-6;
    let psi = WavePacket1D::gaussian(256, -5.0 * sigma, 5.0 * sigma, mass, 0.0, sigma, 0.0);
    let t = 50.0 * mass * sigma * sigma / HBAR;
    assert!(path_integral_propagate(&psi, &vec![0.0; 256], t, 16).is_err());
}

fn cs_pulse(area: f64, sigma: f64) -> (BraggPulse, f64, f64) {
    let sp = species("Cs133");
    let k = 2.0 * PI / 852e-9;
    let pulse = BraggPulse::new(BraggPulse::peak_for_area(area, sigma), sigma, 0.0, 4, k).unwrap();
    (pulse, sp.mass, -HBAR * k / sp.mass)
}

#[test]
fn weak_bragg_coupling_is_two_level_rabi_flopping() {
    let sigma = 2e-3;
    for area in [0.3, PI / 2.0, 2.0, PI, 4.0] {
        let (pulse, mass, v) = cs_pulse(area, sigma);
        let wr = recoil_frequency(&species("Cs133"), pulse.effective_wavenumber);
        assert!(pulse.two_photon_rabi_peak * 100.0 < 8.0 * wr);
        let out = bragg_pulse_evolve(&ladder_basis_state(4, 0), &pulse, mass, v).unwrap();
        let expected = (area / 2.0).sin().powi(2);
        assert!((population(&out, 4, 1) - expected).abs() < 1e-3, "area {area}");
    }
}

#[test]
fn bragg_evolution_is_unitary() {
    let (pulse, mass, v) = cs_pulse(3.0 * PI, 50e-6);
    let out = bragg_pulse_evolve(&ladder_basis_state(4, 0), &pulse, mass, v).unwrap();
    let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-9);
}
