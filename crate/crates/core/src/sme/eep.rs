//! Equivalence-principle sensitivities of test masses and clocks to the
//! isotropic `α(ā_eff)₀` and `(c̄)₀₀` coefficients, and the global fit.

use super::fit::{weighted_least_squares, FitError, FitResult};
use crate::constants::{Species, AMU, AR_E, C, GEV};
use nalgebra::DMatrix;
use serde::Deserialize;
use thiserror::Error;

/// Relative atomic masses of the free particles, in the order e, p, n.
pub const PARTICLE_AR: [f64; 3] = [AR_E, 1.007_276_466_812, 1.008_664_916_00];

/// Number of global-fit parameters.
pub const N_GLOBAL: usize = 5;

/// Global-fit parameter names: `α(ā^{e+p})₀`, `α(ā^n)₀` [GeV], `(c̄^e)₀₀`, `(c̄^p)₀₀`, `(c̄^n)₀₀`.
pub const GLOBAL_NAMES: [&str; N_GLOBAL] = ["alpha_a_e+p", "alpha_a_n", "c_e", "c_p", "c_n"];

#[derive(Debug, Error)]
pub enum EepError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("constraint file: {0}")]
    Parse(String),
    #[error("unknown clock '{0}'")]
    UnknownClock(String),
}

/// Isotropic EEP-violating coefficients, Sun-centered frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EEPParams {
    /// `α(ā^w_eff)₀` for e, p, n [GeV].
    pub alpha_a: [f64; 3],
    /// `(c̄^w)₀₀` for e, p, n.
    pub c00: [f64; 3],
}

impl EEPParams {
    /// From the global-fit vector; the `e+p` a-coefficient is carried by the proton slot.
    pub fn from_global(x: &[f64; N_GLOBAL]) -> Self {
        EEPParams { alpha_a: [0.0, x[0], x[1]], c00: [x[2], x[3], x[4]] }
    }

    /// Projection onto the global-fit parameters. Neutral matter sees only `ā^e + ā^p`.
    pub fn to_global(&self) -> [f64; N_GLOBAL] {
        [self.alpha_a[0] + self.alpha_a[1], self.alpha_a[2], self.c00[0], self.c00[1], self.c00[2]]
    }

    pub fn scaled(&self, s: f64) -> Self {
        EEPParams { alpha_a: self.alpha_a.map(|v| v * s), c00: self.c00.map(|v| v * s) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..3 {
            r.alpha_a[i] += o.alpha_a[i];
            r.c00[i] += o.c00[i];
        }
        r
    }
}

/// Rest energy of a body of relative mass `ar`, in GeV.
fn gev(ar: f64) -> f64 {
    ar * AMU * C * C / GEV
}

/// Composite `(c̄^T)₀₀ = Σ N^w m^w (c̄^w)₀₀ / m^T`.
pub fn composite_c00(species: &Species, params: &EEPParams) -> f64 {
    let n = species.composition;
    (0..3).map(|w| n[w] as f64 * PARTICLE_AR[w] * params.c00[w]).sum::<f64>() / species.relative_mass
}

/// `β^T = (2/m^T) Σ N^w α(ā^w)₀ − ⅔ (c̄^T)₀₀`, with `m^T` in GeV.
pub fn eep_beta(species: &Species, params: &EEPParams) -> f64 {
    let n = species.composition;
    let a: f64 = (0..3).map(|w| n[w] as f64 * params.alpha_a[w]).sum();
    2.0 * a / gev(species.relative_mass) - 2.0 / 3.0 * composite_c00(species, params)
}

/// Gradient of `β^T` with respect to the global parameters of a neutral body.
pub fn beta_gradient(species: &Species) -> [f64; N_GLOBAL] {
    let n = species.composition.map(|v| v as f64);
    let mt = species.relative_mass;
    let mg = gev(mt);
    [
        2.0 * n[1] / mg,
        2.0 * n[2] / mg,
        -2.0 / 3.0 * n[0] * PARTICLE_AR[0] / mt,
        -2.0 / 3.0 * n[1] * PARTICLE_AR[1] / mt,
        -2.0 / 3.0 * n[2] * PARTICLE_AR[2] / mt,
    ]
}

/// Clock transitions whose frequency responds to the potential.
#[derive(Debug, Clone, PartialEq)]
pub enum ClockSystem {
    /// Hydrogen ground-state hyperfine, scaling as `(m^e m^p)²/(m^e+m^p)³`.
    HydrogenHfs,
    /// Heavy-alkali hyperfine, scaling as `(m^e)²/m^p` (reduced mass ≈ `m^e`, nuclear magneton ∝ `1/m^p`).
    AlkaliHfs,
    /// 14.4 keV Mössbauer line of ⁵⁷Fe with the reduced mass of the valence
    /// neutron against a ⁵⁶Fe core.
    Fe57Mossbauer { core: Species, total: Species },
    /// Optical transition scaling as `m^e m^{atom}/(m^e + m^{atom})`.
    Optical(Species),
}

/// Gradient of `ξ` with respect to the global parameters.
pub fn clock_gradient(system: &ClockSystem) -> [f64; N_GLOBAL] {
    let [me, mp, mn] = PARTICLE_AR;
    let k = -2.0 / 3.0;
    match system {
        ClockSystem::HydrogenHfs => {
            let s = mp + me;
            [0.0, 0.0, k * (2.0 * mp - me) / s, k * (2.0 * me - mp) / s, 0.0]
        }
        ClockSystem::AlkaliHfs => [0.0, 0.0, 2.0 * k, -k, 0.0],
        ClockSystem::Fe57Mossbauer { core, total } => {
            // c^{56Fe} enters with weight m^n/m^57
            let w = mn / total.relative_mass;
            let n = core.composition.map(|v| v as f64);
            let mut g = [0.0; N_GLOBAL];
            for i in 0..3 {
                g[2 + i] = k * w * n[i] * PARTICLE_AR[i] / core.relative_mass;
            }
            g[4] += k * core.relative_mass / total.relative_mass;
            g
        }
        ClockSystem::Optical(atom) => {
            let m = atom.relative_mass;
            let n = atom.composition.map(|v| v as f64);
            let mut g = [0.0; N_GLOBAL];
            for i in 0..3 {
                g[2 + i] = k * me * n[i] * PARTICLE_AR[i] / m / (me + m);
            }
            g[2] += k * m / (me + m);
            g
        }
    }
}

/// Clock sensitivity `ξ` of `system`.
pub fn clock_sensitivities(system: &ClockSystem, params: &EEPParams) -> f64 {
    let p = params;
    let k = -2.0 / 3.0;
    let [me, mp, mn] = PARTICLE_AR;
    let [ce, cp, cn] = p.c00;
    match system {
        ClockSystem::HydrogenHfs => k * (mp * (2.0 * ce - cp) + me * (2.0 * cp - ce)) / (mp + me),
        ClockSystem::AlkaliHfs => k * (2.0 * ce - cp),
        ClockSystem::Fe57Mossbauer { core, total } => {
            k * (core.relative_mass * cn + mn * composite_c00(core, p)) / total.relative_mass
        }
        ClockSystem::Optical(atom) => {
            let m = atom.relative_mass;
            k * (m * ce + me * composite_c00(atom, p)) / (me + m)
        }
    }
}

/// Fractional frequency difference between a clock at the probe and at the
/// ground, `(Δφ′/c²)(1 + ξ_H − β^{SiO₂}) − v²/2c²`, with `Δφ′` the potential
/// difference probe minus ground [m²/s²] and `v` the probe speed [m/s].
pub fn gpa_signal(delta_phi_prime: f64, v_probe: f64, xi_h: f64, beta_sio2: f64) -> f64 {
    delta_phi_prime / (C * C) * (1.0 + xi_h - beta_sio2) - v_probe * v_probe / (2.0 * C * C)
}

/// Per-particle matter and antimatter anomalies `β^w`, `β^{w̄}` (order e, p, n).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParticleAnomalies {
    pub beta: [f64; 3],
    pub beta_bar: [f64; 3],
}

/// Test body with bound kinetic energies `T^w_int/(Mc²)` per species.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBody {
    pub species: Species,
    pub kinetic: [f64; 3],
}

impl BoundBody {
    pub fn new(species: Species) -> Self {
        BoundBody { species, kinetic: [0.0; 3] }
    }

    /// Effective neutron excess `Δ̃ = (m^e+m^p)/m^p N^n − N^p`.
    pub fn neutron_excess(&self) -> f64 {
        let [me, mp, _] = PARTICLE_AR;
        let n = self.species.composition.map(|v| v as f64);
        (me + mp) / mp * n[2] - n[1]
    }

    /// Effective mass defect `m̃′ = m′ − (m^n−m^p)(m^e+m^p)/m^n N^p` with
    /// `m′ = Σ N^w m^w − M` [u].
    pub fn mass_defect(&self) -> f64 {
        let [me, mp, mn] = PARTICLE_AR;
        let n = self.species.composition.map(|v| v as f64);
        let m_prime = (0..3).map(|w| n[w] * PARTICLE_AR[w]).sum::<f64>() - self.species.relative_mass;
        m_prime - (mn - mp) * (me + mp) / mn * n[1]
    }
}

/// `β^A − β^B` in the neutron-excess and baryon-number form:
/// `m_n²/(m_n²+(m_e+m_p)²) [(Δ̃_A/M_A − Δ̃_B/M_B) m^p β^{e+p−n} − (m̃′_A/M_A − m̃′_B/M_B) β^{e+p+n}]
/// − ½ Σ_w (T^w_A/M_Ac² − T^w_B/M_Bc²)(β^w + β^{w̄})`.
///
/// With the kinetic terms dropped this equals the negative of
/// [`composition_difference`]; the overall sign is kept as written.
pub fn neutron_excess_decomposition(a: &BoundBody, b: &BoundBody, anomalies: &ParticleAnomalies) -> f64 {
    let [me, mp, mn] = PARTICLE_AR;
    let bt = anomalies.beta;
    let b_ep = me / mp * bt[0] + bt[1];
    let b_epmn = b_ep - (me + mp) / mn * bt[2];
    let b_eppn = (me + mp) / mn * b_ep + bt[2];
    let (ma, mb) = (a.species.relative_mass, b.species.relative_mass);
    let pre = mn * mn / (mn * mn + (me + mp).powi(2));
    let charge = (a.neutron_excess() / ma - b.neutron_excess() / mb) * mp * b_epmn;
    let baryon = (a.mass_defect() / ma - b.mass_defect() / mb) * b_eppn;
    let kinetic: f64 =
        (0..3).map(|w| (a.kinetic[w] - b.kinetic[w]) * (anomalies.beta[w] + anomalies.beta_bar[w])).sum();
    pre * (charge - baryon) - 0.5 * kinetic
}

/// Direct route: `Σ N^w m^w β^w / M` of A minus that of B, ignoring binding kinetics.
pub fn composition_difference(a: &BoundBody, b: &BoundBody, anomalies: &ParticleAnomalies) -> f64 {
    let weighted = |s: &Species| {
        (0..3).map(|w| s.composition[w] as f64 * PARTICLE_AR[w] * anomalies.beta[w]).sum::<f64>() / s.relative_mass
    };
    weighted(&a.species) - weighted(&b.species)
}

/// One published measurement, linear in the global parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConstraint {
    pub label: String,
    pub row: [f64; N_GLOBAL],
    pub value: f64,
    pub sigma: f64,
    pub citation: Option<String>,
}

impl ExperimentConstraint {
    /// Null redshift test between two co-located clocks: `ξ₁ − ξ₂`.
    pub fn redshift_null(label: &str, c1: &ClockSystem, c2: &ClockSystem, value: f64, sigma: f64) -> Self {
        let (g1, g2) = (clock_gradient(c1), clock_gradient(c2));
        ExperimentConstraint {
            label: label.into(),
            row: std::array::from_fn(|i| g1[i] - g2[i]),
            value,
            sigma,
            citation: None,
        }
    }

    /// Differential free fall of two bodies: `β^A − β^B`.
    pub fn universality(label: &str, a: &Species, b: &Species, value: f64, sigma: f64) -> Self {
        let (ga, gb) = (beta_gradient(a), beta_gradient(b));
        ExperimentConstraint {
            label: label.into(),
            row: std::array::from_fn(|i| ga[i] - gb[i]),
            value,
            sigma,
            citation: None,
        }
    }

    /// Matter-wave gravimeter `δφ = (1+β^{At}) k g T²` against a reference `g`,
    /// given as the fractional deviation of the measured `g`. Bloch-oscillation
    /// measurements use the same row.
    pub fn matter_wave(label: &str, atom: &Species, fractional: f64, sigma: f64) -> Self {
        ExperimentConstraint { label: label.into(), row: beta_gradient(atom), value: fractional, sigma, citation: None }
    }
}

/// Estimates, 1σ errors and correlations of the global parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalFit {
    pub estimates: [f64; N_GLOBAL],
    pub std_errors: [f64; N_GLOBAL],
    pub covariance: DMatrix<f64>,
    pub correlation: DMatrix<f64>,
    /// Condition number of the column-equilibrated, whitened design.
    pub condition: f64,
    pub chi2: f64,
    pub dof: usize,
}

/// Generalized least squares over the five global parameters. Columns are
/// equilibrated first so the GeV-scaled a-coefficients do not dominate the
/// condition number; null-space directions are reported in original units.
pub fn global_fit(constraints: &[ExperimentConstraint]) -> Result<GlobalFit, FitError> {
    let n = constraints.len();
    let rows = n.max(N_GLOBAL);
    let mut a = DMatrix::zeros(rows, N_GLOBAL);
    let mut y = vec![0.0; rows];
    let mut sig = vec![1.0; rows];
    for (i, c) in constraints.iter().enumerate() {
        for j in 0..N_GLOBAL {
            a[(i, j)] = c.row[j];
        }
        y[i] = c.value;
        sig[i] = c.sigma;
    }
    let scale: Vec<f64> = (0..N_GLOBAL)
        .map(|j| {
            let s = (0..n).map(|i| (a[(i, j)] / sig[i]).powi(2)).sum::<f64>().sqrt();
            if s > 0.0 { s } else { 1.0 }
        })
        .collect();
    for j in 0..N_GLOBAL {
        for i in 0..rows {
            a[(i, j)] /= scale[j];
        }
    }
    // zero padding rows keep an underdetermined system on the SVD path so the
    // unconstrained directions are reported
    let fit: FitResult = weighted_least_squares(&a, &y, &sig).map_err(|e| match e {
        FitError::RankDeficient { condition, null_space } => FitError::RankDeficient {
            condition,
            null_space: null_space
                .into_iter()
                .map(|v| {
                    let u: Vec<f64> = v.iter().zip(&scale).map(|(x, s)| x / s).collect();
                    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    u.into_iter().map(|x| x / norm).collect()
                })
                .collect(),
        },
        other => other,
    })?;
    let est: [f64; N_GLOBAL] = std::array::from_fn(|j| fit.estimates[j] / scale[j]);
    let cov = DMatrix::from_fn(N_GLOBAL, N_GLOBAL, |i, j| fit.covariance[(i, j)] / (scale[i] * scale[j]));
    let se: [f64; N_GLOBAL] = std::array::from_fn(|j| cov[(j, j)].sqrt());
    let corr = DMatrix::from_fn(N_GLOBAL, N_GLOBAL, |i, j| cov[(i, j)] / (se[i] * se[j]));
    Ok(GlobalFit {
        estimates: est,
        std_errors: se,
        covariance: cov,
        correlation: corr,
        condition: fit.condition,
        chi2: fit.chi2,
        dof: n.saturating_sub(N_GLOBAL),
    })
}

#[derive(Deserialize)]
struct ConstraintFile {
    schema_version: u32,
    #[serde(default)]
    constraint: Vec<ConstraintRecord>,
}

#[derive(Deserialize)]
struct ConstraintRecord {
    label: String,
    row: Option<[f64; N_GLOBAL]>,
    /// `["clock_a", "clock_b"]` for a null redshift row.
    clocks: Option<[String; 2]>,
    value: f64,
    sigma: f64,
    citation: Option<String>,
}

/// Named clock for constraint files: `H-hfs`, `Cs-hfs`, `Fe57`, or `optical:<species>`.
pub fn clock_by_name(name: &str, registry: &crate::constants::SpeciesRegistry) -> Result<ClockSystem, EepError> {
    let lookup = |s: &str| registry.get(s).cloned().map_err(|_| EepError::UnknownClock(name.into()));
    match name {
        "H-hfs" => Ok(ClockSystem::HydrogenHfs),
        "Cs-hfs" => Ok(ClockSystem::AlkaliHfs),
        "Fe57" => Ok(ClockSystem::Fe57Mossbauer { core: lookup("56Fe")?, total: lookup("57Fe")? }),
        _ => match name.strip_prefix("optical:") {
            Some(s) => Ok(ClockSystem::Optical(lookup(s)?)),
            None => Err(EepError::UnknownClock(name.into())),
        },
    }
}

/// Parse a constraint file. Each record gives either an explicit `row` or a
/// pair of `clocks` compared in a null redshift test.
pub fn load_constraints(
    text: &str,
    registry: &crate::constants::SpeciesRegistry,
) -> Result<Vec<ExperimentConstraint>, EepError> {
    let f: ConstraintFile = toml::from_str(text).map_err(|e| EepError::Parse(e.to_string()))?;
    if f.schema_version != 1 {
        return Err(EepError::Parse(format!("unsupported schema version {}", f.schema_version)));
    }
    f.constraint
        .into_iter()
        .map(|r| {
            let mut c = match (r.row, &r.clocks) {
                (Some(row), None) => {
                    ExperimentConstraint { label: r.label.clone(), row, value: r.value, sigma: r.sigma, citation: None }
                }
                (None, Some([c1, c2])) => ExperimentConstraint::redshift_null(
                    &r.label,
                    &clock_by_name(c1, registry)?,
                    &clock_by_name(c2, registry)?,
                    r.value,
                    r.sigma,
                ),
                _ => return Err(EepError::Parse(format!("'{}': give exactly one of row or clocks", r.label))),
            };
            c.citation = r.citation;
            Ok(c)
        })
        .collect()
}

/// The bundled null redshift tests.
pub fn builtin_constraints() -> Result<Vec<ExperimentConstraint>, EepError> {
    load_constraints(include_str!("../../data/eep_constraints.toml"), &crate::constants::SpeciesRegistry::builtin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SpeciesRegistry;

fn dot(g: &[f64; N_GLOBAL], x: &[f64; N_GLOBAL]) -> f64 {
    g.iter().zip(x).map(|(a, b)| a * b).sum()
}

    #[test]
    fn hydrogen_electron_only() {
        let reg = SpeciesRegistry::builtin();
        let h = reg.get("H").unwrap();
        let p = EEPParams { c00: [1e-6, 0.0, 0.0], ..Default::default() };
        let expect = -2.0 / 3.0 * AR_E * 1e-6 / h.relative_mass;
        assert!((eep_beta(h, &p) - expect).abs() < 1e-20);
    }

    #[test]
    fn gradient_matches_beta() {
        let reg = SpeciesRegistry::builtin();
        let s = reg.get("87Rb").unwrap();
        let x = [0.3, -1.1, 0.7, 2.0, -0.4];
        let p = EEPParams::from_global(&x);
        assert!((eep_beta(s, &p) - dot(&beta_gradient(s), &x)).abs() < 1e-14);
    }

    #[test]
    fn clock_gradients_match() {
        let reg = SpeciesRegistry::builtin();
        let x = [0.0, 0.0, 0.7, 2.0, -0.4];
        let p = EEPParams::from_global(&x);
        for name in ["H-hfs", "Cs-hfs", "Fe57", "optical:87Rb"] {
            let c = clock_by_name(name, &reg).unwrap();
            assert!((clock_sensitivities(&c, &p) - dot(&clock_gradient(&c), &x)).abs() < 1e-14, "{name}");
        }
    }

    #[test]
    fn decomposition_sign_relation() {
        let reg = SpeciesRegistry::builtin();
        let a = BoundBody::new(reg.get("133Cs").unwrap().clone());
        let b = BoundBody::new(reg.get("87Rb").unwrap().clone());
        let an = ParticleAnomalies { beta: [0.4, -1.2, 0.9], beta_bar: [0.0; 3] };
        let d = neutron_excess_decomposition(&a, &b, &an);
        let c = composition_difference(&a, &b, &an);
        assert!((d + c).abs() < 1e-12 * c.abs().max(1e-12));
    }
}
