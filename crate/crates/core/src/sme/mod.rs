//! Lorentz-violation and equivalence-principle phenomenology.

pub mod eep;
pub mod fit;
pub mod isotropy;
pub mod photon;

pub use eep::{
    beta_gradient, clock_gradient, clock_sensitivities, composition_difference, eep_beta, global_fit,
    gpa_signal, neutron_excess_decomposition, BoundBody, ClockSystem, EEPParams, EepError, ExperimentConstraint,
    GlobalFit, ParticleAnomalies,
};
pub use fit::{weighted_least_squares, FitError, FitResult, MAX_CONDITION};
pub use isotropy::{
    amplitudes, fit_fourier_components, fit_isotropy, fragmented_times, isotropy_signal, pull_statistics,
    signal_from_sigma, LabFrame, PullStatistics, Sample, SmeCoefficients,
};
pub use photon::{kappa_combinations, photon_dispersion, Dispersion, KappaTilde, SmeError, KF};

use serde::Deserialize;

/// A published value with its 1σ uncertainty.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceEntry {
    pub name: String,
    pub value: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceTable {
    pub name: String,
    pub description: String,
    pub entries: Vec<ReferenceEntry>,
}

#[derive(Deserialize)]
struct ReferenceFile {
    table: Vec<ReferenceTable>,
}

/// Bundled tables of published bounds, for display alongside fit output.
pub fn reference_tables() -> Vec<ReferenceTable> {
    let f: ReferenceFile =
        toml::from_str(include_str!("../../data/sme_reference.toml")).expect("bundled reference tables parse");
    f.table
}
