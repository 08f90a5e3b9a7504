//! Named scenarios shipped with the command-line tool.

use crate::CliError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabScenario {
    pub name: String,
    pub species: String,
    pub wavelength: f64,
    pub separation: f64,
    pub sphere_radius: f64,
    pub hold_time: f64,
    pub t0: f64,
    pub t1: f64,
    pub momentum_transfer: u32,
    pub atom_density: f64,
    pub density_balance: f64,
    pub sigma_x: f64,
    pub sigma_r: f64,
    pub source_density: f64,
    pub repetitions_per_minute: f64,
    pub noise_model: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceScenario {
    pub name: String,
    pub atom_temperature: f64,
    pub atom_number_rb: f64,
    pub atom_number_k: f64,
    pub lattice_wavelength: f64,
    pub lattice_power: f64,
    pub lattice_waist: f64,
    pub free_expansion: f64,
    pub rf_stability: f64,
    pub shielding_factor: f64,
    pub pulse_separation: f64,
    pub gravity_phase: f64,
    pub differential_resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub laboratory: Vec<LabScenario>,
    #[serde(default)]
    pub space: Vec<SpaceScenario>,
}

pub const BUILTIN: &str = include_str!("../data/scenarios.toml");

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let f: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Validation(format!("scenario file: {e}")))?;
        if f.schema_version != 1 {
            return Err(CliError::Validation(format!("unsupported scenario schema version {}", f.schema_version)));
        }
        Ok(f)
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled scenarios are valid")
    }

    pub fn laboratory(&self, name: &str) -> Result<&LabScenario, CliError> {
        self.laboratory
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CliError::Validation(format!("unknown laboratory scenario '{name}'")))
    }

    pub fn space(&self, name: &str) -> Option<&SpaceScenario> {
        self.space.iter().find(|s| s.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios() {
        let f = ScenarioFile::builtin();
        assert_eq!(f.laboratory("present").unwrap().sphere_radius, 10e-3);
        assert_eq!(f.laboratory("future").unwrap().momentum_transfer, 64);
        assert!(f.space("realistic").is_some());
        assert!(f.laboratory("past").is_err());
    }
}
