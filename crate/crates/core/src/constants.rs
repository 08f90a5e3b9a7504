//! Fundamental constants and the species registry.
//!
//! All values are SI and pinned to the CODATA 2010 adjustment. Every other
//! module reads constants from here.

use serde::Deserialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use thiserror::Error;

/// Planck constant [J s].
pub const H: f64 = 6.626_069_57e-34;
/// Reduced Planck constant [J s], defined as `H / 2π`.
pub const HBAR: f64 = H / (2.0 * PI);
/// Speed of light [m/s].
pub const C: f64 = 299_792_458.0;
/// Newton constant [m^3 kg^-1 s^-2].
pub const G: f64 = 6.673_84e-11;
/// Vacuum permittivity [F/m].
pub const EPS0: f64 = 8.854_187_817e-12;
/// Bohr radius [m].
pub const A0: f64 = 0.529_177_210_92e-10;
/// Boltzmann constant [J/K].
pub const KB: f64 = 1.380_648_8e-23;
/// Rydberg constant [1/m].
pub const RINF: f64 = 10_973_731.568_539;
/// Atomic mass unit [kg].
pub const AMU: f64 = 1.660_538_921e-27;
/// Electron relative atomic mass.
pub const AR_E: f64 = 5.485_799_094_6e-4;
/// Elementary charge [C].
pub const E_CHARGE: f64 = 1.602_176_565e-19;
/// One GeV in joules.
pub const GEV: f64 = 1.602_176_565e-10;
/// Electron mass [kg].
pub const M_E: f64 = AR_E * AMU;
/// Relative atomic mass of 133Cs (unweighted mean of the two Penning-trap values).
pub const AR_CS133: f64 = 132.905_451_947;
/// Uncertainty of `AR_CS133`.
pub const AR_CS133_UNC: f64 = 0.000_000_024;
/// Measured Compton frequency of 133Cs [Hz].
///
/// The printed value reads `2.993486252e16 Hz`; the exponent is inconsistent with
/// `m c^2 / h`, which gives `2.9935e25 Hz`. The mantissa is kept and the exponent
/// corrected.
pub const NU_C_CS133_MEASURED: f64 = 2.993_486_252e25;
/// One-sigma uncertainty of `NU_C_CS133_MEASURED` [Hz].
pub const NU_C_CS133_MEASURED_UNC: f64 = 0.000_000_012e25;

/// Fundamental constants as one value, for code that wants them passed around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub h: f64,
    pub g: f64,
    pub eps0: f64,
    pub a0: f64,
    pub kb: f64,
    pub rinf: f64,
    pub amu: f64,
    pub ar_e: f64,
}

impl PhysicalConstants {
    pub const CODATA2010: PhysicalConstants = PhysicalConstants {
        c: C,
        hbar: HBAR,
        h: H,
        g: G,
        eps0: EPS0,
        a0: A0,
        kb: KB,
        rinf: RINF,
        amu: AMU,
        ar_e: AR_E,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA2010
    }
}

#[derive(Debug, Error)]
pub enum SpeciesError {
    #[error("unknown species `{0}`")]
    Unknown(String),
    #[error("invalid species `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("cannot read species file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse species file: {0}")]
    Parse(#[from] toml::de::Error),
}

/// Particle or atom with mass and constituent counts `(N^e, N^p, N^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    /// Mass [kg].
    pub mass: f64,
    /// Relative atomic mass.
    pub relative_mass: f64,
    /// Charge [C].
    pub charge: f64,
    /// `(N^e, N^p, N^n)`.
    pub composition: [u32; 3],
    /// Static polarizability [C m^2 / V].
    pub polarizability: Option<f64>,
}

impl Species {
    /// Validated constructor. Neutral species must have `N^e = N^p`.
    pub fn new(
        name: &str,
        relative_mass: f64,
        charge: f64,
        composition: [u32; 3],
        polarizability: Option<f64>,
    ) -> Result<Self, SpeciesError> {
        let invalid = |reason: &str| SpeciesError::Invalid {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if !(relative_mass > 0.0) || !relative_mass.is_finite() {
            return Err(invalid("mass must be positive"));
        }
        if charge == 0.0 && composition[0] != composition[1] {
            return Err(invalid("neutral species needs equal electron and proton counts"));
        }
        Ok(Species {
            name: name.to_string(),
            mass: relative_mass * AMU,
            relative_mass,
            charge,
            composition,
            polarizability,
        })
    }

    /// Species defined directly by its mass in kg, no constituents.
    pub fn with_mass(name: &str, mass: f64) -> Result<Self, SpeciesError> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(SpeciesError::Invalid {
                name: name.to_string(),
                reason: "mass must be positive".into(),
            });
        }
        Ok(Species {
            name: name.to_string(),
            mass,
            relative_mass: mass / AMU,
            charge: 0.0,
            composition: [0, 0, 0],
            polarizability: None,
        })
    }

    /// Rest energy in GeV.
    pub fn mass_gev(&self) -> f64 {
        self.mass * C * C / GEV
    }
}

/// Angular Compton frequency `m c^2 / ħ` [rad/s].
pub fn compton_frequency(species: &Species) -> f64 {
    species.mass * C * C / HBAR
}

/// Angular recoil frequency `ħ k^2 / (2 m)` [rad/s].
pub fn recoil_frequency(species: &Species, wavenumber: f64) -> f64 {
    HBAR * wavenumber * wavenumber / (2.0 * species.mass)
}

#[derive(Debug, Deserialize)]
struct RegistryFile {
    #[allow(dead_code)]
    schema_version: u32,
    species: Vec<SpeciesRecord>,
}

#[derive(Debug, Deserialize)]
struct SpeciesRecord {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
    relative_mass: f64,
    #[serde(default)]
    charge_e: i32,
    composition: [u32; 3],
    polarizability_au: Option<f64>,
}

const BUILTIN_SPECIES: &str = include_str!("../data/species.toml");

/// Named species table with alias lookup.
#[derive(Debug, Clone, Default)]
pub struct SpeciesRegistry {
    species: Vec<Species>,
    index: HashMap<String, usize>,
}

impl SpeciesRegistry {
    /// Registry with e-, e+, p, n, H, 7Li, 40K, 41K, 87Rb, 133Cs, 56Fe, 57Fe, 88Sr, 199Hg+ and SiO2.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_SPECIES).expect("built-in species table is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self, SpeciesError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SpeciesError> {
        let file: RegistryFile = toml::from_str(text)?;
        let mut reg = SpeciesRegistry::default();
        // atomic-unit polarizability to SI: 4π ε0 a0^3
        let au = 4.0 * PI * EPS0 * A0.powi(3);
        for rec in file.species {
            let sp = Species::new(
                &rec.name,
                rec.relative_mass,
                rec.charge_e as f64 * E_CHARGE,
                rec.composition,
                rec.polarizability_au.map(|p| p * au),
            )?;
            let idx = reg.species.len();
            reg.index.insert(rec.name.to_lowercase(), idx);
            for alias in rec.aliases {
                reg.index.insert(alias.to_lowercase(), idx);
            }
            reg.species.push(sp);
        }
        Ok(reg)
    }

    pub fn get(&self, name: &str) -> Result<&Species, SpeciesError> {
        self.index
            .get(&name.to_lowercase())
            .map(|&i| &self.species[i])
            .ok_or_else(|| SpeciesError::Unknown(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Species> {
        self.species.iter()
    }
}

/// Convenience lookup in the built-in registry.
pub fn species(name: &str) -> Species {
    SpeciesRegistry::builtin()
        .get(name)
        .cloned()
        .unwrap_or_else(|e| panic!("{e}"))
}
