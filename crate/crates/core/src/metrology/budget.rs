//! Error budgets: offsets add linearly, uncertainties in quadrature.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BudgetError {
    #[error("entry '{label}' is in {found}, budget is in {expected}")]
    UnitMismatch { label: String, expected: Unit, found: Unit },
    #[error("budget file: {0}")]
    Parse(String),
    #[error("unknown budget '{0}'")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Ppb,
    Ppt,
    Ppm,
    Rad,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::Ppb => "ppb",
            Unit::Ppt => "ppt",
            Unit::Ppm => "ppm",
            Unit::Rad => "rad",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetEntry {
    pub label: String,
    #[serde(default)]
    pub offset: f64,
    pub uncertainty: f64,
    /// Overrides the budget unit for this row.
    #[serde(default)]
    pub unit: Option<Unit>,
    /// Cancels in the differential measurement; listed but not counted.
    #[serde(default)]
    pub cancels: bool,
}

impl BudgetEntry {
    pub fn new(label: impl Into<String>, offset: f64, uncertainty: f64) -> Self {
        BudgetEntry { label: label.into(), offset, uncertainty, unit: None, cancels: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    #[serde(default = "one")]
    pub schema_version: u32,
    pub name: String,
    pub units: Unit,
    pub entries: Vec<BudgetEntry>,
}

fn one() -> u32 {
    1
}

impl ErrorBudget {
    pub fn from_toml_str(s: &str) -> Result<Self, BudgetError> {
        let b: ErrorBudget = toml::from_str(s).map_err(|e| BudgetError::Parse(e.to_string()))?;
        if b.schema_version != 1 {
            return Err(BudgetError::Parse(format!("unsupported schema version {}", b.schema_version)));
        }
        Ok(b)
    }

    /// Bundled budgets: `systematics-present`, `systematics-future`, `compton-clock`.
    pub fn builtin(name: &str) -> Result<Self, BudgetError> {
        let src = match name {
            "systematics-present" => include_str!("../../data/systematics_present.toml"),
            "systematics-future" => include_str!("../../data/systematics_future.toml"),
            "compton-clock" => include_str!("../../data/ccsyst.toml"),
            _ => return Err(BudgetError::Unknown(name.into())),
        };
        Self::from_toml_str(src)
    }
}

/// `(Σ offsets, √Σ uncertainties²)` over the entries that do not cancel.
pub fn budget_combine(budget: &ErrorBudget) -> Result<(f64, f64), BudgetError> {
    let mut offset = 0.0;
    let mut var = 0.0;
    for e in &budget.entries {
        if let Some(u) = e.unit {
            if u != budget.units {
                return Err(BudgetError::UnitMismatch { label: e.label.clone(), expected: budget.units, found: u });
            }
        }
        if e.cancels {
            continue;
        }
        offset += e.offset;
        var += e.uncertainty * e.uncertainty;
    }
    Ok((offset, var.sqrt()))
}
