//! Matter-wave interferometry toolkit.
//!
//! Phase models for Mach-Zehnder, Ramsey-Bordé and clock-comparison
//! interferometers, the relativistic Compton-clock solver, gravitational
//! Aharonov-Bohm geometry, Penning-trap electron interferometry, noise and
//! error budgets, Lorentz-violation signal synthesis and fitting, and a quantum
//! kernel that checks path-integral and Dirac-algebra results numerically.

pub mod cclock;
pub mod constants;
pub mod metrology;
pub mod mwkernel;
pub mod numeric;
pub mod penning;
pub mod phases;
pub mod sme;
