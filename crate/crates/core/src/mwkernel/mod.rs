//! Quantum kernel: Dirac algebra in flat and curved metrics, wave-packet
//! propagation, and Bragg momentum-ladder dynamics.

pub mod bragg;
pub mod dirac;
pub mod pathint;

pub use bragg::{bragg_pulse_evolve, effective_rabi, BraggError, BraggPulse};
pub use dirac::{dirac_curved, dirac_flat, DiracOperatorSet, MetricError, MetricSample};
pub use pathint::{path_integral_propagate, splitstep_schrodinger, PropagationError, WavePacket1D};
