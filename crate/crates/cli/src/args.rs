//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mwi", version, about = "Matter-wave interferometry calculations", propagate_version = true)]
pub struct Cli {
    /// Directory for written files (plots, CSV); overrides MWI_OUTPUT_DIR.
    #[arg(long, global = true, env = "MWI_OUTPUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compton-clock lock solutions.
    #[command(subcommand)]
    Clock(ClockCmd),
    /// Fine structure constant from the measured cesium Compton frequency.
    Alpha(AlphaArgs),
    /// Interferometer phase models.
    #[command(subcommand)]
    Phase(PhaseCmd),
    /// Numerical checks: Dirac algebra, path integral, Bragg pulses.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Penning-trap electron interferometer.
    #[command(subcommand)]
    Penning(PenningCmd),
    /// Vibration noise.
    #[command(subcommand)]
    Noise(NoiseCmd),
    /// Allan deviation of a fractional-frequency series.
    Allan(AllanArgs),
    /// Combine an error budget.
    Budget(BudgetArgs),
    /// Lorentz-violation and equivalence-principle analysis.
    #[command(subcommand)]
    Sme(SmeCmd),
}

#[derive(Debug, Subcommand)]
pub enum ClockCmd {
    /// Solve the lock for one configuration.
    Solve(ClockSolveArgs),
    /// Reference table of lock ratios as CSV.
    Table(SpeciesArg),
    /// Same as the top-level `alpha` command.
    Alpha(AlphaArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpeciesArg {
    #[arg(long, default_value = "electron")]
    pub species: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ClockSolveArgs {
    /// Bragg order n.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Divisor N as an integer or fraction such as 1/2.
    #[arg(long, default_value = "1/2")]
    pub divisor: String,
    #[arg(long, default_value = "Cs133")]
    pub species: String,
    /// Pulse separation T [s].
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct AlphaArgs {
    #[arg(long, default_value = "Cs133")]
    pub species: String,
}

#[derive(Debug, Subcommand)]
pub enum PhaseCmd {
    /// Mach-Zehnder phase n(2kgT² − φ_L).
    Mz(MzArgs),
    /// Ramsey-Bordé phases for both recoil directions.
    Rb(RbArgs),
    /// Gravitational Aharonov-Bohm geometry and phase.
    Ab(AbArgs),
    /// Potential, time-dilation and laser phases of a Mach-Zehnder trajectory pair.
    Decompose(DecomposeArgs),
    /// Evaluate a named laboratory scenario.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MzArgs {
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Laser wavelength [m].
    #[arg(long, default_value_t = 852e-9)]
    pub wavelength: f64,
    #[arg(long, default_value_t = 0.4)]
    pub t: f64,
    /// Acceleration along the beam axis [m/s²].
    #[arg(long, default_value_t = -9.81, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub laser_phase: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RbArgs {
    #[command(flatten)]
    pub mz: MzArgs,
    /// Middle interval T′ [s].
    #[arg(long, default_value_t = 0.0)]
    pub t_prime: f64,
    #[arg(long, default_value = "Cs133")]
    pub species: String,
}

#[derive(Debug, Args, Serialize)]
pub struct AbArgs {
    /// Sphere radius R [m].
    #[arg(long, default_value_t = 10e-3)]
    pub radius: f64,
    /// Source density [kg/m³].
    #[arg(long, default_value_t = 19.3e3)]
    pub density: f64,
    /// Hold time T [s].
    #[arg(long, default_value_t = 1.0)]
    pub hold_time: f64,
    #[arg(long, default_value = "Cs133")]
    pub species: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, default_value_t = -9.81, allow_hyphen_values = true)]
    pub accel: f64,
    /// Velocity kick of the beam splitter [m/s].
    #[arg(long, default_value_t = 0.0035)]
    pub kick: f64,
    /// Mirror time of the upper arm [s].
    #[arg(long, default_value_t = 0.4)]
    pub t_mirror: f64,
    #[arg(long, default_value_t = 0.8)]
    pub t_end: f64,
    #[arg(long, default_value = "Cs133")]
    pub species: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ScenarioArgs {
    /// Scenario name, e.g. present or future.
    #[arg(long, default_value = "present")]
    pub name: String,
    /// Scenario file replacing the bundled one.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum KernelCmd {
    /// Curved-space Dirac matrices for an inverse metric.
    Dirac(DiracArgs),
    /// Path-integral propagation compared with split-step integration.
    Propagate(PropagateArgs),
    /// Gaussian Bragg pulse on the momentum ladder.
    Bragg(BraggArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DiracArgs {
    /// Sixteen comma-separated entries of g^{μν}, row major.
    #[arg(long, default_value = "-1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1", allow_hyphen_values = true)]
    pub metric: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PacketCase {
    Free,
    Linear,
    Harmonic,
}

#[derive(Debug, Args, Serialize)]
pub struct PropagateArgs {
    #[arg(long, value_enum, default_value_t = PacketCase::Free)]
    pub case: PacketCase,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    #[arg(long, default_value_t = 64)]
    pub slices: usize,
    #[arg(long, default_value = "Cs133")]
    pub species: String,
    /// Initial packet width [m].
    #[arg(long, default_value_t = 1e-6)]
    pub sigma: f64,
    /// Write the propagated packet to packet_<case>.csv.
    #[arg(long)]
    pub write: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BraggArgs {
    #[arg(long, default_value = "Cs133")]
    pub species: String,
    #[arg(long, default_value_t = 852e-9)]
    pub wavelength: f64,
    /// Pulse area [rad].
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub area: f64,
    /// Envelope σ [s].
    #[arg(long, default_value_t = 200e-6)]
    pub sigma: f64,
    #[arg(long, default_value_t = 5)]
    pub order_truncation: usize,
    /// Atom velocity in units of ħk/m.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub velocity_recoils: f64,
    /// Write the final amplitudes to ladder.csv.
    #[arg(long)]
    pub write: bool,
}

#[derive(Debug, Subcommand)]
pub enum PenningCmd {
    /// Single-interferometer phase.
    Phase(PenningPhaseArgs),
    /// Double-diffraction phase, exact and expanded.
    Double(PenningDoubleArgs),
    /// Damping-limited operating point.
    Optimum(OptimumArgs),
    /// Systematics of the tabulated electron interferometer.
    Budget(PenningBudgetArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PenningPhaseArgs {
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 1.2e9)]
    pub omega_r: f64,
    #[arg(long, default_value_t = 2.8e-3)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub k0_over_k: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_z: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PenningDoubleArgs {
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 1.2e9)]
    pub omega_r: f64,
    #[arg(long, default_value_t = 2.8e-3)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_z: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimumArgs {
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 1.2e9)]
    pub omega_r: f64,
    /// Axial damping rate [rad/s].
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 1e-6)]
    pub gamma: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PenningBudgetArgs {
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 1.2e9)]
    pub omega_r: f64,
    /// Pulse separation for the anharmonic shift [s].
    #[arg(long, default_value_t = 2.8e-3)]
    pub t: f64,
    /// Laser wavelength [m]; the recoil is two photons.
    #[arg(long, default_value_t = 1064e-9)]
    pub wavelength: f64,
    #[arg(long, default_value_t = 1e-4, allow_hyphen_values = true)]
    pub d4: f64,
    /// Trap scale for the anharmonic shift [m].
    #[arg(long, default_value_t = 0.02)]
    pub trap_scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum NoiseCmd {
    /// Rms vibration phase of a noise model.
    Integrate(NoiseArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct NoiseArgs {
    #[arg(long, default_value = "low")]
    pub model: String,
    /// Noise model file replacing the bundled models.
    #[arg(long)]
    pub models_file: Option<PathBuf>,
    #[arg(long, default_value_t = -0.6, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = -0.7, allow_hyphen_values = true)]
    pub t1: f64,
    /// Momentum transfer in units of ħk.
    #[arg(long, default_value_t = 32)]
    pub photons: u32,
    #[arg(long, default_value_t = 852e-9)]
    pub wavelength: f64,
    #[arg(long, default_value_t = 0.01)]
    pub f_lo: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub f_hi: f64,
    /// Write noise_<model>.svg.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct AllanArgs {
    /// CSV file with columns t, value.
    #[arg(long)]
    pub input: PathBuf,
    /// Smallest number of bins kept at the longest averaging time.
    #[arg(long, default_value_t = 8)]
    pub min_bins: usize,
    /// Write allan.svg.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BudgetArgs {
    /// Bundled budget: systematics-present, systematics-future or compton-clock.
    #[arg(long, default_value = "systematics-present", conflicts_with = "file")]
    pub name: String,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SmeCmd {
    /// Synthesize a sidereal/annual signal as CSV (t, value, sigma).
    Synth(SynthArgs),
    /// Fit the seven σ combinations, or the twelve Fourier amplitudes, to CSV data.
    Fit(FitArgs),
    /// Global fit of the five equivalence-principle parameters.
    Eep(EepArgs),
    /// Bundled published reference values.
    Reference,
}

#[derive(Debug, Args, Serialize)]
pub struct FrameArgs {
    /// Colatitude of the laboratory [deg].
    #[arg(long, default_value_t = 52.6)]
    pub colatitude: f64,
    /// Sidereal phase at t = 0 [rad].
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    /// Seven comma-separated σ combinations (TX, TY, TZ, XX−YY, XY, XZ, YZ).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: String,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    /// Span [s].
    #[arg(long, default_value_t = 30.0 * 86_400.0)]
    pub duration: f64,
    /// Sample spacing [s].
    #[arg(long, default_value_t = 600.0)]
    pub cadence: f64,
    /// Gaussian noise level; zero for a clean signal.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    /// CSV with columns t, value, sigma.
    #[arg(long)]
    pub input: PathBuf,
    /// Fit the twelve Fourier amplitudes instead of the σ combinations.
    #[arg(long)]
    pub fourier: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EepArgs {
    /// Constraint file replacing the bundled null redshift tests.
    #[arg(long)]
    pub constraints: Option<PathBuf>,
}
