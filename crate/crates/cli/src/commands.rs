//! Command execution. Every command is a pure function of its arguments and the
//! contents of the files they name.

use crate::args::*;
use crate::io::{ladder_csv, packet_csv, read_columns, write_table};
use crate::plot::{allan_plot, noise_overlay};
use crate::report::{content_digest, Report};
use crate::scenario::ScenarioFile;
use crate::{CliError, Output};
use matterwave::cclock::{alpha_with_uncertainty, solve_lock, ClockConfig};
use matterwave::constants::{
    compton_frequency, recoil_frequency, Species, SpeciesRegistry, AR_CS133, AR_CS133_UNC, AR_E, HBAR, M_E,
    NU_C_CS133_MEASURED, NU_C_CS133_MEASURED_UNC, RINF,
};
use matterwave::metrology::{
    allan_deviation, budget_combine, log_log_slope, octave_taus, sensitivity_function, vibration_phase_noise,
    ErrorBudget, NoiseModel,
};
use matterwave::mwkernel::bragg::{ladder_basis_state, population};
use matterwave::mwkernel::dirac::{curved_residual, flat_residual};
use matterwave::mwkernel::pathint::h00_from_potential_energy;
use matterwave::mwkernel::{
    bragg_pulse_evolve, dirac_curved, dirac_flat, path_integral_propagate, splitstep_schrodinger, BraggPulse,
    MetricSample, PropagationError, WavePacket1D,
};
use matterwave::penning::{
    anharmonic_shift, closure_gap_and_temperature, damping_optimum, double_diffraction_expansion,
    double_diffraction_phase, double_from_singles, single_phase, single_phase_from_trajectories, ElectronParameters,
    PenningError, TemperatureLimit, TrapConfig,
};
use matterwave::phases::ab::{ab_phase_rule_of_thumb, ab_position_coefficients};
use matterwave::phases::{
    ab_optimal_geometry, ab_phase, ab_position_systematic, clock_comparison_decompose, mz_phase, rb_phase, Branch,
    InterferometerGeometry, PhaseError, PiecewiseTrajectory,
};
use matterwave::sme::eep::{builtin_constraints, load_constraints, GLOBAL_NAMES};
use matterwave::sme::isotropy::{COMPONENT_NAMES, SIGMA_NAMES};
use matterwave::sme::{
    fit_fourier_components, fit_isotropy, fragmented_times, global_fit, reference_tables, signal_from_sigma, FitError,
    FitResult, LabFrame, Sample,
};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::f64::consts::PI;
use std::path::Path;

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Arguments and digests of the files they reference, as hashed into `inputs_digest`.
struct Inputs {
    args: Value,
    files: Map<String, Value>,
}

impl Inputs {
    fn of(args: &impl Serialize) -> Self {
        Inputs { args: serde_json::to_value(args).expect("arguments serialize"), files: Map::new() }
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        self.files.insert(path.display().to_string(), Value::String(content_digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| CliError::Validation(format!("{} is not UTF-8", path.display())))
    }

    fn report(self, command: &str, results: Value) -> Output {
        let inputs = json!({ "args": self.args, "files": self.files });
        Output { stdout: Report::new(command, &inputs, results).to_pretty(), files: Vec::new() }
    }
}

fn lookup_species(name: &str) -> Result<Species, CliError> {
    SpeciesRegistry::builtin().get(name).cloned().map_err(invalid)
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError::Validation(format!("'{s}' is not an integer or fraction p/q"));
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_list(s: &str, expected: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Validation(format!("{what}: expected {expected} comma-separated numbers")))?;
    if v.len() != expected {
        return Err(CliError::Validation(format!("{what}: expected {expected} values, got {}", v.len())));
    }
    Ok(v)
}

fn fit_error(e: FitError) -> CliError {
    match e {
        FitError::RankDeficient { .. } => runtime(e),
        _ => invalid(e),
    }
}

fn phase_error(e: PhaseError) -> CliError {
    match e {
        PhaseError::CancellationFailed { .. } => runtime(e),
        _ => invalid(e),
    }
}

fn propagation_error(e: PropagationError) -> CliError {
    match e {
        PropagationError::InvalidInput(_) => invalid(e),
        PropagationError::GridTooNarrow { .. } => runtime(e),
    }
}

fn penning_error(e: PenningError) -> CliError {
    invalid(e)
}

pub fn execute(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Clock(ClockCmd::Solve(a)) => clock_solve(a),
        Command::Clock(ClockCmd::Table(a)) => clock_table(a),
        Command::Clock(ClockCmd::Alpha(a)) | Command::Alpha(a) => alpha(a),
        Command::Phase(PhaseCmd::Mz(a)) => phase_mz(a),
        Command::Phase(PhaseCmd::Rb(a)) => phase_rb(a),
        Command::Phase(PhaseCmd::Ab(a)) => phase_ab(a),
        Command::Phase(PhaseCmd::Decompose(a)) => phase_decompose(a),
        Command::Phase(PhaseCmd::Scenario(a)) => phase_scenario(a),
        Command::Kernel(KernelCmd::Dirac(a)) => kernel_dirac(a),
        Command::Kernel(KernelCmd::Propagate(a)) => kernel_propagate(a),
        Command::Kernel(KernelCmd::Bragg(a)) => kernel_bragg(a),
        Command::Penning(PenningCmd::Phase(a)) => penning_phase(a),
        Command::Penning(PenningCmd::Double(a)) => penning_double(a),
        Command::Penning(PenningCmd::Optimum(a)) => penning_optimum(a),
        Command::Penning(PenningCmd::Budget(a)) => penning_budget(a),
        Command::Noise(NoiseCmd::Integrate(a)) => noise_integrate(a),
        Command::Allan(a) => allan(a),
        Command::Budget(a) => budget(a),
        Command::Sme(SmeCmd::Synth(a)) => sme_synth(a),
        Command::Sme(SmeCmd::Fit(a)) => sme_fit(a),
        Command::Sme(SmeCmd::Eep(a)) => sme_eep(a),
        Command::Sme(SmeCmd::Reference) => sme_reference(),
    }
}

fn clock_solve(a: &ClockSolveArgs) -> Result<Output, CliError> {
    let sp = lookup_species(&a.species)?;
    let wc = compton_frequency(&sp);
    let cfg = ClockConfig::new(a.order, parse_ratio(&a.divisor)?, wc, a.t).map_err(invalid)?;
    let s = solve_lock(&cfg);
    let results = json!({
        "species": sp.name,
        "omega_c": wc,
        "beta": s.beta,
        "beta_prime": s.beta_prime,
        "gamma": s.gamma,
        "gamma_prime": s.gamma_prime,
        "omega_l": s.omega_l,
        "omega_m": s.omega_m,
        "omega_plus": s.omega_plus,
        "omega_minus": s.omega_minus,
        "omega_m_over_omega_c": s.omega_m / wc,
        "omega_l_over_omega_c": s.omega_l / wc,
        "omega_plus_over_omega_c": s.omega_plus / wc,
        "omega_minus_over_omega_c": s.omega_minus / wc,
        "omega_c_over_omega_m": cfg.compton_to_modulation().to_string(),
        "omega_l_over_omega_m": cfg.laser_to_modulation().to_string(),
        "phi_f": s.phi_f,
        "phi_i": s.phi_i,
        "phi_total": s.phi_f + s.phi_i,
    });
    Ok(Inputs::of(a).report("clock solve", results))
}

/// The three reference configurations `(n, N)`.
const CLOCK_ROWS: [(u32, i64, i64); 3] = [(2, 1, 2), (1, 1, 2), (1, 1000, 1)];

fn clock_table(a: &SpeciesArg) -> Result<Output, CliError> {
    let wc = compton_frequency(&lookup_species(&a.species)?);
    let rows = CLOCK_ROWS
        .iter()
        .map(|&(n, p, q)| {
            let cfg = ClockConfig::new(n, Ratio::new(p, q), wc, 1.0).map_err(invalid)?;
            let s = solve_lock(&cfg);
            Ok(vec![
                n as f64,
                p as f64 / q as f64,
                s.beta,
                s.beta_prime,
                s.omega_m / wc,
                s.omega_l / wc,
                s.omega_plus / wc,
                s.omega_minus / wc,
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let header = [
        "n",
        "N",
        "beta",
        "beta_prime",
        "omega_m_over_omega_c",
        "omega_l_over_omega_c",
        "omega_plus_over_omega_c",
        "omega_minus_over_omega_c",
    ];
    Ok(Output { stdout: write_table(&header, &rows), files: Vec::new() })
}

fn alpha(a: &AlphaArgs) -> Result<Output, CliError> {
    let sp = lookup_species(&a.species)?;
    if sp.name != "Cs133" {
        return Err(CliError::Validation(format!(
            "no measured Compton frequency for '{}'; only Cs133 is available",
            sp.name
        )));
    }
    let (alpha, sigma) =
        alpha_with_uncertainty(NU_C_CS133_MEASURED, NU_C_CS133_MEASURED_UNC, RINF, AR_CS133, AR_CS133_UNC, AR_E);
    let results = json!({
        "species": sp.name,
        "nu_c": NU_C_CS133_MEASURED,
        "nu_c_sigma": NU_C_CS133_MEASURED_UNC,
        "alpha": alpha,
        "sigma": sigma,
        "relative_sigma": sigma / alpha,
        "inverse_alpha": 1.0 / alpha,
    });
    Ok(Inputs::of(a).report("alpha", results))
}

fn geometry(m: &MzArgs) -> Result<InterferometerGeometry, CliError> {
    if !(m.t > 0.0) || m.order < 1 || !(m.wavelength > 0.0) {
        return Err(invalid("need T > 0, order >= 1 and a positive wavelength"));
    }
    let mut g = InterferometerGeometry::mach_zehnder(m.order, 2.0 * PI / m.wavelength, m.t, m.g);
    g.laser_phase_ref = m.laser_phase;
    Ok(g)
}

fn phase_mz(a: &MzArgs) -> Result<Output, CliError> {
    let g = geometry(a)?;
    let results = json!({ "wavenumber_k": g.wavenumber_k, "phase": mz_phase(&g) });
    Ok(Inputs::of(a).report("phase mz", results))
}

fn phase_rb(a: &RbArgs) -> Result<Output, CliError> {
    if !(a.t_prime >= 0.0) {
        return Err(invalid("T' must be non-negative"));
    }
    let sp = lookup_species(&a.species)?;
    let mut g = geometry(&a.mz)?;
    g.t_prime = a.t_prime;
    let wr = recoil_frequency(&sp, g.wavenumber_k);
    g.branch = Branch::Upper;
    let up = rb_phase(&g, wr);
    g.branch = Branch::Lower;
    let down = rb_phase(&g, wr);
    let results = json!({ "omega_r": wr, "phase_upper": up, "phase_lower": down, "difference": up - down });
    Ok(Inputs::of(a).report("phase rb", results))
}

fn phase_ab(a: &AbArgs) -> Result<Output, CliError> {
    let sp = lookup_species(&a.species)?;
    let geo = ab_optimal_geometry(a.radius, a.density, a.hold_time).map_err(invalid)?;
    let c = geo.config;
    let phase = ab_phase(&c, &sp).map_err(invalid)?;
    let coeff = ab_position_coefficients(&c).map_err(invalid)?;
    let results = json!({
        "separation": c.separation,
        "center_spacing": c.center_spacing,
        "s_over_r": c.separation / c.sphere_radius,
        "l_over_r": c.center_spacing / c.sphere_radius,
        "du_over_g_rho_s2": geo.du_over_g_rho_s2,
        "sphere_mass": c.sphere_mass(),
        "phase": phase,
        "phase_rule_of_thumb": ab_phase_rule_of_thumb(c.separation, a.density, sp.mass / lookup_species("Cs133")?.mass, a.hold_time),
        "position_coefficients": {
            "mean_r": coeff[0], "mean_x": coeff[1], "var_r": coeff[2], "var_x": coeff[3],
        },
    });
    Ok(Inputs::of(a).report("phase ab", results))
}

fn phase_decompose(a: &DecomposeArgs) -> Result<Output, CliError> {
    let sp = lookup_species(&a.species)?;
    let (u, l) =
        PiecewiseTrajectory::mach_zehnder_pair(a.x0, a.v0, a.accel, a.kick, a.t_mirror, a.t_end).map_err(phase_error)?;
    let d = clock_comparison_decompose(&u, &l, compton_frequency(&sp)).map_err(phase_error)?;
    let results = json!({
        "phi_u": d.phi_u,
        "phi_td": d.phi_td,
        "phi_i": d.phi_i,
        "total": d.total,
        "upper_turning_points": u.turning_points(),
        "lower_turning_points": l.turning_points(),
    });
    Ok(Inputs::of(a).report("phase decompose", results))
}

fn phase_scenario(a: &ScenarioArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let file = match &a.file {
        Some(p) => ScenarioFile::parse(&inputs.read(p)?)?,
        None => ScenarioFile::builtin(),
    };
    if let Some(space) = file.space(&a.name) {
        let results = json!({ "kind": "space", "scenario": space });
        return Ok(inputs.report("phase scenario", results));
    }
    let s = file.laboratory(&a.name)?;
    let sp = lookup_species(&s.species)?;
    let geo = ab_optimal_geometry(s.sphere_radius, s.source_density, s.hold_time).map_err(invalid)?;
    let phase = ab_phase(&geo.config, &sp).map_err(invalid)?;
    let (sys_mean, sys_std) = ab_position_systematic(s.sigma_x, s.sigma_r, s.sphere_radius);
    let k_eff = s.momentum_transfer as f64 * 2.0 * PI / s.wavelength;
    let model = NoiseModel::builtin(&s.noise_model).map_err(invalid)?;
    let vibration = vibration_phase_noise(&model, s.t0, s.t1, k_eff, (0.01, 1000.0)).map_err(invalid)?;
    let results = json!({
        "kind": "laboratory",
        "scenario": s,
        "optimal_separation": geo.config.separation,
        "optimal_center_spacing": geo.config.center_spacing,
        "ab_phase": phase,
        "position_systematic_mean": sys_mean,
        "position_systematic_std": sys_std,
        "k_eff": k_eff,
        "vibration_phase_rms": vibration,
        "runs_per_hour": 60.0 * s.repetitions_per_minute,
    });
    Ok(inputs.report("phase scenario", results))
}

fn kernel_dirac(a: &DiracArgs) -> Result<Output, CliError> {
    let v = parse_list(&a.metric, 16, "metric")?;
    let g: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j]));
    let m = MetricSample::new(g).map_err(invalid)?;
    let set = dirac_curved(&m).map_err(invalid)?;
    let d = set.dreibein;
    let results = json!({
        "m_bar_over_m": set.m_bar_over_m,
        "g0j_bar": set.g0j_bar,
        "dreibein": (0..3).map(|j| (0..3).map(|k| d[(j, k)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "curved_residual": curved_residual(&set, &m),
        "flat_residual": flat_residual(&dirac_flat()),
    });
    Ok(Inputs::of(a).report("kernel dirac", results))
}

fn kernel_propagate(a: &PropagateArgs) -> Result<Output, CliError> {
    if a.points < 16 || a.slices == 0 || !(a.sigma > 0.0) {
        return Err(invalid("need at least 16 points, at least one slice and sigma > 0"));
    }
    let mass = lookup_species(&a.species)?.mass;
    let sigma = a.sigma;
    // one spreading time: the free packet doubles its width
    let duration = 2.0 * mass * sigma * sigma / HBAR;
    let psi = WavePacket1D::gaussian(a.points, -25.0 * sigma, 25.0 * sigma, mass, -2.0 * sigma, sigma, 0.0);
    let grid = psi.grid();
    let u: Vec<f64> = match a.case {
        PacketCase::Free => vec![0.0; a.points],
        PacketCase::Linear => {
            let g = 4.0 * sigma / (duration * duration);
            grid.iter().map(|x| mass * g * x).collect()
        }
        PacketCase::Harmonic => {
            let w = 2.0 * PI / (4.0 * duration);
            grid.iter().map(|x| 0.5 * mass * w * w * x * x).collect()
        }
    };
    let h00 = h00_from_potential_energy(&u, mass);
    let pi = path_integral_propagate(&psi, &h00, duration, a.slices).map_err(propagation_error)?;
    let ss = splitstep_schrodinger(&psi, &u, duration, a.slices).map_err(propagation_error)?;
    let mut out = Inputs::of(a).report(
        "kernel propagate",
        json!({
            "duration": duration,
            "norm": pi.norm(),
            "centroid": pi.centroid(),
            "centroid_splitstep": ss.centroid(),
            "max_difference": pi.max_relative_difference(&ss),
            "file": if a.write { Value::String(packet_name(a.case)) } else { Value::Null },
        }),
    );
    if a.write {
        out.files.push((packet_name(a.case), packet_csv(&pi).into_bytes()));
    }
    Ok(out)
}

fn packet_name(case: PacketCase) -> String {
    let tag = match case {
        PacketCase::Free => "free",
        PacketCase::Linear => "linear",
        PacketCase::Harmonic => "harmonic",
    };
    format!("packet_{tag}.csv")
}

fn kernel_bragg(a: &BraggArgs) -> Result<Output, CliError> {
    let sp = lookup_species(&a.species)?;
    if !(a.wavelength > 0.0) {
        return Err(invalid("wavelength must be positive"));
    }
    let k = 2.0 * PI / a.wavelength;
    let pulse = BraggPulse::new(BraggPulse::peak_for_area(a.area, a.sigma), a.sigma, 0.0, a.order_truncation, k)
        .map_err(invalid)?;
    let v = a.velocity_recoils * HBAR * k / sp.mass;
    let out = bragg_pulse_evolve(&ladder_basis_state(a.order_truncation, 0), &pulse, sp.mass, v).map_err(runtime)?;
    let nmax = a.order_truncation as i64;
    let pops: Vec<Value> =
        (-nmax..=nmax).map(|n| json!({ "order": n, "population": population(&out, a.order_truncation, n) })).collect();
    let norm: f64 = out.iter().map(|c| c.norm_sqr()).sum();
    let mut res = Inputs::of(a).report(
        "kernel bragg",
        json!({
            "omega_r": recoil_frequency(&sp, k),
            "peak_rabi": pulse.two_photon_rabi_peak,
            "populations": pops,
            "norm": norm,
            "file": if a.write { Value::String("ladder.csv".into()) } else { Value::Null },
        }),
    );
    if a.write {
        res.files.push(("ladder.csv".into(), ladder_csv(&out).into_bytes()));
    }
    Ok(res)
}

fn penning_phase(a: &PenningPhaseArgs) -> Result<Output, CliError> {
    let p = single_phase(a.omega_r, a.t, a.k0_over_k, a.phi0, a.delta_z).map_err(penning_error)?;
    let wz = PI / (2.0 * a.t) + a.delta_z;
    let traj = single_phase_from_trajectories(a.omega_r, wz, a.t, a.k0_over_k, a.phi0);
    let results = json!({ "phase": p, "phase_from_trajectories": traj, "omega_z": wz });
    Ok(Inputs::of(a).report("penning phase", results))
}

fn penning_double(a: &PenningDoubleArgs) -> Result<Output, CliError> {
    let exact = double_diffraction_phase(a.omega_r, a.t, a.delta_z).map_err(penning_error)?;
    let results = json!({
        "phase": exact,
        "expansion": double_diffraction_expansion(a.omega_r, a.t, a.delta_z),
        "from_singles_first_order": double_from_singles(a.omega_r, a.t, 0.0, 0.0, a.delta_z).map_err(penning_error)?,
    });
    Ok(Inputs::of(a).report("penning double", results))
}

fn penning_optimum(a: &OptimumArgs) -> Result<Output, CliError> {
    let o = damping_optimum(a.omega_r, a.gamma).map_err(penning_error)?;
    let results = json!({
        "t": o.t,
        "omega_z": o.omega_z,
        "f_z": o.omega_z / (2.0 * PI),
        "phi_opt": o.phi_opt,
    });
    Ok(Inputs::of(a).report("penning optimum", results))
}

fn penning_budget(a: &PenningBudgetArgs) -> Result<Output, CliError> {
    let ep = ElectronParameters::builtin();
    let table_trap =
        TrapConfig { omega_z: ep.omega_z, d: ep.trap_size, d3: 0.0, d4: a.d4, gamma: ep.gamma, r_loss: ep.loss_resistance };
    table_trap.validate().map_err(penning_error)?;
    let v_r = HBAR * ep.wavenumber_k / M_E;
    let (gap, limit) = closure_gap_and_temperature(&table_trap, v_r, 0.0, ep.t, 0.0);
    let k = 2.0 * 2.0 * PI / a.wavelength;
    let trap = TrapConfig { omega_z: PI / (2.0 * a.t), d: a.trap_scale, d3: 0.0, d4: a.d4, gamma: 0.0, r_loss: 0.0 };
    let shift = anharmonic_shift(&trap, a.omega_r, a.t, k, 0.0, 0.0).map_err(penning_error)?;
    let phi0 = 8.0 * a.omega_r * a.t / PI;
    let results = json!({
        "table": ep,
        "phi0_computed": ep.phi0(),
        "closure_gap_at_rest": gap,
        "temperature_limit": match limit {
            TemperatureLimit::Kelvin(t) => json!(t),
            TemperatureLimit::NoConstraint => Value::Null,
        },
        "anharmonic_shift": shift,
        "anharmonic_ratio": shift / phi0,
        "weakly_perturbative": trap.weakly_perturbative(),
    });
    Ok(Inputs::of(a).report("penning budget", results))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn noise_integrate(a: &NoiseArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let model = match &a.models_file {
        Some(p) => NoiseModel::load_all(&inputs.read(p)?)
            .map_err(invalid)?
            .into_iter()
            .find(|m| m.name.eq_ignore_ascii_case(&a.model))
            .ok_or_else(|| CliError::Validation(format!("no model '{}' in {}", a.model, p.display())))?,
        None => NoiseModel::builtin(&a.model).map_err(invalid)?,
    };
    if !(a.wavelength > 0.0) {
        return Err(invalid("wavelength must be positive"));
    }
    let k_eff = a.photons as f64 * 2.0 * PI / a.wavelength;
    let phase = vibration_phase_noise(&model, a.t0, a.t1, k_eff, (a.f_lo, a.f_hi)).map_err(invalid)?;
    let name = format!("noise_{}.svg", model.name);
    let mut out = inputs.report(
        "noise integrate",
        json!({
            "model": model.name,
            "k_eff": k_eff,
            "phase_rms": phase,
            "file": if a.plot { Value::String(name.clone()) } else { Value::Null },
        }),
    );
    if a.plot {
        let freqs = log_grid(a.f_lo, a.f_hi, 2000);
        let psd: Vec<(f64, f64)> = freqs.iter().filter_map(|&f| model.amplitude(f).map(|v| (f, v))).collect();
        let sens: Vec<(f64, f64)> =
            freqs.iter().map(|&f| (f, sensitivity_function(a.t0, a.t1, 2.0 * PI * f).abs())).collect();
        let svg = noise_overlay(&psd, &sens, &model.name).map_err(runtime)?;
        out.files.push((name, svg.into_bytes()));
    }
    Ok(out)
}

fn allan(a: &AllanArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let cols = read_columns(&inputs.read(&a.input)?, &["t", "value"])?;
    let (t, y) = (&cols[0], &cols[1]);
    if t.len() < 3 {
        return Err(invalid("need at least three samples"));
    }
    let tau0 = t[1] - t[0];
    if !(tau0 > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - tau0).abs() > 1e-6 * tau0) {
        return Err(invalid("samples must be evenly spaced in increasing t"));
    }
    let taus = octave_taus(y.len(), tau0, a.min_bins);
    if taus.is_empty() {
        return Err(invalid("series too short for the requested number of bins"));
    }
    let points = allan_deviation(y, tau0, &taus).map_err(invalid)?;
    let slope = log_log_slope(&points, 0.0, f64::INFINITY);
    let mut out = inputs.report(
        "allan",
        json!({
            "tau0": tau0,
            "points": points.iter().map(|(t, s)| json!({ "tau": t, "adev": s })).collect::<Vec<_>>(),
            "log_log_slope": slope,
            "file": if a.plot { Value::String("allan.svg".into()) } else { Value::Null },
        }),
    );
    if a.plot {
        out.files.push(("allan.svg".into(), allan_plot(&points).map_err(runtime)?.into_bytes()));
    }
    Ok(out)
}

fn budget(a: &BudgetArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let b = match &a.file {
        Some(p) => ErrorBudget::from_toml_str(&inputs.read(p)?).map_err(invalid)?,
        None => ErrorBudget::builtin(&a.name).map_err(invalid)?,
    };
    let (offset, total) = budget_combine(&b).map_err(invalid)?;
    let results = json!({
        "name": b.name,
        "units": b.units.to_string(),
        "entries": b.entries,
        "offset": offset,
        "uncertainty": total,
    });
    Ok(inputs.report("budget", results))
}

fn frame(f: &FrameArgs) -> Result<LabFrame, CliError> {
    if !(0.0..=180.0).contains(&f.colatitude) {
        return Err(invalid("colatitude must lie in [0, 180] degrees"));
    }
    Ok(LabFrame::earth(f.colatitude.to_radians(), f.phase))
}

fn sme_synth(a: &SynthArgs) -> Result<Output, CliError> {
    let sigma: [f64; 7] = parse_list(&a.sigma, 7, "sigma")?.try_into().expect("length checked");
    let fr = frame(&a.frame)?;
    if !(a.cadence > 0.0 && a.duration > 0.0 && a.noise >= 0.0) {
        return Err(invalid("need cadence > 0, duration > 0 and noise >= 0"));
    }
    let times = fragmented_times(&[(a.start, a.duration)], a.cadence);
    let mut values = signal_from_sigma(&sigma, &fr, &times);
    // a clean signal gets unit weights
    let weight = if a.noise > 0.0 { a.noise } else { 1.0 };
    if a.noise > 0.0 {
        let normal = Normal::new(0.0, a.noise).map_err(invalid)?;
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    let rows: Vec<Vec<f64>> = times.iter().zip(&values).map(|(&t, &v)| vec![t, v, weight]).collect();
    Ok(Output { stdout: write_table(&["t", "value", "sigma"], &rows), files: Vec::new() })
}

fn fit_json(fit: &FitResult, names: &[&str]) -> Value {
    let se = fit.std_errors();
    let corr = fit.correlation();
    let n = names.len();
    json!({
        "parameters": (0..n).map(|i| json!({ "name": names[i], "estimate": fit.estimates[i], "sigma": se[i] })).collect::<Vec<_>>(),
        "correlation": (0..n).map(|i| (0..n).map(|j| corr[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "covariance": (0..n).map(|i| (0..n).map(|j| fit.covariance[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "chi2": fit.chi2,
        "dof": fit.dof,
        "condition": fit.condition,
    })
}

fn sme_fit(a: &FitArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let fr = frame(&a.frame)?;
    let cols = read_columns(&inputs.read(&a.input)?, &["t", "value", "sigma"])?;
    let samples: Vec<Sample> =
        (0..cols[0].len()).map(|i| Sample { t: cols[0][i], value: cols[1][i], sigma: cols[2][i] }).collect();
    let results = if a.fourier {
        fit_json(&fit_fourier_components(&samples, &fr).map_err(fit_error)?, &COMPONENT_NAMES)
    } else {
        fit_json(&fit_isotropy(&samples, &fr).map_err(fit_error)?, &SIGMA_NAMES)
    };
    Ok(inputs.report("sme fit", results))
}

fn sme_eep(a: &EepArgs) -> Result<Output, CliError> {
    let mut inputs = Inputs::of(a);
    let constraints = match &a.constraints {
        Some(p) => load_constraints(&inputs.read(p)?, &SpeciesRegistry::builtin()).map_err(invalid)?,
        None => builtin_constraints().map_err(invalid)?,
    };
    let labels: Vec<&str> = constraints.iter().map(|c| c.label.as_str()).collect();
    let results = match global_fit(&constraints) {
        Ok(f) => {
            let n = GLOBAL_NAMES.len();
            json!({
                "status": "ok",
                "constraints": labels,
                "parameters": (0..n).map(|i| json!({ "name": GLOBAL_NAMES[i], "estimate": f.estimates[i], "sigma": f.std_errors[i] })).collect::<Vec<_>>(),
                "correlation": (0..n).map(|i| (0..n).map(|j| f.correlation[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "chi2": f.chi2,
                "dof": f.dof,
                "condition": f.condition,
            })
        }
        // too few independent experiments is an answer, not a failure
        Err(FitError::RankDeficient { condition, null_space }) => json!({
            "status": "rank_deficient",
            "constraints": labels,
            "parameter_names": GLOBAL_NAMES,
            "condition": if condition.is_finite() { json!(condition) } else { Value::Null },
            "unconstrained_directions": null_space,
        }),
        Err(e) => return Err(fit_error(e)),
    };
    Ok(inputs.report("sme eep", results))
}

fn sme_reference() -> Result<Output, CliError> {
    let tables: Vec<Value> = reference_tables()
        .into_iter()
        .map(|t| {
            json!({
                "name": t.name,
                "description": t.description,
                "entries": t.entries.iter().map(|e| json!({ "name": e.name, "value": e.value, "sigma": e.sigma })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Inputs::of(&()).report("sme reference", json!({ "tables": tables })))
}
