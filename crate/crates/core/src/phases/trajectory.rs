//! Piecewise free-fall trajectories and the proper-time decomposition of a
//! clock-comparison interferometer into potential, time-dilation and laser
//! (kick) phases.

use crate::constants::C;
use crate::numeric::GaussLegendre;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PhaseError {
    #[error("trajectories do not close: position gap {dx:e} m, velocity gap {dv:e} m/s")]
    NotClosed { dx: f64, dv: f64 },
    #[error("time-dilation and laser phases do not cancel: residual {residual:e} rad of {scale:e} rad")]
    CancellationFailed { residual: f64, scale: f64 },
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
}

/// Velocity change applied at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kick {
    pub t: f64,
    pub dv: f64,
}

/// Uniformly accelerated motion along the beam axis, interrupted by velocity kicks.
/// Runs from `t = 0` to `t_end`; kicks at `t_end` count toward the final state.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseTrajectory {
    pub x0: f64,
    pub v0: f64,
    pub accel: f64,
    pub kicks: Vec<Kick>,
    pub t_end: f64,
}

impl PiecewiseTrajectory {
    pub fn new(x0: f64, v0: f64, accel: f64, mut kicks: Vec<Kick>, t_end: f64) -> Result<Self, PhaseError> {
        if !(t_end > 0.0) {
            return Err(PhaseError::InvalidTrajectory("end time must be positive".into()));
        }
        if kicks.iter().any(|k| k.t < 0.0 || k.t > t_end || !k.t.is_finite()) {
            return Err(PhaseError::InvalidTrajectory("kick outside [0, t_end]".into()));
        }
        kicks.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(PiecewiseTrajectory { x0, v0, accel, kicks, t_end })
    }

    /// Symmetric-or-not Mach-Zehnder pair. The upper arm is kicked by `+kick` at 0,
    /// `−kick` at `t_mirror_upper` and `+kick` at `t_end`; the lower arm by `+kick`
    /// at `t_end − t_mirror_upper`. Both arms close at `t_end`.
    pub fn mach_zehnder_pair(
        x0: f64,
        v_initial: f64,
        accel: f64,
        kick: f64,
        t_mirror_upper: f64,
        t_end: f64,
    ) -> Result<(Self, Self), PhaseError> {
        if !(t_mirror_upper > 0.0 && t_mirror_upper < t_end) {
            return Err(PhaseError::InvalidTrajectory("mirror time must lie inside (0, t_end)".into()));
        }
        let up = Self::new(
            x0,
            v_initial,
            accel,
            vec![
                Kick { t: 0.0, dv: kick },
                Kick { t: t_mirror_upper, dv: -kick },
                Kick { t: t_end, dv: kick },
            ],
            t_end,
        )?;
        let low = Self::new(
            x0,
            v_initial,
            accel,
            vec![Kick { t: t_end - t_mirror_upper, dv: kick }],
            t_end,
        )?;
        Ok((up, low))
    }

    /// Position and velocity just before time `t` (kicks at `t` not yet applied).
    pub fn state_before(&self, t: f64) -> (f64, f64) {
        let mut x = self.x0;
        let mut v = self.v0;
        let mut tc = 0.0;
        for k in self.kicks.iter().filter(|k| k.t < t) {
            let dt = k.t - tc;
            x += v * dt + 0.5 * self.accel * dt * dt;
            v += self.accel * dt + k.dv;
            tc = k.t;
        }
        let dt = t - tc;
        (x + v * dt + 0.5 * self.accel * dt * dt, v + self.accel * dt)
    }

    pub fn position(&self, t: f64) -> f64 {
        self.state_before(t).0
    }

    /// Velocity with kicks at times `≤ t` applied.
    pub fn velocity_after(&self, t: f64) -> f64 {
        let (_, v) = self.state_before(t);
        v + self.kicks.iter().filter(|k| k.t == t).map(|k| k.dv).sum::<f64>()
    }

    /// Position and velocity at `t_end` after the final kicks.
    pub fn final_state(&self) -> (f64, f64) {
        (self.position(self.t_end), self.velocity_after(self.t_end))
    }

    /// Kick positions `x(t_i)`, in time order.
    pub fn turning_points(&self) -> Vec<f64> {
        self.kicks.iter().map(|k| self.position(k.t)).collect()
    }
}

/// `v_u(t) − v_l(t)`, with kicks at `t` included when `inclusive`.
fn velocity_difference(upper: &PiecewiseTrajectory, lower: &PiecewiseTrajectory, t: f64, inclusive: bool) -> f64 {
    let kicks = |tr: &PiecewiseTrajectory| -> f64 {
        tr.kicks.iter().filter(|k| k.t < t || (inclusive && k.t == t)).map(|k| k.dv).sum()
    };
    (upper.v0 - lower.v0) + (upper.accel - lower.accel) * t + (kicks(upper) - kicks(lower))
}

/// Potential, time-dilation and laser contributions to a clock-comparison phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockDecomposition {
    pub phi_u: f64,
    pub phi_td: f64,
    pub phi_i: f64,
    pub total: f64,
}

/// Closure tolerance, relative to the trajectory scale.
const CLOSURE_TOL: f64 = 1e-9;
/// Cancellation tolerance of `φ_TD + φ_I`, relative to `|φ_TD|`.
const CANCEL_TOL: f64 = 1e-12;

/// Decompose the phase difference between `upper` and `lower` for a clock of angular
/// frequency `omega_clock` moving in the potential `potential` [J/kg]:
///
/// * `φ_U  = −(ω/c²) ∫ [U(x_up) − U(x_low)] dt`
/// * `φ_TD = +(ω/2c²) ∫ (v_up² − v_low²) dt`
/// * `φ_I  = (ω/c²) [Σ_up Δv x − Σ_low Δv x]`, the laser phase of the kicks.
///
/// For the kick structure of `mach_zehnder_pair`, `φ_TD + φ_I = 0`, which is verified.
pub fn clock_comparison_decompose_in<F: Fn(f64) -> f64>(
    upper: &PiecewiseTrajectory,
    lower: &PiecewiseTrajectory,
    omega_clock: f64,
    potential: F,
) -> Result<ClockDecomposition, PhaseError> {
    if (upper.t_end - lower.t_end).abs() > 1e-15 * upper.t_end {
        return Err(PhaseError::InvalidTrajectory("arms must share the end time".into()));
    }
    let t_end = upper.t_end;
    let (xu, vu) = upper.final_state();
    let (xl, vl) = lower.final_state();
    let kick_scale = upper
        .kicks
        .iter()
        .chain(&lower.kicks)
        .fold(0.0f64, |m, k| m.max(k.dv.abs()));
    let vscale = kick_scale.max(vu.abs()).max(1e-300);
    let xscale = (vscale * t_end).max(xu.abs()).max(1e-300);
    let (dx, dv) = (xu - xl, vu - vl);
    if dx.abs() > CLOSURE_TOL * xscale || dv.abs() > CLOSURE_TOL * vscale {
        return Err(PhaseError::NotClosed { dx, dv });
    }

    let w = omega_clock / (C * C);
    let mut times: Vec<f64> = vec![0.0, t_end];
    times.extend(upper.kicks.iter().chain(&lower.kicks).map(|k| k.t));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * t_end);

    let gl = GaussLegendre::new(24);
    let mut int_u = 0.0;
    let mut int_v2 = 0.0;
    for win in times.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b <= a {
            continue;
        }
        // arm velocity sum and difference just after a and just before b; the
        // difference comes from the kicks directly so it keeps full precision when
        // the common motion is much faster than the recoil
        let sa = upper.velocity_after(a) + lower.velocity_after(a);
        let sb = upper.state_before(b).1 + lower.state_before(b).1;
        let da = velocity_difference(upper, lower, a, true);
        let db = velocity_difference(upper, lower, b, false);
        // Δv·Σv is quadratic on the segment: Simpson is exact
        int_v2 += (b - a) / 6.0 * (da * sa + (da + db) * (sa + sb) + db * sb);
        int_u += gl.integrate(|t| potential(upper.position(t)) - potential(lower.position(t)), a, b, 4);
    }
    let phi_u = -w * int_u;
    let phi_td = 0.5 * w * int_v2;
    let x_ref = upper.x0;
    let kick_sum = |tr: &PiecewiseTrajectory| -> f64 {
        tr.kicks.iter().map(|k| k.dv * (tr.position(k.t) - x_ref)).sum()
    };
    let phi_i = w * (kick_sum(upper) - kick_sum(lower));

    let residual = phi_td + phi_i;
    let scale = phi_td.abs().max(phi_i.abs());
    if residual.abs() > CANCEL_TOL * scale.max(f64::MIN_POSITIVE) && residual.abs() > 0.0 {
        return Err(PhaseError::CancellationFailed { residual, scale });
    }
    Ok(ClockDecomposition { phi_u, phi_td, phi_i, total: phi_u + phi_td + phi_i })
}

/// Decomposition in the uniform field of the trajectories, `U(x) = −a x`.
pub fn clock_comparison_decompose(
    upper: &PiecewiseTrajectory,
    lower: &PiecewiseTrajectory,
    omega_clock: f64,
) -> Result<ClockDecomposition, PhaseError> {
    if upper.accel != lower.accel {
        return Err(PhaseError::InvalidTrajectory("arms must share the acceleration".into()));
    }
    let a = upper.accel;
    clock_comparison_decompose_in(upper, lower, omega_clock, |x| -a * x)
}
