//! Guidance-equation trajectories `dxᵢ/dλ = ∂ᵢS / m`.
//!
//! `λ` is an affine parameter, not proper time. Surfaces where the phase
//! gradient is singular (`R² = 0`) are treated as impenetrable.

use serde::Serialize;

use crate::amplitude::{Axis, PhaseField, Point};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    /// Came within `1e-6` (relative) of a singular surface.
    Boundary,
    /// The step size underflowed next to a point the field cannot evaluate.
    Singular,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest accepted scaled error estimate (≤ 1 by construction).
    pub max_error_estimate: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPair<T> {
    pub lambda: Vec<T>,
    pub x1: Vec<T>,
    pub x2: Vec<T>,
    pub p1: Vec<T>,
    pub p2: Vec<T>,
    pub stats: IntegratorStats,
    pub stop: StopReason,
}

impl<T: Scalar> TrajectoryPair<T> {
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    fn push(&mut self, lambda: T, x: Point<T>, p: Point<T>) {
        self.lambda.push(lambda);
        self.x1.push(x[0]);
        self.x2.push(x[1]);
        self.p1.push(p[0]);
        self.p2.push(p[1]);
    }
}

/// Relative distance to a singular surface below which integration stops.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

// Dormand–Prince 5(4) tableau; the field is autonomous so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn momentum<T: Scalar>(phase: &PhaseField<T>, x: Point<T>) -> Result<Point<T>> {
    Ok([phase.grad(Axis::X1, x)?, phase.grad(Axis::X2, x)?])
}

fn near_boundary<T: Scalar>(phase: &PhaseField<T>, x: Point<T>) -> bool {
    let scale = T::one().max(x[0].abs()).max(x[1].abs());
    phase.boundary_distance(x).is_some_and(|d| d < lit::<T>(BOUNDARY_MARGIN) * scale)
}

/// Integrates from `λ = 0` to `λ = span` with local error `≤ tol·(1 + |x|)`
/// per step, recording every accepted step.
pub fn integrate_pair<T: Scalar>(phase: &PhaseField<T>, start: Point<T>, span: T, p: &ModelParams<T>, tol: T) -> Result<TrajectoryPair<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let inv_m = T::one() / p.m;
    let p0 = momentum(phase, start)?;
    let mut out = TrajectoryPair {
        lambda: Vec::new(),
        x1: Vec::new(),
        x2: Vec::new(),
        p1: Vec::new(),
        p2: Vec::new(),
        stats: IntegratorStats { evaluations: 1, min_step: f64::INFINITY, ..Default::default() },
        stop: StopReason::Completed,
    };
    out.push(T::zero(), start, p0);
    if near_boundary(phase, start) {
        out.stop = StopReason::Boundary;
        return Ok(out);
    }
    if span == T::zero() {
        return Ok(out);
    }

    let dir = span.signum();
    let (mut lam, mut x, mut k0) = (T::zero(), start, [p0[0] * inv_m, p0[1] * inv_m]);
    let mut h = span.abs() * lit(1e-3);
    let min_h = lit::<T>(1e-14) * (T::one() + span.abs());

    while (span - lam) * dir > T::zero() {
        h = h.min((span - lam).abs());
        if h < min_h {
            out.stop = StopReason::Singular;
            break;
        }
        let hs = h * dir;
        let mut k = [[T::zero(); 2]; 7];
        k[0] = k0;
        let mut failed = false;
        for s in 1..7 {
            let mut y = x;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = lit::<T>(A[s][j]);
                y[0] = y[0] + hs * a * kj[0];
                y[1] = y[1] + hs * a * kj[1];
            }
            out.stats.evaluations += 1;
            match momentum(phase, y) {
                Ok(m) => k[s] = [m[0] * inv_m, m[1] * inv_m],
                Err(Error::Domain { .. } | Error::Singular { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            out.stats.rejected += 1;
            h = h * lit(0.25);
            continue;
        }
        // The last stage sits at the fifth-order solution.
        let mut y = x;
        let mut err = [T::zero(); 2];
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = lit::<T>(A[6][j]);
            y[0] = y[0] + hs * b * kj[0];
            y[1] = y[1] + hs * b * kj[1];
        }
        for (j, kj) in k.iter().enumerate() {
            let e = lit::<T>(E[j]);
            err[0] = err[0] + hs * e * kj[0];
            err[1] = err[1] + hs * e * kj[1];
        }
        let sc = |i: usize| tol * (T::one() + x[i].abs().max(y[i].abs()));
        let norm = (err[0].abs() / sc(0)).max(err[1].abs() / sc(1));
        if norm <= T::one() {
            lam = if (span - (lam + hs)) * dir < min_h { span } else { lam + hs };
            x = y;
            k0 = k[6];
            out.stats.accepted += 1;
            out.stats.max_error_estimate = out.stats.max_error_estimate.max(norm.as_f64());
            out.stats.min_step = out.stats.min_step.min(h.as_f64());
            out.push(lam, x, [k0[0] * p.m, k0[1] * p.m]);
            if near_boundary(phase, x) {
                out.stop = StopReason::Boundary;
                break;
            }
        } else {
            out.stats.rejected += 1;
        }
        let factor = if norm == T::zero() { lit(5.0) } else { lit::<T>(0.9) * norm.powf(lit(-0.2)) };
        h = h * factor.max(lit(0.2)).min(lit(5.0));
    }
    Ok(out)
}

/// `(max|u(λ) − u(0)|, max|p₁ + p₂|)` with `u = x₁ + x₂`.
pub fn epr_drift<T: Scalar>(traj: &TrajectoryPair<T>) -> (T, T) {
    let u0 = traj.x1[0] + traj.x2[0];
    let mut du = T::zero();
    let mut dp = T::zero();
    for i in 0..traj.len() {
        du = du.max((traj.x1[i] + traj.x2[i] - u0).abs());
        dp = dp.max((traj.p1[i] + traj.p2[i]).abs());
    }
    (du, dp)
}
