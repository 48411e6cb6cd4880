//! Residual checks of the field equations on sample grids.
//!
//! Every check evaluates a residual pointwise, skips points where a field
//! cannot be evaluated (domain holes, amplitude zeros), and compares the
//! largest residual, divided by a stated scale, against a tolerance.

use serde::Serialize;

use crate::amplitude::{centred_d1, AmplitudeField, Axis, FieldKind, PhaseField, Point};
use crate::error::{Error, Result};
use crate::geometry::{bh_metric, conformal_metric_exp, y_to_x, z_to_y};
use crate::params::ModelParams;
use crate::quantum::{quantum_potential, QMode, QuantumPotentialField};
use crate::scalar::{lit, Interval, Scalar};
use crate::static_model::{nonlinear_terms, GFunction};

/// Tolerance for checks that use analytic derivatives.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Tolerance for checks that rely on finite differences.
pub const FD_TOL: f64 = 1e-6;
/// Tolerance for the centred-difference slope of `Q`.
pub const SLOPE_TOL: f64 = 1e-8;
/// Largest skipped fraction before a check refuses to report.
pub const MAX_SKIPPED_FRACTION: f64 = 0.2;
/// Normalised residual regarded as round-off.
pub const FLOOR: f64 = 1e-12;
/// Default grid size.
pub const DEFAULT_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationId {
    /// `(∂₁S)² + (∂₂S)² = 2m²c² − Q`.
    HamiltonJacobi,
    /// `∂₁(R²∂₁S) + ∂₂(R²∂₂S) = 0`.
    Continuity,
    /// `R'' + (K + 2Mm²c²z/ħ²) R = 0`.
    AiryOde,
    /// `dQ/dz = 4Mm²c²`.
    QSlope,
    /// Nonlinear `R²` equation of the static model.
    NonlinearAmplitude,
    /// `2(G/R²)² = 2m²c² − Q`.
    ChainIdentity,
    /// Conformal metric pushed through `z → y → x` against `−α dt² + dx²/α`.
    MetricChain,
}

/// Uniform sample grid on `[lo, hi]`. Two-particle checks evaluate at
/// `(s, x2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub lo: T,
    pub hi: T,
    pub n: usize,
    pub x2: T,
}

impl<T: Scalar> Grid<T> {
    pub fn new(lo: T, hi: T, n: usize) -> Self {
        Self { lo, hi, n, x2: T::zero() }
    }

    /// Default-sized grid on `window ∩ domain`, pulled `1e-9·width` inside
    /// open domain ends.
    pub fn clipped(window: Interval<T>, domain: Option<Interval<T>>, n: usize) -> Result<Self> {
        let d = domain.unwrap_or_else(Interval::whole_line);
        let iv = window.intersect(&d).ok_or_else(|| Error::Precondition("window misses the field domain".into()))?;
        let pad = lit::<T>(1e-9) * iv.width();
        let lo = if iv.lo == d.lo && d.lo.is_finite() { iv.lo + pad } else { iv.lo };
        let hi = if iv.hi == d.hi && d.hi.is_finite() { iv.hi - pad } else { iv.hi };
        Ok(Self::new(lo, hi, n))
    }

    pub fn spacing(&self) -> T {
        if self.n < 2 {
            T::zero()
        } else {
            (self.hi - self.lo) / T::from_usize(self.n - 1).unwrap()
        }
    }

    pub fn point(&self, i: usize) -> T {
        if i + 1 == self.n && self.n > 1 {
            self.hi
        } else {
            self.lo + self.spacing() * T::from_usize(i).unwrap()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    pub fn plane(&self, s: T) -> Point<T> {
        [s, self.x2]
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary { lo: self.lo.as_f64(), hi: self.hi.as_f64(), count: self.n, spacing: self.spacing().as_f64() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub equation: EquationId,
    pub grid: GridSummary,
    pub max_residual: f64,
    pub rms_residual: f64,
    pub normalization: f64,
    pub normalized_max: f64,
    pub passed: bool,
    pub tolerance: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

impl ResidualReport {
    /// Same report judged against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.normalized_max <= tolerance;
        self
    }
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::Domain { .. } | Error::Singular { .. })
}

/// Collects residuals and the running scale for one check.
struct Tally {
    residuals: Vec<f64>,
    scale: f64,
    skipped: usize,
}

impl Tally {
    fn new() -> Self {
        Self { residuals: Vec::new(), scale: 0.0, skipped: 0 }
    }

    /// Records `Ok((residual, scale_candidate))`, skips domain failures.
    fn push<T: Scalar>(&mut self, r: Result<(T, T)>) -> Result<()> {
        match r {
            Ok((res, scale)) => {
                self.residuals.push(res.as_f64().abs());
                self.scale = self.scale.max(scale.as_f64().abs());
                Ok(())
            }
            Err(e) if skippable(&e) => {
                self.skipped += 1;
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn finish(self, equation: EquationId, grid: GridSummary, normalization: Option<f64>, tolerance: f64) -> Result<ResidualReport> {
        let total = self.residuals.len() + self.skipped;
        if total == 0 || self.residuals.is_empty() || self.skipped as f64 > MAX_SKIPPED_FRACTION * total as f64 {
            return Err(Error::Coverage { skipped: self.skipped, total });
        }
        let max = self.residuals.iter().fold(0.0f64, |a, r| a.max(*r));
        let rms = (self.residuals.iter().map(|r| r * r).sum::<f64>() / self.residuals.len() as f64).sqrt();
        let norm = normalization.unwrap_or(self.scale);
        let normalized_max = if max == 0.0 {
            0.0
        } else if norm > 0.0 {
            max / norm
        } else {
            f64::INFINITY
        };
        Ok(ResidualReport {
            equation,
            grid,
            max_residual: max,
            rms_residual: rms.min(max),
            normalization: norm,
            normalized_max,
            passed: normalized_max <= tolerance,
            tolerance,
            evaluated: self.residuals.len(),
            skipped: self.skipped,
        })
    }
}

/// Static reduction of the Hamilton–Jacobi equation,
/// `(∂₁S)² + (∂₂S)² − 2m²c²(1 − Q/2m²c²)`, with `Q` in the two-particle-sum
/// mode. Normalised by `2m²c²`.
pub fn check_hamilton_jacobi<T: Scalar>(ampl: &AmplitudeField<T>, phase: &PhaseField<T>, p: &ModelParams<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    let q = quantum_potential(ampl, QMode::TwoParticleSum, p);
    let q0 = p.q0();
    let mut t = Tally::new();
    for s in grid.points() {
        let x = grid.plane(s);
        t.push((|| {
            let (a, b) = (phase.grad(Axis::X1, x)?, phase.grad(Axis::X2, x)?);
            Ok((a * a + b * b - (q0 - q.eval(x)?), T::zero()))
        })())?;
    }
    t.finish(EquationId::HamiltonJacobi, grid.summary(), Some(q0.as_f64()), ANALYTIC_TOL)
}

/// `∂₁(R²∂₁S) + ∂₂(R²∂₂S)` by fourth-order centred differences of the flux
/// with step `1e-4·(grid width)`. Normalised by `max|R²∂₁S|`.
pub fn check_continuity<T: Scalar>(ampl: &AmplitudeField<T>, phase: &PhaseField<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    let width = (grid.hi - grid.lo).abs();
    let h = lit::<T>(1e-4) * if width > T::zero() { width } else { T::one() };
    let flux = |axis: Axis, x: Point<T>| -> Result<T> {
        let r = ampl.value(x)?;
        Ok(r * r * phase.grad(axis, x)?)
    };
    let mut t = Tally::new();
    for s in grid.points() {
        let x = grid.plane(s);
        t.push((|| {
            let f1 = |v: T| flux(Axis::X1, [v, x[1]]);
            let f2 = |v: T| flux(Axis::X2, [x[0], v]);
            let div = centred_d1(&f1, x[0], h)? + centred_d1(&f2, x[1], h)?;
            Ok((div, flux(Axis::X1, x)?))
        })())?;
    }
    t.finish(EquationId::Continuity, grid.summary(), None, FD_TOL)
}

/// `R'' + (K + 2Mm²c²z/ħ²) R`, normalised by `max|R|`. Sampled fields are
/// held to [`FD_TOL`], all others to [`ANALYTIC_TOL`].
pub fn check_airy_ode<T: Scalar>(ampl: &AmplitudeField<T>, p: &ModelParams<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    if ampl.profile().is_none() {
        return Err(Error::Precondition("Airy equation check needs a one-coordinate field".into()));
    }
    let slope = lit::<T>(2.0) * p.big_m * p.mc_sq() / (p.hbar * p.hbar);
    let mut t = Tally::new();
    for z in grid.points() {
        t.push((|| {
            let r = ampl.value_at(z)?;
            Ok((ampl.d2_at(z)? + (p.k_const + slope * z) * r, r))
        })())?;
    }
    let tol = if ampl.kind() == FieldKind::Sampled { FD_TOL } else { ANALYTIC_TOL };
    t.finish(EquationId::AiryOde, grid.summary(), None, tol)
}

/// Centred difference of `Q` on the grid minus `4Mm²c²`, normalised by
/// `4|M|m²c²`. Needs three or more points.
pub fn check_q_slope<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    if grid.n < 3 {
        return Err(Error::Coverage { skipped: grid.n, total: grid.n });
    }
    let expected = lit::<T>(4.0) * p.big_m * p.mc_sq();
    let two_h = lit::<T>(2.0) * grid.spacing();
    let mut t = Tally::new();
    for i in 1..grid.n - 1 {
        t.push((|| {
            let d = (q.eval_at(grid.point(i + 1))? - q.eval_at(grid.point(i - 1))?) / two_h;
            Ok((d - expected, T::zero()))
        })())?;
    }
    t.finish(EquationId::QSlope, grid.summary(), Some(expected.as_f64().abs()), SLOPE_TOL)
}

/// Nonlinear `R²` equation along `u`, normalised by its largest term.
pub fn check_nonlinear<T: Scalar>(ampl: &AmplitudeField<T>, g: &GFunction<T>, p: &ModelParams<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    let mut t = Tally::new();
    for u in grid.points() {
        t.push(nonlinear_terms(ampl, g, p, u).map(|n| (n.residual, n.scale)))?;
    }
    t.finish(EquationId::NonlinearAmplitude, grid.summary(), None, ANALYTIC_TOL)
}

/// `2(G/R²)² − (2m²c² − Q)` with `Q` in the two-particle-sum mode,
/// normalised by `2m²c²`.
pub fn check_chain<T: Scalar>(ampl: &AmplitudeField<T>, g: &GFunction<T>, p: &ModelParams<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    let q = quantum_potential(ampl, QMode::TwoParticleSum, p);
    let q0 = p.q0();
    let two = lit::<T>(2.0);
    let mut t = Tally::new();
    for u in grid.points() {
        t.push((|| {
            let r_sq = ampl.value_sq_at(u)?;
            if !ampl.in_domain_at(u) {
                return Err(Error::Singular { at: u.as_f64(), nearest_zero: None });
            }
            Ok((two * g.g_sq(u)? / (r_sq * r_sq) - (q0 - q.eval_at(u)?), T::zero()))
        })())?;
    }
    t.finish(EquationId::ChainIdentity, grid.summary(), Some(q0.as_f64()), ANALYTIC_TOL)
}

/// Pushes the exponential conformal metric of `q` through `z → y → x` and
/// compares both components with `−α dt² + dx²/α` at the grid's `x` values.
/// Absolute residual (normalisation 1).
pub fn check_metric_chain<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>, z_window: Interval<T>, grid: &Grid<T>) -> Result<ResidualReport> {
    let chain = conformal_metric_exp(q, p).pushforward(&z_to_y(q, p, z_window)?)?.pushforward(&y_to_x(p)?)?;
    let bh = bh_metric(p);
    let mut t = Tally::new();
    for x in grid.points() {
        t.push((|| {
            let (a, b) = chain.components(x)?;
            let (c, d) = bh.components(x)?;
            Ok(((a - c).abs().max((b - d).abs()), T::zero()))
        })())?;
    }
    t.finish(EquationId::MetricChain, grid.summary(), Some(1.0), ANALYTIC_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    /// Least-squares slope of `log(residual)` against `log(h)`.
    Order(f64),
    /// Some residual is already at round-off; no slope is meaningful.
    FloorReached,
}

impl Convergence {
    pub fn order(self) -> Option<f64> {
        match self {
            Convergence::Order(s) => Some(s),
            Convergence::FloorReached => None,
        }
    }
}

/// Observed order of a finite-difference check over geometrically spaced steps.
pub fn convergence_order<F>(mut check: F, steps: &[f64]) -> Result<Convergence>
where
    F: FnMut(f64) -> Result<ResidualReport>,
{
    if steps.len() < 3 {
        return Err(Error::Precondition("convergence order needs at least three step sizes".into()));
    }
    let mut pts = Vec::with_capacity(steps.len());
    for &h in steps {
        let r = check(h)?;
        if r.normalized_max <= FLOOR {
            return Ok(Convergence::FloorReached);
        }
        pts.push((h.ln(), r.normalized_max.ln()));
    }
    Ok(Convergence::Order(least_squares_slope(&pts)))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
