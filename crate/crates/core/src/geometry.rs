//! Conformal effective metrics, the `z → y → x` coordinate chain, and the
//! two-dimensional black-hole metric `−α dt² + dx²/α`, `α = 2M|x| − C`.
//!
//! Signature is `(−, +)` throughout.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quantum::QuantumPotentialField;
use crate::roots::{brent, sign_change_brackets};
use crate::scalar::{lit, Interval, Scalar};

pub type CoordFn<T> = Arc<dyn Fn(T) -> Result<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coords {
    ZConformal,
    YConformal,
    XBh,
}

/// Static 1+1 metric `g_tt dt² + g_xx dx²`.
#[derive(Clone)]
pub struct Metric2D<T: Scalar> {
    g_tt: CoordFn<T>,
    g_xx: CoordFn<T>,
    pub coords: Coords,
    /// Where a component vanishes or diverges.
    pub singular_points: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Metric2D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric2D").field("coords", &self.coords).field("singular_points", &self.singular_points).finish()
    }
}

impl<T: Scalar> Metric2D<T> {
    pub fn new(g_tt: CoordFn<T>, g_xx: CoordFn<T>, coords: Coords, singular_points: Vec<T>) -> Self {
        Self { g_tt, g_xx, coords, singular_points }
    }

    /// `Ω²(−dt² + dx²)` from a conformal factor.
    pub fn conformal(omega_sq: CoordFn<T>, coords: Coords, singular_points: Vec<T>) -> Self {
        let o = omega_sq.clone();
        Self::new(Arc::new(move |x| Ok(-o(x)?)), omega_sq, coords, singular_points)
    }

    pub fn g_tt(&self, x: T) -> Result<T> {
        (self.g_tt)(x)
    }

    pub fn g_xx(&self, x: T) -> Result<T> {
        (self.g_xx)(x)
    }

    pub fn components(&self, x: T) -> Result<(T, T)> {
        Ok((self.g_tt(x)?, self.g_xx(x)?))
    }

    /// Re-expresses the metric in the map's target coordinate:
    /// `g_tt` is a scalar under spatial maps, `g_xx` picks up `(da/db)²`.
    pub fn pushforward(&self, map: &CoordinateMap<T>) -> Result<Self> {
        if map.from != self.coords {
            return Err(Error::Precondition(format!("map expects {:?} coordinates, metric is in {:?}", map.from, self.coords)));
        }
        let (tt, xx) = (self.g_tt.clone(), self.g_xx.clone());
        let (inv_a, inv_b) = (map.inverse.clone(), map.inverse.clone());
        let jac = map.jacobian.clone();
        let singular_points = self.singular_points.iter().filter_map(|a| map.forward(*a).ok()).collect();
        Ok(Self {
            g_tt: Arc::new(move |b| tt(inv_a(b)?)),
            g_xx: Arc::new(move |b| {
                let a = inv_b(b)?;
                let j = jac(a)?;
                Ok(xx(a)? / (j * j))
            }),
            coords: map.to,
            singular_points,
        })
    }
}

/// Invertible spatial coordinate change `a ↦ b` with `db/da`.
#[derive(Clone)]
pub struct CoordinateMap<T: Scalar> {
    pub from: Coords,
    pub to: Coords,
    forward: CoordFn<T>,
    inverse: CoordFn<T>,
    jacobian: CoordFn<T>,
}

impl<T: Scalar> fmt::Debug for CoordinateMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoordinateMap({:?} -> {:?})", self.from, self.to)
    }
}

impl<T: Scalar> CoordinateMap<T> {
    pub fn new(from: Coords, to: Coords, forward: CoordFn<T>, inverse: CoordFn<T>, jacobian: CoordFn<T>) -> Self {
        Self { from, to, forward, inverse, jacobian }
    }

    pub fn forward(&self, a: T) -> Result<T> {
        (self.forward)(a)
    }

    pub fn inverse(&self, b: T) -> Result<T> {
        (self.inverse)(b)
    }

    /// `db/da` at `a`.
    pub fn jacobian(&self, a: T) -> Result<T> {
        (self.jacobian)(a)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CoordinateMap<T>) -> Result<Self> {
        if next.from != self.to {
            return Err(Error::Precondition(format!("cannot compose {:?} -> {:?} with {:?} -> {:?}", self.from, self.to, next.from, next.to)));
        }
        let (f1, f2) = (self.forward.clone(), next.forward.clone());
        let (i1, i2) = (self.inverse.clone(), next.inverse.clone());
        let (j1, j2, f3) = (self.jacobian.clone(), next.jacobian.clone(), self.forward.clone());
        Ok(Self {
            from: self.from,
            to: next.to,
            forward: Arc::new(move |a| f2(f1(a)?)),
            inverse: Arc::new(move |c| i1(i2(c)?)),
            jacobian: Arc::new(move |a| Ok(j1(a)? * j2(f3(a)?)?)),
        })
    }
}

/// `Q` along the one-dimensional model coordinate.
fn q_line<T: Scalar>(q: &QuantumPotentialField<T>, s: T) -> Result<T> {
    match q.source().reduction() {
        Some(_) => q.eval_at(s),
        None => q.eval([s, T::zero()]),
    }
}

/// Points in `scan` where `f` vanishes: exact zeros at the `n + 1` nodes and
/// Brent-refined sign changes between them. Failed evaluations are skipped.
fn scan_zeros<T: Scalar>(f: impl Fn(T) -> Result<T>, scan: Interval<T>, n: usize) -> Vec<T> {
    let g = |x: T| f(x).unwrap_or(T::nan());
    let mut out = Vec::new();
    for (a, b) in sign_change_brackets(g, scan.lo, scan.hi, n) {
        if g(a) == T::zero() {
            out.push(a);
        } else if g(b) == T::zero() {
            out.push(b);
        } else if let Ok(r) = brent(g, a, b, lit::<T>(1e-14) * (T::one() + a.abs()), 200) {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// Cells used when scanning for sign changes of `Ω²` and `α`.
pub const SCAN_CELLS: usize = 400;

/// `Ω² = 1 − Q/2m²c²` as a function of the model coordinate.
pub fn omega_sq_linear<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>) -> CoordFn<T> {
    let (q, q0) = (q.clone(), p.q0());
    Arc::new(move |z| Ok((q0 - q_line(&q, z)?) / q0))
}

/// `Ω² = exp(−Q/2m²c²)`.
pub fn omega_sq_exp<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>) -> CoordFn<T> {
    let (q, q0) = (q.clone(), p.q0());
    Arc::new(move |z| Ok((-q_line(&q, z)? / q0).exp()))
}

/// Linear conformal metric. Zeros of `Ω²` inside `scan` (entry into the
/// tachyonic regime) are recorded as singular points.
pub fn conformal_metric_linear<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>, scan: Interval<T>) -> Metric2D<T> {
    let omega = omega_sq_linear(q, p);
    let zeros = scan_zeros(|z| omega(z), scan, SCAN_CELLS);
    Metric2D::conformal(omega, Coords::ZConformal, zeros)
}

/// Exponential conformal metric; `Ω² > 0` everywhere.
pub fn conformal_metric_exp<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>) -> Metric2D<T> {
    Metric2D::conformal(omega_sq_exp(q, p), Coords::ZConformal, Vec::new())
}

fn require_big_m<T: Scalar>(p: &ModelParams<T>) -> Result<()> {
    if p.big_m == T::zero() {
        return Err(Error::DegenerateParameter("M = 0"));
    }
    Ok(())
}

/// `y = −Q(z)/(4Mm²c²)`.
///
/// For the Airy field in the reduced mode `Q` is affine and the inverse is
/// closed-form; otherwise `Q` must be strictly monotone on `window`, which
/// then bounds the inverse.
pub fn z_to_y<T: Scalar>(q: &QuantumPotentialField<T>, p: &ModelParams<T>, window: Interval<T>) -> Result<CoordinateMap<T>> {
    require_big_m(p)?;
    let scale = lit::<T>(4.0) * p.big_m * p.mc_sq();
    let (qf, qj) = (q.clone(), q.clone());
    let forward: CoordFn<T> = Arc::new(move |z| Ok(-q_line(&qf, z)? / scale));
    let jacobian: CoordFn<T> = Arc::new(move |z| Ok(-qj.derivative_at(z)? / scale));

    let affine = q.source().kind() == crate::amplitude::FieldKind::Airy && q.mode() == crate::quantum::QMode::EprReduced;
    let inverse: CoordFn<T> = if affine {
        let shift = p.hbar * p.hbar * p.k_const / (lit::<T>(2.0) * p.big_m * p.mc_sq());
        // y = j·(z + shift) with constant j = dy/dz.
        let factor = jacobian(T::zero())?;
        Arc::new(move |y| Ok(y / factor - shift))
    } else {
        let n = 256;
        let step = window.width() / T::from_usize(n).unwrap();
        let mut sign = None;
        let mut run_start = window.lo;
        for i in 0..=n {
            let z = window.lo + step * T::from_usize(i).unwrap();
            let d = jacobian(z)?;
            let s = d.signum();
            if d == T::zero() || sign.is_some_and(|prev: T| prev != s) {
                return Err(Error::NonInvertible { lo: run_start.as_f64(), hi: z.as_f64() });
            }
            if sign.is_none() {
                run_start = z;
            }
            sign = Some(s);
        }
        let f = forward.clone();
        Arc::new(move |y| {
            let g = |z: T| f(z).map(|v| v - y).unwrap_or(T::nan());
            let (a, b) = (g(window.lo), g(window.hi));
            if a * b > T::zero() {
                return Err(Error::Domain { what: "y outside the image of the window", at: y.as_f64(), lo: window.lo.as_f64(), hi: window.hi.as_f64() });
            }
            brent(g, window.lo, window.hi, lit::<T>(1e-15) * (T::one() + window.hi.abs()), 300)
        })
    };
    Ok(CoordinateMap::new(Coords::ZConformal, Coords::YConformal, forward, inverse, jacobian))
}

/// `x = (C + e^{2My})/(2M)`, inverse `y = ln(2Mx − C)/(2M)` on `2Mx > C`.
pub fn y_to_x<T: Scalar>(p: &ModelParams<T>) -> Result<CoordinateMap<T>> {
    require_big_m(p)?;
    let (two_m, c) = (lit::<T>(2.0) * p.big_m, p.c_const);
    Ok(CoordinateMap::new(
        Coords::YConformal,
        Coords::XBh,
        Arc::new(move |y| Ok((c + (two_m * y).exp()) / two_m)),
        Arc::new(move |x| {
            let a = two_m * x - c;
            if !(a > T::zero()) {
                let edge = (c / two_m).as_f64();
                return Err(Error::Domain { what: "2Mx − C ≤ 0", at: x.as_f64(), lo: edge, hi: f64::INFINITY });
            }
            Ok(a.ln() / two_m)
        }),
        Arc::new(move |y| Ok((two_m * y).exp())),
    ))
}

/// `α(x) = 2M|x| − C`.
pub fn alpha<T: Scalar>(p: &ModelParams<T>, x: T) -> T {
    lit::<T>(2.0) * p.big_m * x.abs() - p.c_const
}

/// Whether `x` is on the branch `2Mx − C > 0` reached by the coordinate
/// chain. The `|x|` extension beyond it is outside the derivation.
pub fn on_derived_branch<T: Scalar>(p: &ModelParams<T>, x: T) -> bool {
    lit::<T>(2.0) * p.big_m * x - p.c_const > T::zero()
}

/// `−α dt² + dx²/α` on the whole line (symmetric `|x|` extension).
pub fn bh_metric<T: Scalar>(p: &ModelParams<T>) -> Metric2D<T> {
    let (pa, pb) = (*p, *p);
    let singular = find_horizons(p).map(|h| h.locations).unwrap_or_default();
    Metric2D::new(
        Arc::new(move |x| Ok(-alpha(&pa, x))),
        Arc::new(move |x| {
            let a = alpha(&pb, x);
            if a == T::zero() {
                return Err(Error::Singular { at: x.as_f64(), nearest_zero: None });
            }
            Ok(T::one() / a)
        }),
        Coords::XBh,
        singular,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `α > 0`.
    Timelike,
    /// `α < 0`.
    Spacelike,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonSet<T> {
    pub locations: Vec<T>,
    pub regions: Vec<(Interval<T>, Region)>,
}

/// Zeros of `α`: `±C/(2M)` when `C` and `M` share a sign, `{0}` for `C = 0 < M`.
pub fn find_horizons<T: Scalar>(p: &ModelParams<T>) -> Result<HorizonSet<T>> {
    require_big_m(p)?;
    let (m, c) = (p.big_m, p.c_const);
    let locations = if c == T::zero() {
        if m > T::zero() {
            vec![T::zero()]
        } else {
            Vec::new()
        }
    } else if (c > T::zero()) == (m > T::zero()) {
        let h = c / (lit::<T>(2.0) * m);
        vec![-h, h]
    } else {
        Vec::new()
    };
    let mut cuts = vec![T::neg_infinity()];
    cuts.extend(locations.iter().copied());
    cuts.push(T::infinity());
    let regions = cuts
        .windows(2)
        .map(|w| {
            let probe = match (w[0].is_finite(), w[1].is_finite()) {
                (true, true) => lit::<T>(0.5) * (w[0] + w[1]),
                (false, true) => w[1] - T::one(),
                (true, false) => w[0] + T::one(),
                (false, false) => T::zero(),
            };
            let kind = if alpha(p, probe) > T::zero() { Region::Timelike } else { Region::Spacelike };
            (Interval::new(w[0], w[1]), kind)
        })
        .collect();
    Ok(HorizonSet { locations, regions })
}

/// Numerical cross-check: zeros of `α` found by bracketing on `window`.
pub fn horizons_numeric<T: Scalar>(p: &ModelParams<T>, window: Interval<T>) -> Vec<T> {
    scan_zeros(|x| Ok(alpha(p, x)), window, SCAN_CELLS + 1)
}

/// Default `|2Mz|` bound for the validity window.
pub const DEFAULT_WINDOW_THRESHOLD: f64 = 0.05;

/// Interval of `x` where `|Q/2m²c²| = |2My| ≤ threshold`, i.e. `|2Mz| ≤
/// threshold` for `K = 0`. It is the exact image of that `z`-interval, so it
/// is not symmetric about the centre: `epsilon` is the upper half-width and
/// `epsilon_lower` the lower one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityWindow<T> {
    /// `(1 + C)/(2M)`, the image of `z = 0`.
    pub center: T,
    /// `(e^t − 1)/(2M)`.
    pub epsilon: T,
    /// `(1 − e^{−t})/(2M)`.
    pub epsilon_lower: T,
    pub threshold: T,
    pub coord: Coords,
}

impl<T: Scalar> ValidityWindow<T> {
    pub fn bounds(&self) -> Interval<T> {
        Interval::new(self.center - self.epsilon_lower, self.center + self.epsilon)
    }

    pub fn contains(&self, x: T) -> bool {
        self.bounds().contains_closed(x)
    }
}

pub fn validity_window<T: Scalar>(p: &ModelParams<T>, threshold: T) -> Result<ValidityWindow<T>> {
    if !(p.big_m > T::zero()) {
        return Err(Error::Precondition("validity window needs M > 0".into()));
    }
    if !(threshold > T::zero() && threshold < T::one()) {
        return Err(Error::Precondition(format!("threshold {threshold} must lie in (0, 1)")));
    }
    let two_m = lit::<T>(2.0) * p.big_m;
    Ok(ValidityWindow {
        center: (T::one() + p.c_const) / two_m,
        epsilon: threshold.exp_m1() / two_m,
        epsilon_lower: -(-threshold).exp_m1() / two_m,
        threshold,
        coord: Coords::XBh,
    })
}

/// `|2My(x)|` along the inverse chain, `y = ln(2Mx − C)/(2M)`.
pub fn chain_margin<T: Scalar>(p: &ModelParams<T>, x: T) -> Result<T> {
    let y = y_to_x(p)?.inverse(x)?;
    Ok((lit::<T>(2.0) * p.big_m * y).abs())
}

/// `Ω² = 1 + b²/(x − x₀)²`: a throat of size `2b` opening onto another
/// asymptotic region as `x → x₀`.
pub fn hawking_conformal_factor<T: Scalar>(x: T, b: T, x0: T) -> Result<T> {
    let d = x - x0;
    if d == T::zero() {
        return Err(Error::Singular { at: x.as_f64(), nearest_zero: None });
    }
    Ok(T::one() + b * b / (d * d))
}
