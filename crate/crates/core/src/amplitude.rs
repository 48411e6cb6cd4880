//! Amplitude fields `R` and phase fields `S` of the polar form `ψ = R e^{iS/ħ}`.
//!
//! Both worked models reduce the two-particle coordinates to one variable:
//! the Airy amplitude depends on `z = x₁` only, the static amplitude on
//! `u = x₁ + x₂`. Such fields are stored as a one-dimensional [`Profile`]
//! plus a [`Reduction`] telling how it is lifted back to `(x₁, x₂)`.
//! Genuinely two-dimensional fields go through [`PlanarField`].

use std::fmt;
use std::io::Read;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::{lit, Interval, Scalar};
use crate::special::{airy_ai, AiryArgument, AI_FIRST_ZERO};

/// Point `(x₁, x₂)` in the two-particle configuration space.
pub type Point<T> = [T; 2];

/// Real function of one variable that may fail outside its domain.
pub type RealFn<T> = Arc<dyn Fn(T) -> Result<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }
}

/// How a one-coordinate profile depends on `(x₁, x₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// `z = x₁` (first model).
    FirstParticle,
    /// `u = x₁ + x₂` (static model).
    PairSum,
}

impl Reduction {
    pub fn coordinate<T: Scalar>(self, p: Point<T>) -> T {
        match self {
            Reduction::FirstParticle => p[0],
            Reduction::PairSum => p[0] + p[1],
        }
    }

    /// `∂(reduced coordinate)/∂x_axis`, either 0 or 1.
    pub fn weight(self, axis: Axis) -> bool {
        !matches!((self, axis), (Reduction::FirstParticle, Axis::X2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Airy,
    StaticSine,
    Sampled,
    Custom,
}

/// One-dimensional amplitude profile `R(s)` with derivatives.
pub trait Profile<T: Scalar>: Send + Sync {
    fn value(&self, s: T) -> Result<T>;
    fn d1(&self, s: T) -> Result<T>;
    fn d2(&self, s: T) -> Result<T>;

    /// Third derivative; defaults to a centred difference of [`Profile::d2`].
    fn d3(&self, s: T) -> Result<T> {
        let h = lit::<T>(1e-4) * (T::one() + s.abs());
        Ok((self.d2(s + h)? - self.d2(s - h)?) / (h + h))
    }

    /// `R''/R`.
    fn curvature(&self, s: T) -> Result<T> {
        Ok(self.d2(s)? / self.value(s)?)
    }

    /// `(R''/R)' = (R'''R − R''R') / R²`.
    fn curvature_d1(&self, s: T) -> Result<T> {
        let (r, r1, r2, r3) = (self.value(s)?, self.d1(s)?, self.d2(s)?, self.d3(s)?);
        Ok((r3 * r - r2 * r1) / (r * r))
    }

    /// Outer bounds of the region where the profile is meaningful.
    fn domain(&self) -> Interval<T>;

    /// Whether `R > 0` at `s`. Defaults to strict membership in [`Profile::domain`].
    fn in_domain(&self, s: T) -> bool {
        self.domain().contains(s)
    }

    /// Closest amplitude zero, when known.
    fn nearest_zero(&self, _s: T) -> Option<T> {
        None
    }

    fn value_sq(&self, s: T) -> Result<T> {
        let r = self.value(s)?;
        Ok(r * r)
    }

    fn d1_sq(&self, s: T) -> Result<T> {
        let two = lit::<T>(2.0);
        Ok(two * self.value(s)? * self.d1(s)?)
    }

    fn d2_sq(&self, s: T) -> Result<T> {
        let two = lit::<T>(2.0);
        let (r, r1, r2) = (self.value(s)?, self.d1(s)?, self.d2(s)?);
        Ok(two * (r1 * r1 + r * r2))
    }
}

/// Genuinely two-dimensional amplitude.
pub trait PlanarField<T: Scalar>: Send + Sync {
    fn value(&self, p: Point<T>) -> Result<T>;
    fn d1(&self, axis: Axis, p: Point<T>) -> Result<T>;
    fn d2(&self, axis: Axis, p: Point<T>) -> Result<T>;
}

#[derive(Clone)]
enum Repr<T: Scalar> {
    Reduced { profile: Arc<dyn Profile<T>>, along: Reduction },
    Planar(Arc<dyn PlanarField<T>>),
}

/// Amplitude `R` with value and first/second coordinate derivatives.
#[derive(Clone)]
pub struct AmplitudeField<T: Scalar> {
    repr: Repr<T>,
    kind: FieldKind,
}

impl<T: Scalar> fmt::Debug for AmplitudeField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let along = match &self.repr {
            Repr::Reduced { along, .. } => format!("{along:?}"),
            Repr::Planar(_) => "planar".to_string(),
        };
        f.debug_struct("AmplitudeField").field("kind", &self.kind).field("along", &along).finish()
    }
}

impl<T: Scalar> AmplitudeField<T> {
    pub fn from_profile(profile: Arc<dyn Profile<T>>, along: Reduction, kind: FieldKind) -> Self {
        Self { repr: Repr::Reduced { profile, along }, kind }
    }

    pub fn from_planar(field: Arc<dyn PlanarField<T>>) -> Self {
        Self { repr: Repr::Planar(field), kind: FieldKind::Custom }
    }

    /// `R(z) = A·Ai(w(z))` on `z = x₁`.
    pub fn airy(p: &ModelParams<T>) -> Result<Self> {
        Ok(Self::from_profile(Arc::new(AiryProfile::new(p)?), Reduction::FirstParticle, FieldKind::Airy))
    }

    /// Static solution with `R² = (C₁ sin(k u) + C₂) / (2 m² c²)` on `u = x₁ + x₂`.
    pub fn static_sine(p: &ModelParams<T>) -> Self {
        Self::from_profile(Arc::new(StaticSineProfile::new(p)), Reduction::PairSum, FieldKind::StaticSine)
    }

    /// `R ≡ value` along the given reduction.
    pub fn constant(value: T, along: Reduction) -> Self {
        let profile = CustomProfile::new(
            move |_| Ok(value),
            |_| Ok(T::zero()),
            |_| Ok(T::zero()),
            Interval::whole_line(),
        );
        Self::from_profile(Arc::new(profile), along, FieldKind::Custom)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn reduction(&self) -> Option<Reduction> {
        match &self.repr {
            Repr::Reduced { along, .. } => Some(*along),
            Repr::Planar(_) => None,
        }
    }

    pub fn profile(&self) -> Option<&Arc<dyn Profile<T>>> {
        match &self.repr {
            Repr::Reduced { profile, .. } => Some(profile),
            Repr::Planar(_) => None,
        }
    }

    fn require_profile(&self) -> Result<&Arc<dyn Profile<T>>> {
        self.profile().ok_or_else(|| Error::Precondition("field is not a one-coordinate profile".into()))
    }

    /// Same field multiplied by a constant `λ`.
    pub fn scaled(&self, lambda: T) -> Self {
        match &self.repr {
            Repr::Reduced { profile, along } => Self::from_profile(
                Arc::new(ScaledProfile { inner: profile.clone(), lambda }),
                *along,
                self.kind,
            ),
            Repr::Planar(inner) => Self::from_planar(Arc::new(ScaledPlanar { inner: inner.clone(), lambda })),
        }
    }

    pub fn value(&self, p: Point<T>) -> Result<T> {
        match &self.repr {
            Repr::Reduced { profile, along } => profile.value(along.coordinate(p)),
            Repr::Planar(f) => f.value(p),
        }
    }

    pub fn partial(&self, axis: Axis, p: Point<T>) -> Result<T> {
        match &self.repr {
            Repr::Reduced { profile, along } => {
                if along.weight(axis) {
                    profile.d1(along.coordinate(p))
                } else {
                    Ok(T::zero())
                }
            }
            Repr::Planar(f) => f.d1(axis, p),
        }
    }

    pub fn partial2(&self, axis: Axis, p: Point<T>) -> Result<T> {
        match &self.repr {
            Repr::Reduced { profile, along } => {
                if along.weight(axis) {
                    profile.d2(along.coordinate(p))
                } else {
                    Ok(T::zero())
                }
            }
            Repr::Planar(f) => f.d2(axis, p),
        }
    }

    /// Whether `R > 0` at the point.
    pub fn in_domain(&self, p: Point<T>) -> bool {
        match &self.repr {
            Repr::Reduced { profile, along } => profile.in_domain(along.coordinate(p)),
            Repr::Planar(f) => f.value(p).map(|v| v > T::zero()).unwrap_or(false),
        }
    }

    pub fn value_at(&self, s: T) -> Result<T> {
        self.require_profile()?.value(s)
    }

    pub fn d1_at(&self, s: T) -> Result<T> {
        self.require_profile()?.d1(s)
    }

    pub fn d2_at(&self, s: T) -> Result<T> {
        self.require_profile()?.d2(s)
    }

    pub fn d3_at(&self, s: T) -> Result<T> {
        self.require_profile()?.d3(s)
    }

    pub fn curvature_at(&self, s: T) -> Result<T> {
        self.require_profile()?.curvature(s)
    }

    pub fn curvature_d1_at(&self, s: T) -> Result<T> {
        self.require_profile()?.curvature_d1(s)
    }

    pub fn value_sq_at(&self, s: T) -> Result<T> {
        self.require_profile()?.value_sq(s)
    }

    pub fn d1_sq_at(&self, s: T) -> Result<T> {
        self.require_profile()?.d1_sq(s)
    }

    pub fn d2_sq_at(&self, s: T) -> Result<T> {
        self.require_profile()?.d2_sq(s)
    }

    pub fn in_domain_at(&self, s: T) -> bool {
        self.profile().map(|p| p.in_domain(s)).unwrap_or(false)
    }

    pub fn domain(&self) -> Option<Interval<T>> {
        self.profile().map(|p| p.domain())
    }

    pub fn nearest_zero(&self, s: T) -> Option<T> {
        self.profile().and_then(|p| p.nearest_zero(s))
    }
}

/// Airy amplitude `A·Ai(−(z + Kħ²/(2Mm²c²))·(2Mm²c²/ħ²)^{1/3})`.
#[derive(Debug, Clone, Copy)]
pub struct AiryProfile<T> {
    arg: AiryArgument<T>,
    amplitude: T,
    /// `K`
    k_const: T,
    /// `2 M m² c² / ħ²`
    slope: T,
}

impl<T: Scalar> AiryProfile<T> {
    pub fn new(p: &ModelParams<T>) -> Result<Self> {
        let arg = AiryArgument::new(p)?;
        let slope = lit::<T>(2.0) * p.big_m * p.mc_sq() / (p.hbar * p.hbar);
        Ok(Self { arg, amplitude: p.a_norm, k_const: p.k_const, slope })
    }

    pub fn argument(&self) -> &AiryArgument<T> {
        &self.arg
    }

    /// `z` where the Airy argument reaches the first zero of `Ai`.
    pub fn first_zero(&self) -> T {
        self.arg.coordinate(lit(AI_FIRST_ZERO))
    }

    /// `K + 2Mm²c² z / ħ²`, the coefficient of the amplitude equation.
    pub fn coefficient(&self, z: T) -> T {
        self.k_const + self.slope * z
    }
}

impl<T: Scalar> Profile<T> for AiryProfile<T> {
    fn value(&self, z: T) -> Result<T> {
        Ok(self.amplitude * airy_ai(self.arg.argument(z))?.ai)
    }

    fn d1(&self, z: T) -> Result<T> {
        Ok(self.amplitude * self.arg.jacobian() * airy_ai(self.arg.argument(z))?.ai_prime)
    }

    fn d2(&self, z: T) -> Result<T> {
        // R'' = −(K + 2Mm²c²z/ħ²) R follows from Ai'' = w Ai.
        Ok(-self.coefficient(z) * self.value(z)?)
    }

    fn d3(&self, z: T) -> Result<T> {
        Ok(-self.slope * self.value(z)? - self.coefficient(z) * self.d1(z)?)
    }

    fn curvature(&self, z: T) -> Result<T> {
        Ok(-self.coefficient(z))
    }

    fn curvature_d1(&self, _z: T) -> Result<T> {
        Ok(-self.slope)
    }

    fn domain(&self) -> Interval<T> {
        let edge = self.first_zero();
        if self.arg.scale > T::zero() {
            Interval::new(T::neg_infinity(), edge)
        } else {
            Interval::new(edge, T::infinity())
        }
    }

    fn nearest_zero(&self, _z: T) -> Option<T> {
        Some(self.first_zero())
    }
}

/// Static solution; the primitive is `R²`.
#[derive(Debug, Clone, Copy)]
pub struct StaticSineProfile<T> {
    c1: T,
    c2: T,
    k: T,
    /// `2 m² c²`
    q0: T,
}

impl<T: Scalar> StaticSineProfile<T> {
    pub fn new(p: &ModelParams<T>) -> Self {
        Self { c1: p.c1, c2: p.c2, k: p.k(), q0: p.q0() }
    }

    fn raw_sq(&self, u: T) -> T {
        (self.c1 * (self.k * u).sin() + self.c2) / self.q0
    }

    fn boundary_tolerance(&self) -> T {
        lit::<T>(64.0) * T::epsilon() * (self.c1.abs() + self.c2.abs()) / self.q0
    }

    /// Whether `C₁ sin(ku) + C₂` vanishes somewhere.
    pub fn has_zeros(&self) -> bool {
        self.c2.abs() <= self.c1.abs() && self.c1 != T::zero()
    }

    /// The maximal interval around `u` on which `R² < 0`, if `u` is in one.
    pub fn negative_interval_containing(&self, u: T) -> Option<Interval<T>> {
        if !self.has_zeros() || self.raw_sq(u) >= -self.boundary_tolerance() {
            return None;
        }
        let two_pi = T::PI() + T::PI();
        let theta = (-self.c2 / self.c1).asin();
        // Phase interval (a, b) ⊂ [0, 2π + …) where C₁ sin + C₂ < 0.
        let (a, b) = if self.c1 > T::zero() { (T::PI() - theta, two_pi + theta) } else { (theta, T::PI() - theta) };
        let phase = self.k * u;
        let turns = ((phase - a) / two_pi).floor();
        let start = a + turns * two_pi;
        let end = b + turns * two_pi;
        let (lo, hi) = (start / self.k, end / self.k);
        Some(if lo <= hi { Interval::new(lo, hi) } else { Interval::new(hi, lo) })
    }

    /// Sub-intervals of `window` where `R² > 0`.
    pub fn positive_intervals(&self, window: Interval<T>) -> Vec<Interval<T>> {
        if !self.has_zeros() {
            return if self.c2 > T::zero() || (self.c1 == T::zero() && self.c2 > T::zero()) {
                vec![window]
            } else {
                Vec::new()
            };
        }
        let mut roots = crate::static_model::sine_roots(self.c1, self.c2, self.k, window);
        roots.retain(|r| window.contains(*r));
        let mut cuts = vec![window.lo];
        cuts.extend(roots);
        cuts.push(window.hi);
        cuts.windows(2)
            .filter_map(|w| {
                let mid = lit::<T>(0.5) * (w[0] + w[1]);
                (w[1] > w[0] && self.raw_sq(mid) > T::zero()).then(|| Interval::new(w[0], w[1]))
            })
            .collect()
    }

    fn check(&self, u: T) -> Result<T> {
        let v = self.raw_sq(u);
        if v < -self.boundary_tolerance() {
            let bad = self.negative_interval_containing(u).unwrap_or(Interval::new(u, u));
            return Err(Error::Domain { what: "R² < 0", at: u.as_f64(), lo: bad.lo.as_f64(), hi: bad.hi.as_f64() });
        }
        Ok(if v <= self.boundary_tolerance() { T::zero() } else { v })
    }
}

impl<T: Scalar> Profile<T> for StaticSineProfile<T> {
    fn value(&self, u: T) -> Result<T> {
        Ok(self.check(u)?.sqrt())
    }

    fn d1(&self, u: T) -> Result<T> {
        let r = self.value(u)?;
        if r == T::zero() {
            return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
        }
        Ok(self.d1_sq(u)? / (lit::<T>(2.0) * r))
    }

    fn d2(&self, u: T) -> Result<T> {
        let r = self.value(u)?;
        if r == T::zero() {
            return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
        }
        let p1 = self.d1_sq(u)?;
        let p2 = self.d2_sq(u)?;
        let two = lit::<T>(2.0);
        Ok(p2 / (two * r) - p1 * p1 / (lit::<T>(4.0) * r * r * r))
    }

    fn d3(&self, u: T) -> Result<T> {
        // From R = √P: R''' = P'''/(2R) − 3P'P''/(4R³) + 3P'³/(8R⁵).
        let r = self.value(u)?;
        if r == T::zero() {
            return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
        }
        let p1 = self.d1_sq(u)?;
        let p2 = self.d2_sq(u)?;
        let p3 = -self.k * self.k * p1;
        let r3 = r * r * r;
        Ok(p3 / (lit::<T>(2.0) * r) - lit::<T>(3.0) * p1 * p2 / (lit::<T>(4.0) * r3)
            + lit::<T>(3.0) * p1 * p1 * p1 / (lit::<T>(8.0) * r3 * r * r))
    }

    fn domain(&self) -> Interval<T> {
        Interval::whole_line()
    }

    fn in_domain(&self, u: T) -> bool {
        self.raw_sq(u) > self.boundary_tolerance()
    }

    fn nearest_zero(&self, u: T) -> Option<T> {
        if !self.has_zeros() {
            return None;
        }
        let span = lit::<T>(4.0) * T::PI() / self.k.abs();
        let window = Interval::new(u - span, u + span);
        crate::static_model::sine_roots(self.c1, self.c2, self.k, window)
            .into_iter()
            .min_by(|a, b| (*a - u).abs().partial_cmp(&(*b - u).abs()).unwrap())
    }

    fn value_sq(&self, u: T) -> Result<T> {
        self.check(u)
    }

    fn d1_sq(&self, u: T) -> Result<T> {
        Ok(self.c1 * self.k * (self.k * u).cos() / self.q0)
    }

    fn d2_sq(&self, u: T) -> Result<T> {
        Ok(-self.c1 * self.k * self.k * (self.k * u).sin() / self.q0)
    }
}

/// Amplitude sampled on a uniform grid.
///
/// Values are interpolated with local cubics; derivatives are finite
/// differences at the nodes (five-point in the interior, centred three-point
/// next to the ends, one-sided second order at the ends) interpolated the
/// same way.
#[derive(Debug, Clone)]
pub struct SampledProfile<T> {
    lo: T,
    step: T,
    values: Vec<T>,
    first: Vec<T>,
    second: Vec<T>,
}

/// Fewest nodes accepted: one five-point stencil.
pub const MIN_SAMPLES: usize = 5;

impl<T: Scalar> SampledProfile<T> {
    pub fn new(grid: &[T], values: &[T]) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Precondition(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < MIN_SAMPLES {
            return Err(Error::Precondition(format!(
                "need at least {MIN_SAMPLES} samples for fourth-order stencils, got {}",
                grid.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= T::zero())) {
            return Err(Error::Precondition(format!("amplitude sample {i} is negative ({v})")));
        }
        let n = grid.len();
        let step = (grid[n - 1] - grid[0]) / T::from_usize(n - 1).unwrap();
        if !(step > T::zero()) {
            return Err(Error::Precondition("grid must be increasing".into()));
        }
        let tol = lit::<T>(1e-9) * step;
        for (i, x) in grid.iter().enumerate() {
            let expected = grid[0] + step * T::from_usize(i).unwrap();
            if (*x - expected).abs() > tol {
                return Err(Error::Precondition(format!("grid is not uniform at index {i}")));
            }
        }
        let (first, second) = nodal_derivatives(values, step);
        Ok(Self { lo: grid[0], step, values: values.to_vec(), first, second })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> T {
        self.step
    }

    fn hi(&self) -> T {
        self.lo + self.step * T::from_usize(self.values.len() - 1).unwrap()
    }

    fn interpolate(&self, table: &[T], s: T) -> Result<T> {
        let hi = self.hi();
        if !(s >= self.lo && s <= hi) {
            return Err(Error::Domain {
                what: "sampled amplitude",
                at: s.as_f64(),
                lo: self.lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        let n = table.len();
        let t = (s - self.lo) / self.step;
        let i = t.floor().to_usize().unwrap_or(0).min(n - 2);
        let frac = t - T::from_usize(i).unwrap();
        if frac == T::zero() {
            return Ok(table[i]);
        }
        // Four nodes i-1..i+2, shifted inward at the ends.
        let start = i.saturating_sub(1).min(n - 4);
        let x = t - T::from_usize(start).unwrap();
        let mut acc = T::zero();
        for j in 0..4 {
            let mut basis = T::one();
            for m in 0..4 {
                if m != j {
                    let (xm, xj) = (T::from_usize(m).unwrap(), T::from_usize(j).unwrap());
                    basis = basis * (x - xm) / (xj - xm);
                }
            }
            acc = acc + basis * table[start + j];
        }
        Ok(acc)
    }
}

fn nodal_derivatives<T: Scalar>(f: &[T], h: T) -> (Vec<T>, Vec<T>) {
    let n = f.len();
    let c = |x: f64| lit::<T>(x);
    let h2 = h * h;
    let mut d1 = vec![T::zero(); n];
    let mut d2 = vec![T::zero(); n];
    for i in 0..n {
        if i >= 2 && i + 2 < n {
            d1[i] = (f[i - 2] - c(8.0) * f[i - 1] + c(8.0) * f[i + 1] - f[i + 2]) / (c(12.0) * h);
            d2[i] = (-f[i - 2] + c(16.0) * f[i - 1] - c(30.0) * f[i] + c(16.0) * f[i + 1] - f[i + 2]) / (c(12.0) * h2);
        } else if i >= 1 && i + 1 < n {
            d1[i] = (f[i + 1] - f[i - 1]) / (c(2.0) * h);
            d2[i] = (f[i + 1] - c(2.0) * f[i] + f[i - 1]) / h2;
        } else if i == 0 {
            d1[i] = (-c(3.0) * f[0] + c(4.0) * f[1] - f[2]) / (c(2.0) * h);
            d2[i] = (c(2.0) * f[0] - c(5.0) * f[1] + c(4.0) * f[2] - f[3]) / h2;
        } else {
            d1[i] = (c(3.0) * f[i] - c(4.0) * f[i - 1] + f[i - 2]) / (c(2.0) * h);
            d2[i] = (c(2.0) * f[i] - c(5.0) * f[i - 1] + c(4.0) * f[i - 2] - f[i - 3]) / h2;
        }
    }
    (d1, d2)
}

impl<T: Scalar> Profile<T> for SampledProfile<T> {
    fn value(&self, s: T) -> Result<T> {
        self.interpolate(&self.values, s)
    }

    fn d1(&self, s: T) -> Result<T> {
        self.interpolate(&self.first, s)
    }

    fn d2(&self, s: T) -> Result<T> {
        self.interpolate(&self.second, s)
    }

    fn domain(&self) -> Interval<T> {
        Interval::new(self.lo, self.hi())
    }

    fn in_domain(&self, s: T) -> bool {
        self.domain().contains_closed(s) && self.value(s).map(|v| v > T::zero()).unwrap_or(false)
    }
}

/// Samples a field on a uniform grid, returning a [`FieldKind::Sampled`] field.
pub fn sampled_amplitude<T: Scalar>(grid: &[T], values: &[T], along: Reduction) -> Result<AmplitudeField<T>> {
    Ok(AmplitudeField::from_profile(Arc::new(SampledProfile::new(grid, values)?), along, FieldKind::Sampled))
}

/// Reads `coordinate,value` rows (header line required) into a sampled field.
pub fn sampled_amplitude_from_csv<R: Read>(reader: R, along: Reduction) -> Result<AmplitudeField<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Precondition(format!("csv header: {e}")))?;
    if headers.len() != 2 || headers.iter().any(|h| h.parse::<f64>().is_ok()) {
        return Err(Error::Precondition("csv needs a two-column header line".into()));
    }
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Precondition(format!("csv row {}: {e}", line + 2)))?;
        if rec.len() != 2 {
            return Err(Error::Precondition(format!("csv row {} has {} columns", line + 2, rec.len())));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::Precondition(format!("csv row {}: bad number `{s}`", line + 2)));
        grid.push(parse(&rec[0])?);
        values.push(parse(&rec[1])?);
    }
    sampled_amplitude(&grid, &values, along)
}

type Fn1<T> = Box<dyn Fn(T) -> Result<T> + Send + Sync>;

/// Profile assembled from closures.
pub struct CustomProfile<T: Scalar> {
    value: Fn1<T>,
    d1: Fn1<T>,
    d2: Fn1<T>,
    domain: Interval<T>,
}

impl<T: Scalar> CustomProfile<T> {
    pub fn new<F, G, H>(value: F, d1: G, d2: H, domain: Interval<T>) -> Self
    where
        F: Fn(T) -> Result<T> + Send + Sync + 'static,
        G: Fn(T) -> Result<T> + Send + Sync + 'static,
        H: Fn(T) -> Result<T> + Send + Sync + 'static,
    {
        Self { value: Box::new(value), d1: Box::new(d1), d2: Box::new(d2), domain }
    }

    /// Derivatives by fourth-order centred differences with step `h`.
    pub fn from_value<F>(value: F, h: T, domain: Interval<T>) -> Self
    where
        F: Fn(T) -> Result<T> + Send + Sync + 'static,
    {
        let f = Arc::new(value);
        let (f1, f2) = (f.clone(), f.clone());
        Self::new(
            move |s| f(s),
            move |s| centred_d1(&*f1, s, h),
            move |s| centred_d2(&*f2, s, h),
            domain,
        )
    }
}

impl<T: Scalar> Profile<T> for CustomProfile<T> {
    fn value(&self, s: T) -> Result<T> {
        (self.value)(s)
    }
    fn d1(&self, s: T) -> Result<T> {
        (self.d1)(s)
    }
    fn d2(&self, s: T) -> Result<T> {
        (self.d2)(s)
    }
    fn domain(&self) -> Interval<T> {
        self.domain
    }
}

/// Fourth-order centred first derivative.
pub fn centred_d1<T: Scalar, F: Fn(T) -> Result<T> + ?Sized>(f: &F, s: T, h: T) -> Result<T> {
    let two = lit::<T>(2.0);
    let eight = lit::<T>(8.0);
    Ok((f(s - two * h)? - eight * f(s - h)? + eight * f(s + h)? - f(s + two * h)?) / (lit::<T>(12.0) * h))
}

/// Fourth-order centred second derivative.
pub fn centred_d2<T: Scalar, F: Fn(T) -> Result<T> + ?Sized>(f: &F, s: T, h: T) -> Result<T> {
    let two = lit::<T>(2.0);
    let sixteen = lit::<T>(16.0);
    Ok((-f(s - two * h)? + sixteen * f(s - h)? - lit::<T>(30.0) * f(s)? + sixteen * f(s + h)? - f(s + two * h)?)
        / (lit::<T>(12.0) * h * h))
}

struct ScaledProfile<T: Scalar> {
    inner: Arc<dyn Profile<T>>,
    lambda: T,
}

impl<T: Scalar> Profile<T> for ScaledProfile<T> {
    fn value(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.inner.value(s)?)
    }
    fn d1(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.inner.d1(s)?)
    }
    fn d2(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.inner.d2(s)?)
    }
    fn d3(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.inner.d3(s)?)
    }
    fn curvature(&self, s: T) -> Result<T> {
        self.inner.curvature(s)
    }
    fn curvature_d1(&self, s: T) -> Result<T> {
        self.inner.curvature_d1(s)
    }
    fn domain(&self) -> Interval<T> {
        self.inner.domain()
    }
    fn in_domain(&self, s: T) -> bool {
        self.inner.in_domain(s)
    }
    fn nearest_zero(&self, s: T) -> Option<T> {
        self.inner.nearest_zero(s)
    }
    fn value_sq(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.lambda * self.inner.value_sq(s)?)
    }
    fn d1_sq(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.lambda * self.inner.d1_sq(s)?)
    }
    fn d2_sq(&self, s: T) -> Result<T> {
        Ok(self.lambda * self.lambda * self.inner.d2_sq(s)?)
    }
}

struct ScaledPlanar<T: Scalar> {
    inner: Arc<dyn PlanarField<T>>,
    lambda: T,
}

impl<T: Scalar> PlanarField<T> for ScaledPlanar<T> {
    fn value(&self, p: Point<T>) -> Result<T> {
        Ok(self.lambda * self.inner.value(p)?)
    }
    fn d1(&self, axis: Axis, p: Point<T>) -> Result<T> {
        Ok(self.lambda * self.inner.d1(axis, p)?)
    }
    fn d2(&self, axis: Axis, p: Point<T>) -> Result<T> {
        Ok(self.lambda * self.inner.d2(axis, p)?)
    }
}

type Fn2<T> = Box<dyn Fn(Point<T>) -> Result<T> + Send + Sync>;

/// Two-dimensional field from a value closure; derivatives by fourth-order
/// centred differences.
pub struct PlanarFn<T: Scalar> {
    value: Fn2<T>,
    h: T,
}

impl<T: Scalar> PlanarFn<T> {
    pub fn new<F>(value: F, h: T) -> Self
    where
        F: Fn(Point<T>) -> Result<T> + Send + Sync + 'static,
    {
        Self { value: Box::new(value), h }
    }

    fn along(&self, axis: Axis, p: Point<T>) -> impl Fn(T) -> Result<T> + '_ {
        move |s| {
            let mut q = p;
            q[axis.index()] = s;
            (self.value)(q)
        }
    }
}

impl<T: Scalar> PlanarField<T> for PlanarFn<T> {
    fn value(&self, p: Point<T>) -> Result<T> {
        (self.value)(p)
    }
    fn d1(&self, axis: Axis, p: Point<T>) -> Result<T> {
        centred_d1(&self.along(axis, p), p[axis.index()], self.h)
    }
    fn d2(&self, axis: Axis, p: Point<T>) -> Result<T> {
        centred_d2(&self.along(axis, p), p[axis.index()], self.h)
    }
}

/// Gradient of a phase `S` (the Bohmian momentum `p = ∂S`).
pub trait PhaseGradient<T: Scalar>: Send + Sync {
    fn grad(&self, axis: Axis, p: Point<T>) -> Result<T>;

    /// Value of `S`, up to an arbitrary constant.
    fn value(&self, _p: Point<T>) -> Result<T> {
        Err(Error::Precondition("phase value not available".into()))
    }

    /// Distance to the nearest surface where the phase gradient is singular.
    fn boundary_distance(&self, _p: Point<T>) -> Option<T> {
        None
    }
}

#[derive(Clone)]
pub struct PhaseField<T: Scalar> {
    inner: Arc<dyn PhaseGradient<T>>,
    kind: FieldKind,
}

impl<T: Scalar> fmt::Debug for PhaseField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseField").field("kind", &self.kind).finish()
    }
}

impl<T: Scalar> PhaseField<T> {
    pub fn new(inner: Arc<dyn PhaseGradient<T>>, kind: FieldKind) -> Self {
        Self { inner, kind }
    }

    /// `S = a x₁ + b x₂`.
    pub fn plane_wave(a: T, b: T) -> Self {
        Self::new(Arc::new(PlaneWave { a, b }), FieldKind::Custom)
    }

    /// Gradient from two closures; no value.
    pub fn from_gradient<F, G>(d1: F, d2: G) -> Self
    where
        F: Fn(Point<T>) -> Result<T> + Send + Sync + 'static,
        G: Fn(Point<T>) -> Result<T> + Send + Sync + 'static,
    {
        Self::new(Arc::new(GradientFns { d1: Box::new(d1), d2: Box::new(d2) }), FieldKind::Custom)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn grad(&self, axis: Axis, p: Point<T>) -> Result<T> {
        self.inner.grad(axis, p)
    }

    pub fn value(&self, p: Point<T>) -> Result<T> {
        self.inner.value(p)
    }

    pub fn boundary_distance(&self, p: Point<T>) -> Option<T> {
        self.inner.boundary_distance(p)
    }
}

struct PlaneWave<T> {
    a: T,
    b: T,
}

impl<T: Scalar> PhaseGradient<T> for PlaneWave<T> {
    fn grad(&self, axis: Axis, _p: Point<T>) -> Result<T> {
        Ok(match axis {
            Axis::X1 => self.a,
            Axis::X2 => self.b,
        })
    }
    fn value(&self, p: Point<T>) -> Result<T> {
        Ok(self.a * p[0] + self.b * p[1])
    }
}

struct GradientFns<T: Scalar> {
    d1: Fn2<T>,
    d2: Fn2<T>,
}

impl<T: Scalar> PhaseGradient<T> for GradientFns<T> {
    fn grad(&self, axis: Axis, p: Point<T>) -> Result<T> {
        match axis {
            Axis::X1 => (self.d1)(p),
            Axis::X2 => (self.d2)(p),
        }
    }
}

/// Static-model phase: `∂S/∂x₁ = G(u)/R²(u)`, `∂S/∂x₂ = −∂S/∂x₁`.
///
/// This gradient is curl-free only when `G/R²` is constant, so `S` is not a
/// global potential in general. [`PhaseGradient::value`] returns the line
/// integral of `∂S/∂x₁` along `x₁` at fixed `u`, i.e. `x₁·G(u)/R²(u)`, for
/// bookkeeping only.
pub struct StaticPhase<T: Scalar> {
    g: RealFn<T>,
    ampl: AmplitudeField<T>,
}

impl<T: Scalar> StaticPhase<T> {
    fn momentum(&self, u: T) -> Result<T> {
        let r_sq = self.ampl.value_sq_at(u)?;
        if r_sq == T::zero() {
            return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
        }
        Ok((self.g)(u)? / r_sq)
    }
}

impl<T: Scalar> PhaseGradient<T> for StaticPhase<T> {
    fn grad(&self, axis: Axis, p: Point<T>) -> Result<T> {
        let g = self.momentum(p[0] + p[1])?;
        Ok(match axis {
            Axis::X1 => g,
            Axis::X2 => -g,
        })
    }

    fn value(&self, p: Point<T>) -> Result<T> {
        Ok(p[0] * self.momentum(p[0] + p[1])?)
    }

    fn boundary_distance(&self, p: Point<T>) -> Option<T> {
        let u = p[0] + p[1];
        self.ampl.nearest_zero(u).map(|z| (z - u).abs())
    }
}

/// Phase whose gradient solves `R² ∂S/∂x₁ = G(x₁ + x₂)` under `p₁ = −p₂`.
pub fn static_phase_gradient<T: Scalar>(g: RealFn<T>, ampl: &AmplitudeField<T>) -> Result<PhaseField<T>> {
    if ampl.reduction() != Some(Reduction::PairSum) {
        return Err(Error::Precondition("static phase needs an amplitude of u = x1 + x2".into()));
    }
    Ok(PhaseField::new(Arc::new(StaticPhase { g, ampl: ampl.clone() }), FieldKind::StaticSine))
}
