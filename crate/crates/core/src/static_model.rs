//! Static EPR model with `R² = (C₁ sin(k u) + C₂) / (2m²c²)`, `u = x₁ + x₂`.
//!
//! `G` is obtained by substituting `R²` into the nonlinear amplitude equation
//!
//! ```text
//! 8G² + ħ²(∂₁R²)² − 2ħ²R²∂₁²R² + ħ²(∂₂R²)² − 2ħ²R²∂₂²R² − 8m²c²R⁴ = 0
//! ```
//!
//! which, with `∂₁ = ∂₂ = d/du`, gives `8G² = 8m²c²P² − 2ħ²P'² + 4ħ²PP''`
//! for `P = R²`.

use std::sync::Arc;

use serde::Serialize;

use crate::amplitude::{AmplitudeField, RealFn, StaticSineProfile};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots::brent;
use crate::scalar::{lit, Interval, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GDerivation {
    OracleSubstitution,
    UserSupplied,
}

/// The function `G(u)` with `R² ∂S/∂x₁ = G(u)`.
#[derive(Clone)]
pub struct GFunction<T: Scalar> {
    g_sq8: RealFn<T>,
    eval: RealFn<T>,
    pub derivation: GDerivation,
}

impl<T: Scalar> std::fmt::Debug for GFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GFunction").field("derivation", &self.derivation).finish()
    }
}

impl<T: Scalar> GFunction<T> {
    /// Wraps an arbitrary `G`.
    pub fn user<F>(g: F) -> Self
    where
        F: Fn(T) -> Result<T> + Send + Sync + 'static,
    {
        let g: RealFn<T> = Arc::new(g);
        let g2 = g.clone();
        Self { g_sq8: Arc::new(move |u| Ok(lit::<T>(8.0) * g2(u)?.powi(2))), eval: g, derivation: GDerivation::UserSupplied }
    }

    /// `G(u)`, positive branch. Domain error where `8G² < 0`.
    pub fn eval(&self, u: T) -> Result<T> {
        (self.eval)(u)
    }

    /// `8G²(u)`, defined (possibly negative) wherever the substitution is.
    pub fn g_sq8(&self, u: T) -> Result<T> {
        (self.g_sq8)(u)
    }

    /// `G²`, signed: negative where no real `G` exists.
    pub fn g_sq(&self, u: T) -> Result<T> {
        Ok(self.g_sq8(u)? / lit::<T>(8.0))
    }

    pub fn as_real_fn(&self) -> RealFn<T> {
        self.eval.clone()
    }

    /// `λ·G`.
    pub fn scaled(&self, lambda: T) -> Self {
        let inner = self.eval.clone();
        let sq = self.g_sq8.clone();
        Self {
            eval: Arc::new(move |u| Ok(lambda * inner(u)?)),
            g_sq8: Arc::new(move |u| Ok(lambda * lambda * sq(u)?)),
            derivation: self.derivation,
        }
    }

    /// Sub-intervals of `window` where `8G² ≥ 0`, scanning `n` cells.
    pub fn real_intervals(&self, window: Interval<T>, n: usize) -> Vec<Interval<T>> {
        let ok = |u: T| self.g_sq8(u).map(|v| v >= T::zero()).unwrap_or(false);
        sign_intervals(ok, |u| self.g_sq8(u).unwrap_or(T::nan()), window, n)
    }
}

fn sign_intervals<T: Scalar>(ok: impl Fn(T) -> bool, f: impl Fn(T) -> T, window: Interval<T>, n: usize) -> Vec<Interval<T>> {
    let step = window.width() / T::from_usize(n).unwrap();
    let at = |i: usize| if i == n { window.hi } else { window.lo + step * T::from_usize(i).unwrap() };
    let edge = |a: T, b: T| brent(&f, a, b, lit::<T>(1e-14) * (T::one() + a.abs()), 200).unwrap_or(lit::<T>(0.5) * (a + b));
    let mut out = Vec::new();
    let mut start = if ok(window.lo) { Some(window.lo) } else { None };
    for i in 1..=n {
        let (a, b) = (at(i - 1), at(i));
        match (start, ok(b)) {
            (Some(s), false) => {
                out.push(Interval::new(s, edge(a, b)));
                start = None;
            }
            (None, true) => start = Some(if ok(a) { a } else { edge(a, b) }),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Interval::new(s, window.hi));
    }
    out
}

/// `8G²` for `P = R²` and its first two derivatives.
pub fn g_sq8_from<T: Scalar>(p: &ModelParams<T>, r_sq: T, d1: T, d2: T) -> T {
    let h2 = p.hbar * p.hbar;
    lit::<T>(8.0) * p.mc_sq() * r_sq * r_sq - lit::<T>(2.0) * h2 * d1 * d1 + lit::<T>(4.0) * h2 * r_sq * d2
}

/// `G` obtained by substituting the sinusoidal `R²` into the nonlinear equation.
pub fn derive_g<T: Scalar>(p: &ModelParams<T>) -> GFunction<T> {
    let params = *p;
    let raw = move |u: T| {
        let (k, phase) = (params.k(), params.k() * u);
        let q0 = params.q0();
        let r_sq = (params.c1 * phase.sin() + params.c2) / q0;
        let d1 = params.c1 * k * phase.cos() / q0;
        let d2 = -params.c1 * k * k * phase.sin() / q0;
        g_sq8_from(&params, r_sq, d1, d2)
    };
    let g_sq8: RealFn<T> = Arc::new(move |u| Ok(raw(u)));
    let sq = g_sq8.clone();
    let eval: RealFn<T> = Arc::new(move |u: T| {
        let v = sq(u)?;
        if v < T::zero() {
            return Err(Error::Domain { what: "8G² < 0", at: u.as_f64(), lo: f64::NAN, hi: f64::NAN });
        }
        Ok((v / lit::<T>(8.0)).sqrt())
    });
    GFunction { g_sq8, eval, derivation: GDerivation::OracleSubstitution }
}

/// Terms of the nonlinear equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearTerms<T> {
    pub residual: T,
    /// Largest magnitude among the individual terms.
    pub scale: T,
}

/// Left-hand side of the nonlinear `R²` equation at `u`, with its term scale.
pub fn nonlinear_terms<T: Scalar>(ampl: &AmplitudeField<T>, g: &GFunction<T>, p: &ModelParams<T>, u: T) -> Result<NonlinearTerms<T>> {
    let r_sq = ampl.value_sq_at(u)?;
    if !ampl.in_domain_at(u) {
        return Err(Error::Domain { what: "R² ≤ 0", at: u.as_f64(), lo: f64::NAN, hi: f64::NAN });
    }
    let (d1, d2) = (ampl.d1_sq_at(u)?, ampl.d2_sq_at(u)?);
    let h2 = p.hbar * p.hbar;
    let two = lit::<T>(2.0);
    let terms = [
        g.g_sq8(u)?,
        two * h2 * d1 * d1,
        -two * two * h2 * r_sq * d2,
        -lit::<T>(8.0) * p.mc_sq() * r_sq * r_sq,
    ];
    let residual = terms.iter().fold(T::zero(), |a, t| a + *t);
    let scale = terms.iter().fold(T::zero(), |a, t| a.max(t.abs()));
    Ok(NonlinearTerms { residual, scale })
}

pub fn nonlinear_residual<T: Scalar>(ampl: &AmplitudeField<T>, g: &GFunction<T>, p: &ModelParams<T>, u: T) -> Result<T> {
    Ok(nonlinear_terms(ampl, g, p, u)?.residual)
}

/// `g₁₁ = (G/R²)² / (m²c²)`, taking `η¹¹ = +1`. Uses the signed `G²`, so it
/// stays finite (and negative) where `G` is not real.
pub fn g11_derived<T: Scalar>(p: &ModelParams<T>, g: &GFunction<T>, ampl: &AmplitudeField<T>, u: T) -> Result<T> {
    let r_sq = ampl.value_sq_at(u)?;
    if r_sq == T::zero() {
        return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
    }
    Ok(g.g_sq(u)? / (r_sq * r_sq * p.mc_sq()))
}

/// Closed form of [`g11_derived`] for the oracle `G`:
/// `[4W² − 2C₁sW − C₁²cos²(ku)] / (4W²)`, `W = C₁ sin(ku) + C₂`.
pub fn g11_closed_form<T: Scalar>(p: &ModelParams<T>, u: T) -> Result<T> {
    let (s, c) = (p.k() * u).sin_cos();
    let w = p.c1 * s + p.c2;
    if w == T::zero() {
        return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
    }
    let four = lit::<T>(4.0);
    let h2k2 = (p.hbar * p.k()).powi(2) / p.mc_sq();
    Ok((four * w * w - lit::<T>(2.0) * h2k2 * p.c1 * s * w - h2k2 * p.c1 * p.c1 * c * c) / (four * w * w))
}

/// The alternative closed form `(1/4)(2C₁²s² − C₁²cos² − 2C₁C₂s)/(C₁s + C₂)²`,
/// kept for comparison with [`g11_derived`].
pub fn g11_alternative<T: Scalar>(p: &ModelParams<T>, u: T) -> Result<T> {
    let (s, c) = (p.k() * u).sin_cos();
    let w = p.c1 * s + p.c2;
    if w == T::zero() {
        return Err(Error::Singular { at: u.as_f64(), nearest_zero: Some(u.as_f64()) });
    }
    let (c1, c2) = (p.c1, p.c2);
    let two = lit::<T>(2.0);
    Ok((two * c1 * c1 * s * s - c1 * c1 * c * c - two * c1 * c2 * s) / (lit::<T>(4.0) * w * w))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricComponentReport {
    pub u: f64,
    pub g11_derived: f64,
    pub g11_alternative: f64,
    pub discrepancy: f64,
}

pub fn compare_g11<T: Scalar>(p: &ModelParams<T>, g: &GFunction<T>, ampl: &AmplitudeField<T>, u: T) -> Result<MetricComponentReport> {
    let derived = g11_derived(p, g, ampl, u)?.as_f64();
    let alt = g11_alternative(p, u)?.as_f64();
    Ok(MetricComponentReport { u: u.as_f64(), g11_derived: derived, g11_alternative: alt, discrepancy: (derived - alt).abs() })
}

/// Zeros of `C₁ sin(k u) + C₂` in `window` from the arcsine branches, sorted.
pub fn sine_roots<T: Scalar>(c1: T, c2: T, k: T, window: Interval<T>) -> Vec<T> {
    if c1 == T::zero() || k == T::zero() {
        return Vec::new();
    }
    let v = -c2 / c1;
    if v.abs() > T::one() {
        return Vec::new();
    }
    let two_pi = T::PI() + T::PI();
    let theta = v.asin();
    let branches = if v.abs() == T::one() { vec![theta] } else { vec![theta, T::PI() - theta] };
    let (plo, phi) = {
        let (a, b) = (k * window.lo, k * window.hi);
        (a.min(b), a.max(b))
    };
    let mut roots = Vec::new();
    for b in branches {
        let mut n = ((plo - b) / two_pi).floor();
        loop {
            let phase = b + n * two_pi;
            if phase > phi {
                break;
            }
            let u = phase / k;
            if window.contains_closed(u) {
                roots.push(u);
            }
            n = n + T::one();
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= lit::<T>(1e-12) * (T::one() + b.abs()));
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contact {
    /// Sign change of `C₁ sin + C₂`; `g₁₁` has a pole.
    Simple,
    /// Even-order zero (`|C₂| = |C₁|`); the `g₁₁` numerator vanishes too.
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSingularity<T> {
    pub u: T,
    pub contact: Contact,
}

/// Zeros of the `g₁₁` denominator in a finite window. Simple roots are
/// refined by Brent's method on a bracket around the analytic value.
pub fn find_metric_singularities<T: Scalar>(p: &ModelParams<T>, window: Interval<T>) -> Vec<MetricSingularity<T>> {
    let k = p.k();
    let f = |u: T| p.c1 * (k * u).sin() + p.c2;
    let tangent = (p.c2.abs() - p.c1.abs()).abs() <= lit::<T>(1e-12) * p.c1.abs();
    sine_roots(p.c1, p.c2, k, window)
        .into_iter()
        .map(|u0| {
            if tangent {
                return MetricSingularity { u: u0, contact: Contact::Tangent };
            }
            let d = lit::<T>(1e-6) * (T::one() + u0.abs()) / k.abs();
            let tol = lit::<T>(1e-15) * (T::one() + u0.abs());
            let u = brent(f, u0 - d, u0 + d, tol, 200).unwrap_or(u0);
            MetricSingularity { u, contact: Contact::Simple }
        })
        .collect()
}

/// Sub-intervals of `window` where the static solution is usable:
/// `R² > 0` and `8G² ≥ 0`.
pub fn valid_intervals<T: Scalar>(p: &ModelParams<T>, g: &GFunction<T>, window: Interval<T>) -> Vec<Interval<T>> {
    let prof = StaticSineProfile::new(p);
    let n = 4096;
    prof.positive_intervals(window)
        .into_iter()
        .flat_map(|iv| g.real_intervals(iv, n))
        .filter(|iv| iv.width() > T::zero())
        .collect()
}
