//! Airy function of the first kind on the real line.
//!
//! `Ai` is evaluated from its Maclaurin series for `|w| <= SERIES_LIMIT` and
//! from the large-argument asymptotic expansions beyond. The integral
//! representation `Ai(w) = (1/π) ∫₀^∞ cos(w s + s³/3) ds` is evaluated
//! separately by quadrature so that the two routes can be compared.
//!
//! The Airy amplitude of the first model is `A·Ai(w)` with
//!
//! ```text
//! w = −(z + K ħ² / (2 M m² c²)) · (2 M m² c² / ħ²)^{1/3}
//! ```
//!
//! i.e. the phase `−s(z + …)(…)^{1/3} + s³/3` of the cosine integral is the
//! standard phase `w s + s³/3` under this substitution. The mapping lives in
//! [`AiryArgument`] and nowhere else.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quad;
use crate::scalar::{lit, Scalar};

/// `Ai(0) = 3^{-2/3} / Γ(2/3)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_239_260;
/// `−Ai'(0) = 3^{-1/3} / Γ(1/3)`.
pub const NEG_AI_PRIME_ZERO: f64 = 0.258_819_403_792_806_798_405;
/// First (least negative) zero of `Ai`.
pub const AI_FIRST_ZERO: f64 = -2.338_107_410_459_767_038_489;

/// Branch switchover in `|w|`. At 7 the series loses under `e^{ζ}·ε ≈ 1e-11`
/// to cancellation and the asymptotic remainder is below `e^{-2ζ} ≈ 2e-11`.
pub const SERIES_LIMIT: f64 = 7.0;

/// Tail estimate above which [`airy_integral_check`] refuses to answer.
pub const TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AiryMethod {
    Series,
    Asymptotic,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue<T> {
    pub ai: T,
    pub ai_prime: T,
    pub method: AiryMethod,
}

impl<T: Scalar> AiryValue<T> {
    /// `Ai''(w) = w Ai(w)`.
    pub fn ai_second(&self, w: T) -> T {
        w * self.ai
    }
}

pub fn airy_ai<T: Scalar>(w: T) -> Result<AiryValue<T>> {
    if !w.is_finite() {
        return Err(Error::NonFinite(w.as_f64()));
    }
    if w.abs() <= lit(SERIES_LIMIT) {
        Ok(airy_series(w))
    } else if w > T::zero() {
        Ok(airy_asymptotic_positive(w))
    } else {
        Ok(airy_asymptotic_negative(-w))
    }
}

/// Maclaurin series `Ai = c₁ f − c₂ g`.
pub fn airy_series<T: Scalar>(w: T) -> AiryValue<T> {
    let w3 = w * w * w;
    let eps = T::epsilon() * lit(0.25);
    let mut f = T::one();
    let mut g = w;
    let mut fp = T::zero();
    let mut gp = T::one();
    // Current terms of f, g, f', g'.
    let mut tf = T::one();
    let mut tg = w;
    let mut tfp = w * w * lit(0.5);
    let mut tgp = T::one();
    fp = fp + tfp;
    for k in 1..200usize {
        let kk = lit::<T>(3.0 * k as f64);
        tf = tf * w3 / ((kk - T::one()) * kk);
        tg = tg * w3 / (kk * (kk + T::one()));
        if k >= 2 {
            tfp = tfp * w3 / ((kk - lit(3.0)) * (kk - T::one()));
            fp = fp + tfp;
        }
        tgp = tgp * w3 / (kk * (kk - lit(2.0)));
        f = f + tf;
        g = g + tg;
        gp = gp + tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs() + T::one();
        if k > 2 && tf.abs() + tg.abs() + tfp.abs() + tgp.abs() <= eps * scale {
            break;
        }
    }
    let c1 = lit::<T>(AI_ZERO);
    let c2 = lit::<T>(NEG_AI_PRIME_ZERO);
    AiryValue { ai: c1 * f - c2 * g, ai_prime: c1 * fp - c2 * gp, method: AiryMethod::Series }
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn asymptotic_coefficients<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    u.push(T::one());
    v.push(T::one());
    for k in 1..n {
        let kf = k as f64;
        let uk = u[k - 1]
            * lit((6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
        u.push(uk);
        v.push(-uk * lit((6.0 * kf + 1.0) / (6.0 * kf - 1.0)));
    }
    (u, v)
}

const MAX_ASYMPTOTIC_TERMS: usize = 40;

/// Sums `Σ sign_k c_k ζ^{-k}` over the selected indices, stopping at the
/// smallest term.
fn truncated_sum<T: Scalar>(coeffs: &[T], zeta_inv: T, start: usize, stride: usize, alternate: bool) -> T {
    let mut sum = T::zero();
    let mut last = T::infinity();
    let mut power = zeta_inv.powi(start as i32);
    let step = zeta_inv.powi(stride as i32);
    let mut sign = T::one();
    let mut idx = start;
    while idx < coeffs.len() {
        let term = coeffs[idx] * power;
        if term.abs() >= last {
            break;
        }
        sum = sum + sign * term;
        if term.abs() <= T::epsilon() * lit(0.1) * sum.abs() {
            break;
        }
        last = term.abs();
        power = power * step;
        if alternate {
            sign = -sign;
        }
        idx += stride;
    }
    sum
}

fn airy_asymptotic_positive<T: Scalar>(x: T) -> AiryValue<T> {
    let (u, v) = asymptotic_coefficients::<T>(MAX_ASYMPTOTIC_TERMS);
    let zeta = lit::<T>(2.0 / 3.0) * x * x.sqrt();
    let zi = zeta.recip();
    let pref = (-zeta).exp() / (lit::<T>(2.0) * T::PI().sqrt());
    let q = x.sqrt().sqrt();
    let su = truncated_sum(&u, zi, 0, 1, true);
    let sv = truncated_sum(&v, zi, 0, 1, true);
    AiryValue { ai: pref / q * su, ai_prime: -pref * q * sv, method: AiryMethod::Asymptotic }
}

/// Expansion of `Ai(−x)` for large positive `x`.
fn airy_asymptotic_negative<T: Scalar>(x: T) -> AiryValue<T> {
    let (u, v) = asymptotic_coefficients::<T>(MAX_ASYMPTOTIC_TERMS);
    let zeta = lit::<T>(2.0 / 3.0) * x * x.sqrt();
    let zi = zeta.recip();
    let theta = zeta - T::FRAC_PI_4();
    let (s, c) = theta.sin_cos();
    let q = x.sqrt().sqrt();
    let rp = T::PI().sqrt().recip();
    let u_even = truncated_sum(&u, zi, 0, 2, true);
    let u_odd = truncated_sum(&u, zi, 1, 2, true);
    let v_even = truncated_sum(&v, zi, 0, 2, true);
    let v_odd = truncated_sum(&v, zi, 1, 2, true);
    AiryValue {
        ai: rp / q * (c * u_even + s * u_odd),
        ai_prime: rp * q * (s * v_even - c * v_odd),
        method: AiryMethod::Asymptotic,
    }
}

/// Mapping between the amplitude coordinate `z` and the standard Airy argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryArgument<T> {
    /// `(2 M m² c² / ħ²)^{1/3}`; negative when `M < 0`.
    pub scale: T,
    /// `K ħ² / (2 M m² c²)`.
    pub shift: T,
}

impl<T: Scalar> AiryArgument<T> {
    pub fn new(p: &ModelParams<T>) -> Result<Self> {
        let slope = lit::<T>(2.0) * p.big_m * p.mc_sq() / (p.hbar * p.hbar);
        if p.big_m == T::zero() || !slope.is_finite() || slope == T::zero() {
            return Err(Error::DegenerateParameter("M = 0 makes the Airy scale vanish"));
        }
        Ok(Self { scale: slope.cbrt(), shift: p.k_const / slope })
    }

    pub fn argument(&self, z: T) -> T {
        -(z + self.shift) * self.scale
    }

    pub fn coordinate(&self, w: T) -> T {
        -w / self.scale - self.shift
    }

    /// `dw/dz`.
    pub fn jacobian(&self) -> T {
        -self.scale
    }
}

/// Evaluates `(1/π) ∫₀^{s_max} cos(w s + s³/3) ds` plus an asymptotic tail.
///
/// The finite part uses adaptive Gauss–Kronrod on `n/15` initial panels. The
/// tail `∫_{s_max}^∞` is replaced by two integration-by-parts terms,
/// `−sin φ/φ' + cos φ·φ''/φ'³` at `s_max`; the remainder is bounded by
/// `φ''/φ'³ = 2 s_max / (w + s_max²)³`, reported as the tail estimate.
pub fn airy_integral_check<T: Scalar>(w: T, s_max: T, n: usize) -> Result<T> {
    Ok(oscillatory_airy_integral(w, s_max, n)?.0)
}

/// Ai from the integral representation, Ai' from a five-point central
/// difference of it with step `1e-3` (accuracy commensurate with the
/// quadrature itself).
pub fn airy_by_quadrature<T: Scalar>(w: T, s_max: T, n: usize) -> Result<AiryValue<T>> {
    let ai = airy_integral_check(w, s_max, n)?;
    let h = lit::<T>(1e-3);
    let two = lit::<T>(2.0);
    let eight = lit::<T>(8.0);
    let f = |x: T| airy_integral_check(x, s_max, n);
    let ai_prime = (f(w - two * h)? - eight * f(w - h)? + eight * f(w + h)? - f(w + two * h)?) / (lit::<T>(12.0) * h);
    Ok(AiryValue { ai, ai_prime, method: AiryMethod::Quadrature })
}

/// Returns the integral and the tail remainder bound.
fn oscillatory_airy_integral<T: Scalar>(w: T, s_max: T, n: usize) -> Result<(T, T)> {
    if !w.is_finite() || !s_max.is_finite() {
        return Err(Error::NonFinite(if w.is_finite() { s_max.as_f64() } else { w.as_f64() }));
    }
    if !(s_max > T::zero()) {
        return Err(Error::Precondition("s_max must be > 0".into()));
    }
    if n < 100 {
        return Err(Error::Precondition(format!("need at least 100 quadrature points, got {n}")));
    }
    let limit = lit::<T>(TAIL_LIMIT);
    let third = lit::<T>(1.0 / 3.0);
    let phase = |s: T| w * s + third * s * s * s;
    let dphase = w + s_max * s_max;
    let ddphase = lit::<T>(2.0) * s_max;
    if !(dphase > T::zero()) {
        return Err(Error::Accuracy { tail: f64::INFINITY, limit: TAIL_LIMIT });
    }
    let tail_bound = ddphase / (dphase * dphase * dphase);
    if tail_bound > limit {
        return Err(Error::Accuracy { tail: tail_bound.as_f64(), limit: TAIL_LIMIT });
    }
    let (sin_e, cos_e) = phase(s_max).sin_cos();
    let tail = -sin_e / dphase + cos_e * ddphase / (dphase * dphase * dphase);
    let panels = (n / 15).max(1);
    // cos(φ) carries an absolute round-off of about ε·|φ(s_max)|.
    let noise = T::epsilon() * lit::<T>(16.0) * (phase(s_max).abs() + T::one());
    let (body, qerr) = quad::integrate(&|s: T| phase(s).cos(), T::zero(), s_max, panels, limit * lit(0.1), noise);
    if qerr > limit {
        return Err(Error::Accuracy { tail: qerr.as_f64(), limit: TAIL_LIMIT });
    }
    Ok(((body + tail) * T::FRAC_1_PI(), tail_bound * T::FRAC_1_PI()))
}
