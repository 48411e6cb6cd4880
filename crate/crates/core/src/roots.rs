//! Bracketing root refinement and sign-change scanning.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Brent's method on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
///
/// Converges when the bracket is narrower than `xtol` (absolute) or an exact
/// zero is hit.
pub fn brent<T, F>(mut f: F, a: T, b: T, xtol: T, max_iter: usize) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::RootFinding("non-finite function value at bracket end"));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFinding("bracket does not straddle a sign change"));
    }
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let half = lit::<T>(0.5);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + half * xtol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b = b + if d.abs() > tol { d } else { if m < T::zero() { -tol } else { tol } };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::RootFinding("non-finite function value inside bracket"));
        }
    }
    Err(Error::RootFinding("iteration limit reached"))
}

/// Samples `f` on `n` uniform points of `[lo, hi]` and returns every
/// sub-interval whose endpoints carry opposite signs (or an exact zero at
/// the left end).
pub fn sign_change_brackets<T, F>(mut f: F, lo: T, hi: T, n: usize) -> Vec<(T, T)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let n = n.max(2);
    let step = (hi - lo) / T::from_usize(n - 1).unwrap();
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * T::from_usize(i).unwrap() };
        let fx = f(x);
        let crosses = prev_f == T::zero() || (prev_f.signum() != fx.signum() && fx != T::zero());
        if prev_f.is_finite() && fx.is_finite() && crosses {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f == T::zero() {
        out.push((prev_x, prev_x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = brent(|x: f64| x * x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_same_sign_bracket() {
        assert!(brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn exact_endpoint_zero() {
        assert_eq!(brent(|x: f64| x, 0.0, 1.0, 1e-12, 50).unwrap(), 0.0);
    }

    #[test]
    fn scan_finds_sine_roots() {
        let b = sign_change_brackets(f64::sin, 0.5, 10.0, 200);
        assert_eq!(b.len(), 3);
        for (lo, hi) in b {
            let r = brent(f64::sin, lo, hi, 1e-14, 100).unwrap();
            assert!((r / std::f64::consts::PI - (r / std::f64::consts::PI).round()).abs() < 1e-13);
        }
    }
}
