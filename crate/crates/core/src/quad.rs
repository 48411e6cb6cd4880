//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::scalar::{lit, Scalar};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: usize = 12;

/// Kronrod estimate and its error on one panel.
///
/// The raw |Kronrod − Gauss| difference is rescaled against the panel's
/// mean absolute deviation, `resasc·min(1, (200·err/resasc)^{3/2})`, and
/// floored at `50·ε·∫|f|`.
pub fn gk15<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = lit::<T>(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    let mut resabs = fc.abs() * lit(WGK[7]);
    let mut pairs = [(T::zero(), T::zero()); 7];
    for (j, slot) in pairs.iter_mut().enumerate() {
        let dx = radius * lit(XGK[j]);
        let (f1, f2) = (f(center - dx), f(center + dx));
        *slot = (f1, f2);
        kronrod = kronrod + (f1 + f2) * lit(WGK[j]);
        resabs = resabs + (f1.abs() + f2.abs()) * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * lit(WG[j / 2]);
        }
    }
    let mean = kronrod * half;
    let mut resasc = (fc - mean).abs() * lit(WGK[7]);
    for (j, (f1, f2)) in pairs.iter().enumerate() {
        resasc = resasc + ((*f1 - mean).abs() + (*f2 - mean).abs()) * lit(WGK[j]);
    }
    let r = radius.abs();
    let resasc = resasc * r;
    let resabs = resabs * r;
    let mut err = ((kronrod - gauss) * radius).abs();
    if resasc > T::zero() && err > T::zero() {
        err = resasc * T::one().min((lit::<T>(200.0) * err / resasc).powf(lit(1.5)));
    }
    err = err.max(lit::<T>(50.0) * T::epsilon() * resabs);
    (kronrod * radius, err)
}

/// Integrates over `[a, b]` starting from `panels` equal panels and bisecting
/// any panel whose error estimate exceeds its share of `abs_tol`.
///
/// `noise_density` is the integrand's round-off level; panels are accepted
/// once their error estimate falls below `noise_density × width`.
///
/// Returns the integral and the accumulated error estimate.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T, panels: usize, abs_tol: T, noise_density: T) -> (T, T) {
    let panels = panels.max(1);
    let width = (b - a) / T::from_usize(panels).unwrap();
    let per_panel = (abs_tol / T::from_usize(panels).unwrap()).max(noise_density * width.abs());
    let mut total = T::zero();
    let mut err = T::zero();
    for i in 0..panels {
        let lo = a + width * T::from_usize(i).unwrap();
        let hi = if i + 1 == panels { b } else { lo + width };
        let (v, e) = adapt(f, lo, hi, per_panel, 0);
        total = total + v;
        err = err + e;
    }
    (total, err)
}

fn adapt<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, depth: usize) -> (T, T) {
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth >= MAX_DEPTH {
        return (v, e);
    }
    let mid = lit::<T>(0.5) * (a + b);
    let half_tol = lit::<T>(0.5) * tol;
    let (v1, e1) = adapt(f, a, mid, half_tol, depth + 1);
    let (v2, e2) = adapt(f, mid, b, half_tol, depth + 1);
    (v1 + v2, e1 + e2)
}
