//! Quantum potential `Q`, effective mass `𝓜²` and the small-`Q` margin.

use serde::Serialize;

use crate::amplitude::{AmplitudeField, Axis, Point, Reduction};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::{lit, Scalar};

/// Default bound on `|Q / 2m²c²|` below which the exponential conformal
/// factor is trusted.
pub const DEFAULT_SMALLNESS: f64 = 0.1;

/// How the two particle terms of `Q` are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QMode {
    /// `−ħ² (∂₁²R + ∂₂²R) / R`.
    TwoParticleSum,
    /// `−2ħ² R''/R` on the reduced coordinate: both particles contribute
    /// equally, giving slope `4Mm²c²` for the Airy field.
    #[default]
    EprReduced,
    /// `−ħ² R''/R`, only the reduced coordinate's own particle (slope
    /// `2Mm²c²` for the Airy field). Kept for comparison.
    FirstParticleOnly,
}

/// `Q` derived from an amplitude field.
#[derive(Debug, Clone)]
pub struct QuantumPotentialField<T: Scalar> {
    source: AmplitudeField<T>,
    mode: QMode,
    hbar: T,
    factor: T,
}

impl<T: Scalar> QuantumPotentialField<T> {
    pub fn new(source: &AmplitudeField<T>, mode: QMode, hbar: T) -> Self {
        Self { source: source.clone(), mode, hbar, factor: T::one() }
    }

    pub fn source(&self) -> &AmplitudeField<T> {
        &self.source
    }

    pub fn mode(&self) -> QMode {
        self.mode
    }

    /// `λ·Q`; only used to perturb `Q` when probing verifier sensitivity.
    pub fn scaled(&self, lambda: T) -> Self {
        Self { factor: self.factor * lambda, ..self.clone() }
    }

    fn singular(&self, s: T) -> Error {
        Error::Singular { at: s.as_f64(), nearest_zero: self.source.nearest_zero(s).map(|z| z.as_f64()) }
    }

    /// Number of particle terms that see the reduced coordinate.
    fn multiplicity(&self) -> Result<T> {
        let along = self.source.reduction();
        Ok(match (self.mode, along) {
            (QMode::EprReduced, Some(_)) => lit(2.0),
            (QMode::FirstParticleOnly, Some(_)) => T::one(),
            (QMode::TwoParticleSum, Some(Reduction::PairSum)) => lit(2.0),
            (QMode::TwoParticleSum, Some(Reduction::FirstParticle)) => T::one(),
            (_, None) => return Err(Error::Precondition("reduced evaluation needs a one-coordinate field".into())),
        })
    }

    /// `Q` only needs `R ≠ 0`: `R''/R` is unchanged by `R → |R|`.
    fn guard_reduced(&self, s: T) -> Result<()> {
        if self.source.value_at(s)? == T::zero() {
            return Err(self.singular(s));
        }
        Ok(())
    }

    /// `Q` as a function of the reduced coordinate.
    pub fn eval_at(&self, s: T) -> Result<T> {
        let n = self.multiplicity()?;
        self.guard_reduced(s)?;
        let h2 = self.hbar * self.hbar;
        Ok(self.factor * (-n * h2 * self.source.curvature_at(s)?))
    }

    /// `dQ/ds = −nħ² (R''/R)'`.
    pub fn derivative_at(&self, s: T) -> Result<T> {
        let n = self.multiplicity()?;
        self.guard_reduced(s)?;
        let h2 = self.hbar * self.hbar;
        Ok(self.factor * (-n * h2 * self.source.curvature_d1_at(s)?))
    }

    /// `Q(x₁, x₂)`.
    pub fn eval(&self, p: Point<T>) -> Result<T> {
        if let Some(along) = self.source.reduction() {
            return self.eval_at(along.coordinate(p));
        }
        let r = self.source.value(p)?;
        if r == T::zero() {
            return Err(Error::Singular { at: p[0].as_f64(), nearest_zero: None });
        }
        let h2 = self.hbar * self.hbar;
        let lap = match self.mode {
            QMode::TwoParticleSum => self.source.partial2(Axis::X1, p)? + self.source.partial2(Axis::X2, p)?,
            QMode::EprReduced => lit::<T>(2.0) * self.source.partial2(Axis::X1, p)?,
            QMode::FirstParticleOnly => self.source.partial2(Axis::X1, p)?,
        };
        Ok(self.factor * (-h2 * lap / r))
    }
}

/// `Q` of an amplitude in the given mode.
pub fn quantum_potential<T: Scalar>(ampl: &AmplitudeField<T>, mode: QMode, p: &ModelParams<T>) -> QuantumPotentialField<T> {
    QuantumPotentialField::new(ampl, mode, p.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveMassSq<T> {
    pub value: T,
    pub tachyonic: bool,
}

/// `𝓜² = m²(1 − Q/2m²c²)`, written as `m²(2m²c² − Q)/2m²c²` so that its
/// sign is exactly that of `2m²c² − Q`.
pub fn effective_mass_sq<T: Scalar>(q: T, p: &ModelParams<T>) -> EffectiveMassSq<T> {
    let q0 = p.q0();
    let value = p.m * p.m * (q0 - q) / q0;
    EffectiveMassSq { value, tachyonic: value < T::zero() }
}

/// `|Q / 2m²c²|`.
pub fn validity_margin<T: Scalar>(q: T, p: &ModelParams<T>) -> T {
    (q / p.q0()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{CustomProfile, StaticSineProfile};
    use crate::scalar::Interval;
    use proptest::prelude::*;
    use std::sync::Arc;

    type P = ModelParams<f64>;

    fn airy_q(p: &P) -> QuantumPotentialField<f64> {
        quantum_potential(&AmplitudeField::airy(p).unwrap(), QMode::EprReduced, p)
    }

    #[test]
    fn airy_q_is_linear() {
        let p = P::natural_units();
        assert!((airy_q(&p).eval_at(0.5).unwrap() - 0.2).abs() < 1e-14);
        assert!((airy_q(&p).derivative_at(0.5).unwrap() - 0.4).abs() < 1e-12);
        let pk = P { k_const: 2.0, ..p };
        assert!((airy_q(&pk).eval_at(0.0).unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn airy_q_matches_finite_difference_oracle() {
        // Q from a numerically differentiated series amplitude.
        let p = P { k_const: 2.0, ..P::natural_units() };
        let r = AmplitudeField::airy(&p).unwrap();
        // Coarse step: the series carries ~1e-12 noise at w ≈ −5.9.
        let h = 2e-2;
        let z = 0.0;
        let d2 = (-r.value_at(z + 2.0 * h).unwrap() + 16.0 * r.value_at(z + h).unwrap() - 30.0 * r.value_at(z).unwrap()
            + 16.0 * r.value_at(z - h).unwrap()
            - r.value_at(z - 2.0 * h).unwrap())
            / (12.0 * h * h);
        let q_fd = -2.0 * d2 / r.value_at(z).unwrap();
        assert!((q_fd - 4.0).abs() < 1e-6, "{q_fd}");
    }

    #[test]
    fn modes_on_first_particle_field() {
        let p = P::natural_units();
        let r = AmplitudeField::airy(&p).unwrap();
        let z = 0.5;
        let epr = quantum_potential(&r, QMode::EprReduced, &p).eval([z, 3.0]).unwrap();
        let sum = quantum_potential(&r, QMode::TwoParticleSum, &p).eval([z, 3.0]).unwrap();
        let first = quantum_potential(&r, QMode::FirstParticleOnly, &p).eval_at(z).unwrap();
        assert!((epr - 0.2).abs() < 1e-14);
        assert!((sum - 0.1).abs() < 1e-14);
        assert_eq!(sum, first);
    }

    #[test]
    fn pair_sum_field_sums_both_terms() {
        let p = P::natural_units();
        let r = AmplitudeField::static_sine(&p);
        let a = quantum_potential(&r, QMode::TwoParticleSum, &p).eval([0.3, 0.4]).unwrap();
        let b = quantum_potential(&r, QMode::EprReduced, &p).eval_at(0.7).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn constant_amplitude_has_zero_q() {
        let p = P::natural_units();
        let r = AmplitudeField::constant(1.0, Reduction::FirstParticle);
        let q = quantum_potential(&r, QMode::EprReduced, &p);
        for z in [-3.0, 0.0, 11.0] {
            assert_eq!(q.eval_at(z).unwrap(), 0.0);
        }
    }

    #[test]
    fn q_pole_at_amplitude_zero() {
        let p = P::natural_units();
        let prof = CustomProfile::new(|z: f64| Ok(z.abs()), |z: f64| Ok(z.signum()), |_| Ok(1.0), Interval::new(0.0, 1.0));
        let r = AmplitudeField::from_profile(Arc::new(prof), Reduction::FirstParticle, crate::amplitude::FieldKind::Custom);
        let err = quantum_potential(&r, QMode::EprReduced, &p).eval_at(0.0).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        let s = StaticSineProfile::new(&P { c1: 2.0, c2: 1.0, ..p });
        let r = AmplitudeField::from_profile(Arc::new(s), Reduction::PairSum, crate::amplitude::FieldKind::StaticSine);
        assert!(matches!(quantum_potential(&r, QMode::EprReduced, &p).eval_at(4.7), Err(Error::Domain { .. })));
    }

    #[test]
    fn effective_mass_examples() {
        let p = P::natural_units();
        assert_eq!(effective_mass_sq(0.0, &p), EffectiveMassSq { value: 1.0, tachyonic: false });
        assert_eq!(effective_mass_sq(2.0, &p), EffectiveMassSq { value: 0.0, tachyonic: false });
        assert_eq!(effective_mass_sq(4.0, &p), EffectiveMassSq { value: -1.0, tachyonic: true });
        assert!(effective_mass_sq(2.0 + 4.0 * f64::EPSILON, &p).tachyonic);
    }

    #[test]
    fn margin_examples() {
        let p = P::natural_units();
        assert!((validity_margin(0.2, &p) - 0.1).abs() < 1e-16);
        assert_eq!(validity_margin(0.0, &p), 0.0);
        assert_eq!(validity_margin(2.0, &p), 1.0);
    }

    proptest! {
        #[test]
        fn rescaling_leaves_q_unchanged(lambda in prop::sample::select(vec![0.5, 2.0, 10.0]), u in -3.0f64..3.0) {
            let p = P::natural_units();
            let r = AmplitudeField::static_sine(&p);
            let q = quantum_potential(&r, QMode::EprReduced, &p);
            let qs = quantum_potential(&r.scaled(lambda), QMode::EprReduced, &p);
            prop_assert!((q.eval_at(u).unwrap() - qs.eval_at(u).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn tachyon_flag_is_threshold(q in -10.0f64..10.0, m in 0.1f64..3.0) {
            let p = P { m, ..P::natural_units() };
            prop_assert_eq!(effective_mass_sq(q, &p).tachyonic, q > p.q0());
        }

        #[test]
        fn exp_factor_is_first_order(q in -0.2f64..0.2) {
            let p = P::natural_units();
            let x = q / p.q0();
            let margin = validity_margin(q, &p);
            let diff = ((-x).exp() - (1.0 - x)).abs();
            prop_assert!(diff <= margin * margin / 2.0 * (1.0 + margin));
        }
    }
}
