//! Physical constants and integration constants shared by both models.

use std::fmt;
use std::str::FromStr;

use crate::scalar::{lit, Scalar};

/// Parameter set for the Airy/black-hole example and the static example.
///
/// All numerics default to natural units, `hbar = c = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub hbar: T,
    pub c: T,
    pub m: T,
    /// Integration constant `M` of the Airy amplitude and black-hole metric.
    pub big_m: T,
    /// Integration constant `K` of the Airy equation.
    pub k_const: T,
    /// Black-hole metric constant `C`.
    pub c_const: T,
    /// Airy normalisation `A`. Cancels in the quantum potential.
    pub a_norm: T,
    pub c1: T,
    pub c2: T,
}

/// A violated positivity constraint, named after the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Non-fatal parameter observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamWarning {
    NegativeBigM,
    NegativeK,
}

impl<T: Scalar> Default for ModelParams<T> {
    fn default() -> Self {
        Self::natural_units()
    }
}

impl<T: Scalar> ModelParams<T> {
    pub fn natural_units() -> Self {
        Self {
            hbar: T::one(),
            c: T::one(),
            m: T::one(),
            big_m: lit(0.1),
            k_const: T::zero(),
            c_const: T::one(),
            a_norm: T::one(),
            c1: T::one(),
            c2: lit(2.0),
        }
    }

    /// Wavenumber `m c / hbar` of the static solution.
    pub fn k(&self) -> T {
        self.m * self.c / self.hbar
    }

    /// Tachyon threshold `2 m² c²`.
    pub fn q0(&self) -> T {
        lit::<T>(2.0) * self.m * self.m * self.c * self.c
    }

    /// `m² c²`.
    pub fn mc_sq(&self) -> T {
        self.m * self.m * self.c * self.c
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let checks: [(&'static str, T); 4] =
            [("hbar", self.hbar), ("c", self.c), ("m", self.m), ("A", self.a_norm)];
        for (field, value) in checks {
            if !(value > T::zero()) || !value.is_finite() {
                out.push(Violation { field, message: format!("{field} must be > 0") });
            }
        }
        let extra: [(&'static str, T); 5] = [
            ("big_m", self.big_m),
            ("k_const", self.k_const),
            ("c_const", self.c_const),
            ("c1", self.c1),
            ("c2", self.c2),
        ];
        for (field, value) in extra {
            if !value.is_finite() {
                out.push(Violation { field, message: format!("{field} must be finite") });
            }
        }
        if out.is_empty() {
            let k = self.k();
            if !(k.is_finite() && k > T::zero()) {
                out.push(Violation { field: "k", message: "k = m c / hbar must be finite and > 0".into() });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Negative `M` or `K` are accepted but flagged.
    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        if self.big_m < T::zero() {
            out.push(ParamWarning::NegativeBigM);
        }
        if self.k_const < T::zero() {
            out.push(ParamWarning::NegativeK);
        }
        out
    }

    /// Sets one parameter by its config-file key.
    pub fn set(&mut self, key: &str, value: T) -> Result<(), ConfigError> {
        let slot = match key {
            "hbar" => &mut self.hbar,
            "c" => &mut self.c,
            "m" => &mut self.m,
            "big_m" | "M" => &mut self.big_m,
            "k_const" | "K" => &mut self.k_const,
            "c_const" | "C" => &mut self.c_const,
            "a" | "A" | "a_norm" => &mut self.a_norm,
            "c1" | "C1" => &mut self.c1,
            "c2" | "C2" => &mut self.c2,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        };
        *slot = value;
        Ok(())
    }

    /// `(key, value)` pairs in config-file spelling, for echoing into outputs.
    pub fn entries(&self) -> [(&'static str, T); 9] {
        [
            ("hbar", self.hbar),
            ("c", self.c),
            ("m", self.m),
            ("big_m", self.big_m),
            ("k_const", self.k_const),
            ("c_const", self.c_const),
            ("a", self.a_norm),
            ("c1", self.c1),
            ("c2", self.c2),
        ]
    }
}

const PARAM_KEYS: [&str; 16] = [
    "hbar", "c", "m", "big_m", "M", "k_const", "K", "c_const", "C", "a", "A", "a_norm", "c1", "C1", "c2",
    "C2",
];

fn is_param_key(key: &str) -> bool {
    PARAM_KEYS.contains(&key)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: cannot parse value for `{key}`")]
    Value { line: usize, key: String },
    #[error("unknown parameter `{0}`")]
    UnknownKey(String),
}

/// Flat `key = value` configuration, `#` starts a comment.
///
/// Keys are kept in file order; later duplicates win when applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueConfig {
    pub entries: Vec<(String, String, usize)>,
}

impl FromStr for KeyValueConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: idx + 1 })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: idx + 1 });
            }
            entries.push((key.to_string(), value.trim().to_string(), idx + 1));
        }
        Ok(Self { entries })
    }
}

impl KeyValueConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str())
    }

    /// Applies every model-parameter key; keys for other consumers are returned untouched.
    pub fn apply_params<T: Scalar>(&self, params: &mut ModelParams<T>) -> Result<Vec<&str>, ConfigError> {
        let mut rest = Vec::new();
        for (key, value, line) in &self.entries {
            if !is_param_key(key) {
                rest.push(key.as_str());
                continue;
            }
            let v: f64 = value
                .parse()
                .map_err(|_| ConfigError::Value { line: *line, key: key.clone() })?;
            params.set(key, lit(v))?;
        }
        Ok(rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = ModelParams<f64>;

    #[test]
    fn natural_units_defaults() {
        let p = P::natural_units();
        assert_eq!(p.k(), 1.0);
        assert_eq!(p.q0(), 2.0);
        assert_eq!(p.big_m, 0.1);
        assert_eq!((p.k_const, p.c_const, p.a_norm, p.c1, p.c2), (0.0, 1.0, 1.0, 1.0, 2.0));
        assert!(p.validate().is_empty());
    }

    #[test]
    fn zero_mass_is_reported() {
        let p = P { m: 0.0, ..P::natural_units() };
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "m must be > 0");
    }

    #[test]
    fn negative_normalisation_is_reported() {
        let p = P { a_norm: -1.0, ..P::natural_units() };
        assert_eq!(p.validate()[0].message, "A must be > 0");
    }

    #[test]
    fn every_violation_listed() {
        let p = P { hbar: 0.0, c: -1.0, m: 0.0, a_norm: 0.0, ..P::natural_units() };
        let names: Vec<_> = p.validate().into_iter().map(|v| v.field).collect();
        assert_eq!(names, ["hbar", "c", "m", "A"]);
    }

    #[test]
    fn negative_m_and_k_warn_but_validate() {
        let p = P { big_m: -0.3, k_const: -1.0, ..P::natural_units() };
        assert!(p.validate().is_empty());
        assert_eq!(p.warnings(), vec![ParamWarning::NegativeBigM, ParamWarning::NegativeK]);
    }

    #[test]
    fn config_parsing() {
        let cfg: KeyValueConfig = "# comment\nbig_m = 0.5 # inline\n\nC1=2\ngrid_n = 11\n".parse().unwrap();
        let mut p = P::natural_units();
        let rest = cfg.apply_params(&mut p).unwrap();
        assert_eq!(p.big_m, 0.5);
        assert_eq!(p.c1, 2.0);
        assert_eq!(rest, vec!["grid_n"]);
        assert_eq!(cfg.get("grid_n"), Some("11"));
    }

    #[test]
    fn config_errors() {
        assert_eq!("oops".parse::<KeyValueConfig>(), Err(ConfigError::Syntax { line: 1 }));
        let cfg: KeyValueConfig = "m = abc".parse().unwrap();
        let mut p = P::natural_units();
        assert!(matches!(cfg.apply_params(&mut p), Err(ConfigError::Value { line: 1, .. })));
    }

    proptest::proptest! {
        #[test]
        fn k_times_hbar_is_mc(hbar in 1e-3f64..1e3, c in 1e-3f64..1e3, m in 1e-3f64..1e3) {
            let p = P { hbar, c, m, ..P::natural_units() };
            let lhs = p.k() * p.hbar;
            let rhs = p.m * p.c;
            proptest::prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
        }
    }
}
