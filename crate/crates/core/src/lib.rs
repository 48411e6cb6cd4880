//! Effective geometry of two-particle EPR states in the Bohm–de Broglie
//! picture of a scalar field.
//!
//! The quantum potential `Q` of an amplitude `R` turns into a conformal
//! factor of an effective metric. Two worked models are provided:
//!
//! * an Airy amplitude in `z = x₁`, whose linear `Q` maps through
//!   `z → y → x` onto the 2D black-hole metric `−α dt² + dx²/α`;
//! * a static sinusoidal `R²` in `u = x₁ + x₂` with antisymmetric momenta,
//!   whose `g₁₁` has poles at the zeros of `R²`.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod amplitude;
pub mod error;
pub mod geometry;
pub mod params;
pub mod quad;
pub mod quantum;
pub mod roots;
pub mod scalar;
pub mod special;
pub mod static_model;
pub mod trajectory;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Interval, Scalar};

pub type Params = params::ModelParams<f64>;
pub type Amplitude = amplitude::AmplitudeField<f64>;
pub type Phase = amplitude::PhaseField<f64>;
pub type QuantumPotential = quantum::QuantumPotentialField<f64>;
pub type Metric = geometry::Metric2D<f64>;
pub type CoordinateMap = geometry::CoordinateMap<f64>;
pub type Horizons = geometry::HorizonSet<f64>;
pub type Window = geometry::ValidityWindow<f64>;
pub type G = static_model::GFunction<f64>;
pub type Grid = verify::Grid<f64>;
pub type Trajectory = trajectory::TrajectoryPair<f64>;
