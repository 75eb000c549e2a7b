//! Exact measurement statistics of a damped quantum harmonic oscillator
//! under repeated Gaussian (generalized) position or momentum measurements.
//!
//! The oscillator is coupled to an Ohmic or Drude-regularized heat bath and
//! starts in the global thermal state. [`kernels`] evaluates the equilibrium
//! correlation functions, [`monitoring`] assembles the joint and conditional
//! densities of two selective measurements with `n` nonselective ones in
//! between, together with their small-spacing and long-time limits.
//!
//! Natural units `ħ = M = ω0 = k_B = 1` are the default, but every record
//! accepts arbitrary positive physical values.

pub mod error;
pub mod kernels;
pub mod monitoring;
pub mod params;
pub mod series;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use error::{Error, Result};
pub use kernels::{Classical, CorrelatorSet, DrudeCoefficients, Kernel};
pub use monitoring::{ConditionalGaussian, JointTwoPoint, MeasurementProtocol};
pub use params::{BathKind, BathSpec, Observable, OscillatorParams};
pub use series::{SeriesControl, SeriesMode, SeriesSum};
