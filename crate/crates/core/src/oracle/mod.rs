//! Independent numerical routes used to validate the closed forms.
//!
//! Nothing here calls the closed-form densities: the characteristic function
//! is built from the slit operators and the thermal Gaussian expectation, its
//! slit integrals are done by adaptive quadrature, and densities are recovered
//! by explicit Fourier inversion.

mod charfn;
mod finite_diff;
mod quadrature;

pub use charfn::{
    characteristic_function, commutator_shifts, joint_density_by_inversion, CharFunctionInput,
    InversionGrid,
};
pub use finite_diff::finite_difference_second_derivative;
pub use quadrature::{gauss_kronrod, quadrature_marginalize, QuadratureTolerance};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("quadrature on [{a}, {b}] did not reach tolerance: error estimate {estimate:e}")]
    Quadrature { a: f64, b: f64, estimate: f64 },
    #[error(
        "grid covers only {covered:.2} standard deviations on one side (need {required}); \
         integrated mass {mass}"
    )]
    Coverage { covered: f64, required: f64, mass: f64 },
    #[error("step size {h} is below the roundoff floor {floor}")]
    StepSize { h: f64, floor: f64 },
    #[error("invalid oracle input: {0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
}
