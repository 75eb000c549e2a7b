use crate::params::OscillatorParams;

use super::thermal::thermal_weights;

/// Equilibrium correlators of the uncoupled oscillator (`γ = 0`).
#[derive(Debug, Clone, Copy)]
pub(crate) struct FreeKernel {
    omega: f64,
    /// `ħ/(2Mω0)`
    position_scale: f64,
    /// `Mħω0/2`
    momentum_scale: f64,
    /// `coth(βħω0/2)`
    coth: f64,
}

impl FreeKernel {
    pub(crate) fn new(params: &OscillatorParams) -> Self {
        let omega = params.frequency;
        let (coth, _) = thermal_weights(params.thermal_time() * omega, 0.0);
        Self {
            omega,
            position_scale: params.hbar / (2.0 * params.mass * omega),
            momentum_scale: 0.5 * params.mass * params.hbar * omega,
            coth,
        }
    }

    pub(crate) fn position_s(&self, t: f64) -> f64 {
        self.position_scale * self.coth * (self.omega * t).cos()
    }

    pub(crate) fn position_a(&self, t: f64) -> f64 {
        -self.position_scale * (self.omega * t).sin()
    }

    pub(crate) fn momentum_s(&self, t: f64) -> f64 {
        self.momentum_scale * self.coth * (self.omega * t).cos()
    }

    pub(crate) fn momentum_a(&self, t: f64) -> f64 {
        -self.momentum_scale * (self.omega * t).sin()
    }
}
