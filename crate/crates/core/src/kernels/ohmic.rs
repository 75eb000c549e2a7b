//! Position correlators for a strictly Ohmic bath, `J(ω) = γMω`.

use crate::error::{Error, Result};
use crate::params::{BathKind, BathSpec, OscillatorParams};
use crate::series::{matsubara_unchecked, SeriesControl, SeriesSum};

use super::free::FreeKernel;
use super::thermal::thermal_weights;

/// Precomputed constants for the underdamped Ohmic correlators.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OhmicKernel {
    params: OscillatorParams,
    gamma: f64,
    omega_r: f64,
    /// `ħ/(2Mω_r)`
    scale: f64,
    cosh_weight: f64,
    sin_weight: f64,
    /// `2γ k_B T / M`
    series_prefactor: f64,
    ctrl: SeriesControl,
}

impl OhmicKernel {
    pub(crate) fn new(params: &OscillatorParams, gamma: f64, ctrl: SeriesControl) -> Self {
        let omega_r = (params.frequency.powi(2) - 0.25 * gamma * gamma).sqrt();
        let bh = params.thermal_time();
        let (cosh_weight, sin_weight) = thermal_weights(bh * omega_r, 0.5 * bh * gamma);
        Self {
            params: *params,
            gamma,
            omega_r,
            scale: params.hbar / (2.0 * params.mass * omega_r),
            cosh_weight,
            sin_weight,
            series_prefactor: 2.0 * gamma * params.temperature / params.mass,
            ctrl,
        }
    }

    /// Symmetrized correlator for `t >= 0`.
    pub(crate) fn s(&self, t: f64) -> SeriesSum {
        let wt = self.omega_r * t;
        let resonant = self.scale
            * (-0.5 * self.gamma * t).exp()
            * (self.cosh_weight * wt.cos() + self.sin_weight * wt.sin());
        let w0sq = self.params.frequency * self.params.frequency;
        let g2 = self.gamma * self.gamma;
        let series = self.ctrl.sum(|n| {
            let nu = matsubara_unchecked(n, &self.params);
            let a = nu * nu + w0sq;
            nu * (-nu * t).exp() / (a * a - g2 * nu * nu)
        });
        SeriesSum {
            value: resonant - self.series_prefactor * series.value,
            ..series
        }
    }

    pub(crate) fn a(&self, t: f64) -> f64 {
        -self.scale * (self.omega_r * t).sin() * (-0.5 * self.gamma * t.abs()).exp()
    }
}

fn check_ohmic(params: &OscillatorParams, bath: &BathSpec) -> Result<()> {
    params.validate()?;
    bath.validate(params)?;
    if bath.is_drude() {
        return Err(Error::UnsupportedRegime(
            "Ohmic correlators requested for a Drude bath".into(),
        ));
    }
    Ok(())
}

/// Symmetrized position correlator `S(t)` for an Ohmic (or uncoupled) bath.
///
/// The Matsubara sum is truncated according to `ctrl`; the returned
/// [`SeriesSum`] reports how many terms were used and whether adaptive
/// summation converged. For `γ = 0` no series is needed and `terms` is 0.
pub fn ohmic_position_s(
    t: f64,
    params: &OscillatorParams,
    bath: &BathSpec,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    check_ohmic(params, bath)?;
    ctrl.validate()?;
    let t = t.abs();
    match bath.kind {
        BathKind::None => Ok(SeriesSum {
            value: FreeKernel::new(params).position_s(t),
            terms: 0,
            converged: true,
        }),
        _ => {
            let sum = OhmicKernel::new(params, bath.gamma, *ctrl).s(t);
            if !sum.converged {
                log::warn!(
                    "Matsubara series at t = {t} did not converge within {} terms",
                    sum.terms
                );
            }
            Ok(sum)
        }
    }
}

/// Antisymmetrized position correlator
/// `A(t) = −ħ/(2Mω_r) sin(ω_r t) e^{−γ|t|/2}`.
pub fn ohmic_position_a(t: f64, params: &OscillatorParams, bath: &BathSpec) -> Result<f64> {
    check_ohmic(params, bath)?;
    Ok(OhmicKernel::new(params, bath.gamma, SeriesControl::default()).a(t))
}
