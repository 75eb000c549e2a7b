//! Position and momentum correlators for the Drude-regularized Ohmic bath,
//! `J(ω) = Mγω / (1 + ω²/ω_D²)`.
//!
//! The bath introduces three relaxation rates: a damped resonance
//! `α ± iη` and a fast real rate `δ ≈ ω_D`. All closed forms below are
//! written for `t >= 0`; the public functions extend them by parity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BathKind, BathSpec, OscillatorParams};
use crate::series::{matsubara_unchecked, SeriesControl, SeriesSum};

use super::free::FreeKernel;
use super::thermal::thermal_weights;

/// Relaxation rates `(α, η, δ)` of the Drude-damped oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeCoefficients {
    pub alpha: f64,
    pub eta: f64,
    pub delta: f64,
}

/// Relative residuals of the three relations fixing `(α, η, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeResiduals {
    /// `2α + δ = ω_D`
    pub sum: f64,
    /// `α² + η² = ω0² ω_D / δ`
    pub product: f64,
    /// `α² + η² + 2αδ = ω0² + γ ω_D`
    pub pair: f64,
}

impl DrudeResiduals {
    pub fn max(&self) -> f64 {
        self.sum.max(self.product).max(self.pair)
    }
}

impl DrudeCoefficients {
    /// First-order expansion in `γ/ω_D`; used to seed the exact solve.
    pub fn first_order(omega0: f64, gamma: f64, cutoff: f64) -> Self {
        let alpha = 0.5 * gamma * cutoff * cutoff / (cutoff * cutoff + omega0 * omega0);
        let eta = (omega0 * omega0 - alpha * alpha + 2.0 * alpha * omega0 * omega0 / cutoff).sqrt();
        Self {
            alpha,
            eta,
            delta: cutoff - 2.0 * alpha,
        }
    }

    pub fn residuals(&self, omega0: f64, gamma: f64, cutoff: f64) -> DrudeResiduals {
        let Self { alpha, eta, delta } = *self;
        let w0sq = omega0 * omega0;
        let p = alpha * alpha + eta * eta;
        let product_rhs = w0sq * cutoff / delta;
        let pair_rhs = w0sq + gamma * cutoff;
        DrudeResiduals {
            sum: (2.0 * alpha + delta - cutoff).abs() / cutoff,
            product: (p - product_rhs).abs() / product_rhs,
            pair: (p + 2.0 * alpha * delta - pair_rhs).abs() / pair_rhs,
        }
    }
}

/// Solves the implicit relations for `(α, η, δ)` exactly.
///
/// Eliminating `δ = ω_D − 2α` and `α² + η² = ω0²ω_D/δ` leaves one scalar
/// equation in `α`, solved by Newton iteration from the first-order guess.
pub fn drude_coefficients(params: &OscillatorParams, bath: &BathSpec) -> Result<DrudeCoefficients> {
    params.validate()?;
    bath.validate(params)?;
    let cutoff = bath.drude_cutoff().ok_or_else(|| {
        Error::UnsupportedRegime("Drude coefficients requested for a non-Drude bath".into())
    })?;
    solve_coefficients(params.frequency, bath.gamma, cutoff)
}

pub(crate) fn solve_coefficients(omega0: f64, gamma: f64, cutoff: f64) -> Result<DrudeCoefficients> {
    let w0sq = omega0 * omega0;
    let f = |a: f64| {
        let d = cutoff - 2.0 * a;
        w0sq * cutoff / d + 2.0 * a * d - w0sq - gamma * cutoff
    };
    let df = |a: f64| {
        let d = cutoff - 2.0 * a;
        2.0 * w0sq * cutoff / (d * d) + 2.0 * cutoff - 8.0 * a
    };

    let mut alpha = DrudeCoefficients::first_order(omega0, gamma, cutoff).alpha;
    let mut converged = false;
    for _ in 0..100 {
        let step = f(alpha) / df(alpha);
        alpha -= step;
        if step.abs() <= 4.0 * f64::EPSILON * alpha.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    // one polishing step after the tolerance is met
    alpha -= f(alpha) / df(alpha);

    let delta = cutoff - 2.0 * alpha;
    let eta_sq = w0sq * cutoff / delta - alpha * alpha;
    if !converged || !(alpha >= 0.0) || !(delta > 0.0) || !(eta_sq > 0.0) {
        return Err(Error::UnsupportedRegime(format!(
            "no underdamped Drude solution for gamma = {gamma}, omega_D = {cutoff}"
        )));
    }
    Ok(DrudeCoefficients {
        alpha,
        eta: eta_sq.sqrt(),
        delta,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DrudeKernel {
    params: OscillatorParams,
    coeffs: DrudeCoefficients,
    gamma: f64,
    cutoff: f64,
    /// `(δ² − α² + η²) / ((α−δ)² + η²)`
    c1: f64,
    /// `2αη / ((α−δ)² + η²)`
    c2: f64,
    /// `(α−δ)² + η²`
    d: f64,
    /// `α² + η²`
    p: f64,
    cosh_weight: f64,
    sin_weight: f64,
    ctrl: SeriesControl,
}

/// Relative distance below which `ν_n = δ` is treated as the removable
/// singularity of the Matsubara term.
const RESONANCE_WINDOW: f64 = 1e-8;

impl DrudeKernel {
    pub(crate) fn new(
        params: &OscillatorParams,
        gamma: f64,
        cutoff: f64,
        ctrl: SeriesControl,
    ) -> Result<Self> {
        let coeffs = solve_coefficients(params.frequency, gamma, cutoff)?;
        let DrudeCoefficients { alpha, eta, delta } = coeffs;
        let d = (alpha - delta).powi(2) + eta * eta;
        let bh = params.thermal_time();
        let (cosh_weight, sin_weight) = thermal_weights(bh * eta, bh * alpha);
        Ok(Self {
            params: *params,
            coeffs,
            gamma,
            cutoff,
            c1: (delta * delta - alpha * alpha + eta * eta) / d,
            c2: 2.0 * alpha * eta / d,
            d,
            p: alpha * alpha + eta * eta,
            cosh_weight,
            sin_weight,
            ctrl,
        })
    }

    pub(crate) fn coefficients(&self) -> DrudeCoefficients {
        self.coeffs
    }

    fn q(&self, x: f64) -> f64 {
        let a = x * x + self.p;
        a * a - 4.0 * self.coeffs.alpha.powi(2) * x * x
    }

    fn dq(&self, x: f64) -> f64 {
        4.0 * x * (x * x + self.p) - 8.0 * self.coeffs.alpha.powi(2) * x
    }

    /// Resonant block pieces `(X, Y)` at time `t`.
    fn oscillating(&self, t: f64) -> (f64, f64) {
        let (s, c) = (self.coeffs.eta * t).sin_cos();
        (
            self.cosh_weight * c + self.sin_weight * s,
            self.sin_weight * c - self.cosh_weight * s,
        )
    }

    /// `Σ_n [w(ν_n) − w(δ)] ω_D² / (δ² − ν_n²)` with
    /// `w(x) = x^power e^{−xt} / Q(x)`.
    fn matsubara(&self, t: f64, power: i32) -> SeriesSum {
        let delta = self.coeffs.delta;
        let w = |x: f64| x.powi(power) * (-x * t).exp() / self.q(x);
        let dw = |x: f64| {
            let e = (-x * t).exp();
            let q = self.q(x);
            let xp = x.powi(power);
            (power as f64 * x.powi(power - 1) - xp * t) * e / q - xp * e * self.dq(x) / (q * q)
        };
        let w_delta = w(delta);
        let cutoff_sq = self.cutoff * self.cutoff;
        self.ctrl.sum(|n| {
            let nu = matsubara_unchecked(n, &self.params);
            if ((nu - delta) / delta).abs() < RESONANCE_WINDOW {
                -dw(delta) * cutoff_sq / (delta + nu)
            } else {
                (w(nu) - w_delta) * cutoff_sq / ((delta - nu) * (delta + nu))
            }
        })
    }

    pub(crate) fn position_s(&self, t: f64) -> SeriesSum {
        let DrudeCoefficients { alpha, eta, delta } = self.coeffs;
        let OscillatorParams {
            mass,
            hbar,
            temperature,
            ..
        } = self.params;
        let (x, y) = self.oscillating(t);
        let resonant = hbar / (2.0 * mass * eta) * (-alpha * t).exp() * (self.c1 * x - self.c2 * y);
        let fast = 2.0 * alpha * temperature / mass * (-delta * t).exp() / (delta * self.d);
        let series = self.matsubara(t, 1);
        SeriesSum {
            value: resonant + fast - 2.0 * self.gamma * temperature / mass * series.value,
            ..series
        }
    }

    pub(crate) fn position_a(&self, t: f64) -> f64 {
        let DrudeCoefficients { alpha, eta, delta } = self.coeffs;
        let decay = (-alpha * t).exp();
        let (s, c) = (eta * t).sin_cos();
        -self.params.hbar / (2.0 * self.params.mass * eta)
            * (self.c2 * ((-delta * t).exp() - c * decay) + self.c1 * decay * s)
    }

    pub(crate) fn momentum_s(&self, t: f64) -> SeriesSum {
        let DrudeCoefficients { alpha, eta, delta } = self.coeffs;
        let OscillatorParams {
            mass,
            hbar,
            temperature,
            ..
        } = self.params;
        let (x, y) = self.oscillating(t);
        let decay = (-alpha * t).exp();
        let first = hbar * mass / (2.0 * eta) * (eta * eta - alpha * alpha) * decay * (self.c1 * x - self.c2 * y);
        let second = hbar * mass * alpha * decay * (self.c1 * y + self.c2 * x);
        let fast = -2.0 * mass * alpha * temperature * delta * (-delta * t).exp() / self.d;
        let series = self.matsubara(t, 3);
        SeriesSum {
            value: first + second + fast + 2.0 * mass * self.gamma * temperature * series.value,
            ..series
        }
    }

    pub(crate) fn momentum_a(&self, t: f64) -> f64 {
        let DrudeCoefficients { alpha, eta, delta } = self.coeffs;
        let decay = (-alpha * t).exp();
        let (s, c) = (eta * t).sin_cos();
        let split = eta * eta - alpha * alpha;
        let cross = 2.0 * alpha * eta;
        self.params.hbar * self.params.mass / (2.0 * eta)
            * (self.c2 * (delta * delta * (-delta * t).exp() + split * decay * c - cross * decay * s)
                - self.c1 * decay * (split * s + cross * c))
    }
}

enum Route {
    Free(FreeKernel),
    Drude(DrudeKernel),
}

fn route(params: &OscillatorParams, bath: &BathSpec, ctrl: &SeriesControl, momentum: bool) -> Result<Route> {
    params.validate()?;
    bath.validate(params)?;
    ctrl.validate()?;
    match bath.drude_cutoff() {
        _ if bath.kind == BathKind::None => Ok(Route::Free(FreeKernel::new(params))),
        Some(_) if bath.gamma == 0.0 => Ok(Route::Free(FreeKernel::new(params))),
        Some(cutoff) => Ok(Route::Drude(DrudeKernel::new(params, bath.gamma, cutoff, *ctrl)?)),
        None if momentum && bath.gamma > 0.0 => Err(Error::UnsupportedObservable(
            "momentum correlators diverge at t = 0 for a strictly Ohmic bath; use a Drude cutoff"
                .into(),
        )),
        None => Err(Error::UnsupportedRegime(
            "Drude correlators requested for a non-Drude bath".into(),
        )),
    }
}

fn warn_unconverged(sum: &SeriesSum, t: f64) {
    if !sum.converged {
        log::warn!("Matsubara series at t = {t} did not converge within {} terms", sum.terms);
    }
}

fn exact(value: f64) -> SeriesSum {
    SeriesSum {
        value,
        terms: 0,
        converged: true,
    }
}

/// Symmetrized position correlator with Drude cutoff.
pub fn drude_position_s(
    t: f64,
    params: &OscillatorParams,
    bath: &BathSpec,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    let t = t.abs();
    let sum = match route(params, bath, ctrl, false)? {
        Route::Free(k) => exact(k.position_s(t)),
        Route::Drude(k) => k.position_s(t),
    };
    warn_unconverged(&sum, t);
    Ok(sum)
}

/// Antisymmetrized position correlator with Drude cutoff.
pub fn drude_position_a(t: f64, params: &OscillatorParams, bath: &BathSpec) -> Result<f64> {
    let route = route(params, bath, &SeriesControl::default(), false)?;
    // odd function: exact zero rather than rounding residue
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(t.signum()
        * match route {
            Route::Free(k) => k.position_a(t.abs()),
            Route::Drude(k) => k.position_a(t.abs()),
        })
}

/// Symmetrized momentum correlator `S_pp(t) = −M² S''(t)` with Drude cutoff.
/// A strictly Ohmic bath is rejected: its `S_pp(0)` diverges.
pub fn drude_momentum_s(
    t: f64,
    params: &OscillatorParams,
    bath: &BathSpec,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    let t = t.abs();
    let sum = match route(params, bath, ctrl, true)? {
        Route::Free(k) => exact(k.momentum_s(t)),
        Route::Drude(k) => k.momentum_s(t),
    };
    warn_unconverged(&sum, t);
    Ok(sum)
}

/// Antisymmetrized momentum correlator `A_pp(t) = −M² A''(t)` with Drude cutoff.
pub fn drude_momentum_a(t: f64, params: &OscillatorParams, bath: &BathSpec) -> Result<f64> {
    let route = route(params, bath, &SeriesControl::default(), true)?;
    // odd function: exact zero rather than rounding residue
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(t.signum()
        * match route {
            Route::Free(k) => k.momentum_a(t.abs()),
            Route::Drude(k) => k.momentum_a(t.abs()),
        })
}
