//! Equilibrium correlation kernels of the damped oscillator.
//!
//! `S(t) = ½⟨{q̂(t), q̂(0)}⟩` and `A(t) = −(i/2)⟨[q̂(t), q̂(0)]⟩` for position,
//! and their momentum counterparts `S_pp = −M² S''`, `A_pp = −M² A''`.
//! Every kernel accepts any real `t`; `S` is even and `A` is odd.

mod drude;
mod free;
mod ohmic;
mod thermal;

pub use drude::{
    drude_coefficients, drude_momentum_a, drude_momentum_s, drude_position_a, drude_position_s,
    DrudeCoefficients, DrudeResiduals,
};
pub use ohmic::{ohmic_position_a, ohmic_position_s};

use crate::error::{Error, Result};
use crate::params::{BathKind, BathSpec, Observable, OscillatorParams};
use crate::series::{SeriesControl, SeriesSum};

use drude::DrudeKernel;
use free::FreeKernel;
use ohmic::OhmicKernel;

/// A pair of equilibrium correlators for one observable.
///
/// Implementors must be pure: the same `t` always yields the same value.
pub trait Kernel: Sync {
    /// Symmetrized correlator `S(t)`.
    fn symmetric(&self, t: f64) -> f64;
    /// Antisymmetrized correlator `A(t)`.
    fn antisymmetric(&self, t: f64) -> f64;
    /// `S(0)`, the equilibrium variance of the observable.
    fn variance(&self) -> f64 {
        self.symmetric(0.0)
    }
    /// The observable these correlators describe, when known.
    fn observable(&self) -> Option<Observable> {
        None
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn symmetric(&self, t: f64) -> f64 {
        (**self).symmetric(t)
    }
    fn antisymmetric(&self, t: f64) -> f64 {
        (**self).antisymmetric(t)
    }
    fn variance(&self) -> f64 {
        (**self).variance()
    }
    fn observable(&self) -> Option<Observable> {
        (**self).observable()
    }
}

/// Wraps a kernel and drops its antisymmetric part, i.e. all commutators.
/// This is the classical limit of the measurement statistics.
#[derive(Debug, Clone, Copy)]
pub struct Classical<K>(pub K);

impl<K: Kernel> Kernel for Classical<K> {
    fn symmetric(&self, t: f64) -> f64 {
        self.0.symmetric(t)
    }
    fn antisymmetric(&self, _t: f64) -> f64 {
        0.0
    }
    fn variance(&self) -> f64 {
        self.0.variance()
    }
    fn observable(&self) -> Option<Observable> {
        self.0.observable()
    }
}

#[derive(Debug, Clone, Copy)]
enum Engine {
    Free(FreeKernel),
    Ohmic(OhmicKernel),
    Drude(DrudeKernel),
}

/// Validated correlators `(S, A)` for an observable, oscillator and bath.
#[derive(Debug, Clone, Copy)]
pub struct CorrelatorSet {
    observable: Observable,
    params: OscillatorParams,
    bath: BathSpec,
    ctrl: SeriesControl,
    engine: Engine,
    s0: f64,
}

impl CorrelatorSet {
    pub fn new(
        observable: Observable,
        params: OscillatorParams,
        bath: BathSpec,
        ctrl: SeriesControl,
    ) -> Result<Self> {
        params.validate()?;
        bath.validate(&params)?;
        ctrl.validate()?;
        let engine = match bath.kind {
            _ if bath.gamma == 0.0 => Engine::Free(FreeKernel::new(&params)),
            BathKind::None => Engine::Free(FreeKernel::new(&params)),
            BathKind::Ohmic => {
                if observable == Observable::Momentum {
                    return Err(Error::UnsupportedObservable(
                        "momentum correlators diverge at t = 0 for a strictly Ohmic bath; \
                         use a Drude cutoff"
                            .into(),
                    ));
                }
                Engine::Ohmic(OhmicKernel::new(&params, bath.gamma, ctrl))
            }
            BathKind::Drude { cutoff } => {
                Engine::Drude(DrudeKernel::new(&params, bath.gamma, cutoff, ctrl)?)
            }
        };
        let mut set = Self {
            observable,
            params,
            bath,
            ctrl,
            engine,
            s0: 0.0,
        };
        let s0 = set.symmetric_sum(0.0);
        if !s0.converged {
            log::warn!("S(0) series did not converge within {} terms", s0.terms);
        }
        if !(s0.value.is_finite() && s0.value > 0.0) {
            return Err(Error::Consistency(format!("equilibrium variance S(0) = {}", s0.value)));
        }
        set.s0 = s0.value;
        Ok(set)
    }

    pub fn position(params: OscillatorParams, bath: BathSpec, ctrl: SeriesControl) -> Result<Self> {
        Self::new(Observable::Position, params, bath, ctrl)
    }

    pub fn momentum(params: OscillatorParams, bath: BathSpec, ctrl: SeriesControl) -> Result<Self> {
        Self::new(Observable::Momentum, params, bath, ctrl)
    }

    pub fn observable(&self) -> Observable {
        self.observable
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn series_control(&self) -> &SeriesControl {
        &self.ctrl
    }

    /// Exact relaxation rates when the bath is Drude with `γ > 0`.
    pub fn drude_coefficients(&self) -> Option<DrudeCoefficients> {
        match &self.engine {
            Engine::Drude(k) => Some(k.coefficients()),
            _ => None,
        }
    }

    /// `S(t)` with truncation diagnostics.
    pub fn symmetric_sum(&self, t: f64) -> SeriesSum {
        let t = t.abs();
        let exact = |value| SeriesSum {
            value,
            terms: 0,
            converged: true,
        };
        match (&self.engine, self.observable) {
            (Engine::Free(k), Observable::Position) => exact(k.position_s(t)),
            (Engine::Free(k), Observable::Momentum) => exact(k.momentum_s(t)),
            (Engine::Ohmic(k), _) => k.s(t),
            (Engine::Drude(k), Observable::Position) => k.position_s(t),
            (Engine::Drude(k), Observable::Momentum) => k.momentum_s(t),
        }
    }
}

impl Kernel for CorrelatorSet {
    fn symmetric(&self, t: f64) -> f64 {
        self.symmetric_sum(t).value
    }

    fn antisymmetric(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let sign = t.signum();
        let t = t.abs();
        sign * match (&self.engine, self.observable) {
            (Engine::Free(k), Observable::Position) => k.position_a(t),
            (Engine::Free(k), Observable::Momentum) => k.momentum_a(t),
            (Engine::Ohmic(k), _) => k.a(t),
            (Engine::Drude(k), Observable::Position) => k.position_a(t),
            (Engine::Drude(k), Observable::Momentum) => k.momentum_a(t),
        }
    }

    fn variance(&self) -> f64 {
        self.s0
    }

    fn observable(&self) -> Option<Observable> {
        Some(self.observable)
    }
}
