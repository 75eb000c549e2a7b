//! Physical parameter records.
//!
//! All quantities are plain `f64` in a consistent unit system chosen by the
//! caller. The defaults are natural units `ħ = M = ω0 = k_B = 1`, in which
//! time is measured in `1/ω0`, lengths in `sqrt(ħ/(Mω0))` and temperature in
//! `ħω0/k_B`. Temperature is stored as an energy (`k_B = 1`).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Central oscillator: mass, bare angular frequency, temperature and `ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorParams {
    /// Mass `M`.
    #[serde(default = "one")]
    pub mass: f64,
    /// Bare angular frequency `ω0` (rad/time).
    #[serde(default = "one")]
    pub frequency: f64,
    /// Temperature `k_B T` (energy).
    pub temperature: f64,
    /// Reduced Planck constant (action).
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            frequency: 1.0,
            temperature: 0.1,
            hbar: 1.0,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(name, format!("must be finite and > 0, got {v}")))
    }
}

impl OscillatorParams {
    /// Natural units at the given temperature (in `ħω0/k_B`).
    pub fn natural(temperature: f64) -> Self {
        Self {
            temperature,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("frequency", self.frequency)?;
        positive("temperature", self.temperature)?;
        positive("hbar", self.hbar)?;
        let beta = self.beta();
        if !(beta.is_finite() && beta > 0.0) {
            return Err(domain("temperature", "inverse temperature is not finite"));
        }
        Ok(())
    }

    /// Inverse temperature `β = 1/(k_B T)`.
    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    /// `βħ`, the thermal time.
    pub fn thermal_time(&self) -> f64 {
        self.hbar / self.temperature
    }

    /// Ground-state width of the free oscillator, `(2Mω0/ħ)^(-1/2)`.
    pub fn ground_state_width(&self) -> f64 {
        (self.hbar / (2.0 * self.mass * self.frequency)).sqrt()
    }

    /// Momentum scale `Mω0σ_GS` used for momentum slit widths.
    pub fn ground_state_momentum_width(&self) -> f64 {
        self.mass * self.frequency * self.ground_state_width()
    }
}

/// Coupling spectrum of the heat bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BathKind {
    /// Uncoupled oscillator.
    None,
    /// `J(ω) = γMω`.
    Ohmic,
    /// `J(ω) = γMω / (1 + ω²/ω_D²)`.
    Drude { cutoff: f64 },
}

/// Bath coupling: spectrum shape plus friction strength `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub kind: BathKind,
    /// Friction constant `γ` (rad/time).
    pub gamma: f64,
}

impl BathSpec {
    pub fn none() -> Self {
        Self {
            kind: BathKind::None,
            gamma: 0.0,
        }
    }

    /// Strictly Ohmic bath. `γ = 0` is stored as [`BathKind::None`].
    pub fn ohmic(gamma: f64) -> Self {
        if gamma == 0.0 {
            Self::none()
        } else {
            Self {
                kind: BathKind::Ohmic,
                gamma,
            }
        }
    }

    /// Drude-regularized Ohmic bath. `γ = 0` is kept as Drude and reduces
    /// to the free oscillator.
    pub fn drude(gamma: f64, cutoff: f64) -> Self {
        Self {
            kind: BathKind::Drude { cutoff },
            gamma,
        }
    }

    pub fn drude_cutoff(&self) -> Option<f64> {
        match self.kind {
            BathKind::Drude { cutoff } => Some(cutoff),
            _ => None,
        }
    }

    pub fn is_drude(&self) -> bool {
        matches!(self.kind, BathKind::Drude { .. })
    }

    /// Checks the bath against the oscillator. Only the underdamped regime
    /// `γ < 2ω0` is supported.
    pub fn validate(&self, params: &OscillatorParams) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(domain("gamma", format!("must be finite and >= 0, got {}", self.gamma)));
        }
        match self.kind {
            BathKind::None if self.gamma != 0.0 => {
                return Err(domain("gamma", "an uncoupled bath must have gamma = 0"));
            }
            BathKind::Ohmic if self.gamma == 0.0 => {
                return Err(domain("gamma", "an Ohmic bath needs gamma > 0; use the uncoupled bath"));
            }
            BathKind::Drude { cutoff } => {
                positive("drude_cutoff", cutoff)?;
                let scale = 10.0 * self.gamma.max(params.frequency);
                if cutoff < scale {
                    log::warn!(
                        "Drude cutoff {cutoff} is not well separated from max(gamma, omega0); \
                         expected >= {scale}"
                    );
                }
            }
            _ => {}
        }
        if self.gamma >= 2.0 * params.frequency {
            return Err(Error::UnsupportedRegime(format!(
                "gamma = {} >= 2 omega0 = {} (overdamped)",
                self.gamma,
                2.0 * params.frequency
            )));
        }
        Ok(())
    }

    /// Effective damped frequency `ω_r = sqrt(ω0² − γ²/4)`.
    pub fn damped_frequency(&self, params: &OscillatorParams) -> f64 {
        (params.frequency * params.frequency - 0.25 * self.gamma * self.gamma).sqrt()
    }
}

/// Which oscillator coordinate is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    Position,
    Momentum,
}

impl std::fmt::Display for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Observable::Position => f.write_str("position"),
            Observable::Momentum => f.write_str("momentum"),
        }
    }
}
