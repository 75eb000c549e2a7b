//! Run configuration, read from TOML.
//!
//! Sweep axes use the units of the figures: `γ` in `ω0`, `μ` in `ω0/2π`,
//! times in `1/ω0`, outcomes and slit widths in `σ_GS` (position) or
//! `Mω0σ_GS` (momentum).

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qbm_core::{BathSpec, Observable, OscillatorParams, SeriesControl};

use crate::error::CliError;

/// Overrides the default number of Matsubara terms when a config has no
/// `[series]` table.
pub const SERIES_TERMS_ENV: &str = "QBM_SERIES_TERMS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub observable: Observable,
    #[serde(default)]
    pub oscillator: OscillatorParams,
    pub bath: BathConfig,
    #[serde(default)]
    pub protocol: ProtocolConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesControl>,
    pub sweep: SweepConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BathModel {
    Ohmic,
    Drude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub kind: BathModel,
    /// Drude cutoff `ω_D` in units of `ω0`; required for `kind = "drude"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    /// Adds Drude comparison columns with this cutoff (units of `ω0`) to
    /// variance and correlator runs of an Ohmic bath.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    #[serde(default = "half")]
    pub slit_width: f64,
    #[serde(default)]
    pub first_outcome: f64,
}

fn half() -> f64 {
    0.5
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            slit_width: 0.5,
            first_outcome: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
    /// Monitoring rates, all `> 0`. The unmonitored case is requested with
    /// `unmonitored = true` and reported as `μ = 0`.
    #[serde(default)]
    pub rates: Vec<f64>,
    #[serde(default)]
    pub unmonitored: bool,
    #[serde(default = "default_elapsed")]
    pub elapsed: Grid,
    #[serde(default = "default_outcomes")]
    pub outcomes: Grid,
}

fn default_elapsed() -> Grid {
    Grid::Linear(LinearGrid {
        start: 0.0,
        stop: 12.0 * 2.0 * PI,
        points: 600,
    })
}

fn default_outcomes() -> Grid {
    Grid::Linear(LinearGrid {
        start: -8.0,
        stop: 8.0,
        points: 400,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Linear(LinearGrid),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Linear(LinearGrid { start, stop, points }) => match points {
                0 => Vec::new(),
                1 => vec![*start],
                n => {
                    let step = (stop - start) / (n - 1) as f64;
                    (0..*n)
                        .map(|i| if i == n - 1 { *stop } else { start + step * i as f64 })
                        .collect()
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {reason}"))
}

fn check_axis(field: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(invalid(field, format!("contains non-finite value {v}")));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(field, "must be strictly increasing"));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.oscillator.validate().map_err(|e| invalid("oscillator", e))?;
        check_axis("sweep.gammas", &self.sweep.gammas)?;
        if self.sweep.gammas[0] < 0.0 {
            return Err(invalid("sweep.gammas", "must be >= 0"));
        }
        if !self.sweep.rates.is_empty() {
            check_axis("sweep.rates", &self.sweep.rates)?;
            if !(self.sweep.rates[0] > 0.0) {
                return Err(invalid(
                    "sweep.rates",
                    "must be > 0; request the unmonitored case with `unmonitored = true`",
                ));
            }
        }
        if self.sweep.rates.is_empty() && !self.sweep.unmonitored {
            return Err(invalid("sweep.rates", "no monitoring rates and `unmonitored` is false"));
        }
        let elapsed = self.sweep.elapsed.values();
        check_axis("sweep.elapsed", &elapsed)?;
        if elapsed[0] < 0.0 {
            return Err(invalid("sweep.elapsed", "must be >= 0"));
        }
        check_axis("sweep.outcomes", &self.sweep.outcomes.values())?;
        let p = &self.protocol;
        if !(p.slit_width.is_finite() && p.slit_width > 0.0) {
            return Err(invalid("protocol.slit_width", format!("must be finite and > 0, got {}", p.slit_width)));
        }
        if !p.first_outcome.is_finite() {
            return Err(invalid("protocol.first_outcome", "must be finite"));
        }
        match (self.bath.kind, self.bath.cutoff) {
            (BathModel::Drude, None) => return Err(invalid("bath.cutoff", "required for a Drude bath")),
            (BathModel::Ohmic, Some(_)) => {
                return Err(invalid("bath.cutoff", "only valid for a Drude bath; see compare_cutoff"))
            }
            _ => {}
        }
        for (name, value) in [("bath.cutoff", self.bath.cutoff), ("bath.compare_cutoff", self.bath.compare_cutoff)] {
            if let Some(c) = value {
                if !(c.is_finite() && c > 0.0) {
                    return Err(invalid(name, format!("must be finite and > 0, got {c}")));
                }
            }
        }
        if let Some(series) = &self.series {
            series.validate().map_err(|e| invalid("series", e))?;
        }
        Ok(())
    }

    /// Bath at friction `gamma` (units of `ω0`), in physical units.
    pub fn bath_at(&self, gamma: f64) -> BathSpec {
        let w0 = self.oscillator.frequency;
        match (self.bath.kind, self.bath.cutoff) {
            (BathModel::Drude, Some(c)) => BathSpec::drude(gamma * w0, c * w0),
            _ => BathSpec::ohmic(gamma * w0),
        }
    }

    /// Drude comparison bath, if requested for an Ohmic run.
    pub fn comparison_bath_at(&self, gamma: f64) -> Option<BathSpec> {
        let w0 = self.oscillator.frequency;
        match (self.bath.kind, self.bath.compare_cutoff) {
            (BathModel::Ohmic, Some(c)) => Some(BathSpec::drude(gamma * w0, c * w0)),
            _ => None,
        }
    }

    /// Series truncation: the config's `[series]` table, else `fallback`
    /// terms, overridden by the environment variable when set.
    pub fn series_control(&self, fallback: usize) -> Result<SeriesControl, CliError> {
        if let Some(s) = self.series {
            return Ok(s);
        }
        match std::env::var(SERIES_TERMS_ENV) {
            Ok(raw) => match raw.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(SeriesControl::fixed(n)),
                _ => Err(CliError::Config(format!(
                    "{SERIES_TERMS_ENV} must be a positive integer, got {raw:?}"
                ))),
            },
            Err(_) => Ok(SeriesControl::fixed(fallback)),
        }
    }

    /// Unit of outcomes in physical units: `σ_GS` or `Mω0σ_GS`.
    pub fn outcome_unit(&self) -> f64 {
        let p = &self.oscillator;
        match self.observable {
            Observable::Position => p.ground_state_width(),
            Observable::Momentum => p.ground_state_momentum_width(),
        }
    }

    /// Spacing `τ` in physical time for a rate given in units of `ω0/2π`.
    pub fn spacing(&self, rate: f64) -> f64 {
        2.0 * PI / (rate * self.oscillator.frequency)
    }

    /// Rates to sweep, with `0.0` standing for the unmonitored case.
    pub fn rate_axis(&self) -> Vec<f64> {
        let mut rates = Vec::with_capacity(self.sweep.rates.len() + 1);
        if self.sweep.unmonitored {
            rates.push(0.0);
        }
        rates.extend(&self.sweep.rates);
        rates
    }
}
