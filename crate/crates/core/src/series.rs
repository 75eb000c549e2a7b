//! Matsubara frequencies and truncation control for the thermal series.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::OscillatorParams;

/// `ν_n = 2πn k_B T / ħ`.
pub fn matsubara_frequency(n: u64, params: &OscillatorParams) -> Result<f64> {
    if n < 1 {
        return Err(domain("n", "Matsubara index must be >= 1"));
    }
    Ok(matsubara_unchecked(n, params))
}

#[inline]
pub(crate) fn matsubara_unchecked(n: u64, params: &OscillatorParams) -> f64 {
    2.0 * std::f64::consts::PI * n as f64 * params.temperature / params.hbar
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesMode {
    /// Sum exactly `max_terms` terms.
    Fixed,
    /// Stop once `|term| <= relative_tolerance * |partial sum|`, at most `max_terms`.
    Adaptive,
}

/// How many Matsubara terms to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesControl {
    pub mode: SeriesMode,
    pub max_terms: usize,
    #[serde(default = "default_tolerance")]
    pub relative_tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-10
}

impl SeriesControl {
    /// Truncation used for the density surfaces.
    pub const SURFACE: Self = Self::fixed(150);
    /// Truncation used for the variance curves.
    pub const VARIANCE: Self = Self::fixed(2000);

    pub const fn fixed(max_terms: usize) -> Self {
        Self {
            mode: SeriesMode::Fixed,
            max_terms,
            relative_tolerance: 1e-10,
        }
    }

    pub const fn adaptive(relative_tolerance: f64, max_terms: usize) -> Self {
        Self {
            mode: SeriesMode::Adaptive,
            max_terms,
            relative_tolerance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(domain("max_terms", "must be >= 1"));
        }
        if !(self.relative_tolerance.is_finite() && self.relative_tolerance > 0.0) {
            return Err(domain("relative_tolerance", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Sums `term(1), term(2), …` according to the control.
    pub fn sum<F: FnMut(u64) -> f64>(&self, mut term: F) -> SeriesSum {
        let mut value = 0.0;
        for n in 1..=self.max_terms as u64 {
            let t = term(n);
            value += t;
            if self.mode == SeriesMode::Adaptive
                && t.abs() <= self.relative_tolerance * value.abs()
            {
                return SeriesSum {
                    value,
                    terms: n as usize,
                    converged: true,
                };
            }
        }
        SeriesSum {
            value,
            terms: self.max_terms,
            converged: self.mode == SeriesMode::Fixed,
        }
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self::adaptive(1e-10, 20_000)
    }
}

/// A truncated series together with how it was truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// `false` when adaptive summation ran into `max_terms`.
    pub converged: bool,
}
