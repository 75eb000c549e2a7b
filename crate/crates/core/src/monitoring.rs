//! Two-point statistics of the oscillator under repeated Gaussian measurements.
//!
//! A selective measurement with outcome `x0` is followed by `n` nonselective
//! measurements spaced by `τ` and a final selective measurement at elapsed
//! time `t̄`. All slits share the width `σ`. Integrating out the intermediate
//! outcomes leaves a zero-mean bivariate Gaussian for `(x0, xF)` whose only
//! trace of the intermediate monitoring is the backaction sum
//! `Σ_{k=0}^{n} A²(t̄ − kτ)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{CorrelatorSet, Kernel};
use crate::params::{BathKind, Observable, OscillatorParams};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Measurement sequence: slit width, first outcome and monitoring schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementProtocol {
    pub observable: Observable,
    /// Slit width `σ`, in units of the observable.
    pub slit_width: f64,
    /// Outcome `x0` of the first selective measurement.
    pub first_outcome: f64,
    /// Spacing `τ` between nonselective measurements. May be infinite when
    /// `intermediates == 0`.
    pub spacing: f64,
    /// Number `n` of nonselective measurements between the selective ones.
    pub intermediates: usize,
}

/// Relative slack on the schedule check `t̄ − nτ ∈ (0, τ]`.
const SCHEDULE_SLACK: f64 = 1e-9;

impl MeasurementProtocol {
    /// Protocol with no intermediate measurements.
    pub fn unmonitored(observable: Observable, slit_width: f64, first_outcome: f64) -> Self {
        Self {
            observable,
            slit_width,
            first_outcome,
            spacing: f64::INFINITY,
            intermediates: 0,
        }
    }

    /// Protocol monitored at rate `1/spacing`, with `n` set by [`Self::at`].
    pub fn monitored(observable: Observable, slit_width: f64, first_outcome: f64, spacing: f64) -> Self {
        Self {
            observable,
            slit_width,
            first_outcome,
            spacing,
            intermediates: 0,
        }
    }

    /// Default slit width: half the ground-state width for position, half
    /// of `Mω0σ_GS` for momentum.
    pub fn default_slit_width(observable: Observable, params: &OscillatorParams) -> f64 {
        match observable {
            Observable::Position => 0.5 * params.ground_state_width(),
            Observable::Momentum => 0.5 * params.ground_state_momentum_width(),
        }
    }

    /// Monitoring rate `μ = 1/τ`.
    pub fn rate(&self) -> f64 {
        1.0 / self.spacing
    }

    /// Number of nonselective measurements that precede a final measurement
    /// at `elapsed`, i.e. the `n` with `elapsed − nτ ∈ (0, τ]`.
    ///
    /// When `elapsed` is an exact multiple of `τ` the final measurement is
    /// placed one spacing after the last nonselective one.
    pub fn intermediates_before(&self, elapsed: f64) -> usize {
        if !self.spacing.is_finite() || elapsed <= 0.0 {
            return 0;
        }
        let steps = (elapsed / self.spacing).ceil();
        (steps as usize).saturating_sub(1)
    }

    /// This protocol with `n` chosen for a final measurement at `elapsed`.
    pub fn at(&self, elapsed: f64) -> Self {
        Self {
            intermediates: self.intermediates_before(elapsed),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.slit_width.is_finite() && self.slit_width > 0.0) {
            return Err(domain(
                "slit_width",
                format!(
                    "must be finite and > 0, got {} (the projective limit is not supported)",
                    self.slit_width
                ),
            ));
        }
        if !self.first_outcome.is_finite() {
            return Err(domain("first_outcome", "must be finite"));
        }
        if !(self.spacing > 0.0) || (self.intermediates > 0 && !self.spacing.is_finite()) {
            return Err(domain("spacing", format!("must be > 0 and finite when monitored, got {}", self.spacing)));
        }
        Ok(())
    }

    /// Checks that a final measurement at `elapsed` fits the schedule.
    pub fn validate_elapsed(&self, elapsed: f64) -> Result<()> {
        self.validate()?;
        if !(elapsed.is_finite() && elapsed >= 0.0) {
            return Err(domain("elapsed", format!("must be finite and >= 0, got {elapsed}")));
        }
        if self.intermediates > 0 {
            let last = self.intermediates as f64 * self.spacing;
            let rest = elapsed - last;
            let slack = SCHEDULE_SLACK * self.spacing.max(elapsed);
            if rest < -slack || rest > self.spacing + slack {
                return Err(domain(
                    "elapsed",
                    format!(
                        "final measurement at {elapsed} is not within one spacing after \
                         the last of {} measurements spaced by {}",
                        self.intermediates, self.spacing
                    ),
                ));
            }
        }
        Ok(())
    }

    fn check_kernel<K: Kernel>(&self, kernel: &K) -> Result<()> {
        match kernel.observable() {
            Some(o) if o != self.observable => Err(domain(
                "observable",
                format!("protocol measures {} but correlators describe {o}", self.observable),
            )),
            _ => Ok(()),
        }
    }

    fn variance_floor(&self) -> f64 {
        self.slit_width * self.slit_width
    }
}

/// `ζ0² = S(0) + σ²`, the variance of the first outcome.
pub fn zeta0_sq<K: Kernel>(protocol: &MeasurementProtocol, kernel: &K) -> f64 {
    kernel.variance() + protocol.variance_floor()
}

/// `Σ_{k=0}^{n} A²(t̄ − kτ)`, the accumulated measurement backaction.
pub fn backaction_sum<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> f64 {
    (0..=protocol.intermediates)
        .map(|k| {
            // k = 0 is kept separate: the spacing may be infinite when n = 0
            let lag = if k == 0 { elapsed } else { elapsed - k as f64 * protocol.spacing };
            let a = kernel.antisymmetric(lag);
            a * a
        })
        .sum()
}

/// `ζ²(t̄) = ζ0² + Σ_{k=0}^{n} A²(t̄ − kτ)/σ²`.
pub fn zeta_sq<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> Result<f64> {
    protocol.validate_elapsed(elapsed)?;
    protocol.check_kernel(kernel)?;
    Ok(zeta0_sq(protocol, kernel) + backaction_sum(elapsed, protocol, kernel) / protocol.variance_floor())
}

/// Covariance of the first and final outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTwoPoint {
    pub zeta0_sq: f64,
    pub zeta_sq: f64,
    /// `S(t̄)`, the covariance of `x0` and `xF`.
    pub covariance: f64,
}

impl JointTwoPoint {
    pub fn new<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> Result<Self> {
        let joint = Self {
            zeta0_sq: zeta0_sq(protocol, kernel),
            zeta_sq: zeta_sq(elapsed, protocol, kernel)?,
            covariance: kernel.symmetric(elapsed),
        };
        let det = joint.determinant();
        if !(det > 0.0 && det.is_finite()) {
            return Err(Error::Consistency(format!(
                "covariance determinant {det} is not positive (S(t̄) = {}, ζ0² = {}, ζ² = {})",
                joint.covariance, joint.zeta0_sq, joint.zeta_sq
            )));
        }
        Ok(joint)
    }

    /// `[[ζ0², S], [S, ζ²]]`
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.zeta0_sq, self.covariance], [self.covariance, self.zeta_sq]]
    }

    pub fn determinant(&self) -> f64 {
        self.zeta0_sq * self.zeta_sq - self.covariance * self.covariance
    }

    pub fn log_density(&self, x0: f64, xf: f64) -> f64 {
        let det = self.determinant();
        let quad = self.zeta_sq * x0 * x0 - 2.0 * self.covariance * x0 * xf + self.zeta0_sq * xf * xf;
        -LN_2PI - 0.5 * det.ln() - 0.5 * quad / det
    }

    pub fn density(&self, x0: f64, xf: f64) -> f64 {
        self.log_density(x0, xf).exp()
    }
}

/// Joint density `W⁽ⁿ⁾(x0, t0; xF, t0 + t̄)` of the two selective outcomes.
pub fn joint_two_point<K: Kernel>(
    x0: f64,
    xf: f64,
    elapsed: f64,
    protocol: &MeasurementProtocol,
    kernel: &K,
) -> Result<f64> {
    Ok(JointTwoPoint::new(elapsed, protocol, kernel)?.density(x0, xf))
}

/// Density `W(x0)` of the first outcome: zero mean, variance `ζ0²`.
pub fn marginal_first<K: Kernel>(x0: f64, protocol: &MeasurementProtocol, kernel: &K) -> Result<f64> {
    protocol.validate()?;
    protocol.check_kernel(kernel)?;
    Ok(gaussian_log_density(x0, 0.0, zeta0_sq(protocol, kernel)).exp())
}

fn gaussian_log_density(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * (LN_2PI + variance.ln()) - 0.5 * d * d / variance
}

/// Gaussian density of the final outcome given the first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalGaussian {
    pub mean: f64,
    pub variance: f64,
    /// The conditioning outcome lies more than six standard deviations from
    /// zero; the conditional is exact but such an `x0` is essentially never
    /// observed.
    pub atypical_first_outcome: bool,
}

impl ConditionalGaussian {
    pub fn new<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> Result<Self> {
        let variance = conditional_variance(elapsed, protocol, kernel)?;
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::Consistency(format!("conditional variance {variance} is not positive")));
        }
        let z0 = zeta0_sq(protocol, kernel);
        let atypical = protocol.first_outcome.abs() > 6.0 * z0.sqrt();
        if atypical {
            log::debug!("first outcome {} is beyond 6 ζ0", protocol.first_outcome);
        }
        Ok(Self {
            mean: conditional_mean(elapsed, protocol, kernel),
            variance,
            atypical_first_outcome: atypical,
        })
    }

    pub fn log_density(&self, xf: f64) -> f64 {
        gaussian_log_density(xf, self.mean, self.variance)
    }

    pub fn density(&self, xf: f64) -> f64 {
        self.log_density(xf).exp()
    }
}

/// `x̄(t̄) = x0 S(t̄) / (S(0) + σ²)`.
///
/// Depends on neither `n` nor `τ`: the intermediate measurements only widen
/// the conditional distribution.
pub fn conditional_mean<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> f64 {
    protocol.first_outcome * kernel.symmetric(elapsed) / (kernel.variance() + protocol.slit_width * protocol.slit_width)
}

/// `Σ²_τ(t̄) = [(S(0)+σ²)² − S²(t̄)]/(S(0)+σ²) + Σ_{k=0}^{n} A²(t̄−kτ)/σ²`.
pub fn conditional_variance<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> Result<f64> {
    protocol.validate_elapsed(elapsed)?;
    protocol.check_kernel(kernel)?;
    Ok(static_variance(elapsed, protocol, kernel)
        + backaction_sum(elapsed, protocol, kernel) / protocol.variance_floor())
}

/// `[(S(0)+σ²)² − S²(t̄)]/(S(0)+σ²)`, the part of the variance without backaction.
fn static_variance<K: Kernel>(elapsed: f64, protocol: &MeasurementProtocol, kernel: &K) -> f64 {
    let z0 = zeta0_sq(protocol, kernel);
    let s = kernel.symmetric(elapsed);
    (z0 - s) * (z0 + s) / z0
}

/// `P⁽ⁿ⁾(xF, t0 + t̄ | x0, t0)`.
pub fn conditional_density<K: Kernel>(
    xf: f64,
    elapsed: f64,
    protocol: &MeasurementProtocol,
    kernel: &K,
) -> Result<f64> {
    Ok(ConditionalGaussian::new(elapsed, protocol, kernel)?.density(xf))
}

fn ohmic_position(protocol: &MeasurementProtocol, correlators: &CorrelatorSet, what: &str) -> Result<()> {
    if protocol.observable != Observable::Position || correlators.observable() != Observable::Position {
        return Err(Error::UnsupportedObservable(format!(
            "{what} is only available for position measurements"
        )));
    }
    if !matches!(correlators.bath().kind, BathKind::Ohmic | BathKind::None) {
        return Err(Error::UnsupportedRegime(format!("{what} requires an Ohmic bath")));
    }
    Ok(())
}

/// `ħ²/(8τσ²M²ω²)`, the scale of the continuum backaction term.
fn backaction_scale(protocol: &MeasurementProtocol, params: &OscillatorParams, omega: f64) -> f64 {
    let sigma2 = protocol.variance_floor();
    params.hbar.powi(2) / (8.0 * protocol.spacing * sigma2 * (params.mass * omega).powi(2))
}

/// Conditional variance with the backaction sum replaced by its continuum
/// limit `(1/τ)∫₀^t̄ A²`, valid for small `τ` and a final measurement one
/// spacing after the last intermediate one, `t̄ = (n+1)τ`. Ohmic position
/// measurements only.
pub fn small_tau_variance(elapsed: f64, protocol: &MeasurementProtocol, correlators: &CorrelatorSet) -> Result<f64> {
    protocol.validate()?;
    ohmic_position(protocol, correlators, "the small-spacing variance")?;
    if !(elapsed.is_finite() && elapsed >= 0.0) {
        return Err(domain("elapsed", format!("must be finite and >= 0, got {elapsed}")));
    }
    let params = correlators.params();
    let gamma = correlators.bath().gamma;
    let wr = correlators.bath().damped_frequency(params);
    let decay = (-gamma * elapsed).exp();
    // (1 − e^{−γt})/γ, continuous at γ = 0
    let relaxed = if gamma == 0.0 {
        elapsed
    } else {
        -(-gamma * elapsed).exp_m1() / gamma
    };
    let (s2, c2) = (2.0 * wr * elapsed).sin_cos();
    let oscillating = (gamma + (2.0 * wr * s2 - gamma * c2) * decay) / (4.0 * wr * wr + gamma * gamma);
    Ok(static_variance(elapsed, protocol, correlators)
        + backaction_scale(protocol, params, wr) * (relaxed - oscillating))
}

/// Small-spacing variance of the uncoupled oscillator: diffusive growth
/// `∝ (ω0 t̄ − ½ sin 2ω0 t̄)/τ` on top of the free static part.
pub fn frictionless_limit_variance(elapsed: f64, protocol: &MeasurementProtocol, params: &OscillatorParams) -> Result<f64> {
    protocol.validate()?;
    params.validate()?;
    if protocol.observable != Observable::Position {
        return Err(Error::UnsupportedObservable(
            "the frictionless limit is only available for position measurements".into(),
        ));
    }
    let free = CorrelatorSet::position(*params, crate::params::BathSpec::none(), Default::default())?;
    let w0 = params.frequency;
    let growth = w0 * elapsed - 0.5 * (2.0 * w0 * elapsed).sin();
    Ok(static_variance(elapsed, protocol, &free) + backaction_scale(protocol, params, w0) * growth / w0)
}

/// Long-time limit of the small-spacing variance,
/// `S(0) + σ² + ħ²/(2τσ²M²γ(4ω_r² + γ²))`. Diverges without friction.
pub fn asymptotic_variance(protocol: &MeasurementProtocol, correlators: &CorrelatorSet) -> Result<f64> {
    protocol.validate()?;
    ohmic_position(protocol, correlators, "the asymptotic variance")?;
    let gamma = correlators.bath().gamma;
    if gamma == 0.0 {
        return Err(Error::Divergent(
            "without friction the monitored variance grows without bound".into(),
        ));
    }
    let params = correlators.params();
    let wr = correlators.bath().damped_frequency(params);
    let sigma2 = protocol.variance_floor();
    Ok(zeta0_sq(protocol, correlators)
        + params.hbar.powi(2)
            / (2.0 * protocol.spacing * sigma2 * params.mass.powi(2) * gamma * (4.0 * wr * wr + gamma * gamma)))
}
