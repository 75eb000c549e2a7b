use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{gauss_kronrod, QuadratureTolerance};
use super::OracleError;
use crate::kernels::Kernel;
use crate::monitoring::MeasurementProtocol;

/// Wavenumbers and measurement times for the multi-time characteristic
/// function of a sequence of Gaussian slit measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFunctionInput {
    /// `k_0 … k_F`, in inverse observable units.
    pub wavenumbers: Vec<f64>,
    /// `t_0 < … < t_F`.
    pub times: Vec<f64>,
    pub slit_width: f64,
}

impl CharFunctionInput {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.times.is_empty() || self.times.len() != self.wavenumbers.len() {
            return Err(OracleError::Input(format!(
                "need one wavenumber per measurement time, got {} and {}",
                self.wavenumbers.len(),
                self.times.len()
            )));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(OracleError::Input("measurement times must be strictly increasing".into()));
        }
        if !(self.slit_width > 0.0 && self.slit_width.is_finite()) {
            return Err(OracleError::Input(format!("slit width {}", self.slit_width)));
        }
        Ok(())
    }
}

/// `s_j = Σ_{l>j} k_l A(t_j − t_l)`, the commutator shifts of the slits;
/// `s_F = 0`.
pub fn commutator_shifts<K: Kernel>(input: &CharFunctionInput, kernel: &K) -> Result<Vec<f64>, OracleError> {
    input.validate()?;
    let n = input.times.len();
    Ok((0..n)
        .map(|j| {
            (j + 1..n)
                .map(|l| input.wavenumbers[l] * kernel.antisymmetric(input.times[j] - input.times[l]))
                .sum()
        })
        .collect())
}

/// Gaussian slit amplitude of width `σ`.
fn slit(u: f64, sigma: f64) -> f64 {
    (2.0 * PI * sigma * sigma).powf(-0.25) * (-u * u / (4.0 * sigma * sigma)).exp()
}

/// `∫ dx f*(s − x) f(−s − x) e^{ikx}` over `[−half_width, half_width]`.
fn slit_integral(
    k: f64,
    s: f64,
    sigma: f64,
    half_width: f64,
    tol: &QuadratureTolerance,
) -> Result<Complex64, OracleError> {
    gauss_kronrod(
        |x| Complex64::from_polar(slit(s - x, sigma) * slit(-s - x, sigma), k * x),
        -half_width,
        half_width,
        tol,
    )
}

/// `S(t_l − t_m)` for all pairs of measurement times.
fn symmetric_matrix<K: Kernel>(times: &[f64], kernel: &K) -> Vec<Vec<f64>> {
    times
        .iter()
        .map(|&tl| times.iter().map(|&tm| kernel.symmetric(tl - tm)).collect())
        .collect()
}

/// Thermal Gaussian expectation `⟨exp(i Σ_l k_l q̂(t_l))⟩ = exp(−½ Σ k_l k_m S(t_l − t_m))`.
fn thermal_factor(k: &[f64], s_matrix: &[Vec<f64>]) -> f64 {
    let mut quad = 0.0;
    for (l, kl) in k.iter().enumerate() {
        for (m, km) in k.iter().enumerate() {
            quad += kl * km * s_matrix[l][m];
        }
    }
    (-0.5 * quad).exp()
}

fn integration_half_width<K: Kernel>(sigma: f64, kernel: &K) -> f64 {
    10.0 * (kernel.variance() + sigma * sigma).sqrt()
}

/// Multi-time characteristic function of the measurement outcomes, with each
/// slit integral done by adaptive quadrature on `[−10ζ0, 10ζ0]`.
pub fn characteristic_function<K: Kernel>(
    input: &CharFunctionInput,
    kernel: &K,
    tol: &QuadratureTolerance,
) -> Result<Complex64, OracleError> {
    let shifts = commutator_shifts(input, kernel)?;
    let half_width = integration_half_width(input.slit_width, kernel);
    let mut phi = Complex64::new(1.0, 0.0);
    for (&k, &s) in input.wavenumbers.iter().zip(&shifts) {
        phi *= slit_integral(k, s, input.slit_width, half_width, tol)?;
    }
    let s_matrix = symmetric_matrix(&input.times, kernel);
    Ok(phi * thermal_factor(&input.wavenumbers, &s_matrix))
}

/// Square wavenumber grid `k = i·step`, `|i| <= half_points`, for the
/// Fourier inversion of the two-point characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionGrid {
    pub step: f64,
    pub half_points: usize,
}

impl InversionGrid {
    /// A grid whose truncation and aliasing errors are both below
    /// `e^{−41}` of the peak for outcomes within `extent` of the origin.
    ///
    /// Uses only structural bounds: the outcome covariance dominates `σ²·1`
    /// and, because `|A| <= S(0)`, its trace is below
    /// `2(S(0) + σ²) + (n+1) S(0)²/σ²`.
    pub fn conservative(slit_width: f64, equilibrium_variance: f64, intermediates: usize, extent: f64) -> Self {
        const LOG_TOL: f64 = 41.5;
        let s2 = slit_width * slit_width;
        let k_max = (2.0 * LOG_TOL).sqrt() / slit_width;
        let lambda_max = 2.0 * (equilibrium_variance + s2)
            + (intermediates + 1) as f64 * equilibrium_variance * equilibrium_variance / s2;
        let period = extent + (2.0 * LOG_TOL * lambda_max).sqrt();
        let step = 2.0 * PI / period;
        Self {
            step,
            half_points: (k_max / step).ceil() as usize,
        }
    }

    fn points(&self) -> Vec<f64> {
        let h = self.half_points as isize;
        (-h..=h).map(|i| i as f64 * self.step).collect()
    }
}

/// Joint density of the first and final selective outcomes, recovered by
/// Fourier-inverting `φ(k0, 0, …, 0, kF)` on `grid` with the trapezoid rule.
///
/// Returns `W[i][j]` at `(x0s[i], xfs[j])`. The intermediate wavenumbers are
/// zero, so the intermediate slit integrals depend on `kF` only and are
/// computed once per `kF`.
pub fn joint_density_by_inversion<K: Kernel>(
    x0s: &[f64],
    xfs: &[f64],
    elapsed: f64,
    protocol: &MeasurementProtocol,
    kernel: &K,
    grid: &InversionGrid,
    tol: &QuadratureTolerance,
) -> Result<Vec<Vec<f64>>, OracleError> {
    protocol.validate_elapsed(elapsed)?;
    let n = protocol.intermediates;
    let mut times: Vec<f64> = (0..=n).map(|j| j as f64 * protocol.spacing).collect();
    times.push(elapsed);
    let template = CharFunctionInput {
        wavenumbers: vec![0.0; n + 2],
        times,
        slit_width: protocol.slit_width,
    };
    template.validate()?;
    let sigma = protocol.slit_width;
    let half_width = integration_half_width(sigma, kernel);
    let s_matrix = symmetric_matrix(&template.times, kernel);
    let ks = grid.points();
    let nk = ks.len();

    // phi[a][b] = φ(k0 = ks[a], …, kF = ks[b])
    let mut phi = vec![vec![Complex64::new(0.0, 0.0); nk]; nk];
    let mut input = template.clone();
    for (b, &kf) in ks.iter().enumerate() {
        input.wavenumbers.iter_mut().for_each(|k| *k = 0.0);
        input.wavenumbers[n + 1] = kf;
        // shifts involve only later wavenumbers, so they are independent of k0
        let shifts = commutator_shifts(&input, kernel)?;
        let mut later = Complex64::new(1.0, 0.0);
        for j in 1..=n + 1 {
            later *= slit_integral(input.wavenumbers[j], shifts[j], sigma, half_width, tol)?;
        }
        for (a, &k0) in ks.iter().enumerate() {
            input.wavenumbers[0] = k0;
            let first = slit_integral(k0, shifts[0], sigma, half_width, tol)?;
            phi[a][b] = first * later * thermal_factor(&input.wavenumbers, &s_matrix);
        }
    }

    let norm = grid.step * grid.step / (4.0 * PI * PI);
    let mut out = Vec::with_capacity(x0s.len());
    for &x0 in x0s {
        let phase0: Vec<Complex64> = ks.iter().map(|&k| Complex64::from_polar(1.0, -k * x0)).collect();
        let partial: Vec<Complex64> = (0..nk)
            .map(|b| (0..nk).map(|a| phi[a][b] * phase0[a]).sum())
            .collect();
        let row = xfs
            .iter()
            .map(|&xf| {
                let total: Complex64 = ks
                    .iter()
                    .zip(&partial)
                    .map(|(&k, p)| p * Complex64::from_polar(1.0, -k * xf))
                    .sum();
                total.re * norm
            })
            .collect();
        out.push(row);
    }
    Ok(out)
}
