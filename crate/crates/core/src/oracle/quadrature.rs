use num_complex::Complex64;

use super::OracleError;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_depth: u32,
}

impl Default for QuadratureTolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-15,
            relative: 1e-13,
            max_depth: 40,
        }
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += pair * WGK[i];
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).norm())
}

/// Adaptive Gauss–Kronrod (7/15) integration of a complex integrand.
///
/// Intervals are bisected until the local error estimate drops below its
/// share of `max(absolute, relative·|I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: &QuadratureTolerance,
) -> Result<Complex64, OracleError> {
    let (whole, _) = kronrod(&f, a, b);
    let target = tol.absolute.max(tol.relative * whole.norm());
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    let span = b - a;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = kronrod(&f, lo, hi);
        let allowed = target * (hi - lo) / span;
        if err <= allowed || (hi - lo) <= 64.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            total += val;
        } else if depth >= tol.max_depth {
            return Err(OracleError::Quadrature {
                a: lo,
                b: hi,
                estimate: err,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}

/// Integrates a sampled density with the trapezoid rule and checks that the
/// grid reaches at least eight standard deviations past the mean on both
/// sides. Mean and spread are taken from the samples themselves.
pub fn quadrature_marginalize(xs: &[f64], density: &[f64]) -> Result<f64, OracleError> {
    const REQUIRED: f64 = 8.0;
    if xs.len() != density.len() || xs.len() < 3 {
        return Err(OracleError::Input(format!(
            "need matching grids with at least 3 points, got {} and {}",
            xs.len(),
            density.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(OracleError::Input("grid must be strictly increasing".into()));
    }
    let trapezoid = |g: &dyn Fn(usize) -> f64| {
        xs.windows(2)
            .enumerate()
            .map(|(i, w)| 0.5 * (w[1] - w[0]) * (g(i) + g(i + 1)))
            .sum::<f64>()
    };
    let mass = trapezoid(&|i| density[i]);
    if !(mass > 0.0) {
        return Err(OracleError::Input(format!("density integrates to {mass}")));
    }
    let mean = trapezoid(&|i| xs[i] * density[i]) / mass;
    let var = trapezoid(&|i| (xs[i] - mean).powi(2) * density[i]) / mass;
    let sd = var.sqrt();
    let covered = ((mean - xs[0]) / sd).min((xs[xs.len() - 1] - mean) / sd);
    if covered < REQUIRED {
        return Err(OracleError::Coverage {
            covered,
            required: REQUIRED,
            mass,
        });
    }
    Ok(mass)
}
