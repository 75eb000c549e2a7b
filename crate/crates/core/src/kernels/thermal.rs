/// Thermal weights of the resonant block,
/// `(sinh x / (cosh x − cos b), sin b / (cosh x − cos b))`, evaluated through
/// `e^{−x}` so that neither large `x` (low temperature) nor small `x` with
/// `b → 0` (high temperature, weak coupling) loses precision.
pub(crate) fn thermal_weights(x: f64, b: f64) -> (f64, f64) {
    let e = (-x).exp();
    let one_minus_e = -(-x).exp_m1();
    let half_b = (0.5 * b).sin();
    let denom = one_minus_e * one_minus_e + 4.0 * e * half_b * half_b;
    let cosh_part = -(-2.0 * x).exp_m1() / denom;
    let sin_part = 2.0 * e * b.sin() / denom;
    (cosh_part, sin_part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_formula_in_safe_range() {
        for &(x, b) in &[(0.3f64, 0.0f64), (1.0, 0.2), (5.0, 1.0), (10.0, 0.5), (0.01, 0.003)] {
            let den = 2.0 * (0.5 * x).sinh().powi(2) + 2.0 * (0.5 * b).sin().powi(2);
            let (c, s) = thermal_weights(x, b);
            assert!((c - x.sinh() / den).abs() <= 1e-12 * c.abs(), "x={x} b={b}");
            assert!((s - b.sin() / den).abs() <= 1e-12 * (1.0 + s.abs()));
        }
    }

    #[test]
    fn zero_temperature_limit() {
        let (c, s) = thermal_weights(2000.0, 0.4);
        assert_eq!(c, 1.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn coth_at_zero_coupling() {
        let x: f64 = 10.0;
        let (c, s) = thermal_weights(x, 0.0);
        assert!((c - 1.0 / (0.5 * x).tanh()).abs() < 1e-14);
        assert_eq!(s, 0.0);
    }
}
