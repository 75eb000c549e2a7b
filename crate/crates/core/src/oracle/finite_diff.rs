use super::OracleError;

/// Second derivative by central differences with one Richardson step,
/// `(4 D(h/2) − D(h)) / 3`, accurate to `O(h⁴)`.
///
/// `f` is evaluated at `t ± h`; callers with functions defined only for
/// `t >= 0` must supply the even or odd extension.
pub fn finite_difference_second_derivative<F: Fn(f64) -> f64>(
    f: F,
    t: f64,
    h: f64,
) -> Result<f64, OracleError> {
    let floor = 1e-5 * t.abs().max(1.0);
    if !(h >= floor) || !h.is_finite() {
        return Err(OracleError::StepSize { h, floor });
    }
    let center = f(t);
    let second = |step: f64| (f(t + step) - 2.0 * center + f(t - step)) / (step * step);
    let coarse = second(h);
    let fine = second(0.5 * h);
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine() {
        let d = finite_difference_second_derivative(f64::cos, 1.0, 1e-3).unwrap();
        assert!((d + 1f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn linear_is_flat() {
        let d = finite_difference_second_derivative(|t| 3.0 * t - 2.0, 0.7, 1e-2).unwrap();
        assert!(d.abs() < 1e-10);
    }

    #[test]
    fn tiny_step_rejected() {
        assert!(matches!(
            finite_difference_second_derivative(f64::sin, 1.0, 1e-9),
            Err(OracleError::StepSize { .. })
        ));
    }
}
