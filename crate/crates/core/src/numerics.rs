//! Finite differences and least-squares line fits used by the checks.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A derivative estimate from central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: Complex64,
    /// Difference of the last two Richardson estimates.
    pub error: f64,
    /// Final step length.
    pub step: f64,
    /// Convergence order of the plain central differences, `log₂` of the
    /// ratio of successive differences.
    pub observed_order: f64,
}

/// `f′(x)` along the complex direction `dir`, by central differences with
/// one Richardson step, halving the step until two estimates agree to
/// `tol` (relative to `max(1, |f′|)`).
pub fn derivative<F>(f: F, x: Complex64, dir: Complex64, h0: f64, tol: f64) -> Result<Derivative>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let central =
        |h: f64| -> Result<Complex64> { Ok((f(x + dir * h)? - f(x - dir * h)?) / (2.0 * h)) };
    let mut h = h0;
    let mut d_h = central(h)?;
    let mut d_h2 = central(h / 2.0)?;
    let mut prev = (4.0 * d_h2 - d_h) / 3.0;
    let mut best: Option<Derivative> = None;
    for _ in 0..30 {
        h /= 2.0;
        let d_h4 = central(h / 2.0)?;
        let rich = (4.0 * d_h4 - d_h2) / 3.0;
        let err = (rich - prev).norm();
        let order = ((d_h - d_h2).norm() / (d_h2 - d_h4).norm()).log2();
        let est = Derivative {
            value: rich,
            error: err,
            step: h / 2.0,
            observed_order: order,
        };
        if err <= tol * rich.norm().max(1.0) {
            return Ok(est);
        }
        if best.is_none_or(|b| err < b.error) {
            best = Some(est);
        } else if best.is_some_and(|b| err > 1e3 * b.error) {
            // rounding dominates from here on
            break;
        }
        d_h = d_h2;
        d_h2 = d_h4;
        prev = rich;
    }
    Err(Error::FiniteDifference(format!(
        "no agreement to {tol:e}; best error {:e}",
        best.map_or(f64::NAN, |b| b.error)
    )))
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_exp() {
        let d = derivative(
            |z| Ok(z.exp()),
            Complex64::new(0.3, 0.2),
            Complex64::new(1.0, 0.0),
            0.1,
            1e-10,
        )
        .unwrap();
        assert!((d.value - Complex64::new(0.3, 0.2).exp()).norm() < 1e-9);
        assert!(d.observed_order > 1.9);
    }

    #[test]
    fn fit_exact_line() {
        let (s, c) = line_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((s - 2.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14);
    }
}
