use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hard limit on the number of product or series terms.
const MAX_TERMS: usize = 2_000_000;

fn nome(sigma: Complex64) -> Result<Complex64> {
    if sigma.im <= 0.0 {
        return Err(Error::NotInUpperHalfPlane(sigma.im));
    }
    Ok((2.0 * I * PI * sigma).exp())
}

/// `log η(σ) = πiσ/12 + Σ_{n≥1} log(1 − qⁿ)`, the branch continuous in `σ`
/// on the upper half plane.
pub fn log_dedekind_eta(sigma: Complex64, tol: f64) -> Result<Complex64> {
    let q = nome(sigma)?;
    let aq = q.norm();
    let mut acc = I * PI * sigma / 12.0;
    let mut qn = q;
    let mut an = aq;
    for _ in 0..MAX_TERMS {
        // |Σ_{k>n} log(1 − q^k)| ≤ 2 |q|^{n+1} / (1 − |q|) once |q|^{n+1} < 1/2
        acc += (Complex64::new(1.0, 0.0) - qn).ln();
        if an * aq < 0.5 && 2.0 * an * aq / (1.0 - aq) < tol {
            return Ok(acc);
        }
        qn *= q;
        an *= aq;
    }
    Err(Error::Numerical(format!(
        "eta product did not converge at {sigma}"
    )))
}

/// `η(σ) = e^{πiσ/12} Π(1 − qⁿ)`, `q = e^{2πiσ}`.
pub fn dedekind_eta(sigma: Complex64, tol: f64) -> Result<Complex64> {
    Ok(log_dedekind_eta(sigma, tol)?.exp())
}

/// `E₂(σ) = 1 − 24 Σ n qⁿ/(1 − qⁿ)`.
pub fn eisenstein_e2(sigma: Complex64, tol: f64) -> Result<Complex64> {
    let q = nome(sigma)?;
    let aq = q.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = q;
    let mut an = aq;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        acc += nf * qn / (Complex64::new(1.0, 0.0) - qn);
        // tail Σ_{k>n} k|q|^k/(1−|q|^k) ≤ (n+1)|q|^{n+1} / (1−|q|)^2
        let tail = (nf + 1.0) * an * aq / ((1.0 - aq) * (1.0 - aq));
        if 24.0 * tail < tol {
            return Ok(Complex64::new(1.0, 0.0) - 24.0 * acc);
        }
        qn *= q;
        an *= aq;
    }
    Err(Error::Numerical(format!(
        "E2 series did not converge at {sigma}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_at_i() {
        let e = dedekind_eta(I, 1e-15).unwrap();
        assert!((e - 0.768_225_422_326_056_6).norm() < 1e-14);
    }

    #[test]
    fn e2_at_i() {
        let e = eisenstein_e2(I, 1e-15).unwrap();
        assert!((e - 3.0 / PI).norm() < 1e-13);
    }

    #[test]
    fn lower_half_plane_rejected() {
        assert!(dedekind_eta(Complex64::new(0.0, -1.0), 1e-10).is_err());
        assert!(eisenstein_e2(Complex64::new(0.0, 0.0), 1e-10).is_err());
    }
}
