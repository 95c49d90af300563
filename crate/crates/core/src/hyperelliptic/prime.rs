use num_complex::Complex64;

use super::abel::abel_map_via;
use super::curve::{DifferentialSpec, HyperellipticCurve, Point};
use super::periods::{PeriodData, C2};
use crate::error::{Error, Result};
use crate::specialfn::{riemann_theta, theta_jet, Parity, ThetaCharacteristic};

/// Local frame in which the −1/2-form `E` is expressed at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    /// `dz = ω`.
    Natural,
    /// `dz = λ ω`.
    Scaled(Complex64),
}

impl Frame {
    fn factor(self) -> Complex64 {
        match self {
            Frame::Natural => Complex64::new(1.0, 0.0),
            Frame::Scaled(l) => l,
        }
    }
}

/// `∇θ[δ](0)` for an odd characteristic `δ`.
pub fn odd_gradient(pd: &PeriodData, ch: &ThetaCharacteristic, tol: f64) -> Result<C2> {
    if ch.genus() != 2 {
        return Err(Error::Characteristic(format!(
            "genus {} characteristic at genus 2",
            ch.genus()
        )));
    }
    if ch.parity() != Parity::Odd {
        return Err(Error::Characteristic(format!("{ch} is even")));
    }
    let jet = theta_jet(&[Complex64::new(0.0, 0.0); 2], &pd.sp, ch, tol)?;
    Ok(C2::new(jet.gradient[0], jet.gradient[1]))
}

/// `ω_δ/dx = Σ ∂_iθ[δ](0) ω_i/dx` at `p`.
pub fn omega_delta(pd: &PeriodData, grad: &C2, p: Point) -> Complex64 {
    grad.dot(&pd.normalized_numerators(p.x)) / p.y
}

/// `ω_δ/dz` at `p` for the frame `dz = λω`.
pub fn frame_value(
    pd: &PeriodData,
    spec: &DifferentialSpec,
    grad: &C2,
    p: Point,
    frame: Frame,
) -> Complex64 {
    grad.dot(&pd.normalized_numerators(p.x)) / (spec.numerator(p.x) * frame.factor())
}

/// `E(x, y) = θ[δ](A^x(y)) / √(ω_δ(x) ω_δ(y))` with `ω_δ` read in the
/// given frames and the principal root of the product.
///
/// The Abel map runs through the branch point `via`, which fixes the
/// determination of `E` on the universal cover.
#[allow(clippy::too_many_arguments)]
pub fn prime_form(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    spec: &DifferentialSpec,
    x: Point,
    y: Point,
    ch: &ThetaCharacteristic,
    frames: (Frame, Frame),
    via: usize,
    tol: f64,
) -> Result<Complex64> {
    let sep = (x.x - y.x).norm() + (x.y - y.y).norm();
    if sep < 1e-12 * (1.0 + x.x.norm() + x.y.norm()) {
        return Err(Error::Numerical(
            "prime form on the diagonal needs a limit frame".into(),
        ));
    }
    let grad = odd_gradient(pd, ch, 1e-12)?;
    let a = abel_map_via(pd, curve, x, y, via, tol)?;
    let th = riemann_theta(a.as_slice(), &pd.sp, ch, &[], 1e-12)?;
    let fx = frame_value(pd, spec, &grad, x, frames.0);
    let fy = frame_value(pd, spec, &grad, y, frames.1);
    Ok(th / (fx * fy).sqrt())
}
