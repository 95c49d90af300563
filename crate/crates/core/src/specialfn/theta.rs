use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest summation radius before giving up on an ill-conditioned `Ω`.
pub const MAX_RADIUS: usize = 40;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point of the Siegel upper half space: symmetric `Ω` with `Im Ω > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    omega: DMatrix<Complex64>,
    y: DMatrix<f64>,
    y_inv: DMatrix<f64>,
    lambda_min: f64,
}

impl SiegelPoint {
    pub fn new(omega: DMatrix<Complex64>) -> Result<Self> {
        let g = omega.nrows();
        if g == 0 || omega.ncols() != g {
            return Err(Error::InvalidPeriods("period matrix must be square".into()));
        }
        let scale = omega.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let asym = (&omega - omega.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > 1e-8 * scale {
            return Err(Error::InvalidPeriods(format!(
                "period matrix not symmetric (residual {asym:e})"
            )));
        }
        // symmetrize away the rounding noise
        let omega = (&omega + omega.transpose()).map(|z| z * 0.5);
        let y = omega.map(|z| z.im);
        // positivity via leading principal minors (Cholesky)
        if y.clone().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        let lambda_min = SymmetricEigen::new(y.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let y_inv = y.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
        Ok(SiegelPoint {
            omega,
            y,
            y_inv,
            lambda_min,
        })
    }

    /// Genus one: `Ω = (σ)`.
    pub fn from_tau(sigma: Complex64) -> Result<Self> {
        if sigma.im <= 0.0 {
            return Err(Error::NotInUpperHalfPlane(sigma.im));
        }
        Self::new(DMatrix::from_element(1, 1, sigma))
    }

    pub fn genus(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    pub fn imag(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }
}

/// A half-integer characteristic `[ε, ε']`. Entries are stored doubled, so
/// `eps[i] ∈ {0, 1}` stands for `ε_i ∈ {0, 1/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaCharacteristic {
    pub eps: Vec<u8>,
    pub eps_prime: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl ThetaCharacteristic {
    pub fn new(eps: Vec<u8>, eps_prime: Vec<u8>) -> Result<Self> {
        if eps.len() != eps_prime.len() {
            return Err(Error::Characteristic("length mismatch".into()));
        }
        if eps.iter().chain(&eps_prime).any(|&b| b > 1) {
            return Err(Error::Characteristic(
                "entries must be 0 or 1 (halves)".into(),
            ));
        }
        Ok(ThetaCharacteristic { eps, eps_prime })
    }

    pub fn zero(g: usize) -> Self {
        ThetaCharacteristic {
            eps: vec![0; g],
            eps_prime: vec![0; g],
        }
    }

    pub fn genus(&self) -> usize {
        self.eps.len()
    }

    pub fn eps_f64(&self) -> Vec<f64> {
        self.eps.iter().map(|&b| b as f64 * 0.5).collect()
    }

    pub fn eps_prime_f64(&self) -> Vec<f64> {
        self.eps_prime.iter().map(|&b| b as f64 * 0.5).collect()
    }

    /// Odd iff `4⟨ε, ε'⟩` is odd.
    pub fn parity(&self) -> Parity {
        let s: u32 = self
            .eps
            .iter()
            .zip(&self.eps_prime)
            .map(|(&a, &b)| (a * b) as u32)
            .sum();
        if s % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// The half-period `Ω ε + ε'`.
    pub fn half_period(&self, omega: &DMatrix<Complex64>) -> Vec<Complex64> {
        let e = self.eps_f64();
        let ep = self.eps_prime_f64();
        (0..self.genus())
            .map(|i| {
                (0..self.genus())
                    .map(|j| omega[(i, j)] * e[j])
                    .sum::<Complex64>()
                    + ep[i]
            })
            .collect()
    }
}

impl fmt::Display for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]/2", self.eps, self.eps_prime)
    }
}

pub fn parity(ch: &ThetaCharacteristic) -> Parity {
    ch.parity()
}

/// All `4^g` characteristics, in lexicographic order of `(ε, ε')`.
pub fn all_characteristics(g: usize) -> Vec<ThetaCharacteristic> {
    (0..1u32 << (2 * g))
        .map(|bits| {
            let bit = |k: usize| ((bits >> (2 * g - 1 - k)) & 1) as u8;
            ThetaCharacteristic {
                eps: (0..g).map(bit).collect(),
                eps_prime: (g..2 * g).map(bit).collect(),
            }
        })
        .collect()
}

pub fn odd_characteristics(g: usize) -> Vec<ThetaCharacteristic> {
    all_characteristics(g)
        .into_iter()
        .filter(|c| c.parity() == Parity::Odd)
        .collect()
}

/// Value, gradient and Hessian of `θ[δ](·; Ω)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaJet {
    pub value: Complex64,
    pub gradient: Vec<Complex64>,
    pub hessian: DMatrix<Complex64>,
}

/// Bound on the terms omitted by a box of radius `r`, relative to the
/// magnitude scale `exp(π cᵀYc)`.
fn tail_bound(r: usize, g: usize, lambda: f64, order: usize, cmax: f64) -> f64 {
    let mut total = 0.0;
    for k in r..r + 200 {
        let kf = k as f64;
        let count = 2.0 * g as f64 * (2.0 * kf + 3.0).powi(g as i32 - 1);
        let poly = (2.0 * PI * (kf + 1.0 + cmax)).powi(order as i32);
        let t = count * poly * (-PI * lambda * kf * kf).exp();
        total += t;
        if t < total * 1e-18 || t == 0.0 {
            break;
        }
    }
    total
}

/// Smallest radius whose tail bound is below `tol`.
pub fn summation_radius(
    sp: &SiegelPoint,
    v_imag_center: f64,
    order: usize,
    tol: f64,
) -> Result<usize> {
    let g = sp.genus();
    for r in 1..=MAX_RADIUS {
        if tail_bound(r, g, sp.lambda_min, order, v_imag_center) < tol {
            return Ok(r);
        }
    }
    Err(Error::RadiusCap(MAX_RADIUS))
}

struct Summation {
    /// Lattice points `m = n + ε` with the normalized term
    /// `exp(πi mᵀΩm + 2πi mᵀ(v+ε') − π cᵀYc)`.
    terms: Vec<(Vec<f64>, Complex64)>,
    log_scale: f64,
}

fn summation(
    v: &[Complex64],
    sp: &SiegelPoint,
    ch: &ThetaCharacteristic,
    order: usize,
    tol: f64,
) -> Result<Summation> {
    let g = sp.genus();
    if v.len() != g || ch.genus() != g {
        return Err(Error::Characteristic(format!(
            "genus mismatch: Ω is {g}x{g}, v has {} entries, characteristic {}",
            v.len(),
            ch.genus()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Numerical("tolerance must be positive".into()));
    }
    let vi = nalgebra::DVector::from_iterator(g, v.iter().map(|z| z.im));
    let c = -(&sp.y_inv * &vi);
    let log_scale = PI * (c.transpose() * &sp.y * &c)[(0, 0)];
    let cmax = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let r = summation_radius(sp, cmax, order, tol)? as f64;
    let eps = ch.eps_f64();
    let shift: Vec<Complex64> = v
        .iter()
        .zip(ch.eps_prime_f64())
        .map(|(z, e)| z + e)
        .collect();
    let lo: Vec<i64> = (0..g).map(|i| (c[i] - eps[i] - r).ceil() as i64).collect();
    let hi: Vec<i64> = (0..g).map(|i| (c[i] - eps[i] + r).floor() as i64).collect();
    let mut n = lo.clone();
    let mut terms = Vec::new();
    loop {
        let m: Vec<f64> = (0..g).map(|i| n[i] as f64 + eps[i]).collect();
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += sp.omega[(i, j)] * (m[i] * m[j]);
            }
        }
        let lin: Complex64 = (0..g).map(|i| shift[i] * m[i]).sum();
        let expo = I * PI * quad + 2.0 * I * PI * lin - log_scale;
        terms.push((m, expo.exp()));
        // odometer
        let mut k = 0;
        loop {
            if k == g {
                return Ok(Summation { terms, log_scale });
            }
            n[k] += 1;
            if n[k] <= hi[k] {
                break;
            }
            n[k] = lo[k];
            k += 1;
        }
    }
}

/// `∂^k θ[δ](v; Ω)/∂v_{i_1}…∂v_{i_k}` with `deriv = [i_1, …, i_k]`.
///
/// The truncation error is below `tol · exp(π cᵀYc)`, `c = −Y⁻¹ Im v`,
/// which is the natural size of `θ` at `v`.
pub fn riemann_theta(
    v: &[Complex64],
    sp: &SiegelPoint,
    ch: &ThetaCharacteristic,
    deriv: &[usize],
    tol: f64,
) -> Result<Complex64> {
    if let Some(&i) = deriv.iter().find(|&&i| i >= sp.genus()) {
        return Err(Error::Characteristic(format!(
            "derivative index {i} out of range"
        )));
    }
    let s = summation(v, sp, ch, deriv.len(), tol)?;
    let total: Complex64 = s
        .terms
        .iter()
        .map(|(m, t)| deriv.iter().fold(*t, |acc, &i| acc * (2.0 * I * PI * m[i])))
        .sum();
    Ok(total * s.log_scale.exp())
}

/// `θ[δ](v; Ω)`.
pub fn theta(
    v: &[Complex64],
    sp: &SiegelPoint,
    ch: &ThetaCharacteristic,
    tol: f64,
) -> Result<Complex64> {
    riemann_theta(v, sp, ch, &[], tol)
}

/// Value, gradient and Hessian from a single lattice sum.
pub fn theta_jet(
    v: &[Complex64],
    sp: &SiegelPoint,
    ch: &ThetaCharacteristic,
    tol: f64,
) -> Result<ThetaJet> {
    let g = sp.genus();
    let s = summation(v, sp, ch, 2, tol)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut gradient = vec![Complex64::new(0.0, 0.0); g];
    let mut hessian = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
    for (m, t) in &s.terms {
        value += t;
        for i in 0..g {
            let ti = t * (2.0 * I * PI * m[i]);
            gradient[i] += ti;
            for j in 0..g {
                hessian[(i, j)] += ti * (2.0 * I * PI * m[j]);
            }
        }
    }
    let k = s.log_scale.exp();
    Ok(ThetaJet {
        value: value * k,
        gradient: gradient.into_iter().map(|z| z * k).collect(),
        hessian: hessian.map(|z| z * k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parity_counts() {
        assert_eq!(odd_characteristics(1).len(), 1);
        assert_eq!(odd_characteristics(2).len(), 6);
        assert_eq!(all_characteristics(2).len(), 16);
        assert_eq!(ThetaCharacteristic::zero(2).parity(), Parity::Even);
    }

    #[test]
    fn lemniscatic_value() {
        let sp = SiegelPoint::from_tau(c(0.0, 1.0)).unwrap();
        let t = theta(&[c(0.0, 0.0)], &sp, &ThetaCharacteristic::zero(1), 1e-14).unwrap();
        assert!((t - 1.086_434_811_213_308).norm() < 1e-13);
    }

    #[test]
    fn rejects_bad_matrices() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.1, 0.0), c(0.2, 0.0), c(0.0, 1.0)]);
        assert!(SiegelPoint::new(m).is_err());
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 2.0), c(0.0, 2.0), c(0.0, 1.0)]);
        assert_eq!(SiegelPoint::new(m), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn jet_matches_single_derivatives() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.1, 1.1), c(0.3, 0.2), c(0.3, 0.2), c(-0.2, 0.9)]);
        let sp = SiegelPoint::new(m).unwrap();
        let ch = &odd_characteristics(2)[2];
        let v = [c(0.1, 0.05), c(-0.2, 0.1)];
        let j = theta_jet(&v, &sp, ch, 1e-14).unwrap();
        let d01 = riemann_theta(&v, &sp, ch, &[0, 1], 1e-14).unwrap();
        let d1 = riemann_theta(&v, &sp, ch, &[1], 1e-14).unwrap();
        assert!((j.hessian[(0, 1)] - d01).norm() < 1e-11);
        assert!((j.gradient[1] - d1).norm() < 1e-11);
    }
}
