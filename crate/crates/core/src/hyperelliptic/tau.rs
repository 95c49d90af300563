use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::abel::{
    abel_map_via, choose_via, zeros_of_differential, Zeros, DEFAULT_DEGENERACY_THRESHOLD,
};
use super::curve::{DifferentialSpec, HyperellipticCurve, Point};
use super::periods::{local_integral, period_data, PeriodData, C2};
use super::prime::{odd_gradient, omega_delta};
use super::quadrature::DEFAULT_QUAD_TOL;
use super::riemann::{riemann_constants, riemann_constants_half_period, KMethod, RiemannConstants};
use crate::error::{Error, Result};
use crate::specialfn::{odd_characteristics, riemann_theta, theta_jet, ThetaCharacteristic};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Conventions the genus-two numbers depend on.
pub const CONVENTION: &str = "y^2 = prod (x - e_i); a1 around e1e2, a2 around e3e4, b1 through gaps e2e3 and e4e5, b2 through e4e5; \
orientations from the first sign pattern with Im Omega > 0; omega_i = N (1, x) dx/y with N = (a-periods)^-1; \
zeta-frame d zeta = omega, zero frames zeta_k^2 = int_{x_k} omega; Abel paths through one branch point; \
Z = round((Im Omega)^-1 Im(2K + A(x1) + A(x2))), Z' = round(Re(2K + A(x1) + A(x2) - Omega Z)); \
prefactor exp(-4 pi i <Omega Z - 4K, Z>)";

#[derive(Debug, Clone)]
pub struct TauOptions {
    pub quad_tol: f64,
    pub theta_tol: f64,
    pub degeneracy_threshold: f64,
    pub lattice_threshold: f64,
    /// `x` of the basepoint `ζ` and a reference `y` for its sheet.
    pub basepoint: Option<Point>,
    /// Odd characteristic of the prime form; defaults to the first one.
    pub characteristic: Option<ThetaCharacteristic>,
    /// Defaults to quadrature in the loop-scheme basis and the half-period
    /// construction otherwise.
    pub k_method: Option<KMethod>,
    pub swap_zeros: bool,
    /// Extra factors `i^k` on the square roots in `E(ζ,x₁)`, `E(ζ,x₂)`, `E(x₁,x₂)`.
    pub branch_flips: [u8; 3],
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions {
            quad_tol: DEFAULT_QUAD_TOL,
            theta_tol: 1e-12,
            degeneracy_threshold: DEFAULT_DEGENERACY_THRESHOLD,
            lattice_threshold: 1e-6,
            basepoint: None,
            characteristic: None,
            k_method: None,
            swap_zeros: false,
            branch_flips: [0; 3],
        }
    }
}

/// Prime-form factors entering the formula.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeFormFactors {
    /// `E(ζ, x_k)` in the `ζ`-frame at `ζ` and the `ζ_k`-frame at `x_k`.
    pub e_zeta_x: [Complex64; 2],
    /// `E(x₁, x₂)` in the frames `ζ₁`, `ζ₂`.
    pub e_x1_x2: Complex64,
    /// `ω_δ/dζ_k` at `x_k`.
    pub omega_delta_at_zeros: [Complex64; 2],
    /// `ω_δ/dζ` at `ζ`.
    pub omega_delta_at_basepoint: Complex64,
}

/// `τ₀` with every ingredient of the explicit formula.
#[derive(Debug, Clone, Serialize)]
pub struct TauEvaluation {
    pub value: Complex64,
    /// `log τ₀` as the sum of the logarithms of the factors.
    pub log_value: Complex64,
    pub characteristic: ThetaCharacteristic,
    pub basepoint: Point,
    pub zeros: [Point; 2],
    pub omega: [[Complex64; 2]; 2],
    /// `Σ ∂_i∂_jθ(K^ζ) v_i(ζ) v_j(ζ)` with `v_i = ω_i/ω`.
    pub theta_term: Complex64,
    /// Wronskian of `ω₁, ω₂` in the `ζ`-frame.
    pub wronskian: Complex64,
    pub riemann_constants: RiemannConstants,
    pub abel_zeros: [[Complex64; 2]; 2],
    pub z: [i64; 2],
    pub z_prime: [i64; 2],
    pub lattice_residual: f64,
    /// `exp(−4πi⟨ΩZ − 4K^ζ, Z⟩)`.
    pub exponential_prefactor: Complex64,
    pub prime_forms: PrimeFormFactors,
    pub convention: String,
}

/// A basepoint away from the zeros and the branch points.
pub fn default_basepoint(curve: &HyperellipticCurve, avoid: Complex64) -> Point {
    let c = curve.centroid();
    let r = curve.radius();
    for k in 0..64 {
        let x = c + Complex64::from_polar(r * (0.12 + 0.01 * k as f64), 0.7 + 2.1 * k as f64);
        if curve.nearest_branch_point(x).1 > 0.08 * r && (x - avoid).norm() > 0.08 * r {
            return curve.point(x);
        }
    }
    curve.point(c + Complex64::new(0.0, 0.5 * r))
}

/// `τ₀` for `(curve, ω)` with periods computed afresh.
pub fn tau0_eval(
    curve: &HyperellipticCurve,
    spec: &DifferentialSpec,
    opts: &TauOptions,
) -> Result<TauEvaluation> {
    let pd = period_data(curve, opts.quad_tol)?;
    tau0_eval_with(&pd, curve, spec, opts)
}

/// `τ₀` with given period data (possibly in a transformed basis).
pub fn tau0_eval_with(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    spec: &DifferentialSpec,
    opts: &TauOptions,
) -> Result<TauEvaluation> {
    let tol = opts.quad_tol;
    let mut zeros: Zeros = zeros_of_differential(curve, spec, opts.degeneracy_threshold)?;
    if opts.swap_zeros {
        zeros.points.swap(0, 1);
    }
    let [x1, x2] = zeros.points;
    let zeta = match opts.basepoint {
        Some(p) => curve.point_near(p.x, p.y),
        None => default_basepoint(curve, zeros.x0),
    };
    let (_, bd) = curve.nearest_branch_point(zeta.x);
    if bd < opts.degeneracy_threshold || (zeta.x - zeros.x0).norm() < opts.degeneracy_threshold {
        return Err(Error::Numerical(
            "basepoint is too close to a zero or a branch point".into(),
        ));
    }
    let ch = match &opts.characteristic {
        Some(c) => c.clone(),
        None => odd_characteristics(2).remove(0),
    };
    let method = opts.k_method.unwrap_or(if pd.loop_scheme {
        KMethod::Quadrature
    } else {
        KMethod::HalfPeriod
    });
    let k = match method {
        KMethod::Quadrature => riemann_constants(pd, curve, zeta, tol)?,
        KMethod::HalfPeriod => riemann_constants_half_period(pd, curve, zeta, tol)?,
    };
    let kv = k.vector();
    let via = choose_via(curve, &[zeros.x0, zeta.x])?;
    let a1 = abel_map_via(pd, curve, zeta, x1, via, tol)?;
    let a2 = abel_map_via(pd, curve, zeta, x2, via, tol)?;
    let lat = kv * Complex64::new(2.0, 0.0) + a1 + a2;
    let (z, zp, res) = pd.lattice_coords(&lat);
    if res > opts.lattice_threshold {
        return Err(Error::LatticeResidual(res));
    }
    let om = pd.omega_m();
    let zc = C2::new(
        Complex64::new(z[0] as f64, 0.0),
        Complex64::new(z[1] as f64, 0.0),
    );

    let u = pd.normalized_numerators(zeta.x) / spec.numerator(zeta.x);
    let jet = theta_jet(
        kv.as_slice(),
        &pd.sp,
        &ThetaCharacteristic::zero(2),
        opts.theta_tol,
    )?;
    let mut f = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            f += u[i] * jet.hessian[(i, j)] * u[j];
            scale += (u[i] * jet.hessian[(i, j)] * u[j]).norm();
        }
    }
    if !(f.norm() > 1e-12 * scale) {
        return Err(Error::Numerical(
            "theta-derivative term is below the noise floor".into(),
        ));
    }
    let w = pd.n_m().determinant() * zeta.y / spec.numerator(zeta.x).powi(3);

    let log_t2 = -4.0 * PI * I * (om * zc - kv * Complex64::new(4.0, 0.0)).dot(&zc);

    let grad = odd_gradient(pd, &ch, opts.theta_tol)?;
    let h = grad.dot(&u);
    let q = [0, 1]
        .map(|kk| omega_delta(pd, &grad, zeros.points[kk]) / zeros.frame_derivative(spec, kk));
    let th = |v: &C2| riemann_theta(v.as_slice(), &pd.sp, &ch, &[], opts.theta_tol);
    let th1 = th(&a1)?;
    let th2 = th(&a2)?;
    let th12 = th(&(a2 - a1))?;
    let flip = |k: u8| I.powi(k as i32);
    let e1 = th1 / (h * q[0]).sqrt() * flip(opts.branch_flips[0]);
    let e2 = th2 / (h * q[1]).sqrt() * flip(opts.branch_flips[1]);
    let e12 = th12 / (q[0] * q[1]).sqrt() * flip(opts.branch_flips[2]);
    if [e1, e2, e12]
        .iter()
        .any(|e| !(e.norm() > 0.0) || !e.norm().is_finite())
    {
        return Err(Error::Numerical(
            "prime-form factor vanished or overflowed".into(),
        ));
    }

    let log_value =
        16.0 * (f.ln() - w.ln()) + log_t2 + 4.0 * e12.ln() - 8.0 * e1.ln() - 8.0 * e2.ln();
    Ok(TauEvaluation {
        value: log_value.exp(),
        log_value,
        characteristic: ch,
        basepoint: zeta,
        zeros: zeros.points,
        omega: pd.omega,
        theta_term: f,
        wronskian: w,
        riemann_constants: k,
        abel_zeros: [[a1[0], a1[1]], [a2[0], a2[1]]],
        z,
        z_prime: zp,
        lattice_residual: res,
        exponential_prefactor: log_t2.exp(),
        prime_forms: PrimeFormFactors {
            e_zeta_x: [e1, e2],
            e_x1_x2: e12,
            omega_delta_at_zeros: q,
            omega_delta_at_basepoint: h,
        },
        convention: CONVENTION.into(),
    })
}

/// `E(ζ, x_k)` obtained without the closed-form frame conversion: the
/// natural-frame value at points `y` approaching `x_k` is multiplied by
/// `(2ζ_k(y))^{-1/2}` and extrapolated to `y = x_k`. Returns the eighth
/// powers `(extrapolated, closed form)`.
pub fn zero_limit_extrapolated(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    spec: &DifferentialSpec,
    eval: &TauEvaluation,
    k: usize,
    tol: f64,
) -> Result<(Complex64, Complex64)> {
    let zeros = zeros_of_differential(curve, spec, 0.0)?;
    let idx = zeros
        .points
        .iter()
        .position(|p| (p.y - eval.zeros[k].y).norm() < 1e-12 * (1.0 + p.y.norm()))
        .ok_or_else(|| Error::Numerical("zero not found".into()))?;
    let xk = zeros.points[idx];
    let zeta = eval.basepoint;
    let ch = &eval.characteristic;
    let grad = odd_gradient(pd, ch, 1e-13)?;
    let u = pd.normalized_numerators(zeta.x) / spec.numerator(zeta.x);
    let h = grad.dot(&u);
    let a_k = C2::new(eval.abel_zeros[k][0], eval.abel_zeros[k][1]);
    let step = 1e-3 * zeros.branch_distance.min((zeta.x - zeros.x0).norm());
    let dir = Complex64::new(0.6, 0.8);
    let f8 = |t: f64| -> Result<Complex64> {
        let x = zeros.x0 + dir * t;
        let y = curve.continue_to(xk, x);
        let a = a_k + pd.normalize(local_integral(curve, xk, x, tol)?);
        let th = riemann_theta(a.as_slice(), &pd.sp, ch, &[], 1e-13)?;
        let hy = omega_delta(pd, &grad, y) * y.y / spec.numerator(x);
        let zk = zeros.zeta_k(curve, spec, idx, x, tol)?;
        // (E_nat)^8 (2ζ_k)^{-4}
        Ok((th * th / (h * hy)).powi(4) / (2.0 * zk).powi(4))
    };
    let (a, b, c) = (f8(step)?, f8(step / 2.0)?, f8(step / 4.0)?);
    let extrap = (8.0 * c - 6.0 * b + a) / 3.0;
    Ok((extrap, eval.prime_forms.e_zeta_x[k].powi(8)))
}
