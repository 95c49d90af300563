use num_complex::Complex64;
use serde::Serialize;

use super::abel::{abel_from_branch, choose_via};
use super::curve::{HyperellipticCurve, Point};
use super::periods::{from_branch, segment_integral, PeriodData, C2};
use crate::error::{Error, Result};
use crate::specialfn::{odd_characteristics, theta_jet, ThetaCharacteristic};

/// A point `v` counts as lying on the theta divisor when
/// `|θ(v)| ≤ DIVISOR_TOL · |∇θ(v)|`, i.e. it is that close to a zero.
pub const DIVISOR_TOL: f64 = 1e-7;

/// How the Riemann constants were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMethod {
    /// Closed-form loop integrals along the a-cycles of the loop scheme.
    Quadrature,
    /// `K^{e}` at a branch point is the odd half-period whose theta function
    /// vanishes on the Abel image of the curve.
    HalfPeriod,
}

#[derive(Debug, Clone, Serialize)]
pub struct RiemannConstants {
    pub value: [Complex64; 2],
    pub basepoint: Point,
    pub method: KMethod,
    /// Route of the path pieces fixing the lattice representative.
    pub route: String,
    /// Largest `|θ(A^x(p) + K)| / |∇θ|` over the test points.
    pub divisor_residual: f64,
}

impl RiemannConstants {
    pub fn vector(&self) -> C2 {
        C2::new(self.value[0], self.value[1])
    }
}

/// Points of the curve used to probe the theta divisor, away from the
/// branch points and from `avoid`.
pub fn test_points(curve: &HyperellipticCurve, avoid: &[Complex64]) -> Vec<Point> {
    let c = curve.centroid();
    let r = curve.radius();
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < 2 && k < 64 {
        let z = Complex64::from_polar(0.22 + 0.01 * k as f64, 1.1 + 2.3 * k as f64);
        let x = c + z * r;
        k += 1;
        let far_b = curve.nearest_branch_point(x).1 > 0.05 * r;
        let far_a = avoid.iter().all(|a| (a - x).norm() > 0.05 * r);
        if far_b && far_a {
            out.push(curve.point(x));
        }
    }
    out
}

pub(crate) fn divisor_residual(
    v: &C2,
    pd: &PeriodData,
    ch: &ThetaCharacteristic,
    tol: f64,
) -> Result<f64> {
    let jet = theta_jet(v.as_slice(), &pd.sp, ch, tol)?;
    let g = jet
        .gradient
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(jet.value.norm() / g.max(1e-300))
}

/// `K^x` from the closed form of the defining loop integrals,
///
/// `K_j = (1 + Ω_jj)/2 − A_j^x(P_j)`,
///
/// with `P₁ = e₃` and `P₂ = e₁` the branch points where the other a-cycle
/// starts. The lattice representative of `A^x(e₃)` depends on the sheet
/// of each gap crossed on the way from `e₁`; candidates are tried along the
/// route `e₁ → e₆ → e₅ → e₄ → e₃` and then `e₁ → e₂ → e₃`, keeping the first
/// for which `A^x(p) + K` lies on the theta divisor at every test point.
/// Only defined for the loop-scheme basis.
pub fn riemann_constants(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    basepoint: Point,
    tol: f64,
) -> Result<RiemannConstants> {
    if !pd.loop_scheme {
        return Err(Error::Basis(
            "closed-form Riemann constants need the loop-scheme basis".into(),
        ));
    }
    let e = curve.branch_points();
    let scale = curve.radius();
    if curve.clearance(e[0], basepoint.x, &[0]) < 1e-3 * scale {
        return Err(Error::Numerical("basepoint is not visible from e1".into()));
    }
    let om = pd.omega_m();
    let jx = from_branch(curve, 0, basepoint, tol)?;
    let ax_e1 = -pd.normalize(jx);
    let tps: Vec<Point> = test_points(curve, &[basepoint.x])
        .into_iter()
        .filter(|p| curve.clearance(e[0], p.x, &[0]) > 1e-3 * scale)
        .collect();
    if tps.is_empty() {
        return Err(Error::Numerical("no test point visible from e1".into()));
    }
    let mut ax_p = Vec::new();
    for p in &tps {
        let jp = from_branch(curve, 0, *p, tol)?;
        ax_p.push(pd.normalize([jp[0] - jx[0], jp[1] - jx[1]]));
    }
    let seg = |p: usize, q: usize| -> Result<C2> {
        let ym = curve.y_squared((e[p] + e[q]) / 2.0).sqrt();
        Ok(pd.normalize(segment_integral(curve, p, q, ym, tol)?))
    };
    let backward = [(5, 0), (4, 5), (3, 4), (2, 3)];
    let forward = [(0, 1), (1, 2)];
    let routes: [(&str, &[(usize, usize)], f64); 2] = [
        ("e1-e6-e5-e4-e3", &backward, -1.0),
        ("e1-e2-e3", &forward, 1.0),
    ];
    let zero = ThetaCharacteristic::zero(2);
    let half = Complex64::new(0.5, 0.0);
    for (name, pieces, dir) in routes {
        let ints: Vec<C2> = pieces
            .iter()
            .map(|&(p, q)| seg(p, q))
            .collect::<Result<_>>()?;
        for bits in 0..(1u32 << pieces.len()) {
            let mut tail = C2::zeros();
            let mut label = String::new();
            for (k, v) in ints.iter().enumerate() {
                let s = if bits >> k & 1 == 1 { -1.0 } else { 1.0 };
                tail += v * Complex64::new(dir * s, 0.0);
                label.push(if s > 0.0 { '+' } else { '-' });
            }
            let ax_e3 = ax_e1 + tail;
            let k = C2::new(
                half + om[(0, 0)] * half - ax_e3[0],
                half + om[(1, 1)] * half - ax_e1[1],
            );
            let mut worst = 0.0f64;
            for a in &ax_p {
                worst = worst.max(divisor_residual(&(a + k), pd, &zero, 1e-12)?);
                if worst > DIVISOR_TOL {
                    break;
                }
            }
            if worst <= DIVISOR_TOL {
                return Ok(RiemannConstants {
                    value: [k[0], k[1]],
                    basepoint,
                    method: KMethod::Quadrature,
                    route: format!("{name} {label}"),
                    divisor_residual: worst,
                });
            }
        }
    }
    Err(Error::Numerical(
        "no lattice representative of the loop integrals meets the theta divisor".into(),
    ))
}

/// `K^x = K^{e} + A^{e}(x)`, with `K^{e}` the odd half-period at a branch
/// point `e` identified by the vanishing of `θ[δ]` on the Abel image.
/// Valid in any symplectic basis.
pub fn riemann_constants_half_period(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    basepoint: Point,
    tol: f64,
) -> Result<RiemannConstants> {
    let tps = test_points(curve, &[basepoint.x]);
    let mut targets = vec![basepoint.x];
    targets.extend(tps.iter().map(|p| p.x));
    let via = choose_via(curve, &targets)?;
    let mut scores: Vec<(f64, ThetaCharacteristic)> = Vec::new();
    let images: Vec<C2> = tps
        .iter()
        .map(|p| abel_from_branch(pd, curve, via, *p, tol))
        .collect::<Result<_>>()?;
    for ch in odd_characteristics(2) {
        let mut worst = 0.0f64;
        for a in &images {
            worst = worst.max(divisor_residual(a, pd, &ch, 1e-12)?);
        }
        scores.push((worst, ch));
    }
    scores.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite residuals"));
    let (best, ch) = scores[0].clone();
    if best > DIVISOR_TOL || scores[1].0 < 1e3 * best.max(1e-14) {
        return Err(Error::Numerical(format!(
            "no unique odd characteristic vanishes on the Abel image (best {best:e}, next {:e})",
            scores[1].0
        )));
    }
    let hp = ch.half_period(pd.sp.omega());
    let ax = abel_from_branch(pd, curve, via, basepoint, tol)?;
    let k = C2::new(hp[0], hp[1]) + ax;
    // divisor residual of the result, measured with the plain theta function
    let zero = ThetaCharacteristic::zero(2);
    let mut worst = 0.0f64;
    for p in &tps {
        let jp = from_branch(curve, via, *p, tol)?;
        let jx = from_branch(curve, via, basepoint, tol)?;
        let a = pd.normalize([jp[0] - jx[0], jp[1] - jx[1]]);
        worst = worst.max(divisor_residual(&(a + k), pd, &zero, 1e-12)?);
    }
    Ok(RiemannConstants {
        value: [k[0], k[1]],
        basepoint,
        method: KMethod::HalfPeriod,
        route: format!("e{} {ch}", via + 1),
        divisor_residual: worst,
    })
}
