use num_complex::Complex64;
use serde::Serialize;

use super::curve::{DifferentialSpec, HyperellipticCurve, Point};
use super::periods::{from_branch, local_integral, PeriodData, C2};
use crate::error::{Error, Result};

/// Default degeneracy threshold: zeros closer than this to a branch point
/// are rejected by generic-stratum operations.
pub const DEFAULT_DEGENERACY_THRESHOLD: f64 = 1e-4;

/// Branch point from which straight segments to every target are clear of
/// the other branch points, preferring the one nearest to the first target.
pub fn choose_via(curve: &HyperellipticCurve, targets: &[Complex64]) -> Result<usize> {
    let e = curve.branch_points();
    let scale = curve.radius().max(1e-300);
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| {
        (targets[0] - e[i])
            .norm()
            .partial_cmp(&(targets[0] - e[j]).norm())
            .expect("finite distances")
    });
    for &i in &order {
        let clear = targets
            .iter()
            .all(|&t| curve.clearance(e[i], t, &[i]) > 1e-3 * scale);
        if clear {
            return Ok(i);
        }
    }
    Err(Error::Numerical(
        "no branch point has clear segments to the targets".into(),
    ))
}

/// `A^P(Q) = ∫_P^Q (ω₁, ω₂)` along `P → e_via → Q`.
pub fn abel_map_via(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    p: Point,
    q: Point,
    via: usize,
    tol: f64,
) -> Result<C2> {
    let jq = from_branch(curve, via, q, tol)?;
    let jp = from_branch(curve, via, p, tol)?;
    Ok(pd.normalize([jq[0] - jp[0], jq[1] - jp[1]]))
}

/// `A^P(Q)` along the path through the branch point nearest to `Q` with a
/// clear route. Different routes differ by lattice vectors.
pub fn abel_map(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    p: Point,
    q: Point,
    tol: f64,
) -> Result<C2> {
    if p == q {
        return Ok(C2::zeros());
    }
    let via = choose_via(curve, &[q.x, p.x])?;
    abel_map_via(pd, curve, p, q, via, tol)
}

/// `A^{e_via}(Q)`.
pub fn abel_from_branch(
    pd: &PeriodData,
    curve: &HyperellipticCurve,
    via: usize,
    q: Point,
    tol: f64,
) -> Result<C2> {
    Ok(pd.normalize(from_branch(curve, via, q, tol)?))
}

/// The two simple zeros of `ω` and their distinguished local parameters
/// `ζ_k(x) = (∫_{x_k}^x ω)^{1/2}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Zeros {
    pub x0: Complex64,
    /// `(x₀, y₀)` and `(x₀, −y₀)`.
    pub points: [Point; 2],
    /// Nearest branch point (0-based) and its distance to `x₀`.
    pub nearest_branch: usize,
    pub branch_distance: f64,
}

/// Zeros of `ω = (c₀ + c₁x) dx/y`. Fails with a degenerate-stratum error
/// when `x₀ = −c₀/c₁` is within `threshold` of a branch point.
pub fn zeros_of_differential(
    curve: &HyperellipticCurve,
    spec: &DifferentialSpec,
    threshold: f64,
) -> Result<Zeros> {
    if spec.c1 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidDifferential(
            "c1 = 0: the differential has no zeros on the affine chart".into(),
        ));
    }
    let x0 = -spec.c0 / spec.c1;
    let (i, d) = curve.nearest_branch_point(x0);
    if d < threshold {
        return Err(Error::DegenerateStratum {
            branch: i + 1,
            distance: d,
        });
    }
    let p = curve.point(x0);
    Ok(Zeros {
        x0,
        points: [p, p.conjugate()],
        nearest_branch: i,
        branch_distance: d,
    })
}

impl Zeros {
    /// `dζ_k/dx` at the zero `x_k`: `ζ_k ≈ √(c₁/(2y_k)) (x − x₀)`.
    pub fn frame_derivative(&self, spec: &DifferentialSpec, k: usize) -> Complex64 {
        (spec.c1 / (2.0 * self.points[k].y)).sqrt()
    }

    /// `ζ_k(x)` with the branch matching [`Zeros::frame_derivative`], for
    /// `x` near `x_k` on the sheet continued from `x_k`.
    pub fn zeta_k(
        &self,
        curve: &HyperellipticCurve,
        spec: &DifferentialSpec,
        k: usize,
        x: Complex64,
        tol: f64,
    ) -> Result<Complex64> {
        let j = local_integral(curve, self.points[k], x, tol)?;
        let w = spec.c0 * j[0] + spec.c1 * j[1];
        let lin = self.frame_derivative(spec, k) * (x - self.x0);
        let r = w.sqrt();
        Ok(if (r - lin).norm() <= (r + lin).norm() {
            r
        } else {
            -r
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperelliptic::periods::period_data;

    fn curve_x6() -> HyperellipticCurve {
        // y² = x⁶ − 1
        let pts: Vec<Complex64> = (0..6)
            .map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::PI / 3.0))
            .collect();
        HyperellipticCurve::new(&pts, 1e-6).unwrap()
    }

    #[test]
    fn zeros_of_x_dx_over_y() {
        let cv = curve_x6();
        let spec =
            DifferentialSpec::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let z = zeros_of_differential(&cv, &spec, 1e-4).unwrap();
        assert!(z.x0.norm() < 1e-15);
        let ys = [z.points[0].y, z.points[1].y];
        assert!(ys
            .iter()
            .any(|y| (y - Complex64::new(0.0, 1.0)).norm() < 1e-12));
        assert!(ys
            .iter()
            .any(|y| (y + Complex64::new(0.0, 1.0)).norm() < 1e-12));
        let z2 = zeros_of_differential(&cv, &spec.scaled(Complex64::new(1e-3, 2.0)), 1e-4).unwrap();
        assert_eq!(z.points, z2.points);
    }

    #[test]
    fn degenerate_signal() {
        let cv = curve_x6();
        let e1 = cv.branch_points()[0];
        for (d, degenerate) in [(2e-4, false), (5e-5, true)] {
            let x0 = e1 - d;
            let spec = DifferentialSpec::new(-x0, Complex64::new(1.0, 0.0)).unwrap();
            let r = zeros_of_differential(&cv, &spec, 1e-4);
            assert_eq!(
                matches!(r, Err(Error::DegenerateStratum { branch: 1, .. })),
                degenerate
            );
        }
        let flat =
            DifferentialSpec::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(zeros_of_differential(&cv, &flat, 1e-4).is_err());
    }

    #[test]
    fn abel_basics() {
        let cv = curve_x6();
        let pd = period_data(&cv, 1e-13).unwrap();
        let p = cv.point(Complex64::new(0.1, 0.2));
        assert_eq!(abel_map(&pd, &cv, p, p, 1e-13).unwrap(), C2::zeros());
        // route independence up to the lattice
        let q = cv.point(Complex64::new(-0.3, 0.1));
        let a = abel_map_via(&pd, &cv, p, q, 0, 1e-13).unwrap();
        let b = abel_map_via(&pd, &cv, p, q, 3, 1e-13).unwrap();
        let d = b - a;
        let y_inv = pd.omega_m().map(|z| z.im).try_inverse().unwrap();
        let m = y_inv * d.map(|z| z.im);
        let n = d - pd.omega_m() * m.map(|t| Complex64::new(t.round(), 0.0));
        assert!(m.iter().all(|t| (t - t.round()).abs() < 1e-9));
        assert!(n
            .iter()
            .all(|z| (z.re - z.re.round()).abs() < 1e-9 && z.im.abs() < 1e-9));
    }
}
