use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default minimum distance between branch points.
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-6;

/// The genus-two curve `y² = Π_{i=1}^{6} (x − e_i)`.
///
/// The homology basis is fixed by the order of the branch points: `a₁`
/// encircles `e₁e₂`, `a₂` encircles `e₃e₄`, `b₁` runs through the gaps
/// `e₂e₃` and `e₄e₅`, and `b₂` through `e₄e₅`. Orientations are chosen
/// when the periods are computed.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperellipticCurve {
    branch_points: [Complex64; 6],
}

/// A point `(x, y)` on the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Complex64,
    pub y: Complex64,
}

impl Point {
    /// The other point over the same `x`.
    pub fn conjugate(self) -> Point {
        Point {
            x: self.x,
            y: -self.y,
        }
    }
}

impl HyperellipticCurve {
    /// Validates that the six branch points are pairwise at least
    /// `min_separation` apart.
    pub fn new(points: &[Complex64], min_separation: f64) -> Result<Self> {
        if points.len() != 6 {
            return Err(Error::InvalidCurve(format!(
                "expected 6 branch points, got {}",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidCurve("branch points must be finite".into()));
        }
        for i in 0..6 {
            for j in i + 1..6 {
                let d = (points[i] - points[j]).norm();
                if d < min_separation {
                    return Err(Error::InvalidCurve(format!(
                        "branch points {} and {} are {d:e} apart (minimum {min_separation:e})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut e = [Complex64::new(0.0, 0.0); 6];
        e.copy_from_slice(points);
        Ok(HyperellipticCurve { branch_points: e })
    }

    pub fn branch_points(&self) -> &[Complex64; 6] {
        &self.branch_points
    }

    /// `Π (x − e_i)`.
    pub fn y_squared(&self, x: Complex64) -> Complex64 {
        self.branch_points.iter().map(|e| x - e).product()
    }

    /// The point over `x` on the principal sheet.
    pub fn point(&self, x: Complex64) -> Point {
        Point {
            x,
            y: self.y_squared(x).sqrt(),
        }
    }

    /// The point over `x` whose `y` is nearest to `y_ref`.
    pub fn point_near(&self, x: Complex64, y_ref: Complex64) -> Point {
        Point {
            x,
            y: nearest_sign(self.y_squared(x).sqrt(), y_ref),
        }
    }

    /// Continues `y` from `p` to `x` along the straight segment. Valid while
    /// no branch point lies on the segment.
    pub fn continue_to(&self, p: Point, x: Complex64) -> Point {
        let y = self
            .branch_points
            .iter()
            .fold(p.y, |acc, e| acc * ((x - e) / (p.x - e)).sqrt());
        Point { x, y }
    }

    /// Mean of the branch points.
    pub fn centroid(&self) -> Complex64 {
        self.branch_points.iter().sum::<Complex64>() / 6.0
    }

    /// Largest distance from the centroid to a branch point.
    pub fn radius(&self) -> f64 {
        let c = self.centroid();
        self.branch_points
            .iter()
            .map(|e| (e - c).norm())
            .fold(0.0, f64::max)
    }

    /// Index and distance of the branch point nearest to `x`.
    pub fn nearest_branch_point(&self, x: Complex64) -> (usize, f64) {
        self.branch_points
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (x - e).norm()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    /// Branch points `e_i · s`.
    pub fn scaled(&self, s: Complex64) -> HyperellipticCurve {
        HyperellipticCurve {
            branch_points: self.branch_points.map(|e| e * s),
        }
    }

    /// Smallest distance from a branch point other than those in `skip` to
    /// the segment `[a, b]`.
    pub(crate) fn clearance(&self, a: Complex64, b: Complex64, skip: &[usize]) -> f64 {
        self.branch_points
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, e)| segment_distance(*e, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn nearest_sign(v: Complex64, reference: Complex64) -> Complex64 {
    if (v - reference).norm() <= (v + reference).norm() {
        v
    } else {
        -v
    }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// The differential `ω = (c₀ + c₁x) dx/y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialSpec {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl DifferentialSpec {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        if c0 == Complex64::new(0.0, 0.0) && c1 == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidDifferential("c0 and c1 both vanish".into()));
        }
        if !(c0.re.is_finite() && c0.im.is_finite() && c1.re.is_finite() && c1.im.is_finite()) {
            return Err(Error::InvalidDifferential(
                "coefficients must be finite".into(),
            ));
        }
        Ok(DifferentialSpec { c0, c1 })
    }

    pub fn scaled(&self, eps: Complex64) -> DifferentialSpec {
        DifferentialSpec {
            c0: self.c0 * eps,
            c1: self.c1 * eps,
        }
    }

    /// `c₀ + c₁x`.
    pub fn numerator(&self, x: Complex64) -> Complex64 {
        self.c0 + self.c1 * x
    }
}

/// Curve and differential as read from JSON:
/// `{"branch_points": [[re, im], …], "c0": [re, im], "c1": [re, im]}`,
/// optionally with a `"basepoint": [re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    pub branch_points: Vec<[f64; 2]>,
    pub c0: [f64; 2],
    pub c1: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<[f64; 2]>,
}

fn c(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

impl CurveInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidCurve(format!("malformed curve JSON: {e}")))
    }

    pub fn new(
        curve: &HyperellipticCurve,
        spec: &DifferentialSpec,
        basepoint: Option<Complex64>,
    ) -> Self {
        CurveInput {
            branch_points: curve.branch_points().iter().map(|z| [z.re, z.im]).collect(),
            c0: [spec.c0.re, spec.c0.im],
            c1: [spec.c1.re, spec.c1.im],
            basepoint: basepoint.map(|z| [z.re, z.im]),
        }
    }

    pub fn curve(&self) -> Result<HyperellipticCurve> {
        let pts: Vec<Complex64> = self.branch_points.iter().map(|z| c(*z)).collect();
        HyperellipticCurve::new(&pts, DEFAULT_MIN_SEPARATION)
    }

    pub fn spec(&self) -> Result<DifferentialSpec> {
        DifferentialSpec::new(c(self.c0), c(self.c1))
    }

    pub fn basepoint_x(&self) -> Option<Complex64> {
        self.basepoint.map(c)
    }
}
