use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

use super::curve::{nearest_sign, HyperellipticCurve, Point};
use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::specialfn::SiegelPoint;

pub type C2 = Vector2<Complex64>;
pub type M2 = Matrix2<Complex64>;

/// The gaps between consecutive branch points used by the loop scheme.
pub const SEGMENTS: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 4)];

/// Symmetry tolerance for the period matrix.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// `(∫ dx/y, ∫ x dx/y)` from `e_p` to `e_q` along the straight segment, on
/// the sheet where `y` at the midpoint equals `y_mid`.
///
/// Uses `x = m − (Δ/2) cos θ`, which absorbs both inverse square-root
/// endpoint singularities.
pub fn segment_integral(
    curve: &HyperellipticCurve,
    p: usize,
    q: usize,
    y_mid: Complex64,
    tol: f64,
) -> Result<[Complex64; 2]> {
    let e = curve.branch_points();
    let m = (e[p] + e[q]) / 2.0;
    let d = e[q] - e[p];
    let others: Vec<Complex64> = (0..6).filter(|&i| i != p && i != q).map(|i| e[i]).collect();
    let r = integrate(
        |u| {
            let x = m - d / 2.0 * (PI * u).cos();
            let pr: Complex64 = others
                .iter()
                .map(|ei| ((x - ei) / (m - ei)).sqrt())
                .product();
            [PI / pr, PI * x / pr]
        },
        tol,
    )?;
    let s = d / (2.0 * y_mid);
    Ok([r[0] * s, r[1] * s])
}

/// `(∫ dx/y, ∫ x dx/y)` from `e_p` to the point `q` along the straight
/// segment, with `x = e_p + (x_q − e_p) s²`.
pub fn from_branch(
    curve: &HyperellipticCurve,
    p: usize,
    q: Point,
    tol: f64,
) -> Result<[Complex64; 2]> {
    let e = curve.branch_points();
    let ep = e[p];
    let dx = q.x - ep;
    if dx.norm() == 0.0 {
        return Ok([Complex64::new(0.0, 0.0); 2]);
    }
    let others: Vec<Complex64> = (0..6).filter(|&i| i != p).map(|i| e[i]).collect();
    let r = integrate(
        |s| {
            let x = ep + dx * (s * s);
            let pr: Complex64 = others
                .iter()
                .map(|ei| ((x - ei) / (q.x - ei)).sqrt())
                .product();
            [1.0 / pr, x / pr]
        },
        tol,
    )?;
    let f = 2.0 * dx / q.y;
    Ok([r[0] * f, r[1] * f])
}

/// `(∫ dx/y, ∫ x dx/y)` from `p` to `x` along the straight segment, `y`
/// continued from `p`. Valid when no branch point is close to the segment.
pub fn local_integral(
    curve: &HyperellipticCurve,
    p: Point,
    x: Complex64,
    tol: f64,
) -> Result<[Complex64; 2]> {
    let d = x - p.x;
    let e = *curve.branch_points();
    let r = integrate(
        |s| {
            let xs = p.x + d * s;
            let y = e
                .iter()
                .fold(p.y, |acc, ei| acc * ((xs - ei) / (p.x - ei)).sqrt());
            [1.0 / y, xs / y]
        },
        tol,
    )?;
    Ok([r[0] * d, r[1] * d])
}

/// Periods of a marked genus-two curve.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodData {
    #[serde(skip)]
    pub sp: SiegelPoint,
    /// `Ω`, rows then columns.
    pub omega: [[Complex64; 2]; 2],
    /// Rows `dx/y`, `x dx/y`; columns `a₁`, `a₂`.
    pub a_periods_raw: [[Complex64; 2]; 2],
    /// Rows `dx/y`, `x dx/y`; columns `b₁`, `b₂`.
    pub b_periods_raw: [[Complex64; 2]; 2],
    /// `N` with `ω_i = (N_{i0} + N_{i1} x) dx/y`.
    pub normalization: [[Complex64; 2]; 2],
    /// Orientations of `a₁, a₂` and of the gap pieces of `b₁, b₂`.
    pub signs: [i8; 5],
    /// Reference `y` at the midpoint of each gap in [`SEGMENTS`].
    pub midpoint_y: [Complex64; 4],
    /// Raw gap integrals on the reference sheets.
    pub segments: [[Complex64; 2]; 4],
    /// Relative asymmetry `|Ω₁₂ − Ω₂₁| / max|Ω|` before symmetrization.
    pub symmetry_residual: f64,
    /// `max |N·Pa − I|`.
    pub normalization_residual: f64,
    /// Smallest eigenvalue of `Im Ω`.
    pub im_min_eigenvalue: f64,
    /// Whether the basis is the loop scheme itself (not a symplectic image).
    pub loop_scheme: bool,
}

pub(crate) fn to_arr(m: &M2) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub(crate) fn from_arr(a: &[[Complex64; 2]; 2]) -> M2 {
    M2::new(a[0][0], a[0][1], a[1][0], a[1][1])
}

impl PeriodData {
    pub fn omega_m(&self) -> M2 {
        from_arr(&self.omega)
    }

    pub fn n_m(&self) -> M2 {
        from_arr(&self.normalization)
    }

    pub fn pa_m(&self) -> M2 {
        from_arr(&self.a_periods_raw)
    }

    pub fn pb_m(&self) -> M2 {
        from_arr(&self.b_periods_raw)
    }

    /// Normalized integral `N·(∫dx/y, ∫x dx/y)`.
    pub fn normalize(&self, j: [Complex64; 2]) -> C2 {
        self.n_m() * C2::new(j[0], j[1])
    }

    /// Writes `v = Ω m + n + r` with integer `m`, `n` and returns `(m, n, |r|∞)`.
    pub fn lattice_coords(&self, v: &C2) -> ([i64; 2], [i64; 2], f64) {
        let om = self.omega_m();
        let y_inv = om
            .map(|z| z.im)
            .try_inverse()
            .expect("Im Ω is positive definite");
        let mf = y_inv * v.map(|z| z.im);
        let m = mf.map(|t| t.round());
        let rest = v - om * m.map(|t| Complex64::new(t, 0.0));
        let n = rest.map(|z| z.re.round());
        let res = (0..2)
            .map(|k| {
                (mf[k] - m[k])
                    .abs()
                    .max((rest[k].re - n[k]).abs())
                    .max(rest[k].im.abs())
            })
            .fold(0.0, f64::max);
        ([m[0] as i64, m[1] as i64], [n[0] as i64, n[1] as i64], res)
    }

    /// `(ω₁, ω₂)/(dx/y)` at `x`.
    pub fn normalized_numerators(&self, x: Complex64) -> C2 {
        let n = self.n_m();
        C2::new(n[(0, 0)] + n[(0, 1)] * x, n[(1, 0)] + n[(1, 1)] * x)
    }

    fn assemble(
        pa: M2,
        pb: M2,
        loop_scheme: bool,
        signs: [i8; 5],
        midpoint_y: [Complex64; 4],
        segments: [[Complex64; 2]; 4],
    ) -> Result<Self> {
        let n = pa
            .try_inverse()
            .ok_or_else(|| Error::Basis("a-periods are singular".into()))?;
        let om = n * pb;
        let scale = om.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let asym = (om[(0, 1)] - om[(1, 0)]).norm() / scale;
        if asym > SYMMETRY_TOL {
            return Err(Error::Basis(format!("period matrix asymmetric ({asym:e})")));
        }
        let sym = (om + om.transpose()) / Complex64::new(2.0, 0.0);
        let sp = SiegelPoint::new(DMatrix::from_iterator(2, 2, sym.iter().cloned()))?;
        let norm_res = (n * pa - M2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        Ok(PeriodData {
            im_min_eigenvalue: sp.lambda_min(),
            sp,
            omega: to_arr(&sym),
            a_periods_raw: to_arr(&pa),
            b_periods_raw: to_arr(&pb),
            normalization: to_arr(&n),
            signs,
            midpoint_y,
            segments,
            symmetry_residual: asym,
            normalization_residual: norm_res,
            loop_scheme,
        })
    }

    /// Periods in the basis `b′ = A b + B a`, `a′ = C b + D a` for
    /// `γ = [[A, B], [C, D]] ∈ Sp(4, Z)`.
    pub fn transformed(&self, gamma: &[[i64; 4]; 4]) -> Result<PeriodData> {
        check_symplectic(gamma)?;
        let blk = |r: usize, c: usize| {
            M2::new(
                Complex64::new(gamma[r][c] as f64, 0.0),
                Complex64::new(gamma[r][c + 1] as f64, 0.0),
                Complex64::new(gamma[r + 1][c] as f64, 0.0),
                Complex64::new(gamma[r + 1][c + 1] as f64, 0.0),
            )
        };
        let (a, b, c, d) = (blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2));
        let pa = self.pa_m();
        let pb = self.pb_m();
        let pa2 = pa * d.transpose() + pb * c.transpose();
        let pb2 = pa * b.transpose() + pb * a.transpose();
        PeriodData::assemble(pa2, pb2, false, self.signs, self.midpoint_y, self.segments)
    }
}

/// Checks `γᵀ J γ = J`.
pub fn check_symplectic(gamma: &[[i64; 4]; 4]) -> Result<()> {
    let j = [[0i64, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];
    for r in 0..4 {
        for c in 0..4 {
            let mut s = 0;
            for k in 0..4 {
                for l in 0..4 {
                    s += gamma[k][r] * j[k][l] * gamma[l][c];
                }
            }
            if s != j[r][c] {
                return Err(Error::NotSymplectic(format!(
                    "entry ({r},{c}) of γᵀJγ is {s}"
                )));
            }
        }
    }
    Ok(())
}

fn basis_from(seg: &[[Complex64; 2]; 4], sg: [i8; 5]) -> (M2, M2) {
    let f = |s: i8| Complex64::new(2.0 * s as f64, 0.0);
    let col = |k: usize, s: i8| C2::new(seg[k][0] * f(s), seg[k][1] * f(s));
    let a1 = col(0, sg[0]);
    let a2 = col(2, sg[1]);
    let b1 = col(1, sg[2]) + col(3, sg[3]);
    let b2 = col(3, sg[4]);
    (M2::from_columns(&[a1, a2]), M2::from_columns(&[b1, b2]))
}

fn sign_patterns() -> impl Iterator<Item = [i8; 5]> {
    (0..32u32).map(|bits| {
        let mut s = [1i8; 5];
        for (k, v) in s.iter_mut().enumerate() {
            if bits >> k & 1 == 1 {
                *v = -1;
            }
        }
        s
    })
}

fn search(
    seg: [[Complex64; 2]; 4],
    mids: [Complex64; 4],
    fixed: Option<[i8; 5]>,
) -> Result<PeriodData> {
    let mut last_err = Error::Basis("no orientation of the loop scheme gives Im Ω > 0".into());
    let cands: Vec<[i8; 5]> = match fixed {
        Some(s) => vec![s],
        None => sign_patterns().collect(),
    };
    for sg in cands {
        let (pa, pb) = basis_from(&seg, sg);
        match PeriodData::assemble(pa, pb, true, sg, mids, seg) {
            Ok(pd) => return Ok(pd),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Normalized periods of `curve` in the loop scheme. Cycle orientations are
/// the first of the 32 sign patterns giving a symmetric `Ω` with
/// `Im Ω > 0`.
pub fn period_data(curve: &HyperellipticCurve, tol: f64) -> Result<PeriodData> {
    let e = curve.branch_points();
    let mut seg = [[Complex64::new(0.0, 0.0); 2]; 4];
    let mut mids = [Complex64::new(0.0, 0.0); 4];
    for (k, &(p, q)) in SEGMENTS.iter().enumerate() {
        mids[k] = curve.y_squared((e[p] + e[q]) / 2.0).sqrt();
        seg[k] = segment_integral(curve, p, q, mids[k], tol)?;
    }
    search(seg, mids, None)
}

/// Periods of a nearby curve, continued from `reference`: the midpoint
/// sheets and orientations are those closest to the reference.
pub fn period_data_continued(
    curve: &HyperellipticCurve,
    reference: &PeriodData,
    tol: f64,
) -> Result<PeriodData> {
    let e = curve.branch_points();
    let mut seg = [[Complex64::new(0.0, 0.0); 2]; 4];
    let mut mids = [Complex64::new(0.0, 0.0); 4];
    for (k, &(p, q)) in SEGMENTS.iter().enumerate() {
        mids[k] = nearest_sign(
            curve.y_squared((e[p] + e[q]) / 2.0).sqrt(),
            reference.midpoint_y[k],
        );
        seg[k] = segment_integral(curve, p, q, mids[k], tol)?;
    }
    search(seg, mids, Some(reference.signs))
}

/// `Ω` recomputed with every gap integral taken along a bent path through
/// a point off the segment, split into two branch-point-to-point pieces.
/// Used to check path independence of the periods.
pub fn omega_bent_routing(curve: &HyperellipticCurve, pd: &PeriodData, tol: f64) -> Result<M2> {
    let e = curve.branch_points();
    let mut seg = [[Complex64::new(0.0, 0.0); 2]; 4];
    for (k, &(p, q)) in SEGMENTS.iter().enumerate() {
        let m = (e[p] + e[q]) / 2.0;
        let mid = Point {
            x: m,
            y: pd.midpoint_y[k],
        };
        // bend sideways by a fifth of the gap, short of other branch points
        let normal = (e[q] - e[p]) * Complex64::new(0.0, 0.2);
        let blocked = |off: Complex64| {
            (0..6).any(|i| i != p && i != q && in_triangle(e[i], e[p], off, e[q]))
                || curve
                    .clearance(e[p], off, &[p])
                    .min(curve.clearance(off, e[q], &[q]))
                    < 0.05 * normal.norm()
        };
        let off = if blocked(m + normal) {
            m - normal
        } else {
            m + normal
        };
        if blocked(off) {
            return Err(Error::Basis(format!(
                "no clear bent route across gap {}-{}",
                p + 1,
                q + 1
            )));
        }
        let bend = curve.continue_to(mid, off);
        let jp = from_branch(curve, p, bend, tol)?;
        let jq = from_branch(curve, q, bend, tol)?;
        seg[k] = [jp[0] - jq[0], jp[1] - jq[1]];
    }
    let (pa, pb) = basis_from(&seg, pd.signs);
    let n = pa
        .try_inverse()
        .ok_or_else(|| Error::Basis("a-periods are singular".into()))?;
    Ok(n * pb)
}

fn in_triangle(z: Complex64, a: Complex64, b: Complex64, c: Complex64) -> bool {
    let cross = |u: Complex64, v: Complex64| (u.conj() * v).im;
    let s1 = cross(b - a, z - a);
    let s2 = cross(c - b, z - b);
    let s3 = cross(a - c, z - c);
    (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0)
}
