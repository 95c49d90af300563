//! Adaptive Gauss-Legendre quadrature of smooth complex integrands on `[0, 1]`.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rule orders tried in turn; each is compared with its predecessor.
const ORDERS: [usize; 6] = [32, 64, 128, 256, 512, 1024];

/// Default relative agreement between successive rules.
pub const DEFAULT_QUAD_TOL: f64 = 1e-13;

fn rules() -> &'static Vec<Vec<(f64, f64)>> {
    static RULES: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();
    RULES.get_or_init(|| {
        ORDERS
            .iter()
            .map(|&n| {
                let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("nonzero order"));
                // map [-1, 1] to [0, 1]
                rule.as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| ((x + 1.0) / 2.0, w / 2.0))
                    .collect()
            })
            .collect()
    })
}

fn apply<const N: usize, F>(rule: &[(f64, f64)], f: &F) -> [Complex64; N]
where
    F: Fn(f64) -> [Complex64; N],
{
    let mut acc = [Complex64::new(0.0, 0.0); N];
    for &(t, w) in rule {
        let v = f(t);
        for k in 0..N {
            acc[k] += v[k] * w;
        }
    }
    acc
}

/// `∫₀¹ f(t) dt` for a vector of `N` integrands, doubling the rule order
/// until two successive results agree to `tol` relative to `max(1, |I|)`.
pub fn integrate<const N: usize, F>(f: F, tol: f64) -> Result<[Complex64; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    let rs = rules();
    let mut prev = apply(&rs[0], &f);
    let mut last_diff = f64::INFINITY;
    for rule in &rs[1..] {
        let cur = apply(rule, &f);
        let scale = cur.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let diff = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if !diff.is_finite() {
            return Err(Error::Quadrature("integrand is not finite".into()));
        }
        if diff <= tol * scale {
            return Ok(cur);
        }
        prev = cur;
        last_diff = diff / scale;
    }
    Err(Error::Quadrature(format!(
        "relative change {last_diff:e} after {} nodes exceeds {tol:e}",
        ORDERS[ORDERS.len() - 1]
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrals() {
        let r = integrate(
            |t| [Complex64::new(t.cos(), 0.0), Complex64::new(0.0, t * t)],
            1e-14,
        )
        .unwrap();
        assert!((r[0].re - 1f64.sin()).abs() < 1e-15);
        assert!((r[1].im - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn singular_integrand_fails() {
        assert!(integrate(|t| [Complex64::new(1.0 / t.sqrt().max(1e-300), 0.0)], 1e-14).is_err());
    }
}
