//! Intersection numbers and Lyapunov sums on arithmetic Teichmüller curves.
//!
//! Every number here is an exact [`Rational`]. The raw combinatorial
//! quantities are
//!
//! * `psi_number`: the number of covers in the orbit, each weighted by
//!   `1/|Aut|`;
//! * `delta0_number`: the boundary sum over cusps of `W · Σ h_i/w_i`
//!   (cusp width times the cylinder modulus sum), with the same weights;
//! * `siegel_veech`: the orbit average of `Σ h_i/w_i`.
//!
//! The Lyapunov sum is `κ_μ + c_μ`. For the generic stratum it can also be
//! read off the boundary: `(g−1)/4 + (1/12)·K·δ₀/ψ`, where the single
//! normalization constant `K` lives in [`Calibration`].

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::origami::{cusps, enumerate_origamis, sl2_orbits, Origami, StableGraph, Stratum};
use crate::rational::{serde_pq, serde_pq_opt, Rational};

pub use crate::origami::TeichCurve;

/// Normalization constant relating the raw boundary sum to the δ₀ pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    #[serde(rename = "K", with = "serde_pq")]
    pub k: Rational,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            k: Rational::from_integer(12),
        }
    }
}

impl Calibration {
    pub fn new(k: Rational) -> Self {
        Calibration { k }
    }

    /// The `K` forced by `L = 1` on the genus-one orbit of `d`-square tori.
    pub fn derive_from_torus(d: usize) -> Result<Self> {
        let torus = Stratum::generic(1)?;
        let orbits = sl2_orbits(&enumerate_origamis(d, &torus).origamis);
        let c = orbits
            .first()
            .ok_or_else(|| Error::InvalidStratum(format!("no torus covers of degree {d}")))?;
        // L = (g-1)/4 + K δ₀ / (12 ψ) with g = 1
        Ok(Calibration {
            k: Rational::from_integer(12) * psi_number(c) / delta0_number(c),
        })
    }
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}", self.k)
    }
}

pub(crate) mod stratum_str {
    use super::*;

    pub fn serialize<S: Serializer>(s: &Stratum, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&s.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Stratum, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of a convergence table: all numbers for one orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyapunovReport {
    #[serde(with = "stratum_str")]
    pub stratum: Stratum,
    pub d: usize,
    pub orbit_id: usize,
    pub orbit_size: usize,
    #[serde(with = "serde_pq")]
    pub psi_number: Rational,
    #[serde(with = "serde_pq")]
    pub psi_number_unweighted: Rational,
    #[serde(with = "serde_pq")]
    pub delta0_number: Rational,
    #[serde(with = "serde_pq")]
    pub delta0_number_unweighted: Rational,
    #[serde(with = "serde_pq")]
    pub kappa: Rational,
    #[serde(with = "serde_pq")]
    pub siegel_veech: Rational,
    #[serde(with = "serde_pq")]
    pub lyap_sum: Rational,
    /// Only defined on the generic stratum.
    #[serde(with = "serde_pq_opt")]
    pub boundary_lyap_sum: Option<Rational>,
    /// Outcome of [`boundary_vanishing_check`]; `None` off the generic stratum.
    pub boundary_vanishing: Option<bool>,
    #[serde(rename = "K", with = "serde_pq")]
    pub k: Rational,
}

impl LyapunovReport {
    pub fn genus(&self) -> u32 {
        self.stratum.genus()
    }
}

/// Weighted average over the orbits of one degree, weights `psi_number`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAggregate {
    #[serde(with = "stratum_str")]
    pub stratum: Stratum,
    pub d: usize,
    pub orbits: usize,
    pub covers: usize,
    #[serde(with = "serde_pq")]
    pub psi_number: Rational,
    #[serde(with = "serde_pq")]
    pub lyap_sum: Rational,
    #[serde(with = "serde_pq_opt")]
    pub boundary_lyap_sum: Option<Rational>,
    #[serde(rename = "K", with = "serde_pq")]
    pub k: Rational,
    pub weighting: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<LyapunovReport>,
    pub aggregates: Vec<DegreeAggregate>,
    pub warnings: Vec<String>,
}

/// `κ_μ = (g−1)/6 + r/12 − (1/12) Σ 1/(m_i+1)`.
pub fn kappa(s: &Stratum) -> Rational {
    let g = s.genus() as i64;
    let r = s.num_zeros() as i64;
    let tail: Rational = s
        .zero_orders()
        .iter()
        .map(|&m| Rational::new(1, m as i64 + 1))
        .sum();
    Rational::new(g - 1, 6) + Rational::new(r, 12) - tail / 12
}

fn weight(o: &Origami) -> Rational {
    Rational::new(1, o.automorphism_order() as i64)
}

/// Weighted cover count `Σ 1/|Aut|`.
pub fn psi_number(c: &TeichCurve) -> Rational {
    c.members.iter().map(weight).sum()
}

/// Plain orbit size.
pub fn psi_number_unweighted(c: &TeichCurve) -> Rational {
    Rational::from_integer(c.len() as i64)
}

fn delta0_cuspwise(c: &TeichCurve, weighted: bool) -> Rational {
    cusps(c)
        .iter()
        .map(|cusp| {
            let w = if weighted {
                weight(&cusp.representative)
            } else {
                Rational::from_integer(1)
            };
            w * Rational::from_integer(cusp.width as i64) * cusp.cylinders.modulus_sum()
        })
        .sum()
}

/// Weighted boundary sum over cusps.
pub fn delta0_number(c: &TeichCurve) -> Rational {
    delta0_cuspwise(c, true)
}

pub fn delta0_number_unweighted(c: &TeichCurve) -> Rational {
    delta0_cuspwise(c, false)
}

/// The same sum taken member by member instead of cusp by cusp.
pub fn delta0_number_memberwise(c: &TeichCurve, weighted: bool) -> Rational {
    c.members
        .iter()
        .map(|o| {
            let w = if weighted {
                weight(o)
            } else {
                Rational::from_integer(1)
            };
            w * o.horizontal_cylinders().modulus_sum()
        })
        .sum()
}

/// Orbit average of `Σ h_i/w_i`.
pub fn siegel_veech(c: &TeichCurve) -> Rational {
    delta0_number_unweighted(c) / psi_number_unweighted(c)
}

/// `L = κ_μ + c_μ`.
pub fn lyapunov_sum(c: &TeichCurve) -> Rational {
    kappa(&c.stratum) + siegel_veech(c)
}

/// `(g−1)/4 + (1/12)·K·δ₀/ψ`, generic stratum only.
pub fn lyapunov_via_boundary(c: &TeichCurve, cal: &Calibration) -> Result<Rational> {
    if !c.stratum.is_generic() {
        return Err(Error::UnsupportedStratum(
            c.stratum.to_string(),
            "the boundary estimator needs simple zeros".into(),
        ));
    }
    let g = c.genus() as i64;
    Ok(Rational::new(g - 1, 4) + cal.k * delta0_number(c) / (psi_number(c) * 12))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub member: Origami,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub passed: bool,
    /// Every member lies in the generic stratum (no `δ_deg` contribution).
    pub generic: bool,
    /// Every cusp graph is irreducible (no `δ_j`, `j ≥ 1` contribution).
    pub irreducible: bool,
    pub witnesses: Vec<Witness>,
}

/// Checks that the curve misses `D_deg` and every separating boundary
/// divisor.
pub fn boundary_vanishing_check(c: &TeichCurve) -> BoundaryCheck {
    boundary_vanishing_check_with(c, Origami::cusp_stable_graph)
}

/// As [`boundary_vanishing_check`] with a caller-supplied stable graph map,
/// so reducible degenerations can be injected.
pub fn boundary_vanishing_check_with<F>(c: &TeichCurve, graph: F) -> BoundaryCheck
where
    F: Fn(&Origami) -> StableGraph,
{
    let mut witnesses = Vec::new();
    let mut generic = true;
    let mut irreducible = true;
    for o in &c.members {
        let s = o.stratum();
        if !s.is_generic() {
            generic = false;
            witnesses.push(Witness {
                member: o.clone(),
                reason: format!("member lies in {s}, not the generic stratum"),
            });
        }
    }
    for cusp in cusps(c) {
        let gr = graph(&cusp.representative);
        if !gr.irreducible {
            irreducible = false;
            witnesses.push(Witness {
                member: cusp.representative.clone(),
                reason: format!(
                    "cusp stable graph has separating nodes {:?} (edges {:?})",
                    gr.separating_nodes, gr.nodes
                ),
            });
        }
    }
    BoundaryCheck {
        passed: generic && irreducible,
        generic,
        irreducible,
        witnesses,
    }
}

/// All numbers for one orbit.
pub fn report(c: &TeichCurve, orbit_id: usize, cal: &Calibration) -> LyapunovReport {
    let generic = c.stratum.is_generic();
    LyapunovReport {
        stratum: c.stratum.clone(),
        d: c.degree,
        orbit_id,
        orbit_size: c.len(),
        psi_number: psi_number(c),
        psi_number_unweighted: psi_number_unweighted(c),
        delta0_number: delta0_number(c),
        delta0_number_unweighted: delta0_number_unweighted(c),
        kappa: kappa(&c.stratum),
        siegel_veech: siegel_veech(c),
        lyap_sum: lyapunov_sum(c),
        boundary_lyap_sum: if generic {
            lyapunov_via_boundary(c, cal).ok()
        } else {
            None
        },
        boundary_vanishing: generic.then(|| boundary_vanishing_check(c).passed),
        k: cal.k,
    }
}

fn aggregate(s: &Stratum, d: usize, rows: &[LyapunovReport], cal: &Calibration) -> DegreeAggregate {
    let psi: Rational = rows.iter().map(|r| r.psi_number).sum();
    let avg = |f: &dyn Fn(&LyapunovReport) -> Rational| {
        rows.iter().map(|r| r.psi_number * f(r)).sum::<Rational>() / psi
    };
    let boundary = if rows.iter().all(|r| r.boundary_lyap_sum.is_some()) {
        Some(avg(&|r| r.boundary_lyap_sum.unwrap()))
    } else {
        None
    };
    DegreeAggregate {
        stratum: s.clone(),
        d,
        orbits: rows.len(),
        covers: rows.iter().map(|r| r.orbit_size).sum(),
        psi_number: psi,
        lyap_sum: avg(&|r| r.lyap_sum),
        boundary_lyap_sum: boundary,
        k: cal.k,
        weighting: "psi_number".into(),
    }
}

/// One report per orbit per degree, plus per-degree aggregates.
pub fn convergence_table(
    s: &Stratum,
    degrees: impl IntoIterator<Item = usize>,
    cal: &Calibration,
) -> ConvergenceTable {
    let mut rows = Vec::new();
    let mut aggregates = Vec::new();
    let mut warnings = Vec::new();
    for d in degrees {
        let e = enumerate_origamis(d, s);
        if let Some(w) = e.warning {
            warnings.push(w);
        }
        let orbits = sl2_orbits(&e.origamis);
        let block: Vec<LyapunovReport> = orbits
            .par_iter()
            .enumerate()
            .map(|(i, c)| report(c, i, cal))
            .collect();
        if !block.is_empty() {
            aggregates.push(aggregate(s, d, &block, cal));
        }
        log::info!("{s} d={d}: {} orbits, {cal}", block.len());
        rows.extend(block);
    }
    ConvergenceTable {
        rows,
        aggregates,
        warnings,
    }
}
