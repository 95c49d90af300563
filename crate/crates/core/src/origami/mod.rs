//! Square-tiled surfaces encoded as pairs of permutations.
//!
//! Square `i` of an origami has right neighbour `h(i)` and top neighbour
//! `v(i)`. The monodromy around the single cone point is the commutator
//! `h ∘ v ∘ h⁻¹ ∘ v⁻¹`; its non-trivial cycles of length `m + 1` are the
//! zeros of order `m` of the pulled-back differential.

mod cylinder;
mod enumerate;
mod orbit;
mod perm;
mod stratum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cylinder::{Cylinder, CylinderDiagram, StableGraph};
pub use enumerate::{enumerate_origamis, Enumeration};
pub use orbit::{cusps, sl2_orbits, Cusp, TeichCurve};
pub use perm::{all_permutations, commutator, Permutation};
pub use stratum::Stratum;

/// A connected square-tiled surface.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawOrigami", into = "RawOrigami")]
pub struct Origami {
    d: usize,
    h: Permutation,
    v: Permutation,
}

#[derive(Serialize, Deserialize)]
struct RawOrigami {
    d: usize,
    h: Vec<usize>,
    v: Vec<usize>,
}

impl TryFrom<RawOrigami> for Origami {
    type Error = Error;
    fn try_from(raw: RawOrigami) -> Result<Self> {
        let o = Origami::new(Permutation::new(raw.h)?, Permutation::new(raw.v)?)?;
        if o.d != raw.d {
            return Err(Error::DegreeMismatch(raw.d, o.d));
        }
        Ok(o)
    }
}

impl From<Origami> for RawOrigami {
    fn from(o: Origami) -> Self {
        RawOrigami {
            d: o.d,
            h: o.h.into(),
            v: o.v.into(),
        }
    }
}

impl std::fmt::Debug for Origami {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Origami(d={}, h={:?}, v={:?})", self.d, self.h, self.v)
    }
}

impl Origami {
    pub fn new(h: Permutation, v: Permutation) -> Result<Self> {
        if h.degree() != v.degree() {
            return Err(Error::DegreeMismatch(h.degree(), v.degree()));
        }
        let o = Origami {
            d: h.degree(),
            h,
            v,
        };
        if !o.is_transitive() {
            return Err(Error::NotTransitive);
        }
        Ok(o)
    }

    pub(crate) fn new_unchecked(h: Permutation, v: Permutation) -> Self {
        Origami {
            d: h.degree(),
            h,
            v,
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn h(&self) -> &Permutation {
        &self.h
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.d];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [self.h.apply(x), self.v.apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.d
    }

    pub fn commutator(&self) -> Permutation {
        commutator(&self.h, &self.v).expect("degrees agree")
    }

    /// Zero orders read off the commutator; genus from `Σ m_k = 2g − 2`.
    pub fn stratum(&self) -> Stratum {
        let orders: Vec<u32> = self
            .commutator()
            .cycle_type()
            .into_iter()
            .filter(|&l| l > 1)
            .map(|l| (l - 1) as u32)
            .collect();
        Stratum::new(orders).expect("commutator of a transitive pair has even total order")
    }

    /// Genus from Riemann–Hurwitz: `d = 2g − 2 + m + r` with `m` the number of
    /// fixed points and `r` the number of non-trivial cycles of the commutator.
    pub fn genus_riemann_hurwitz(&self) -> u32 {
        let ct = self.commutator().cycle_type();
        let fixed = ct.iter().filter(|&&l| l == 1).count();
        let r = ct.len() - fixed;
        ((self.d + 2 - fixed - r) / 2) as u32
    }

    /// Relabel squares by breadth-first search from `seed`, which becomes 0.
    fn relabel_from(&self, seed: usize) -> (Vec<usize>, Vec<usize>) {
        let d = self.d;
        let mut label = vec![usize::MAX; d];
        let mut order = Vec::with_capacity(d);
        label[seed] = 0;
        order.push(seed);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [self.h.apply(x), self.v.apply(x)] {
                if label[y] == usize::MAX {
                    label[y] = order.len();
                    order.push(y);
                }
            }
        }
        let mut hh = vec![0; d];
        let mut vv = vec![0; d];
        for x in 0..d {
            hh[label[x]] = label[self.h.apply(x)];
            vv[label[x]] = label[self.v.apply(x)];
        }
        (hh, vv)
    }

    /// Lexicographically least relabelling together with the number of seeds
    /// that attain it (the number of automorphisms).
    fn canonical_with_count(&self) -> ((Vec<usize>, Vec<usize>), usize) {
        let mut best = self.relabel_from(0);
        let mut count = 1;
        for seed in 1..self.d {
            let cand = self.relabel_from(seed);
            match cand.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = cand;
                    count = 1;
                }
                std::cmp::Ordering::Equal => count += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        (best, count)
    }

    /// Distinguished representative of the simultaneous conjugacy class.
    pub fn canonical_form(&self) -> Origami {
        let ((h, v), _) = self.canonical_with_count();
        Origami::new_unchecked(
            Permutation::from_images_unchecked(h),
            Permutation::from_images_unchecked(v),
        )
    }

    /// Order of the common centralizer of `h` and `v` in the symmetric group.
    pub fn automorphism_order(&self) -> usize {
        self.canonical_with_count().1
    }

    /// Shear `(h, v) ↦ (h, v ∘ h⁻¹)`, canonicalized.
    pub fn act_t(&self) -> Origami {
        let v = self.v.compose(&self.h.inverse()).expect("same degree");
        Origami::new_unchecked(self.h.clone(), v).canonical_form()
    }

    /// Rotation `(h, v) ↦ (v, h⁻¹)`, canonicalized.
    pub fn act_s(&self) -> Origami {
        Origami::new_unchecked(self.v.clone(), self.h.inverse()).canonical_form()
    }

    pub fn horizontal_cylinders(&self) -> CylinderDiagram {
        cylinder::horizontal_cylinders(self)
    }

    pub fn cusp_stable_graph(&self) -> StableGraph {
        cylinder::stable_graph(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(d: usize, h: &[&[usize]], v: &[&[usize]]) -> Origami {
        Origami::new(
            Permutation::from_cycles(d, h).unwrap(),
            Permutation::from_cycles(d, v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn strata_examples() {
        let s = o(3, &[&[0, 1]], &[&[0, 2]]).stratum();
        assert_eq!(s.zero_orders(), &[2]);
        assert_eq!(s.genus(), 2);

        let torus = o(3, &[&[0, 1, 2]], &[]);
        assert!(torus.stratum().zero_orders().is_empty());
        assert_eq!(torus.stratum().genus(), 1);

        // commutator is (0 3)(1 2) by hand
        let x = o(4, &[&[0, 1], &[2, 3]], &[&[1, 2]]);
        assert_eq!(x.commutator().cycle_type(), vec![2, 2]);
        assert_eq!(x.stratum().zero_orders(), &[1, 1]);
        assert_eq!(x.genus_riemann_hurwitz(), 2);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(o(2, &[&[0, 1]], &[]).automorphism_order(), 2);
        assert_eq!(o(3, &[&[0, 1]], &[&[0, 2]]).automorphism_order(), 1);
        assert_eq!(o(1, &[], &[]).automorphism_order(), 1);
    }

    #[test]
    fn canonical_form_is_a_class_function() {
        let x = o(4, &[&[0, 1], &[2, 3]], &[&[1, 2]]);
        let c = x.canonical_form();
        assert_eq!(c.canonical_form(), c);
        for sigma in all_permutations(4) {
            let y = Origami::new(x.h.conjugate_by(&sigma), x.v.conjugate_by(&sigma)).unwrap();
            assert_eq!(y.canonical_form(), c);
        }
    }

    #[test]
    fn two_square_classes() {
        let mut classes = std::collections::BTreeSet::new();
        for h in all_permutations(2) {
            for v in all_permutations(2) {
                if let Ok(x) = Origami::new(h.clone(), v) {
                    classes.insert(x.canonical_form());
                }
            }
        }
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn rejects_intransitive_pairs() {
        let id = Permutation::identity(2);
        assert_eq!(Origami::new(id.clone(), id), Err(Error::NotTransitive));
    }

    #[test]
    fn json_shape() {
        let x = o(3, &[&[0, 1]], &[&[0, 2]]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"d":3,"h":[1,0,2],"v":[2,1,0]}"#);
        let back: Origami = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<Origami>(r#"{"d":2,"h":[0,1],"v":[0,1]}"#).is_err());
        assert!(serde_json::from_str::<Origami>(r#"{"d":3,"h":[1,0],"v":[1,0]}"#).is_err());
    }
}
