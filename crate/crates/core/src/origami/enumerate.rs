use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{Origami, Permutation, Stratum};

/// Result of [`enumerate_origamis`]. `warning` is set (and the list empty)
/// when the degree cannot carry the stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub origamis: Vec<Origami>,
    pub warning: Option<String>,
}

/// Integer partitions of `n` in decreasing parts.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The permutation with consecutive cycles of the given lengths.
fn class_representative(cycle_type: &[usize]) -> Permutation {
    let d: usize = cycle_type.iter().sum();
    let mut images = vec![0; d];
    let mut start = 0;
    for &len in cycle_type {
        for k in 0..len {
            images[start + k] = start + (k + 1) % len;
        }
        start += len;
    }
    Permutation::from_images_unchecked(images)
}

struct Search<'a> {
    d: usize,
    h: &'a [usize],
    h_inv: Vec<usize>,
    /// target multiplicity of each commutator cycle length
    target: Vec<usize>,
    v: Vec<usize>,
    v_inv: Vec<usize>,
    found: BTreeSet<Origami>,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    /// c(x) = h(v(h⁻¹(v⁻¹(x)))) when all needed values of v are known.
    fn comm(&self, x: usize) -> Option<usize> {
        let a = self.v_inv[x];
        if a == UNSET {
            return None;
        }
        let b = self.v[self.h_inv[a]];
        if b == UNSET {
            return None;
        }
        Some(self.h[b])
    }

    /// Closed commutator cycles found so far must fit in the target type.
    fn partial_ok(&self) -> bool {
        let mut counts = vec![0usize; self.d + 1];
        let mut seen = vec![false; self.d];
        for start in 0..self.d {
            if seen[start] {
                continue;
            }
            let mut x = start;
            let mut len = 0;
            let closed = loop {
                match self.comm(x) {
                    None => break false,
                    Some(y) => {
                        len += 1;
                        if y == start {
                            break true;
                        }
                        if len > self.d {
                            break false;
                        }
                        x = y;
                    }
                }
            };
            if closed {
                let mut y = start;
                for _ in 0..len {
                    seen[y] = true;
                    y = self.comm(y).unwrap();
                }
                counts[len] += 1;
                if counts[len] > self.target[len] {
                    return false;
                }
            } else {
                seen[start] = true;
            }
        }
        true
    }

    fn run(&mut self, pos: usize) {
        if pos == self.d {
            let h = Permutation::from_images_unchecked(self.h.to_vec());
            let v = Permutation::from_images_unchecked(self.v.clone());
            if let Ok(o) = Origami::new(h, v) {
                self.found.insert(o.canonical_form());
            }
            return;
        }
        for img in 0..self.d {
            if self.v_inv[img] != UNSET {
                continue;
            }
            self.v[pos] = img;
            self.v_inv[img] = pos;
            if self.partial_ok() {
                self.run(pos + 1);
            }
            self.v[pos] = UNSET;
            self.v_inv[img] = UNSET;
        }
    }
}

fn search_class(h: &Permutation, target: &[usize], first: usize) -> BTreeSet<Origami> {
    let d = h.degree();
    let mut s = Search {
        d,
        h: h.images(),
        h_inv: h.inverse().images().to_vec(),
        target: target.to_vec(),
        v: vec![UNSET; d],
        v_inv: vec![UNSET; d],
        found: BTreeSet::new(),
    };
    s.v[0] = first;
    s.v_inv[first] = 0;
    if s.partial_ok() {
        s.run(1);
    }
    s.found
}

/// All square-tiled surfaces with `d` squares in stratum `s`, one canonical
/// representative per isomorphism class, sorted.
///
/// `h` runs over one representative per conjugacy class; `v` is found by
/// backtracking with the commutator cycle type pruned as it closes up.
/// The search is split across rayon workers and merged into a sorted set, so
/// the output does not depend on scheduling.
pub fn enumerate_origamis(d: usize, s: &Stratum) -> Enumeration {
    let Some(expected) = (d >= 1).then(|| s.commutator_cycle_type(d)).flatten() else {
        return Enumeration {
            origamis: Vec::new(),
            warning: Some(format!(
                "degree {d} is inconsistent with stratum {s} (need d >= {})",
                s.min_degree()
            )),
        };
    };
    let mut target = vec![0usize; d + 1];
    for l in expected {
        target[l] += 1;
    }
    let tasks: Vec<(Vec<usize>, usize)> = partitions(d)
        .into_iter()
        .flat_map(|p| (0..d).map(move |first| (p.clone(), first)))
        .collect();
    let found: BTreeSet<Origami> = tasks
        .par_iter()
        .map(|(p, first)| search_class(&class_representative(p), &target, *first))
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Enumeration {
        origamis: found.into_iter().collect(),
        warning: None,
    }
}
