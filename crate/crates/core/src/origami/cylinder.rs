use serde::{Deserialize, Serialize};

use super::Origami;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
}

/// Horizontal cylinders, sorted by (width, height).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CylinderDiagram {
    pub cylinders: Vec<Cylinder>,
}

impl CylinderDiagram {
    pub fn area(&self) -> usize {
        self.cylinders.iter().map(|c| c.width * c.height).sum()
    }

    /// `Σ height / width`, the per-surface Siegel–Veech cylinder sum.
    pub fn modulus_sum(&self) -> Rational {
        self.cylinders
            .iter()
            .map(|c| Rational::new(c.height as i64, c.width as i64))
            .sum()
    }
}

struct Rows {
    rows: Vec<Vec<usize>>,
    row_of: Vec<usize>,
}

fn rows(o: &Origami) -> Rows {
    let rows = o.h.cycles();
    let mut row_of = vec![0; o.d];
    for (i, r) in rows.iter().enumerate() {
        for &s in r {
            row_of[s] = i;
        }
    }
    Rows { rows, row_of }
}

/// Row `r` is glued to the row above it inside one cylinder iff `v` commutes
/// with `h` pointwise on `r` (no cone point on its top edge).
fn glued_up(o: &Origami, row: &[usize]) -> bool {
    row.iter()
        .all(|&s| o.v.apply(o.h.apply(s)) == o.h.apply(o.v.apply(s)))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Cylinder index of every row.
fn cylinder_of_rows(o: &Origami, r: &Rows) -> (Vec<usize>, usize) {
    let n = r.rows.len();
    let mut uf = UnionFind::new(n);
    for (i, row) in r.rows.iter().enumerate() {
        if glued_up(o, row) {
            uf.union(i, r.row_of[o.v.apply(row[0])]);
        }
    }
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    let mut cyl = vec![0; n];
    for i in 0..n {
        let root = uf.find(i);
        if ids[root] == usize::MAX {
            ids[root] = next;
            next += 1;
        }
        cyl[i] = ids[root];
    }
    (cyl, next)
}

pub(super) fn horizontal_cylinders(o: &Origami) -> CylinderDiagram {
    let r = rows(o);
    let (cyl, n) = cylinder_of_rows(o, &r);
    let mut width = vec![0; n];
    let mut height = vec![0; n];
    for (i, row) in r.rows.iter().enumerate() {
        width[cyl[i]] = row.len();
        height[cyl[i]] += 1;
    }
    let mut cylinders: Vec<Cylinder> = width
        .into_iter()
        .zip(height)
        .map(|(width, height)| Cylinder { width, height })
        .collect();
    cylinders.sort();
    CylinderDiagram { cylinders }
}

/// Dual graph of the stable limit obtained by pinching every horizontal
/// cylinder core curve: vertices are components, one edge (node) per
/// cylinder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableGraph {
    pub components: usize,
    /// Node edges as (component below the core curve, component above).
    pub nodes: Vec<(usize, usize)>,
    /// Indices of nodes whose removal disconnects the graph.
    pub separating_nodes: Vec<usize>,
    pub irreducible: bool,
}

impl StableGraph {
    pub fn from_edges(components: usize, nodes: Vec<(usize, usize)>) -> Self {
        let separating_nodes: Vec<usize> = (0..nodes.len())
            .filter(|&skip| !connected_without(components, &nodes, skip))
            .collect();
        StableGraph {
            components,
            irreducible: separating_nodes.is_empty(),
            nodes,
            separating_nodes,
        }
    }
}

fn connected_without(components: usize, nodes: &[(usize, usize)], skip: usize) -> bool {
    let mut uf = UnionFind::new(components);
    for (k, &(a, b)) in nodes.iter().enumerate() {
        if k != skip {
            uf.union(a, b);
        }
    }
    let root = uf.find(0);
    (1..components).all(|c| uf.find(c) == root)
}

pub(super) fn stable_graph(o: &Origami) -> StableGraph {
    let r = rows(o);
    let (cyl, n) = cylinder_of_rows(o, &r);
    // half-cylinder nodes: 2c = lower half, 2c + 1 = upper half
    let mut uf = UnionFind::new(2 * n);
    for (i, row) in r.rows.iter().enumerate() {
        if glued_up(o, row) {
            continue;
        }
        // top row of its cylinder: the squares above start bottom rows
        for &s in row {
            let above = r.row_of[o.v.apply(s)];
            uf.union(2 * cyl[i] + 1, 2 * cyl[above]);
        }
    }
    // cylinders closed up on themselves: the pinched torus glues top to bottom
    for c in 0..n {
        let has_top = r
            .rows
            .iter()
            .enumerate()
            .any(|(i, row)| cyl[i] == c && !glued_up(o, row));
        if !has_top {
            uf.union(2 * c, 2 * c + 1);
        }
    }
    let mut ids = vec![usize::MAX; 2 * n];
    let mut next = 0;
    let mut comp = vec![0; 2 * n];
    for k in 0..2 * n {
        let root = uf.find(k);
        if ids[root] == usize::MAX {
            ids[root] = next;
            next += 1;
        }
        comp[k] = ids[root];
    }
    let nodes = (0..n).map(|c| (comp[2 * c], comp[2 * c + 1])).collect();
    StableGraph::from_edges(next, nodes)
}
