use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CylinderDiagram, Origami, Stratum};

/// An SL(2,Z)-orbit of square-tiled surfaces: the combinatorial model of an
/// arithmetic Teichmüller curve. Members are canonical forms, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeichCurve {
    pub stratum: Stratum,
    pub degree: usize,
    pub members: Vec<Origami>,
}

impl TeichCurve {
    pub fn genus(&self) -> u32 {
        self.stratum.genus()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A parabolic orbit (orbit of the shear `T`) inside a Teichmüller curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cusp {
    pub width: usize,
    pub representative: Origami,
    pub cylinders: CylinderDiagram,
}

fn closure(start: &Origami) -> BTreeSet<Origami> {
    let mut orbit = BTreeSet::new();
    orbit.insert(start.clone());
    let mut stack = vec![start.clone()];
    while let Some(x) = stack.pop() {
        for y in [x.act_t(), x.act_s()] {
            if orbit.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    orbit
}

/// Partition into SL(2,Z)-orbits. Orbits are closed under both generators,
/// so an input that is not closed is completed.
pub fn sl2_orbits(origamis: &[Origami]) -> Vec<TeichCurve> {
    let canon: BTreeSet<Origami> = origamis.iter().map(Origami::canonical_form).collect();
    let mut assigned: BTreeMap<Origami, usize> = BTreeMap::new();
    let mut out: Vec<TeichCurve> = Vec::new();
    for o in &canon {
        if assigned.contains_key(o) {
            continue;
        }
        let orbit = closure(o);
        for m in &orbit {
            assigned.insert(m.clone(), out.len());
        }
        out.push(TeichCurve {
            stratum: o.stratum(),
            degree: o.degree(),
            members: orbit.into_iter().collect(),
        });
    }
    out
}

/// Cusps of a Teichmüller curve, ordered by their least member.
pub fn cusps(curve: &TeichCurve) -> Vec<Cusp> {
    let mut seen: BTreeSet<Origami> = BTreeSet::new();
    let mut out = Vec::new();
    for o in &curve.members {
        if seen.contains(o) {
            continue;
        }
        let mut width = 0;
        let mut x = o.clone();
        loop {
            seen.insert(x.clone());
            width += 1;
            x = x.act_t();
            if &x == o {
                break;
            }
        }
        out.push(Cusp {
            width,
            representative: o.clone(),
            cylinders: o.horizontal_cylinders(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::enumerate_origamis;

    #[test]
    fn torus_orbit() {
        let all = enumerate_origamis(2, &Stratum::new(vec![]).unwrap()).origamis;
        let orbits = sl2_orbits(&all);
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 3);
        let c = cusps(&orbits[0]);
        assert_eq!(c.iter().map(|c| c.width).sum::<usize>(), 3);
    }

    #[test]
    fn trivial_cover_is_t_fixed() {
        let all = enumerate_origamis(1, &Stratum::new(vec![]).unwrap()).origamis;
        let orbits = sl2_orbits(&all);
        assert_eq!(orbits.len(), 1);
        let c = cusps(&orbits[0]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].width, 1);
    }
}
