use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A stratum of abelian differentials, given by the zero orders
/// `m_1 ≥ … ≥ m_r ≥ 1` with `Σ m_k = 2g − 2`.
///
/// The empty list is the genus-one stratum (no zeros).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Stratum {
    zero_orders: Vec<u32>,
}

impl Stratum {
    pub fn new(mut zero_orders: Vec<u32>) -> Result<Self> {
        if zero_orders.contains(&0) {
            return Err(Error::InvalidStratum("zero orders must be positive".into()));
        }
        let total: u32 = zero_orders.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidStratum(format!(
                "sum of zero orders {total} is odd"
            )));
        }
        zero_orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Stratum { zero_orders })
    }

    /// The stratum of generic differentials (all zeros simple) in genus `g ≥ 1`.
    pub fn generic(genus: u32) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidStratum("genus must be at least 1".into()));
        }
        Stratum::new(vec![1; 2 * (genus as usize - 1)])
    }

    pub fn zero_orders(&self) -> &[u32] {
        &self.zero_orders
    }

    pub fn num_zeros(&self) -> usize {
        self.zero_orders.len()
    }

    pub fn total_order(&self) -> u32 {
        self.zero_orders.iter().sum()
    }

    pub fn genus(&self) -> u32 {
        1 + self.total_order() / 2
    }

    /// Degeneracy type `(m_1 − 1, …, m_r − 1)`.
    pub fn degeneracy_type(&self) -> Vec<u32> {
        self.zero_orders.iter().map(|m| m - 1).collect()
    }

    /// `μ = 0`: every zero simple.
    pub fn is_generic(&self) -> bool {
        self.zero_orders.iter().all(|&m| m == 1)
    }

    /// Minimal number of squares of a square-tiled surface in this stratum:
    /// `Σ m_k + r` (the degree formula with no unramified points), at least 1.
    pub fn min_degree(&self) -> usize {
        (self.total_order() as usize + self.num_zeros()).max(1)
    }

    /// Number of unramified preimages `m = d − Σ m_k − r` of the cone point,
    /// when non-negative.
    pub fn unramified_points(&self, degree: usize) -> Option<usize> {
        let ramified = self.total_order() as usize + self.num_zeros();
        degree.checked_sub(ramified)
    }

    /// The commutator cycle type expected for degree `d`: `m_k + 1` for each
    /// zero followed by fixed points.
    pub fn commutator_cycle_type(&self, degree: usize) -> Option<Vec<usize>> {
        let fixed = self.unramified_points(degree)?;
        let mut t: Vec<usize> = self.zero_orders.iter().map(|&m| m as usize + 1).collect();
        t.extend(std::iter::repeat_n(1, fixed));
        Some(t)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(")?;
        for (k, m) in self.zero_orders.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Comma-separated zero orders, e.g. `"1,1"`; the empty string is genus one.
/// The displayed form `"H(1,1)"` is accepted as well.
impl FromStr for Stratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("H(")
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Stratum::new(Vec::new());
        }
        let orders = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidStratum(format!("cannot parse {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Stratum::new(orders)
    }
}

impl TryFrom<Vec<u32>> for Stratum {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Stratum::new(v)
    }
}

impl From<Stratum> for Vec<u32> {
    fn from(s: Stratum) -> Vec<u32> {
        s.zero_orders
    }
}
