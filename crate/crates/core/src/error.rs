use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("permutation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation pair does not act transitively")]
    NotTransitive,
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("stratum {0} is not supported here: {1}")]
    UnsupportedStratum(String, String),
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),
    #[error("genus {0} is out of range: {1}")]
    GenusOutOfRange(u32, String),
    #[error("boundary vanishing check failed: {0}")]
    BoundaryCheckFailed(String),
    #[error("imaginary part of the period matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("theta summation radius {0} exceeds the hard cap")]
    RadiusCap(usize),
    #[error("argument must lie in the upper half plane (got imaginary part {0})")]
    NotInUpperHalfPlane(f64),
    #[error("invalid periods: {0}")]
    InvalidPeriods(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid differential: {0}")]
    InvalidDifferential(String),
    #[error("degenerate stratum: zero at distance {distance:e} from branch point {branch}")]
    DegenerateStratum { branch: usize, distance: f64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("homology basis: {0}")]
    Basis(String),
    #[error("invalid theta characteristic: {0}")]
    Characteristic(String),
    #[error("lattice rounding residual {0:e} above threshold")]
    LatticeResidual(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("not a symplectic matrix: {0}")]
    NotSymplectic(String),
    #[error("finite difference: {0}")]
    FiniteDifference(String),
    #[error("grid too small: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
