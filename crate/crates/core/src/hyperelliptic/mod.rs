//! The tau function on genus-two hyperelliptic curves with a generic
//! differential `ω = (c₀ + c₁x) dx/y`, evaluated from its explicit
//! theta-function formula, together with the checks of its invariance,
//! homogeneity, modular and degeneration properties.
//!
//! Pipeline: periods by quadrature between branch points, normalized
//! differentials and `Ω`, Abel map along straight segments through a
//! branch point, Riemann constants, prime-form factors in distinguished
//! local frames, and the assembled value with its lattice offsets.

mod abel;
mod checks;
mod curve;
mod periods;
mod prime;
mod quadrature;
mod riemann;
mod tau;

pub use abel::{
    abel_from_branch, abel_map, abel_map_via, choose_via, zeros_of_differential, Zeros,
    DEFAULT_DEGENERACY_THRESHOLD,
};
pub use checks::*;
pub use curve::{CurveInput, DifferentialSpec, HyperellipticCurve, Point, DEFAULT_MIN_SEPARATION};
pub use periods::{
    check_symplectic, from_branch, local_integral, omega_bent_routing, period_data,
    period_data_continued, segment_integral, PeriodData, C2, M2, SEGMENTS,
};
pub use prime::{frame_value, odd_gradient, omega_delta, prime_form, Frame};
pub use quadrature::{integrate, DEFAULT_QUAD_TOL};
pub use riemann::{
    riemann_constants, riemann_constants_half_period, test_points, KMethod, RiemannConstants,
    DIVISOR_TOL,
};
pub use tau::{
    default_basepoint, tau0_eval, tau0_eval_with, zero_limit_extrapolated, PrimeFormFactors,
    TauEvaluation, TauOptions, CONVENTION,
};
