//! Riemann theta functions with characteristics (small genus), the Dedekind
//! eta function and the quasi-modular Eisenstein series `E₂`.
//!
//! Theta series are summed over a box around the saddle point of the
//! Gaussian; the box radius comes from an explicit tail bound, and
//! derivatives are taken term by term.

mod modular;
mod theta;

pub use modular::{dedekind_eta, eisenstein_e2, log_dedekind_eta};
pub use theta::{
    all_characteristics, odd_characteristics, parity, riemann_theta, summation_radius, theta,
    theta_jet, Parity, SiegelPoint, ThetaCharacteristic, ThetaJet, MAX_RADIUS,
};

/// Default tolerance for genus-one evaluations.
pub const DEFAULT_TOL_G1: f64 = 1e-10;
/// Default tolerance for genus-two evaluations.
pub const DEFAULT_TOL_G2: f64 = 1e-8;
