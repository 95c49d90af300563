//! Computations on moduli spaces of holomorphic 1-differentials.
//!
//! The crate has two halves:
//!
//! * exact combinatorics and class algebra: square-tiled surfaces
//!   ([`origami`]), the Teichmüller curves they generate and their Lyapunov
//!   sums ([`teichcurve`]), and divisor classes on the projectivized Hodge
//!   bundle ([`picard`]);
//! * numerics: theta, eta and Eisenstein functions ([`specialfn`]), the
//!   genus-one tau function ([`tau_elliptic`]) and a full evaluator of the
//!   tau function on genus-two hyperelliptic curves ([`hyperelliptic`]).
//!
//! Everything in the exact half uses [`Rational`]; no floating point is
//! involved there.

pub mod error;
pub mod hyperelliptic;
pub mod numerics;
pub mod origami;
pub mod picard;
pub mod rational;
pub mod report;
pub mod specialfn;
pub mod tau_elliptic;
pub mod teichcurve;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use origami::{CylinderDiagram, Origami, Permutation, Stratum};
pub use rational::Rational;
pub use teichcurve::{Calibration, LyapunovReport};
