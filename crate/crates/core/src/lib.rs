//! Symbolic and numerical toolkit for the KdV hierarchy.
//!
//! * [`diffpoly`]: exact differential-polynomial algebra with Euler operator,
//!   formal antiderivatives and integration-by-parts normal forms.
//! * [`hierarchy`]: Lenard recursion, Hamiltonians and rank audits.
//! * [`ibp`]: trilinear integration-by-parts identities and their coefficients.
//! * [`energy`]: modified `H^s` energies with resonant-term cancellation.
//! * [`spectral`]: periodic pseudospectral fields, multipliers and
//!   exponential integrators.
//! * [`lab`]: experiment pipelines, config files and run manifests.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffpoly;
pub mod spoly;

pub use diffpoly::{DiffMonomial, DiffPoly, Factor, IntegralExpr, Rational, Symbol};
pub use spoly::SPoly;
pub mod hierarchy;
pub mod ibp;
pub mod spectral;
pub mod energy;
pub mod lab;
