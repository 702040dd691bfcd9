//! Modified `H^s` energies for the model flow
//! `∂_t u + ∂^{2l+1}u = u∂^{2l−1}u`.
//!
//! The derivative of `½‖D^s u‖²` contains resonant terms
//! `∫∂^{2(l−J)−1}u (D^s∂^J u)²` that no integration by parts removes. They are
//! cancelled stage by stage by corrections `∫W(u)(D^{s−2−q}∂u)²` (even `q`)
//! and `∫W(u)(D^{s−1−q}u)²` (odd `q`), whose weights solve a triangular
//! system. Everything is exact in `Q[s]`; numerical evaluation lives in
//! [`eval`].

mod blueprint;
mod derive;
pub mod eval;
mod lowpoly;
mod terms;

pub use blueprint::{
    build_blueprint, correction_form, BoundedRemainder, Correction, EnergyBlueprint, Stage,
};
pub use derive::{linear_derivative, nonlinear_derivative, quadratic_derivative, Alphas, Derivative};
pub use eval::{evaluate_energy, predicted_derivative, quadratic_energy};
pub use lowpoly::{Low, LowPoly};
pub use terms::{is_resonant, normalize, reduce_triple, CommRem, SobTerm, SobTriple, SquareSum};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("odd D-offset {off} cannot be rewritten")]
    OddOffset { off: i32 },
    #[error("resonant coefficient at order {order}, J = {j} is not a total derivative: {detail}")]
    NotExact { order: usize, j: u32, detail: String },
    #[error("singular cancellation system at level {l}")]
    SingularSystem { l: usize },
    #[error("s = {s} is not above the threshold {threshold}")]
    ThresholdViolation { s: f64, threshold: f64 },
    #[error("modified energies need l ≥ 2, got {0}")]
    InvalidLevel(usize),
}

/// `γ_q` and the resonant coefficients for the cubic stage, as in
/// [`EnergyBlueprint::gammas`]; a convenience wrapper.
pub fn solve_gammas(l: usize) -> Result<EnergyBlueprint, EnergyError> {
    build_blueprint(l)
}
