//! Periodic pseudospectral numerics on `[0, 2π)`.

mod eval;
pub mod fft;
mod field;
mod flow;
mod integrator;
mod mollify;
mod multiplier;
mod solve;

pub use eval::{
    dealias_cutoff, eval_diffpoly, functional_eval, mean_integral, padded_size, padded_values,
    project, Jets,
};
pub use field::{grid, SpectralField};
pub use flow::{FlowKind, FlowSpec};
pub use integrator::{Scheme, Stepper};
pub use mollify::{mollify, scale_field, time_factor, window};
pub use multiplier::{abs_pow, ik_pow, multiplier, Multiplier};
pub use solve::{solve, solve_with, DiagRow, Diagnostics, Solution, SolverConfig};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("solution blew up (non-finite Fourier mode) at t = {t}")]
    BlowUp { t: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}
