use thiserror::Error;

use crate::model::QuantumState;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid physical parameters (non-positive length, mass or ħ).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The shape parameter `a` has a negative radicand.
    #[error("no real shape parameter for alpha={alpha}, l={l}, D={dim}: radicand {radicand}")]
    ShapeParameter {
        alpha: f64,
        l: u32,
        dim: u32,
        radicand: f64,
    },

    /// The closed form yields epsilon <= 0 for this state.
    #[error("state {state} is not bound (epsilon = {epsilon})")]
    Unbound { state: QuantumState, epsilon: f64 },

    /// `alpha(alpha - 1) <= 0` or `A <= 0`: the potential has no interior well.
    #[error("no interior minimum in validated regime (alpha={alpha}, A={coupling})")]
    NoInteriorMinimum { alpha: f64, coupling: f64 },

    #[error("cannot parse spectroscopic label {label:?}: {reason}")]
    Label { label: String, reason: String },

    /// Angular multi-index violates `|l_1| <= l_2 <= ... <= l_{D-1} = l`.
    #[error("invalid angular multi-index: {0}")]
    Hierarchy(String),

    /// The double-sum normalization came out non-positive.
    #[error("normalization formula inconsistent: s(n) = {0}")]
    Normalization(f64),

    /// Adaptive quadrature hit its order cap without converging.
    #[error("quadrature did not converge at order cap; last estimates {previous} and {last}")]
    Quadrature { previous: f64, last: f64 },

    #[error("invalid range: {0}")]
    Range(String),

    /// Finite-difference eigensolver could not deliver a requested state.
    #[error("radial solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
