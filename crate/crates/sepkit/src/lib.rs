//! Symbolic-numeric toolkit for the determinantal separability probabilities
//! Q(k, alpha) = Prob(|rho^PT| > |rho|) of generalized two-qubit states under
//! random induced measure.
//!
//! Four mutually cross-checking routes are provided:
//! - exact determinantal moments plus Legendre density reconstruction,
//! - closed-form hypergeometric / Pochhammer-ratio formulas,
//! - exact first-order difference equations (guessed or ansatz-fitted),
//! - Ginibre-ensemble Monte Carlo.

pub mod asymptotics;
pub mod closedforms;
pub mod density;
pub mod moments;
pub mod montecarlo;
pub mod numerics;
pub mod recurrence;

pub use numerics::{PrecReal, Polynomial};
pub use rug::{Integer, Rational};

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("gamma pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rationalization ambiguous: {0}")]
    Ambiguous(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("series does not converge: {0}")]
    NonConvergent(String),
    #[error("no equation found: {0}")]
    NotFound(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("division by zero at alpha = {0}")]
    ZeroDivisor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
