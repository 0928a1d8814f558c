//! Channel modeling, finite-length analysis, and sparse-graph code design
//! for resistive crossbar memories affected by sneak paths.
//!
//! The crate covers the full pipeline:
//!
//! - [`channel`]: the N x N crossbar read channel — sneak-path formation
//!   under selector failures, noisy readback, per-cell LLRs, and sneak-path
//!   rate estimation.
//! - [`spstats`]: closed-form and empirical statistics of the sneak-path
//!   rate for Bernoulli(q) data with K scattered active failures.
//! - [`lambda`]: capacity and dispersion of the stationary mixture channel
//!   each array realizes, plus the noise level at which capacity meets a
//!   target rate.
//! - [`bound`]: the normal-approximation finite-length word-error bound
//!   obtained by averaging over the sneak-path rate distribution.
//! - [`de`]: two-dimensional (recovered-probability, Gaussian-mean) density
//!   evolution and decoding thresholds.
//! - [`ira`]: systematic irregular repeat-accumulate codes — graph
//!   construction, accumulator encoding, and sum-product decoding.
//! - [`optimizer`]: degree-distribution search maximizing the decoding
//!   threshold at fixed rate and check degree.
//! - [`sim`]: seeded, parallel Monte Carlo BER/WER measurement over the
//!   true array channel and its mixture decomposition.

pub mod bound;
pub mod channel;
pub mod de;
pub mod ira;
pub mod lambda;
pub mod numeric;
pub mod optimizer;
pub mod sim;
pub mod spstats;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    /// An argument left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-side contract was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A numeric search or iteration could not produce a result.
    #[error("computation failed: {0}")]
    Computation(String),
    /// Malformed configuration or profile data.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
