//! Linear recurrence numeration bases (LRBs), greedy digit systems, and
//! G-additive functions, together with the analytic machinery that decides
//! whether such a function has a limiting distribution: block recurrences
//! for partial characteristic functions, canonical series diagnostics, and
//! brute-force empirical ground truth.
//!
//! The crate is organised around the pipeline
//!
//! ```text
//! base  ->  digits  ->  gfun  ->  { transform | series | empirical }
//! ```
//!
//! * [`base`] constructs and validates a numeration base from recurrence
//!   coefficients: exact integer sequence, Perron root, Pisot certificate.
//! * [`digits`] is the greedy digit codec plus the block decomposition that
//!   drives the transform recurrences.
//! * [`gfun`] represents digit-level weight functions (tables and the
//!   polynomially / geometrically damped families).
//! * [`transform`] computes the block sums `H_k(t)`, their ratios, the
//!   deviation and drift sequences, partial products of the limit
//!   characteristic function, and the perturbed companion matrices.
//! * [`series`] evaluates the two canonical convergence series and the
//!   order-2 specialisations.
//! * [`empirical`] provides brute-force empirical CDFs and characteristic
//!   functions as an independent cross-check of everything above.
//! * [`verify`] bundles the cross-module consistency suites exposed by the
//!   CLI, and [`cli`] is the command-line front end.

pub mod base;
pub mod cli;
pub mod digits;
pub mod empirical;
pub mod gfun;
pub mod series;
pub mod transform;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient vector failed validation; names the first failed rule.
    #[error("invalid coefficients: {rule}")]
    InvalidCoefficients { rule: String },

    /// An operation needed base levels beyond what was precomputed.
    #[error("capacity exceeded: requires max_level >= {required_level} (have {have_level})")]
    Capacity {
        required_level: usize,
        have_level: usize,
    },

    /// A level or digit index fell outside the valid range.
    #[error("index out of range: {0}")]
    IndexRange(String),

    /// A digit argument exceeded the base's digit alphabet.
    #[error("digit {digit} exceeds maximal digit {max_digit}")]
    DigitDomain { digit: u32, max_digit: u32 },

    /// Operation requires a base of a specific recurrence order.
    #[error("wrong recurrence order: expected {expected}, got {got}")]
    WrongOrder { expected: usize, got: usize },

    /// The ratio-based identity could not be evaluated (vanishing ratios).
    #[error("identity unavailable: {0}")]
    IdentityUnavailable(String),

    /// Root iteration or eigenvalue tracking failed to converge.
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    /// Empirical distributions built from different (base, function) pairs.
    #[error("mismatched distributions: {0}")]
    Mismatch(String),

    /// Malformed CLI argument, grid, or function specification.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
