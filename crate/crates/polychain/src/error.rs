//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by series evaluation, coefficient generation, spectral
/// computations and chain construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A hypergeometric sum has no nonpositive-integer upper parameter and no
    /// explicit term cap, so it would not terminate.
    #[error("series does not terminate: no nonpositive-integer upper parameter and no term cap")]
    NonTerminating,

    /// A lower Pochhammer factor vanished at a term that is actually reached
    /// before the sum terminates.
    #[error("lower parameter {parameter} hits a pole at term {term} before the series terminates")]
    PoleInLower { parameter: f64, term: usize },

    /// Family parameters violate the family's validity domain.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Hahn-type families only have polynomials up to degree N.
    #[error("truncation size {m} exceeds the family's maximal degree {max}")]
    TruncationTooLarge { m: usize, max: usize },

    /// The family has a continuous weight; discrete orthogonality sums do not apply.
    #[error("family {0} has no discrete orthogonality relation")]
    UnsupportedFamily(String),

    /// The family (or parameter region) has no positive bidiagonal factorization.
    #[error("no positive bidiagonal factorization: {0}")]
    NoPBF(String),

    /// Bisection could not bracket a sign change; recurrence coefficients are
    /// likely wrong for an interlacing family.
    #[error("failed to bracket zero {index} of degree {degree}: no sign change in [{lo}, {hi}]")]
    BracketFailure {
        degree: usize,
        index: usize,
        lo: f64,
        hi: f64,
    },

    /// Requested point is not an eigenvalue of the truncated matrix.
    #[error("x = {x} is not an eigenvalue: left residual {residual:.3e} exceeds {tol:.3e}")]
    NotAnEigenvalue { x: f64, residual: f64, tol: f64 },

    /// A leading principal minor vanished during Gaussian elimination.
    #[error("zero pivot at position {0} (singular leading principal minor)")]
    ZeroPivot(usize),

    /// A pivot required to be positive for a stochastic factorization is not.
    #[error("factorization coefficient a_{index} = {value} is not positive")]
    NonPositivePivot { index: usize, value: f64 },

    /// The banded matrix violates the sign conditions needed for a stochastic chain.
    #[error("recurrence matrix is not nonnegative: {entry} = {value}")]
    NotNonnegative { entry: String, value: f64 },

    /// The steady state has a nonpositive component; signals an upstream bug.
    #[error("degenerate steady state: pi[{index}] = {value}")]
    DegenerateSteadyState { index: usize, value: f64 },

    /// Coefficient-pattern period and graph period disagree; signals a coefficient bug.
    #[error("period classification disagrees: coefficient lemma gives {from_coefficients}, support graph gives {from_graph}")]
    PeriodMismatch {
        from_coefficients: usize,
        from_graph: usize,
    },

    /// An internal consistency check (eigen residual, biorthogonality,
    /// stochasticity, factor product) failed; signals an upstream bug.
    #[error("consistency check failed: {0}")]
    ConsistencyCheck(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
