//! Error type shared across the library.
//!
//! Most variants signal a violated algebraic identity rather than a user
//! mistake: a failed exact division or a non-polynomial determinant means
//! an upstream invariant does not hold for the given data.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Exact polynomial division left a nonzero remainder.
    #[error("exact division failed, remainder {remainder}")]
    NonDivisible { remainder: String },

    /// Square root of a series whose leading coefficient is not a rational square.
    #[error("leading coefficient {0} has no rational square root")]
    NonSquareLeading(String),

    /// A requested coefficient lies below the truncation order of a series.
    #[error("coefficient at exponent {exponent_times_2}/2 is below the truncation order")]
    Truncated { exponent_times_2: i64 },

    /// Lower-triangular Toeplitz system with vanishing diagonal.
    #[error("Toeplitz system has zero diagonal")]
    SingularDiagonal,

    /// Two interpolation nodes (apparent singularities) coincide.
    #[error("coincident nodes at positions {i} and {j}")]
    CoincidentNodes { i: usize, j: usize },

    /// A polynomial supplied from outside does not split over the rationals.
    #[error("polynomial {0} has irrational roots")]
    IrrationalRoots(String),

    /// A fractional power of a rational is irrational.
    #[error("{0} has no rational root of the required order")]
    IrrationalPower(String),

    /// Mixed-partial consistency failed while integrating a shift polynomial.
    #[error("inconsistent integration in variable {var} for coordinate {coordinate}")]
    InconsistentIntegration { var: String, coordinate: String },

    /// Determinant of a connection matrix kept finite poles.
    #[error("determinant is not polynomial: {0}")]
    NonPolynomialDet(String),

    /// Irregular-time vector fails a structural invariant.
    #[error("invalid irregular times: {0}")]
    InvalidTimes(String),

    /// Normalization of a connection representative is violated.
    #[error("normalization violated at {place}: {detail}")]
    Normalization { place: String, detail: String },

    /// Input vectors have inconsistent lengths or an index is out of range.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Text that does not parse as a rational or chart.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
