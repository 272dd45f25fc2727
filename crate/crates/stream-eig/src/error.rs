//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix input contains NaN or infinite entries, or is not symmetric.
    #[error("invalid matrix: {0}")]
    InvalidMatrix(&'static str),

    /// The Jacobi solver did not reach the off-diagonal threshold within the
    /// sweep limit; the input is pathological.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// An operation that divides by a vector norm received the zero vector.
    #[error("operation undefined for the zero vector")]
    ZeroVector,

    /// Eigenvalue list is not ascending, contains negatives, or is empty.
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(&'static str),

    /// A finite sample source is shorter than what was requested.
    #[error("insufficient samples: need {need}, have {have}")]
    InsufficientSamples { need: usize, have: usize },

    /// A sample file was present but contained no observations.
    #[error("sample stream is empty")]
    EmptyStream,

    /// A CSV row was ragged or non-numeric. Rows are 1-based and count the
    /// header if present.
    #[error("parse error at row {row}: {reason}")]
    Parse { row: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A streamed sample contained NaN or infinite entries.
    #[error("sample contains non-finite entries")]
    InvalidSample,

    /// Learning-rate schedule violates the admissibility conditions
    /// (c > 0 and alpha in (1/2, 1]).
    #[error("inadmissible schedule: c={c}, alpha={alpha}")]
    InadmissibleSchedule { c: f64, alpha: f64 },

    /// Oja update denominator underflowed.
    #[error("degenerate update: normalization denominator below 1e-300")]
    DegenerateUpdate,

    /// The eigen-gap next to the targeted eigenvalue is zero, so the target
    /// eigenvector is unidentifiable.
    #[error("degenerate eigen-gap for the targeted eigenpair")]
    DegenerateGap,

    /// Too few usable points for a rate fit.
    #[error("insufficient data for rate fit: {usable} usable points")]
    InsufficientData { usable: usize },

    /// Replicates recorded losses on different checkpoint grids.
    #[error("replicate checkpoint grids do not match")]
    GridMismatch,

    /// An update rule was called on a state built for a different scheme.
    #[error("scheme mismatch: state is {state}, update is {update}")]
    SchemeMismatch {
        state: &'static str,
        update: &'static str,
    },

    /// Experiment configuration failed validation.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}
