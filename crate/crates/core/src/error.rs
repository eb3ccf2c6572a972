//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by law construction, estimation, verification, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric literal could not be parsed as an exact rational.
    #[error("invalid number {input:?}: {reason}")]
    ParseNumber { input: String, reason: String },

    /// Event times must be strictly positive rationals.
    #[error("time values must be strictly positive, got {value}")]
    NonpositiveTime { value: String },

    /// A time grid violated the strictly-increasing contract.
    #[error("invalid time grid: {detail}")]
    InvalidGrid { detail: String },

    /// A probability mass function did not sum to one exactly.
    #[error("probability mass must sum to 1 exactly, got {total}")]
    MassNotOne { total: String },

    /// A negative probability was supplied.
    #[error("negative probability {mass} at atom {atom}")]
    NegativeMass { atom: String, mass: String },

    /// The same atom appeared twice in a mass function.
    #[error("duplicate atom {atom} in probability mass function")]
    DuplicateAtom { atom: String },

    /// An atom referenced a point outside the declared grids.
    #[error("atom {atom} lies off the declared grid")]
    AtomOffGrid { atom: String },

    /// A law was declared independent but its joint mass does not factorize.
    #[error("law declared independent but mass at (t={t}, c={c}) is {joint}, marginal product is {product}")]
    NotIndependent {
        t: String,
        c: String,
        joint: String,
        product: String,
    },

    /// The requested operation is only defined for independent latent laws.
    #[error("operation requires an independent latent law")]
    IndependenceRequired,

    /// A distribution-spec document was malformed.
    #[error("distribution spec: {0}")]
    Spec(String),

    /// An observation time cannot be bracketed by the evaluation grid.
    #[error("observation time {time} exceeds the grid maximum {max}")]
    BeyondGrid { time: String, max: String },

    /// Samples must contain at least one observation.
    #[error("sample contains no observations")]
    EmptySample,

    /// One or more data rows were rejected while reading a sample.
    #[error("invalid sample rows: {detail}")]
    BadRows { detail: String },

    /// An integrand value exceeded its declared bound.
    #[error("integrand {name:?} exceeds its declared bound at u={at}: |{value}| > {bound}")]
    BoundExceeded {
        name: String,
        at: String,
        value: String,
        bound: String,
    },

    /// An integrand's measured measurability class is too weak for the
    /// requested martingale transform or covariation statement.
    #[error("integrand {name:?} measured as {measured}, but {required} is required")]
    MeasurabilityTooWeak {
        name: String,
        measured: String,
        required: String,
    },

    /// A survival probability needed as a divisor is zero.
    #[error("survival probability is zero at {at}: {context}")]
    ZeroSurvival { at: String, context: String },

    /// A confidence level outside the open unit interval was requested.
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    BadLevel(f64),

    /// An experiment was configured with no work to do.
    #[error("invalid experiment configuration: {0}")]
    BadExperiment(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
