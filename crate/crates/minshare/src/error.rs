//! Crate-wide error type.
//!
//! Variants are grouped by how callers are expected to react: bad parameters
//! and malformed inputs are caller mistakes, `UnsupportedOrder` marks an
//! entropy order a measure is not defined for, and `NotQualified` is the
//! reconstruction-time refusal when a share bundle does not cover a qualified
//! set of parties.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Construction-time rejection of out-of-domain parameters
    /// (non-prime modulus, probability outside its admissible interval, …).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Structurally broken input: bad JSON shape, masses that do not sum
    /// to one, duplicate tuples, inconsistent share bundles, and similar.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// The requested entropy order is not defined for the requested measure
    /// (e.g. conditional entropy of order zero).
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// The parties present in a share bundle cannot reconstruct the secret.
    #[error("not a qualified set: {0}")]
    NotQualified(String),

    /// Arithmetic between elements of two different prime fields.
    #[error("field mismatch: operands belong to different prime fields")]
    FieldMismatch,

    /// Multiplicative inverse of zero.
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    /// An exact rational does not fit the integer range used by a
    /// serialization format.
    #[error("value does not fit in the serialized integer range: {0}")]
    Overflow(String),

    /// A variable name that is not present in the distribution at hand.
    #[error("unknown variable: {0}")]
    UnknownVariable(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
