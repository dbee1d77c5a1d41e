//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by design construction, lattice algebra, fitting and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A factor or lattice violated a structural requirement (mismatched unit
    /// sets, inconsistent partitions, negative degrees of freedom, a design
    /// that is not orthogonal, ...).
    #[error("structural error: {0}")]
    Structure(String),

    /// Invalid configuration supplied by the caller (bad counts, missing
    /// matching inputs, inconsistent simulation settings, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Formula text could not be parsed. `offset` is the byte offset of the
    /// first offending character.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A formula identifier does not name a column of the design.
    #[error("binding error: unknown identifier `{0}`")]
    Binding(String),

    /// Incompatible arguments to an operation (e.g. non-nested models in a
    /// likelihood-ratio test).
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical routine failed to produce a usable result.
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
