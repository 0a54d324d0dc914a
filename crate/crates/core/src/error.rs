use thiserror::Error;

/// Errors raised by constructions and engines.
///
/// Every variant corresponds to an invalid input or an exceeded size bound;
/// no engine fails on valid input within its bounds.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("vertex {0} is not in the ground set")]
    UnknownVertex(u32),

    #[error("{0} is not a facet of the complex")]
    NotAFacet(String),

    #[error("{0} is not a face of the complex")]
    NotAFace(String),

    #[error("complex is not pure")]
    NotPure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {actual} exceeds the bound {bound}; raise the bound explicitly to proceed")]
    BoundExceeded {
        what: &'static str,
        actual: usize,
        bound: usize,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
