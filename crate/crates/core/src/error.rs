use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Domain errors name the precondition that was violated so callers (and the
/// CLI) can report it without a backtrace.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition `{precondition}` violated: {detail}")]
    Domain {
        precondition: &'static str,
        detail: String,
    },

    #[error("parse error in field `{field}`: {detail}")]
    Parse { field: String, detail: String },

    #[error("resource bound `{bound}` exceeded: {detail}")]
    Resource { bound: &'static str, detail: String },

    #[error("polynomial {polynomial} does not split over F_{p}^{k}; extension degree {needed} required")]
    ExtendField {
        p: u64,
        k: usize,
        needed: usize,
        polynomial: String,
    },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn domain(precondition: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            precondition,
            detail: detail.into(),
        }
    }

    pub fn parse(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            detail: detail.into(),
        }
    }

    pub fn resource(bound: &'static str, detail: impl Into<String>) -> Self {
        Error::Resource {
            bound,
            detail: detail.into(),
        }
    }

    /// True for errors a CLI should map to its resource-bound exit code.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
