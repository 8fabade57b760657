use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A mass specification failed validation; `field` names the offending entry.
    #[error("invalid mass specification at `{field}`: {reason}")]
    InvalidMass { field: String, reason: String },

    /// The configuration lies on the locus `a = 0`, where no centering hyperplane exists.
    #[error("configuration is degenerate (|a| = {norm_a:.3e}); it lies on the 0 x S^1 locus")]
    DegenerateConfiguration { norm_a: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficient index {index} outside the available range |m| <= {limit}")]
    CoefficientOutOfRange { index: i64, limit: usize },

    /// Two independent computations of the same quantity disagreed.
    #[error("accuracy failure in {what}: discrepancy {discrepancy:.3e} exceeds {limit:.3e}")]
    AccuracyFailure {
        what: &'static str,
        discrepancy: f64,
        limit: f64,
    },

    #[error("no sign change of the fan offset function over {samples} directions")]
    NoSignChange {
        samples: usize,
        trace: Vec<(f64, f64)>,
    },

    #[error(
        "sector deviation {deviation:.6e} at theta = {theta:.6} exceeds the bound {bound:.6e}"
    )]
    CertificateViolation {
        theta: f64,
        deviation: f64,
        bound: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_mass(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::InvalidMass {
        field: field.into(),
        reason: reason.into(),
    }
}
