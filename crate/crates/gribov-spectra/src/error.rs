//! Error taxonomy. Variants are grouped so callers (in particular the CLI)
//! can distinguish validation problems from numerical failures.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GribovError {
    #[error("triple coupling lambda must be > 0, got {0}")]
    NonpositiveLambda(String),

    #[error("four coupling lambda' must be >= 0, got {0}")]
    NegativeLambdaPrime(String),

    #[error("parameters outside the weighted-space theory: {reason} (use the exploratory constructor to override)")]
    OutOfTheory { reason: String },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    DomainViolation {
        name: &'static str,
        value: String,
        lo: String,
        hi: String,
    },

    #[error("operation requires lambda' > 0 (native-frame quantities are undefined in the limit)")]
    LimitParamsOnly,

    #[error("kernel frame {frame} incompatible with parameters: {reason}")]
    FrameMismatch { frame: &'static str, reason: String },

    #[error("quadrature did not converge within the node budget ({0})")]
    QuadratureNonConvergence(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("non-finite matrix entry at node pair ({i}, {j})")]
    Overflow { i: usize, j: usize },

    #[error(
        "power iteration did not converge within {max_iter} iterations (last residual {residual})"
    )]
    NonConvergence { max_iter: usize, residual: String },

    #[error("eigenvector entry {value} at node {index} violates kernel positivity")]
    PositivityViolation { index: usize, value: String },

    #[error("deflation breakdown: left/right Perron vectors nearly orthogonal")]
    DeflationBreakdown,

    #[error("source must vanish at the origin, got f(0) = {0}")]
    SourceNotVanishing(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("study aborted at {param}: {source}")]
    StudyAborted {
        param: String,
        #[source]
        source: Box<GribovError>,
    },
}

impl GribovError {
    /// `true` for errors that indicate bad inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        match self {
            GribovError::NonpositiveLambda(_)
            | GribovError::NegativeLambdaPrime(_)
            | GribovError::OutOfTheory { .. }
            | GribovError::DomainViolation { .. }
            | GribovError::LimitParamsOnly
            | GribovError::FrameMismatch { .. }
            | GribovError::InvalidRule(_)
            | GribovError::SourceNotVanishing(_)
            | GribovError::InvalidArgument(_) => true,
            GribovError::StudyAborted { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}
