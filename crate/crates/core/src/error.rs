//! Crate-wide error type.

use thiserror::Error;

use crate::chart::ChartPoint;
use crate::expr::ParseError;
use crate::jet::JetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("metric is degenerate at {point}: |det g| = {det:e}")]
    DegenerateMetric { point: ChartPoint, det: f64 },
    #[error("point {0} lies outside the structure domain")]
    OutOfDomain(ChartPoint),
    #[error("deformation parameter must be positive, got {0}")]
    NonpositiveAlpha(f64),
    #[error("h is nonzero but squares to zero at {0}; no h-frame exists")]
    H2TypeUnsupported(ChartPoint),
    #[error("h is degenerate at {point}: {reason}")]
    DegenerateH { point: ChartPoint, reason: String },
    #[error("frame construction failed at {point}: {reason}")]
    FrameFailure { point: ChartPoint, reason: String },
    #[error("least-squares system is ill-conditioned (condition number {condition:e})")]
    IllConditionedSolve { condition: f64 },
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("validation failed: {check} residual {residual:e} at {point}")]
    ValidationFailure { check: String, residual: f64, point: ChartPoint },
    #[error("no grid points remain after exclusions")]
    EmptyGridAfterExclusions,
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
