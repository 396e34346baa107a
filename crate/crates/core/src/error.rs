use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({0}, {1}) has negative weight {2}")]
    NegativeWeight(usize, usize, f64),
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed twice with weights {2} and {3}")]
    DuplicateEdgeConflict(usize, usize, f64, f64),
    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid graph size {0}")]
    InvalidSize(usize),
    #[error("vertex {vertex} out of range for graph with {len} vertices")]
    VertexOutOfRange { vertex: usize, len: usize },
    #[error("index {index} out of range (expected < {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),
    #[error("eigensolver failure: {0}")]
    EigSolverFailure(String),
    #[error("eigenvalue 0 is not simple (lambda_1 = {0:e})")]
    MultipleZeroEigenvalues(f64),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window family has degenerate spectral coverage (min energy {0:e})")]
    DegenerateCoverage(f64),
    #[error("reconstruction denominator vanishes at vertices {vertices:?}")]
    DegenerateDenominator { vertices: Vec<usize> },
    #[error("window does not generate a frame (min translate energy {0:e})")]
    NotAFrame(f64),
    #[error("coefficients were computed on a different spectral basis ({found} != {expected})")]
    FingerprintMismatch { expected: String, found: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical pipeline, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        if let Error::Stage { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::EigSolverFailure(_)
                | Error::MultipleZeroEigenvalues(_)
                | Error::DegenerateCoverage(_)
                | Error::DegenerateDenominator { .. }
                | Error::NotAFrame(_)
        )
    }

    /// Tags an error with the pipeline stage it came from.
    pub fn at(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
