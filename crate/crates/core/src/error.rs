use std::path::PathBuf;

use thiserror::Error;

use crate::graph::EdgeKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {what} {value} out of range 1..={max}")]
    OutOfRange {
        line: usize,
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("line {line}: weight must be positive, got {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("line {line}: duplicate edge {edge}")]
    DuplicateEdge { line: usize, edge: EdgeKey },

    #[error("invalid edge {edge}: {reason}")]
    InvalidEdge { edge: EdgeKey, reason: String },

    #[error("edit of {edge} would leave weight {weight} < 0")]
    NegativeWeight { edge: EdgeKey, weight: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix of order {order} exceeds the dense cap of {cap}")]
    DenseCapExceeded { order: usize, cap: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (right residual {right_residual:.3e}, left residual {left_residual:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        right_residual: f64,
        left_residual: f64,
    },

    #[error("Perron vector has a negative entry {value:.3e}; operator is likely reducible")]
    NotPositive { value: f64 },

    #[error("dominant eigenvalue {re} + {im}i is not a positive real root")]
    ComplexDominant { re: f64, im: f64 },

    #[error("structured projection of the Wilkinson perturbation is zero")]
    ZeroProjection,

    #[error("operation requires an undirected network")]
    RequiresUndirected,

    #[error("no feasible edge removal keeps the network strongly connected")]
    NoFeasibleRemoval,

    #[error("network has no edges")]
    NoEdges,

    #[error("not a multiplex: {0}")]
    NotMultiplex(String),
}
