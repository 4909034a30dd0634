use thiserror::Error;

use crate::rays::RayId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed golden number {0:?}")]
    GoldenSyntax(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("ray id {0} appears more than once")]
    DuplicateId(RayId),

    #[error("ray {0} is the zero vector")]
    ZeroRay(RayId),

    #[error("rays {first} and {second} are proportional")]
    ProportionalRays { first: RayId, second: RayId },

    #[error("unknown ray id {0}")]
    UnknownId(RayId),

    #[error("cycle length {n} is outside 5..={max}")]
    NgonLength { n: usize, max: usize },

    #[error("vector norm {0} is not 1")]
    NonUnitVector(f64),

    #[error("operator family is empty")]
    EmptyFamily,

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
