//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("singular modal system at n = {n}: {detail}")]
    SingularSystem { n: usize, detail: String },

    #[error("near-resonant modal system at n = {n} (condition number {cond:.3e})")]
    NearResonance { n: usize, cond: f64 },

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(
        "quadrature order {order} too low for harmonic degree {n} (aliasing); need at least {min}"
    )]
    QuadratureOrder { order: usize, n: usize, min: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
