use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode count {m}: {reason}")]
    InvalidModeCount { m: usize, reason: &'static str },

    #[error("unsupported basis/generator pair: {basis} with {generator}")]
    UnsupportedPair {
        basis: &'static str,
        generator: &'static str,
    },

    #[error("states live on different lattices")]
    LatticeMismatch,

    #[error("component mismatch: expected {expected}, found {found}")]
    ComponentMismatch { expected: usize, found: usize },

    #[error("scheme symbol has a pole at z = {0}")]
    Pole(Complex64),

    #[error("scheme symbol has a pole at mode {mode} (z = {z})")]
    PoleAtMode { mode: i64, z: Complex64 },

    #[error("{0} must be a power of two, got {1}")]
    NotPowerOfTwo(&'static str, usize),

    #[error("coarsening factor {factor} is incompatible with {n_fine} fine increments")]
    BadFactor { factor: usize, n_fine: usize },

    #[error("step size {k} is incompatible with a path of {n_fine} increments over T = {t_final}")]
    IncompatibleStep { k: f64, n_fine: usize, t_final: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("corrupt result file {path}: {reason}")]
    CorruptResult { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
