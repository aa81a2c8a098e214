use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical core and the run driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is invalid: n must be a power of two and at least 8")]
    InvalidGrid(usize),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid mismatch: n = {0} vs n = {1}")]
    GridMismatch(usize, usize),

    #[error("negative-order operator on non-mean-free field")]
    NonMeanFree,

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("shell index {j} outside the available range [{lo}, {hi}]")]
    ShellOutOfRange { j: i32, lo: i32, hi: i32 },

    #[error("grid too small to hold a full dyadic shell")]
    PartitionTooSmall,

    #[error("empty shell")]
    EmptyShell,

    #[error("kernel summability violated: {0}")]
    Summability(&'static str),

    #[error("mollifier under-resolved: eps = {eps} spans {cells:.2} grid cells across its diameter (need at least 5)")]
    UnderResolved { eps: f64, cells: f64 },

    #[error("rate fit: {0}")]
    RateFit(String),

    #[error("CFL violation: dt = {dt} exceeds {limit} (max |v| = {max_velocity})")]
    Cfl {
        dt: f64,
        limit: f64,
        max_velocity: f64,
    },

    #[error("non-finite state at t = {time}; last valid checkpoint: {}", checkpoint.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "none".into()))]
    Blowup {
        time: f64,
        checkpoint: Option<PathBuf>,
    },

    #[error("calibration did not converge in {sweeps} sweeps; achieved profile {profile:?}")]
    Calibration { sweeps: usize, profile: Vec<f64> },

    #[error("config: {path}: {message}")]
    Config { path: String, message: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numerical,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config { .. } => ErrorClass::Config,
            Error::Io(_) | Error::Checkpoint(_) => ErrorClass::Io,
            _ => ErrorClass::Numerical,
        }
    }

    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
