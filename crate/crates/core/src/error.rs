use std::path::PathBuf;

/// Errors produced anywhere in the lab.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    /// An exponential weight would amplify round-off beyond the trustworthy level.
    #[error("unreliable weight: theta = {theta} exceeds admissible theta_max = {theta_max}")]
    UnreliableWeight { theta: f64, theta_max: f64 },

    #[error("unreliable weight at node {node} (t = {time}): theta = {theta}, theta_max = {theta_max}")]
    UnreliableWeightAtNode {
        node: usize,
        time: f64,
        theta: f64,
        theta_max: f64,
    },

    #[error("evaluation time {t} outside trajectory range ({t_min}, {t_max}]")]
    TimeOutOfRange { t: f64, t_min: f64, t_max: f64 },

    #[error("Picard iteration diverged after {iterations} iterations (last difference {last_difference:e})")]
    Divergence {
        iterations: usize,
        last_difference: f64,
        contractive: bool,
        kappa: f64,
    },

    #[error("blow-up at t = {time}: norm grew from {initial_norm:e} to {norm:e}")]
    BlowUp {
        time: f64,
        norm: f64,
        initial_norm: f64,
    },

    #[error("singular point: the Cole-Hopf initial datum is singular at x = 0")]
    SingularPoint,

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("snapshot version mismatch: file has version {found}, this build reads version {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI for this class of failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::InvalidArgument(_) => 2,
            LabError::Io { .. } | LabError::Format(_) | LabError::VersionMismatch { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
