use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no-coupling: g = 0 leaves the cooperation coefficient without meaning")]
    NoCoupling,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not a fixed point of the drift (residual {residual:.3e})")]
    NotFixedPoint { residual: f64 },

    #[error("system is not bistable at E1 = {e1}")]
    NotBistable { e1: f64 },

    #[error("non-finite state at t = {t}: {state}")]
    NonFinite { t: f64, state: String },

    #[error("trace drift {drift:.3e} in a single step at t = {t}")]
    TraceDrift { t: f64, drift: f64 },

    #[error("Fock truncation breached at t = {t}: top-level population {population:.3e} > {tolerance:.1e}")]
    Truncation {
        t: f64,
        population: f64,
        tolerance: f64,
    },

    #[error("steady state not reached after t = {t}: residual {residual:.3e}")]
    NotConverged { t: f64, residual: f64 },

    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("too few {label} dwell segments for a fit: {count} (need {needed})")]
    TooFewSegments {
        label: &'static str,
        count: usize,
        needed: usize,
    },

    #[error("signal frequency {delta} unresolvable: bin width {bin_width:.3e} exceeds delta/10")]
    Unresolvable { delta: f64, bin_width: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) => 2,
            Error::NonFinite { .. }
            | Error::TraceDrift { .. }
            | Error::Truncation { .. }
            | Error::NotConverged { .. } => 3,
            _ => 1,
        }
    }
}
