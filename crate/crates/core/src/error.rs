use thiserror::Error;

/// Errors produced by the simulation engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid photon-number cutoff n_max = {0}; at least one photon level is required")]
    InvalidCutoff(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "drive detuning {detuning:.6e} rad/s violates the nesting window (0, 2chi = {two_chi:.6e})"
    )]
    NotNested { detuning: f64, two_chi: f64 },

    #[error("hamiltonian is not static: qubit frame {frame:.6e} differs from drive {drive:.6e}")]
    NonStatic { frame: f64, drive: f64 },

    #[error("no impedance-matching point: k41 - k42 keeps its sign on [{lo:.6e}, {hi:.6e}] rad/s")]
    NoMatchingPoint { lo: f64, hi: f64 },

    #[error("invalid dressed transition ({0}, {1}); expected one of (1,3), (1,4), (2,3), (2,4)")]
    InvalidTransition(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integration failed at t = {time:.6e} s: {reason}")]
    IntegrationFailure { time: f64, reason: String },

    #[error("step size underflow at t = {time:.6e} s (h = {step:.3e} s)")]
    StepUnderflow { time: f64, step: f64 },

    #[error("liouvillian has a degenerate kernel (nullity estimate {nullity})")]
    SingularLiouvillian { nullity: usize },

    #[error("steady-state residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    SteadyStateResidual { residual: f64, tolerance: f64 },

    #[error("probe not in the weak-probe regime: |r| moved by {delta:.3e} when halving the probe")]
    ProbeNotConverged { delta: f64 },

    #[error("Fock cutoff not converged: {quantity} changed by {relative:.3e} (relative) at n_max + 1")]
    FockNotConverged { quantity: &'static str, relative: f64 },

    #[error("could not resolve two reflection dips: {reason} (scan: {scan})")]
    UnresolvedDips { reason: String, scan: String },

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid grid `{0}`: values must be strictly monotone")]
    NonMonotoneGrid(&'static str),

    #[error("missing CSV column `{0}`")]
    MissingColumn(String),

    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
