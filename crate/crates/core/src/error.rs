use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid size {0} is not a power of two >= 64")]
    GridSize(usize),

    #[error("grid must cover at least one well")]
    ZeroWells,

    #[error("packet width {width:.4} is not resolvable on a grid with spacing {dq:.4} (need >= 4 dq)")]
    PacketUnresolved { width: f64, dq: f64 },

    #[error("packet width {width:.4} wraps a domain of length {length:.4} (need <= L/8)")]
    PacketWraps { width: f64, length: f64 },

    #[error("band-edge occupancy {fraction:.3e} exceeds cutoff {cutoff:.1e}")]
    BandEdge { fraction: f64, cutoff: f64 },

    #[error("probability {outside:.3e} falls outside the histogram edges")]
    HistogramCoverage { outside: f64 },

    #[error("non-finite phase-space state at t = {t}")]
    Overflow { t: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian (|det| = {det:.3e})")]
    SingularJacobian { det: f64 },

    #[error("self-consistent resonance did not converge after {iterations} iterations (last |dp| = {last_change:.3e})")]
    ResonanceNotConverged { iterations: usize, last_change: f64 },

    #[error("step-count validation failed: <p> = {coarse} at {coarse_steps} steps/cycle vs {fine} at {fine_steps}")]
    StepValidation {
        coarse: f64,
        fine: f64,
        coarse_steps: usize,
        fine_steps: usize,
    },

    #[error("spectral derivative overflow in Moyal right-hand side")]
    SpectralOverflow,

    #[error("momentum shift {shift} is not a multiple of the grid spacing {dp}")]
    ShiftIncompatible { shift: f64, dp: f64 },

    #[error("{failed} of {total} trajectories failed (first: {first})")]
    TooManyFailures {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("no peaks above threshold")]
    NoPeaks,

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::GridSize(_) | Error::ZeroWells => "grid",
            Error::PacketUnresolved { .. } | Error::PacketWraps { .. } => "packet",
            Error::BandEdge { .. } => "band_edge",
            Error::HistogramCoverage { .. } => "histogram_coverage",
            Error::Overflow { .. } => "overflow",
            Error::NoConvergence { .. } | Error::SingularJacobian { .. } => "fixed_point",
            Error::ResonanceNotConverged { .. } => "resonance",
            Error::StepValidation { .. } => "step_validation",
            Error::SpectralOverflow | Error::ShiftIncompatible { .. } => "moyal",
            Error::TooManyFailures { .. } => "ensemble",
            Error::NoPeaks => "no_peaks",
            Error::Io { .. } | Error::Csv { .. } => "io",
            Error::Config(_) => "config",
        }
    }
}
