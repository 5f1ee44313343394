//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by chain construction, dynamics, drive engineering,
/// readout correction, and scenario execution.
#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent or invalid configuration (lengths, ranges, schema).
    #[error("configuration error: {0}")]
    Config(String),

    /// Operation requires the topological regime (J1 < J2) and it does not hold.
    #[error("topological regime violated: {0}")]
    Regime(String),

    /// Bulk gap closes (J1 = J2); topology classification undefined.
    #[error("gap closure: {0}")]
    GapClosure(String),

    /// Invalid state or probability input.
    #[error("input error: {0}")]
    Input(String),

    /// Noise model violates T1 > 0 or T2* <= 2 T1.
    #[error("noise model error: {0}")]
    NoiseModel(String),

    /// Index outside the chain.
    #[error("bounds error: {0}")]
    Bounds(String),

    /// Bessel argument outside the supported window.
    #[error("bessel domain error: |x| = {0} exceeds 20")]
    BesselDomain(f64),

    /// Drive modulation frequency does not match the bond detuning.
    #[error("detuned drive: no tone within {tol_mhz} MHz of the {detuning_mhz} MHz operating-frequency difference (closest tone off by {closest_off_mhz} MHz)")]
    DetunedDrive {
        detuning_mhz: f64,
        tol_mhz: f64,
        closest_off_mhz: f64,
    },

    /// Requested coupling exceeds what the Bessel map can reach.
    #[error("coupling target {target_mhz} MHz unreachable; maximum achievable is {max_mhz} MHz")]
    UnreachableCoupling { target_mhz: f64, max_mhz: f64 },

    /// No full population-transfer cycle found inside the integration window.
    #[error("inconclusive window: no full population-transfer cycle within {window_us} us")]
    InconclusiveWindow { window_us: f64 },

    /// Readout confusion matrix cannot be inverted.
    #[error("readout calibration error: {0}")]
    Calibration(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
