use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {freq_ghz} GHz outside table range [{lo_ghz}, {hi_ghz}] GHz")]
    OutOfRange {
        freq_ghz: f64,
        lo_ghz: f64,
        hi_ghz: f64,
    },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unit-cell table is {found}, expected {expected}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("pattern metrics undefined: {0}")]
    UndefinedMetrics(String),

    #[error("state table: {0}")]
    Table(#[from] TableError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Parse and validation failures for unit-cell state tables.
#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("missing or malformed header, expected `freq_ghz,state,mag_db,phase_deg`")]
    BadHeader,

    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("state `{state}`: frequencies not strictly increasing at {freq_ghz} GHz")]
    NonMonotone { state: String, freq_ghz: f64 },

    #[error("state `{state}` frequency grid differs from state `{reference}`")]
    MismatchedGrids { state: String, reference: String },

    #[error("state `{state}` at {freq_ghz} GHz has |coefficient| = {magnitude:.4} > 1 and table is not marked active")]
    Passivity {
        state: String,
        freq_ghz: f64,
        magnitude: f64,
    },

    #[error("table needs at least 2 states, found {0}")]
    TooFewStates(usize),

    #[error("state `{0}` has no samples")]
    EmptyState(String),
}
