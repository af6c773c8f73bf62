//! Error types shared across the crate.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A single violated invariant on a named field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Everything that was wrong with one layer description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidLayer {
    pub layer: String,
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "layer `{}` is invalid: ", self.layer)?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InvalidLayer {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    InvalidLayer(#[from] InvalidLayer),

    #[error("network must contain at least one layer")]
    EmptyNetwork,

    #[error("duplicate layer name `{0}`")]
    DuplicateLayer(String),

    #[error("no layer named `{0}` in network")]
    UnknownLayer(String),

    #[error("invalid hardware config: {field}: {message}")]
    InvalidHardware { field: &'static str, message: String },

    #[error("invalid quantization: {0}")]
    InvalidQuant(String),

    #[error("{what} extent mismatch: expected {expected:?}, got {actual:?}")]
    ExtentMismatch {
        what: &'static str,
        expected: Vec<usize>,
        actual: Vec<usize>,
    },

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("length mismatch: {left} inputs vs {right} weights")]
    LengthMismatch { left: usize, right: usize },

    #[error("expected {expected} timing reports to match the baseline table, got {actual}")]
    BaselineLength { expected: usize, actual: usize },

    #[error("unknown sweep axis `{0}` (expected one of: k, n_input_dac, f_dac, bits)")]
    UnknownSweepAxis(String),

    #[error("invalid sweep range: {0}")]
    InvalidSweep(String),

    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attach the file a configuration error came from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// True for I/O failures (anything else is a configuration or input error).
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::InFile { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
