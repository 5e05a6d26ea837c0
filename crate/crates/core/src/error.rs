use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field length {found} does not match grid with {expected} nodes")]
    LengthMismatch { expected: usize, found: usize },

    #[error("operation needs a {expected}D grid, got {found}D")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is tagged {found}, expected {expected}")]
    TagMismatch { expected: ModelTag, found: ModelTag },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in field `{field}` at node {node}")]
    NonFinite { field: String, node: usize },

    #[error("CFL ratio {ratio:.4} exceeds 1; refusing to start (policy = reject)")]
    CflRejected { ratio: f64 },

    #[error("non-finite value at step {step} (last good snapshot at t = {last_good_t} ps)")]
    Diverged { step: u64, last_good_t: f64 },

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error("unknown config key `{key}` in section [{section}]")]
    UnknownKey { section: String, key: String },

    #[error("missing required config key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },

    #[error("config key `{key}`: {reason}")]
    BadValue { key: String, reason: String },

    #[error("unknown preset `{0}` (available: table1_1d, table1_2d, table2, table3, hinrp_1d, hinrp_2d)")]
    UnknownPreset(String),

    #[error("snapshot: bad magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("snapshot: unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("snapshot: truncated payload ({0})")]
    Truncated(String),

    #[error("snapshot: {0}")]
    Corrupt(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
