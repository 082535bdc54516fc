use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds the cap of {cap} (got {got})")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("graphic metric is disconnected: no path between cities {u} and {v}")]
    Disconnected { u: usize, v: usize },

    #[error("city id {id} out of range for an instance with {n} cities")]
    IdOutOfRange { id: usize, n: usize },

    #[error("distance key overflow: {0}")]
    KeyOverflow(String),

    #[error("operation requires exact lengths: {0}")]
    InexactLength(String),

    #[error("duplicate edge {{{u}, {v}}} in certificate")]
    DuplicateEdge { u: usize, v: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("certificate audit failed:\n  {}", issues.join("\n  "))]
    CertificateAudit { issues: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
