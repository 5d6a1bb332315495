//! Everything around the clustering core that needs an operating system:
//! synthetic dataset generation, CSV and tree file formats, and the
//! benchmark harness backing the `ohclust` binary.

pub mod bench;
pub mod data;
pub mod treeio;

/// Errors from dataset generation, file formats, and the bench harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: row {row}, column {col}: {msg}")]
    CsvParse { path: String, row: usize, col: usize, msg: String },
    #[error("invalid tree document: {0}")]
    TreeFormat(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] ohclust_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
