//! File formats, synthetic graphs and exports.

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::{GraphError, NodeId};

pub mod dimacs;
pub mod document;
pub mod export;
pub mod generate;

pub use dimacs::{load_dimacs, parse_coordinates, parse_dimacs, write_coordinates, write_dimacs};
pub use document::{AgDocument, DocEdge, DocMetrics, DocNode, ExactValue, MethodEcho, SCHEMA_VERSION};
pub use export::{export, to_dot, to_geojson, Format};
pub use generate::{generate_grid, generate_ring, GraphSource};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: header declares {declared} arcs but {found} were read")]
    ArcCountMismatch { line: usize, declared: usize, found: usize },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: i64 },
    #[error("line {line}: node id {id} out of range 1..={node_count}")]
    IdOutOfRange { line: usize, id: i64, node_count: usize },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("no coordinates for node {0}")]
    MissingCoordinate(NodeId),
    #[error("export needs node coordinates")]
    MissingCoordinates,
    #[error("invalid document: {0}")]
    Document(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::File { path: path.to_path_buf(), source })
}
