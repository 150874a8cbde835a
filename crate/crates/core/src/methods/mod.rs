//! Candidate path generators. Each method returns ranked `s`-`t` paths; an
//! alternative graph is then assembled from them by
//! [`greedy_select`](crate::selection::greedy_select).

mod disjoint;
mod pareto;
mod plateau;
mod yen;

pub use disjoint::disjoint_candidates;
pub use pareto::{dominates, pareto_candidates, with_overlap_criterion, ParetoConfig, OVERLAP_WEIGHT_NAME};
pub use plateau::{plateau_candidates, plateau_candidates_with, PlateauConfig};
pub use yen::{yen_candidates, MAX_K};

use thiserror::Error;

use crate::dijkstra::RouteError;
use crate::graph::{GraphError, NodeId, Path, Weight};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Provenance {
    Plateau { start: NodeId, end: NodeId, plateau_length: Weight, partition: usize },
    Disjoint { round: usize },
    Yen { index: usize },
    Pareto { costs: Vec<Weight> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub path: Path,
    /// Lower is better.
    pub rank_key: Weight,
    pub provenance: Provenance,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MethodError {
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("label cap of {cap} exceeded; {} partial candidates", partial.len())]
    LabelCapExceeded { cap: usize, partial: Vec<Candidate> },
}

pub(crate) fn check_endpoints(node_count: usize, s: NodeId, t: NodeId) -> Result<(), MethodError> {
    for node in [s, t] {
        if node >= node_count {
            return Err(RouteError::NodeOutOfRange { node, node_count }.into());
        }
    }
    if s == t {
        return Err(MethodError::InvalidParameter("source and target must differ".into()));
    }
    Ok(())
}
