use crate::dijkstra::{shortest_path_with, RouteError, SearchOptions};
use crate::graph::{NodeId, RoadGraph, WeightOverlay};

use super::{check_endpoints, Candidate, MethodError, Provenance};

/// Repeatedly takes the shortest path and deletes its edges, until `t` is
/// cut off or `max_candidates` paths are found.
pub fn disjoint_candidates(
    graph: &RoadGraph,
    weights: &WeightOverlay,
    s: NodeId,
    t: NodeId,
    max_candidates: usize,
) -> Result<Vec<Candidate>, MethodError> {
    check_endpoints(graph.node_count(), s, t)?;
    let mut deleted = vec![false; graph.edge_count()];
    let mut candidates = Vec::new();
    while candidates.len() < max_candidates.max(1) {
        let options = SearchOptions { blocked_edges: Some(&deleted), ..Default::default() };
        let path = match shortest_path_with(graph, weights.weights(), s, t, options) {
            Ok(path) => path,
            Err(RouteError::NoRoute { .. }) if !candidates.is_empty() => break,
            Err(e) => return Err(e.into()),
        };
        for &e in &path.edges {
            deleted[e] = true;
        }
        let round = candidates.len();
        candidates.push(Candidate { rank_key: path.weight, path, provenance: Provenance::Disjoint { round } });
    }
    Ok(candidates)
}
