use crate::dijkstra::{dijkstra_with, Direction, RouteError, SearchOptions};
use crate::graph::{EdgeId, NodeId, Path, RoadGraph, Weight, WeightOverlay};

use super::{check_endpoints, Candidate, MethodError, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateauConfig {
    pub max_candidates: usize,
    /// Number of pieces the shortest path is cut into; every piece gets its
    /// own plateau alternatives spliced into the shortest path. `1` disables
    /// partitioning.
    pub partitions: usize,
}

impl Default for PlateauConfig {
    fn default() -> Self {
        PlateauConfig { max_candidates: 16, partitions: 1 }
    }
}

pub fn plateau_candidates(
    graph: &RoadGraph,
    weights: &WeightOverlay,
    s: NodeId,
    t: NodeId,
    max_candidates: usize,
) -> Result<Vec<Candidate>, MethodError> {
    plateau_candidates_with(graph, weights, s, t, &PlateauConfig { max_candidates, partitions: 1 })
}

/// Plateau alternatives: intersect the forward tree from `s` with the
/// backward tree from `t`, complete every plateau with tree paths, rank by
/// `path length - plateau length`.
pub fn plateau_candidates_with(
    graph: &RoadGraph,
    weights: &WeightOverlay,
    s: NodeId,
    t: NodeId,
    cfg: &PlateauConfig,
) -> Result<Vec<Candidate>, MethodError> {
    check_endpoints(graph.node_count(), s, t)?;
    if cfg.partitions == 0 {
        return Err(MethodError::InvalidParameter("partitions must be at least 1".into()));
    }
    let w = weights.weights();
    let mut candidates = plateaus(graph, w, s, t, 0)?;
    let base = candidates[0].path.clone();

    if cfg.partitions > 1 {
        let pieces = cfg.partitions.min(base.len());
        for k in 0..pieces {
            let (from, to) = (k * base.len() / pieces, (k + 1) * base.len() / pieces);
            let (a, b) = (base.nodes[from], base.nodes[to]);
            let prefix = Path::from_edges(graph, s, base.edges[..from].to_vec(), w).unwrap();
            let suffix = Path::from_edges(graph, b, base.edges[to..].to_vec(), w).unwrap();
            for piece in plateaus(graph, w, a, b, k + 1)?.into_iter().skip(1) {
                let path = prefix.concat(&piece.path).concat(&suffix);
                if !path.is_simple() {
                    continue;
                }
                let Provenance::Plateau { plateau_length, .. } = piece.provenance else { unreachable!() };
                candidates.push(Candidate { rank_key: path.weight - plateau_length, path, ..piece });
            }
        }
        candidates[1..].sort_by(|x, y| {
            (x.rank_key, x.path.weight, &x.path.edges).cmp(&(y.rank_key, y.path.weight, &y.path.edges))
        });
        let mut seen = std::collections::HashSet::new();
        candidates.retain(|c| seen.insert(c.path.edges.clone()));
    }

    candidates.truncate(cfg.max_candidates.max(1));
    Ok(candidates)
}

fn plateaus(
    graph: &RoadGraph,
    w: &[Weight],
    s: NodeId,
    t: NodeId,
    partition: usize,
) -> Result<Vec<Candidate>, MethodError> {
    let forward = dijkstra_with(graph, w, s, Direction::Forward, SearchOptions::default());
    let base_edges = forward.edges_to(graph, t).ok_or(RouteError::NoRoute { s, t })?;

    // On ties the backward search prefers the base path, then any forward
    // tree edge.
    let mut tie_rank = vec![2u8; graph.edge_count()];
    for e in forward.parent_edge.iter().flatten() {
        tie_rank[*e] = 1;
    }
    for &e in &base_edges {
        tie_rank[e] = 0;
    }
    let mut backward = dijkstra_with(
        graph,
        w,
        t,
        Direction::Backward,
        SearchOptions { tie_rank: Some(&tie_rank), ..Default::default() },
    );
    // Zero-weight ties can settle a base path node before its successor; pin
    // the base path so it is always one whole plateau.
    for &e in &base_edges {
        debug_assert_eq!(backward.dist[graph.tail(e)], w[e] + backward.dist[graph.head(e)]);
        backward.parent_edge[graph.tail(e)] = Some(e);
    }

    let in_both =
        |e: EdgeId| forward.parent_edge[graph.head(e)] == Some(e) && backward.parent_edge[graph.tail(e)] == Some(e);
    // every node has at most one backward parent, so at most one plateau edge leaves it
    let next: Vec<Option<EdgeId>> =
        (0..graph.node_count()).map(|u| backward.parent_edge[u].filter(|&e| in_both(e))).collect();

    let mut candidates = Vec::new();
    for start in 0..graph.node_count() {
        if next[start].is_none() || forward.parent_edge[start].is_some_and(in_both) {
            continue;
        }
        let mut plateau = Vec::new();
        let mut end = start;
        while let Some(e) = next[end] {
            plateau.push(e);
            end = graph.head(e);
        }
        let plateau_length = forward.dist[end] - forward.dist[start];
        let mut edges = forward.edges_to(graph, start).expect("plateau start is reachable");
        edges.extend_from_slice(&plateau);
        edges.extend(backward.edges_to(graph, end).expect("plateau end reaches t"));
        let path = Path::from_edges(graph, s, edges, w).expect("tree paths connect");
        debug_assert_eq!(path.weight, forward.dist[start] + backward.dist[start]);
        if !path.is_simple() {
            continue;
        }
        candidates.push(Candidate {
            rank_key: path.weight - plateau_length,
            path,
            provenance: Provenance::Plateau { start, end, plateau_length, partition },
        });
    }
    candidates
        .sort_by(|x, y| (x.rank_key, x.path.weight, &x.path.edges).cmp(&(y.rank_key, y.path.weight, &y.path.edges)));
    debug_assert!(candidates[0].rank_key == 0 && candidates[0].path.edges == base_edges);
    Ok(candidates)
}
