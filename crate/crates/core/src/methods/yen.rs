use std::collections::{BTreeSet, HashSet};

use crate::dijkstra::{dijkstra_with, shortest_path_with, Direction, RouteError, SearchOptions};
use crate::graph::{factor_from_f64, EdgeId, NodeId, Path, RoadGraph, Weight, WeightOverlay, INFINITY};

use super::{check_endpoints, Candidate, MethodError, Provenance};

/// Largest supported `k`.
pub const MAX_K: usize = 1000;

/// The `k` shortest loopless `s`-`t` paths (Yen), dropping everything longer
/// than `(1 + max_stretch) * d(s,t)`.
pub fn yen_candidates(
    graph: &RoadGraph,
    weights: &WeightOverlay,
    s: NodeId,
    t: NodeId,
    k: usize,
    max_stretch: f64,
) -> Result<Vec<Candidate>, MethodError> {
    check_endpoints(graph.node_count(), s, t)?;
    if k == 0 || k > MAX_K {
        return Err(MethodError::InvalidParameter(format!("k must be in 1..={MAX_K}, got {k}")));
    }
    if !(max_stretch >= 0.0) {
        return Err(MethodError::InvalidParameter("max_stretch must be nonnegative".into()));
    }
    let w = weights.weights();
    let to_t = dijkstra_with(graph, w, t, Direction::Backward, SearchOptions::default());
    if !to_t.reachable(s) {
        return Err(RouteError::NoRoute { s, t }.into());
    }
    let base = to_t.dist[s];
    let limit = if max_stretch.is_infinite() {
        INFINITY - 1
    } else {
        let f = factor_from_f64(1.0 + max_stretch);
        (base as u128 * *f.numer() as u128 / *f.denom() as u128).min(INFINITY as u128 - 1) as Weight
    };

    let first = shortest_path_with(graph, w, s, t, SearchOptions::default())?;
    let mut accepted: Vec<Path> = vec![first];
    let mut pending: BTreeSet<(Weight, Vec<EdgeId>)> = BTreeSet::new();
    let mut known: HashSet<Vec<EdgeId>> = HashSet::from([accepted[0].edges.clone()]);
    let mut blocked_edges = vec![false; graph.edge_count()];
    let mut blocked_nodes = vec![false; graph.node_count()];

    while accepted.len() < k {
        let previous = accepted.last().unwrap().clone();
        let mut root_weight = 0;
        for spur_index in 0..previous.edges.len() {
            let spur = previous.nodes[spur_index];
            let root = &previous.edges[..spur_index];
            let mut touched = Vec::new();
            for p in &accepted {
                if p.edges.len() > spur_index && &p.edges[..spur_index] == root {
                    blocked_edges[p.edges[spur_index]] = true;
                    touched.push(p.edges[spur_index]);
                }
            }
            for &node in &previous.nodes[..spur_index] {
                blocked_nodes[node] = true;
            }
            let options = SearchOptions {
                blocked_edges: Some(&blocked_edges),
                blocked_nodes: Some(&blocked_nodes),
                prune: Some((&to_t.dist, limit - root_weight)),
                ..Default::default()
            };
            if let Ok(spur_path) = shortest_path_with(graph, w, spur, t, options) {
                let mut edges = root.to_vec();
                edges.extend_from_slice(&spur_path.edges);
                let weight = root_weight + spur_path.weight;
                if weight <= limit && known.insert(edges.clone()) {
                    pending.insert((weight, edges));
                }
            }
            for e in touched {
                blocked_edges[e] = false;
            }
            for &node in &previous.nodes[..spur_index] {
                blocked_nodes[node] = false;
            }
            root_weight += w[previous.edges[spur_index]];
            if root_weight > limit {
                break;
            }
        }
        let Some((_, edges)) = pending.pop_first() else { break };
        accepted.push(Path::from_edges(graph, s, edges, w).expect("spur paths connect"));
    }

    Ok(accepted
        .into_iter()
        .enumerate()
        .map(|(index, path)| Candidate { rank_key: path.weight, path, provenance: Provenance::Yen { index } })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> RoadGraph {
        RoadGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap()
    }

    #[test]
    fn k_one_is_shortest_path() {
        let g = diamond();
        let c = yen_candidates(&g, &WeightOverlay::main(&g), 0, 3, 1, f64::INFINITY).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].path.weight, 2);
    }

    #[test]
    fn diamond_runs_out_of_paths() {
        let g = diamond();
        let c = yen_candidates(&g, &WeightOverlay::main(&g), 0, 3, 3, f64::INFINITY).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn classic_example() {
        // C=0 D=1 E=2 F=3 G=4 H=5
        let g = RoadGraph::new(
            6,
            &[(0, 1, 3), (0, 2, 2), (1, 3, 4), (2, 1, 1), (2, 3, 2), (2, 4, 3), (3, 4, 2), (3, 5, 1), (4, 5, 2)],
        )
        .unwrap();
        let c = yen_candidates(&g, &WeightOverlay::main(&g), 0, 5, 3, f64::INFINITY).unwrap();
        let nodes: Vec<_> = c.iter().map(|c| (c.path.nodes.clone(), c.path.weight)).collect();
        assert_eq!(nodes, vec![(vec![0, 2, 3, 5], 5), (vec![0, 2, 4, 5], 7), (vec![0, 1, 3, 5], 8)]);
    }

    #[test]
    fn stretch_filter() {
        let g = RoadGraph::new(4, &[(0, 1, 10), (1, 3, 10), (0, 2, 10), (2, 3, 16)]).unwrap();
        let c = yen_candidates(&g, &WeightOverlay::main(&g), 0, 3, 5, 0.25).unwrap();
        assert_eq!(c.len(), 1);
        let c = yen_candidates(&g, &WeightOverlay::main(&g), 0, 3, 5, 0.3).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn parameter_checks() {
        let g = diamond();
        let o = WeightOverlay::main(&g);
        assert!(matches!(yen_candidates(&g, &o, 0, 3, 0, 1.0), Err(MethodError::InvalidParameter(_))));
        assert!(matches!(yen_candidates(&g, &o, 0, 3, MAX_K + 1, 1.0), Err(MethodError::InvalidParameter(_))));
        assert!(matches!(yen_candidates(&g, &o, 3, 0, 2, 1.0), Err(MethodError::Route(_))));
    }
}
