//! Multi-criteria label-setting search with tightened domination.
//!
//! Labels are settled in lexicographic order of their cost vectors; the first
//! criterion is the path length. Besides componentwise domination a label
//! `p1` also dominates `p2` when
//!
//! * `p2` is at least `(1 + epsilon)` times longer, or
//! * `p2` is longer and `sum(other costs of p2) / sum(other costs of p1) >
//!   length(p1) / (gamma * length(p2))`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::dijkstra::{dijkstra_with, shortest_path_with, Direction, RouteError, SearchOptions};
use crate::graph::{factor_from_f64, Factor, GraphError, NodeId, Path, RoadGraph, Weight, INFINITY};

use super::{check_endpoints, Candidate, MethodError, Provenance};

/// Name of the derived criterion added by [`with_overlap_criterion`].
pub const OVERLAP_WEIGHT_NAME: &str = "sp_overlap";

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParetoConfig {
    /// Length slack; `None` disables the rule.
    pub epsilon: Option<f64>,
    /// Trade-off constant; `None` disables the rule.
    pub gamma: Option<f64>,
    /// Weight functions used as criteria. The first one is the length.
    pub weights: Vec<String>,
}

impl ParetoConfig {
    pub fn untightened(weights: Vec<String>) -> Self {
        ParetoConfig { epsilon: None, gamma: None, weights }
    }

    fn check(&self) -> Result<(), MethodError> {
        if self.weights.len() < 2 {
            return Err(MethodError::InvalidParameter("at least two criteria are required".into()));
        }
        if self.epsilon.is_some_and(|e| !(e > 0.0)) || self.gamma.is_some_and(|g| !(g > 0.0)) {
            return Err(MethodError::InvalidParameter("epsilon and gamma must be positive".into()));
        }
        Ok(())
    }
}

struct Rules {
    epsilon: Option<Factor>,
    gamma: Option<f64>,
}

impl Rules {
    fn new(cfg: &ParetoConfig) -> Self {
        Rules {
            epsilon: cfg.epsilon.filter(|e| e.is_finite()).map(|e| factor_from_f64(1.0 + e)),
            gamma: cfg.gamma.filter(|g| g.is_finite()),
        }
    }

    /// `length >= (1 + epsilon) * reference`
    fn far_longer(&self, length: Weight, reference: Weight) -> bool {
        self.epsilon.is_some_and(|f| length as u128 * *f.denom() as u128 >= reference as u128 * *f.numer() as u128)
    }

    fn dominates(&self, a: &[Weight], b: &[Weight]) -> bool {
        if a.iter().zip(b).all(|(x, y)| x <= y) {
            return true;
        }
        if self.far_longer(b[0], a[0]) {
            return true;
        }
        if let Some(gamma) = self.gamma {
            if b[0] > a[0] {
                let rest_a: Weight = a[1..].iter().sum();
                let rest_b: Weight = b[1..].iter().sum();
                return rest_b as f64 * gamma * b[0] as f64 > a[0] as f64 * rest_a as f64;
            }
        }
        false
    }
}

/// Whether a path with costs `a` dominates one with costs `b` under the
/// rules of `cfg` (equal cost vectors dominate each other).
pub fn dominates(cfg: &ParetoConfig, a: &[Weight], b: &[Weight]) -> bool {
    Rules::new(cfg).dominates(a, b)
}

struct Label {
    node: NodeId,
    costs: Vec<Weight>,
    parent: Option<(usize, usize)>,
    alive: bool,
}

pub fn pareto_candidates(
    graph: &RoadGraph,
    s: NodeId,
    t: NodeId,
    cfg: &ParetoConfig,
    label_cap: usize,
) -> Result<Vec<Candidate>, MethodError> {
    check_endpoints(graph.node_count(), s, t)?;
    cfg.check()?;
    let criteria: Vec<&[Weight]> = cfg.weights.iter().map(|name| graph.weights(name)).collect::<Result<_, _>>()?;
    let rules = Rules::new(cfg);

    let to_t = dijkstra_with(graph, criteria[0], t, Direction::Backward, SearchOptions::default());
    if !to_t.reachable(s) {
        return Err(RouteError::NoRoute { s, t }.into());
    }
    let base = to_t.dist[s];
    // anything that cannot beat (1 + epsilon) * d(s,t) ends up dominated by the shortest path at t
    let hopeless = |length: Weight, node: NodeId| {
        to_t.dist[node] == INFINITY || {
            let best = length + to_t.dist[node];
            best > base && rules.far_longer(best, base)
        }
    };

    let mut labels = vec![Label { node: s, costs: vec![0; criteria.len()], parent: None, alive: true }];
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); graph.node_count()];
    bags[s].push(0);
    let mut queue = BinaryHeap::from([Reverse((labels[0].costs.clone(), s, 0usize))]);

    while let Some(Reverse((_, node, id))) = queue.pop() {
        if !labels[id].alive || node == t {
            continue;
        }
        for &e in graph.out_edges(node) {
            let v = graph.head(e);
            let costs: Vec<Weight> = labels[id].costs.iter().zip(&criteria).map(|(c, w)| c + w[e]).collect();
            if hopeless(costs[0], v) {
                continue;
            }
            if bags[v].iter().any(|&other| rules.dominates(&labels[other].costs, &costs)) {
                continue;
            }
            bags[v].retain(|&other| {
                let keep = !rules.dominates(&costs, &labels[other].costs);
                if !keep {
                    labels[other].alive = false;
                }
                keep
            });
            let new_id = labels.len();
            labels.push(Label { node: v, costs: costs.clone(), parent: Some((id, e)), alive: true });
            bags[v].push(new_id);
            queue.push(Reverse((costs, v, new_id)));
            if labels.len() > label_cap {
                return Err(MethodError::LabelCapExceeded {
                    cap: label_cap,
                    partial: decode(graph, &labels, &bags[t], s, criteria[0]),
                });
            }
        }
    }
    Ok(decode(graph, &labels, &bags[t], s, criteria[0]))
}

fn decode(graph: &RoadGraph, labels: &[Label], bag: &[usize], s: NodeId, length: &[Weight]) -> Vec<Candidate> {
    let mut ids: Vec<usize> = bag.iter().copied().filter(|&id| labels[id].alive).collect();
    ids.sort_by(|&a, &b| labels[a].costs.cmp(&labels[b].costs));
    ids.into_iter()
        .map(|id| {
            let mut edges = Vec::new();
            let mut at = id;
            while let Some((parent, e)) = labels[at].parent {
                edges.push(e);
                at = parent;
            }
            edges.reverse();
            debug_assert_eq!(labels[at].node, s);
            let path = Path::from_edges(graph, s, edges, length).expect("label chain is a path");
            Candidate {
                rank_key: path.weight,
                path,
                provenance: Provenance::Pareto { costs: labels[id].costs.clone() },
            }
        })
        .collect()
}

/// Copy of `graph` with an extra criterion that charges the main weight on
/// edges of the shortest `s`-`t` path and nothing elsewhere, so minimizing it
/// favors routes that share little with the shortest path.
pub fn with_overlap_criterion(graph: &RoadGraph, s: NodeId, t: NodeId) -> Result<RoadGraph, MethodError> {
    let main = graph.main_weights();
    let shortest = shortest_path_with(graph, main, s, t, SearchOptions::default())?;
    let mut overlap = vec![0; graph.edge_count()];
    for &e in &shortest.edges {
        overlap[e] = main[e];
    }
    let mut out = graph.clone();
    match out.add_weight_function(OVERLAP_WEIGHT_NAME, overlap) {
        Ok(()) | Err(GraphError::DuplicateWeightFunction(_)) => Ok(out),
        Err(e) => Err(e.into()),
    }
}
