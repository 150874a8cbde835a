//! Greedy assembly of an alternative graph from candidate paths, and
//! removal of branches that do not pay off.

use num_rational::BigRational;
use thiserror::Error;

use crate::altgraph::{prune, reduce, validate, AgError, AlternativeGraph};
use crate::dijkstra::{base_distance, RouteError};
use crate::graph::{EdgeId, NodeId, RoadGraph, Weight, INFINITY};
use crate::methods::Candidate;
use crate::metrics::{
    approx_score, evaluate, score, AgDistances, Evaluation, MetricsError, ObjectiveConfig, RemovalScorer,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SelectionError {
    #[error("no candidate paths to select from")]
    NoCandidates,
    #[error("candidate {index} is not an {s}-{t} path")]
    InvalidCandidate { index: usize, s: NodeId, t: NodeId },
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Ag(#[from] AgError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone)]
pub struct Selection {
    /// Reduced alternative graph of the chosen candidates.
    pub ag: AlternativeGraph,
    /// Indices into the candidate list, in the order they were added.
    pub chosen: Vec<usize>,
    /// Score after each addition.
    pub scores: Vec<BigRational>,
    pub evaluation: Evaluation,
}

/// Starts from the shortest candidate and keeps adding the candidate with the
/// largest strict score gain that leaves the result feasible.
pub fn greedy_select(
    graph: &RoadGraph,
    s: NodeId,
    t: NodeId,
    candidates: &[Candidate],
    cfg: &ObjectiveConfig,
) -> Result<Selection, SelectionError> {
    if candidates.is_empty() {
        return Err(SelectionError::NoCandidates);
    }
    let main = graph.main_weights();
    for (index, c) in candidates.iter().enumerate() {
        let p = &c.path;
        let connected = p.edges.iter().zip(&p.nodes).all(|(&e, &u)| e < graph.edge_count() && graph.tail(e) == u)
            && p.nodes.last() == Some(&t);
        if p.source != s || p.target != t || !connected {
            return Err(SelectionError::InvalidCandidate { index, s, t });
        }
    }
    let d_g_st = base_distance(graph, s, t)?;
    let weight_of = |c: &Candidate| c.path.edges.iter().map(|&e| main[e]).sum::<Weight>();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| (weight_of(&candidates[i]), candidates[i].rank_key, i));

    let build = |edges: &std::collections::BTreeSet<EdgeId>| -> Result<AlternativeGraph, SelectionError> {
        let ag = AlternativeGraph::from_edge_set(graph, graph.main_weight_name(), s, t, edges.iter().copied())?;
        Ok(reduce(&ag))
    };

    let first = order[0];
    let mut edges: std::collections::BTreeSet<EdgeId> = candidates[first].path.edges.iter().copied().collect();
    let mut ag = build(&edges)?;
    let (mut current, _) = score(&ag, d_g_st, cfg)?;
    let (mut current_approx, _) = approx_score(&ag, d_g_st, cfg)?;
    let mut chosen = vec![first];
    let mut scores = vec![current.clone()];
    let mut remaining: Vec<usize> = order[1..].to_vec();

    // candidates are ranked in floating point; the winner is confirmed exactly
    loop {
        let mut best: Option<(usize, AlternativeGraph, f64)> = None;
        for &i in &remaining {
            let path = &candidates[i].path.edges;
            if path.iter().all(|e| edges.contains(e)) {
                continue;
            }
            let mut union = edges.clone();
            union.extend(path.iter().copied());
            let next = build(&union)?;
            let (next_score, feasible) = approx_score(&next, d_g_st, cfg)?;
            if !feasible || next_score <= current_approx {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| next_score > *b) {
                best = Some((i, next, next_score));
            }
        }
        let Some((i, next, next_approx)) = best else { break };
        remaining.retain(|&j| j != i);
        let (next_score, feasible) = score(&next, d_g_st, cfg)?;
        if !feasible || next_score <= current {
            continue;
        }
        edges.extend(candidates[i].path.edges.iter().copied());
        log::debug!("selected candidate {i}, score {next_approx}");
        ag = next;
        current = next_score;
        current_approx = next_approx;
        chosen.push(i);
        scores.push(current.clone());
    }
    let evaluation = evaluate(&ag, d_g_st, cfg)?;
    Ok(Selection { ag, chosen, scores, evaluation })
}

/// For every edge of `ag`, whether it lies on the protected shortest path:
/// among all shortest `s`-`t` paths the one whose road edge sequence is
/// lexicographically smallest. The choice survives removal of other edges.
pub fn protected_edges(ag: &AlternativeGraph) -> Vec<bool> {
    let d = AgDistances::new(ag);
    let local = &d.local;
    let mut on_path = vec![false; ag.edges.len()];
    let mut visited = vec![false; local.nodes.len()];
    let mut at = local.s;
    if d.to_t[at] == INFINITY {
        return on_path;
    }
    while at != local.t {
        visited[at] = true;
        let next = local.out[at]
            .iter()
            .copied()
            .filter(|&e| {
                let v = local.heads[e];
                !visited[v] && d.to_t[v] != INFINITY && d.weights[e] + d.to_t[v] == d.to_t[at]
            })
            .min_by_key(|&e| ag.edges[e].underlying.edges.first().copied());
        let Some(e) = next else { break };
        on_path[e] = true;
        at = local.heads[e];
    }
    on_path
}

/// Alternative graph made of the protected shortest path of `ag` only.
pub fn shortest_path_only(ag: &AlternativeGraph) -> AlternativeGraph {
    let keep = protected_edges(ag);
    let edges: Vec<_> = ag.edges.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e.clone()).collect();
    let nodes: Vec<_> = edges.iter().flat_map(|e| [e.from, e.to]).collect();
    reduce(&AlternativeGraph::from_parts(ag.s, ag.t, &ag.main_weight, nodes, edges))
}

fn without_edge(ag: &AlternativeGraph, index: usize) -> AlternativeGraph {
    let mut edges = ag.edges.clone();
    edges.remove(index);
    let nodes: Vec<_> = edges.iter().flat_map(|e| [e.from, e.to]).collect();
    reduce(&prune(&AlternativeGraph::from_parts(ag.s, ag.t, &ag.main_weight, nodes, edges)))
}

/// Removes whole branches (edges of the reduced graph) until the result is
/// feasible and no removal improves the score. Branches of the protected
/// shortest path are never removed. If the shortest path alone scores better,
/// that is returned instead.
pub fn refine(ag: &AlternativeGraph, d_g_st: Weight, cfg: &ObjectiveConfig) -> Result<AlternativeGraph, MetricsError> {
    let mut current = reduce(ag);
    let violations = validate(&current);
    if !violations.is_empty() {
        return Err(MetricsError::InvalidAg(violations));
    }
    // removals are ranked in floating point; the final comparison is exact
    let (mut value, mut feasible) = approx_score(&current, d_g_st, cfg)?;
    loop {
        let protected = protected_edges(&current);
        let mut scorer = RemovalScorer::new(&current);
        let mut best: Option<(usize, f64, bool)> = None;
        for (i, _) in protected.iter().enumerate().filter(|(_, &p)| !p) {
            let (next_value, next_feasible) = scorer.score_without(i, d_g_st, cfg)?;
            let better = match best {
                None => true,
                Some((_, v, f)) => (next_feasible, next_value) > (f, v),
            };
            if better {
                best = Some((i, next_value, next_feasible));
            }
        }
        let Some((i, next_value, next_feasible)) = best else { break };
        if feasible && !(next_feasible && next_value > value) {
            break;
        }
        let next = without_edge(&current, i);
        log::debug!("refine removed a branch, score {value} -> {next_value}");
        current = next;
        value = next_value;
        feasible = next_feasible;
    }
    let single = shortest_path_only(&current);
    let (exact, feasible) = score(&current, d_g_st, cfg)?;
    let (single_exact, _) = score(&single, d_g_st, cfg)?;
    if !feasible || single_exact > exact {
        return Ok(single);
    }
    Ok(current)
}
