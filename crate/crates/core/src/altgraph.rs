//! Alternative graphs: unions of `s`-`t` paths in which every node and every
//! edge lies on some `s`-`t` path, and where each edge stands for a path of the
//! road graph with the same weight.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, NodeId, Path, RoadGraph, Weight, INFINITY};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AgError {
    #[error("path {index} is not a valid {s}-{t} path: {reason}")]
    InvalidPath { index: usize, s: NodeId, t: NodeId, reason: String },
    #[error("alternative graphs have different endpoints")]
    MixedEndpoints,
    #[error("source and target must differ (both are {0})")]
    SameEndpoints(NodeId),
    #[error("no alternative graph given")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edge of an alternative graph, standing for `underlying`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: Weight,
    pub underlying: Path,
}

impl AgEdge {
    fn single(graph: &RoadGraph, weights: &[Weight], edge: EdgeId) -> Self {
        let (from, to) = (graph.tail(edge), graph.head(edge));
        AgEdge {
            from,
            to,
            weight: weights[edge],
            underlying: Path {
                source: from,
                target: to,
                nodes: vec![from, to],
                edges: vec![edge],
                weight: weights[edge],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeGraph {
    pub s: NodeId,
    pub t: NodeId,
    /// Weight function all edge weights refer to.
    pub main_weight: String,
    /// Sorted node ids; always contains `s` and `t`.
    pub nodes: Vec<NodeId>,
    /// Sorted by `(from, to, underlying)`.
    pub edges: Vec<AgEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingEndpoint(NodeId),
    NodeNotOnPath(NodeId),
    EdgeNotOnPath { index: usize, from: NodeId, to: NodeId },
    UnknownEdgeEndpoint { index: usize, node: NodeId },
    WeightMismatch { index: usize, stated: Weight, underlying: Weight },
    UnderlyingMismatch { index: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingEndpoint(n) => write!(f, "endpoint {n} missing from node list"),
            Violation::NodeNotOnPath(n) => write!(f, "node {n} lies on no s-t path"),
            Violation::EdgeNotOnPath { index, from, to } => {
                write!(f, "edge #{index} ({from}->{to}) lies on no s-t path")
            }
            Violation::UnknownEdgeEndpoint { index, node } => {
                write!(f, "edge #{index} uses node {node} which is not in the node list")
            }
            Violation::WeightMismatch { index, stated, underlying } => {
                write!(f, "edge #{index} has weight {stated} but its underlying path weighs {underlying}")
            }
            Violation::UnderlyingMismatch { index } => {
                write!(f, "edge #{index} does not match the endpoints of its underlying path")
            }
        }
    }
}

/// Compact adjacency over the alternative graph's own node set.
pub(crate) struct LocalGraph {
    pub nodes: Vec<NodeId>,
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
    pub tails: Vec<usize>,
    pub heads: Vec<usize>,
    pub s: usize,
    pub t: usize,
}

impl LocalGraph {
    /// Panics if an edge endpoint or `s`/`t` is missing from the node list;
    /// call [`validate`] first for untrusted input.
    pub fn new(ag: &AlternativeGraph) -> Self {
        let idx = |v: NodeId| ag.nodes.binary_search(&v).expect("node in alternative graph");
        let n = ag.nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut tails = Vec::with_capacity(ag.edges.len());
        let mut heads = Vec::with_capacity(ag.edges.len());
        for (i, e) in ag.edges.iter().enumerate() {
            let (u, v) = (idx(e.from), idx(e.to));
            out[u].push(i);
            inc[v].push(i);
            tails.push(u);
            heads.push(v);
        }
        LocalGraph { nodes: ag.nodes.clone(), out, inc, tails, heads, s: idx(ag.s), t: idx(ag.t) }
    }

    pub fn reach(&self, from: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            let edges = if forward { &self.out[u] } else { &self.inc[u] };
            for &e in edges {
                let v = if forward { self.heads[e] } else { self.tails[e] };
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Dijkstra inside the alternative graph with the given edge weights.
    pub fn distances(&self, weights: &[Weight], from: usize, forward: bool) -> Vec<Weight> {
        let mut dist = vec![INFINITY; self.nodes.len()];
        dist[from] = 0;
        let mut queue = BinaryHeap::from([Reverse((0, from))]);
        while let Some(Reverse((d, u))) = queue.pop() {
            if d > dist[u] {
                continue;
            }
            let edges = if forward { &self.out[u] } else { &self.inc[u] };
            for &e in edges {
                // an infinite weight marks a removed edge
                if weights[e] == INFINITY {
                    continue;
                }
                let v = if forward { self.heads[e] } else { self.tails[e] };
                let nd = d + weights[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    queue.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }
}

impl AlternativeGraph {
    /// Assembles an alternative graph from parts, sorting nodes and edges.
    /// No validity check is made.
    pub fn from_parts(
        s: NodeId,
        t: NodeId,
        main_weight: &str,
        nodes: impl IntoIterator<Item = NodeId>,
        mut edges: Vec<AgEdge>,
    ) -> Self {
        let mut nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        nodes.insert(s);
        nodes.insert(t);
        edges.sort();
        AlternativeGraph { s, t, main_weight: main_weight.to_string(), nodes: nodes.into_iter().collect(), edges }
    }

    /// Union of `s`-`t` paths under the graph's main weight function. Every
    /// road edge used by any path becomes one edge of the result.
    pub fn from_paths(graph: &RoadGraph, paths: &[Path], s: NodeId, t: NodeId) -> Result<Self, AgError> {
        Self::from_paths_with(graph, graph.main_weight_name(), paths, s, t)
    }

    pub fn from_paths_with(
        graph: &RoadGraph,
        weight_name: &str,
        paths: &[Path],
        s: NodeId,
        t: NodeId,
    ) -> Result<Self, AgError> {
        if s == t {
            return Err(AgError::SameEndpoints(s));
        }
        let invalid = |index: usize, reason: &str| AgError::InvalidPath { index, s, t, reason: reason.into() };
        let mut edges = BTreeSet::new();
        for (index, path) in paths.iter().enumerate() {
            if path.source != s || path.target != t {
                return Err(invalid(index, "wrong endpoints"));
            }
            let mut at = s;
            for &e in &path.edges {
                if e >= graph.edge_count() || graph.tail(e) != at {
                    return Err(invalid(index, "edges are not consecutive"));
                }
                at = graph.head(e);
            }
            if at != t {
                return Err(invalid(index, "does not end at the target"));
            }
            edges.extend(path.edges.iter().copied());
        }
        Self::from_edge_set(graph, weight_name, s, t, edges)
    }

    /// Alternative graph over a set of road edges, pruned to the part that lies
    /// on `s`-`t` paths.
    pub fn from_edge_set(
        graph: &RoadGraph,
        weight_name: &str,
        s: NodeId,
        t: NodeId,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, AgError> {
        if s == t {
            return Err(AgError::SameEndpoints(s));
        }
        let weights = graph.weights(weight_name)?;
        let edges: BTreeSet<EdgeId> = edges.into_iter().collect();
        let nodes = edges.iter().flat_map(|&e| [graph.tail(e), graph.head(e)]);
        let ag_edges = edges.iter().map(|&e| AgEdge::single(graph, weights, e)).collect();
        Ok(prune(&Self::from_parts(s, t, weight_name, nodes.collect::<Vec<_>>(), ag_edges)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    /// All road edges used by the underlying paths, without duplicates.
    pub fn road_edges(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().flat_map(|e| e.underlying.edges.iter().copied()).collect()
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn outdegree(&self, node: NodeId) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    pub(crate) fn local(&self) -> LocalGraph {
        LocalGraph::new(self)
    }

    /// Shortest `s`-`t` path inside the alternative graph, expanded to road
    /// edges.
    pub fn shortest_path(&self) -> Option<Path> {
        let local = self.local();
        let weights: Vec<_> = self.edges.iter().map(|e| e.weight).collect();
        let to_t = local.distances(&weights, local.t, false);
        if to_t[local.s] == INFINITY {
            return None;
        }
        let mut at = local.s;
        let mut path: Option<Path> = None;
        while at != local.t {
            let next = local.out[at]
                .iter()
                .copied()
                .filter(|&e| to_t[local.heads[e]] != INFINITY && weights[e] + to_t[local.heads[e]] == to_t[at])
                .min_by_key(|&e| (local.heads[e] == at, e))?;
            let piece = &self.edges[next].underlying;
            path = Some(match path {
                None => piece.clone(),
                Some(p) => p.concat(piece),
            });
            at = local.heads[next];
        }
        path
    }
}

/// Lists every way in which `ag` fails to be an alternative graph.
pub fn validate(ag: &AlternativeGraph) -> Vec<Violation> {
    let mut violations = Vec::new();
    for endpoint in [ag.s, ag.t] {
        if !ag.contains_node(endpoint) {
            violations.push(Violation::MissingEndpoint(endpoint));
        }
    }
    for (index, e) in ag.edges.iter().enumerate() {
        for node in [e.from, e.to] {
            if !ag.contains_node(node) {
                violations.push(Violation::UnknownEdgeEndpoint { index, node });
            }
        }
        let u = &e.underlying;
        let consistent = u.source == e.from
            && u.target == e.to
            && u.nodes.first() == Some(&e.from)
            && u.nodes.last() == Some(&e.to)
            && u.nodes.len() == u.edges.len() + 1;
        if !consistent {
            violations.push(Violation::UnderlyingMismatch { index });
        }
        if e.weight != u.weight {
            violations.push(Violation::WeightMismatch { index, stated: e.weight, underlying: u.weight });
        }
    }
    if !violations.is_empty() {
        return violations;
    }
    let local = ag.local();
    let from_s = local.reach(local.s, true);
    let to_t = local.reach(local.t, false);
    for (i, &node) in local.nodes.iter().enumerate() {
        if !(from_s[i] && to_t[i]) {
            violations.push(Violation::NodeNotOnPath(node));
        }
    }
    for (index, e) in ag.edges.iter().enumerate() {
        if !(from_s[local.tails[index]] && to_t[local.heads[index]]) {
            violations.push(Violation::EdgeNotOnPath { index, from: e.from, to: e.to });
        }
    }
    violations
}

/// Like [`validate`], additionally checking every underlying path against the
/// road graph and its weights.
pub fn validate_against(ag: &AlternativeGraph, graph: &RoadGraph) -> Vec<Violation> {
    let mut violations = validate(ag);
    let Ok(weights) = graph.weights(&ag.main_weight) else {
        return violations;
    };
    for (index, e) in ag.edges.iter().enumerate() {
        let rebuilt = Path::from_edges(graph, e.from, e.underlying.edges.clone(), weights);
        match rebuilt {
            Some(p) if p.nodes == e.underlying.nodes => {
                if p.weight != e.weight {
                    violations.push(Violation::WeightMismatch { index, stated: e.weight, underlying: p.weight });
                }
            }
            _ => violations.push(Violation::UnderlyingMismatch { index }),
        }
    }
    violations
}

/// Removes nodes and edges that lie on no `s`-`t` path, until nothing changes.
pub fn prune(ag: &AlternativeGraph) -> AlternativeGraph {
    let mut current = ag.clone();
    loop {
        let local = current.local();
        let from_s = local.reach(local.s, true);
        let to_t = local.reach(local.t, false);
        let keep: Vec<bool> =
            (0..current.edges.len()).map(|e| from_s[local.tails[e]] && to_t[local.heads[e]]).collect();
        let node_ok = |i: usize| from_s[i] && to_t[i];
        if keep.iter().all(|&k| k) && (0..local.nodes.len()).all(node_ok) {
            return current;
        }
        let edges: Vec<_> = current.edges.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e.clone()).collect();
        let nodes = edges.iter().flat_map(|e| [e.from, e.to]).collect::<Vec<_>>();
        current = AlternativeGraph::from_parts(current.s, current.t, &current.main_weight, nodes, edges);
    }
}

/// Contracts every node other than `s` and `t` with exactly one incoming and
/// one outgoing edge. Contracted edges carry the concatenated path.
pub fn reduce(ag: &AlternativeGraph) -> AlternativeGraph {
    let local = ag.local();
    let mut edges: Vec<Option<AgEdge>> = ag.edges.iter().cloned().map(Some).collect();
    let mut out = local.out.clone();
    let mut inc = local.inc.clone();
    let mut removed = vec![false; local.nodes.len()];

    for v in 0..local.nodes.len() {
        if v == local.s || v == local.t || inc[v].len() != 1 || out[v].len() != 1 || inc[v][0] == out[v][0] {
            continue;
        }
        let (e_in, e_out) = (inc[v][0], out[v][0]);
        let first = edges[e_in].take().unwrap();
        let second = edges[e_out].take().unwrap();
        let merged = AgEdge {
            from: first.from,
            to: second.to,
            weight: first.weight + second.weight,
            underlying: first.underlying.concat(&second.underlying),
        };
        let id = edges.len();
        edges.push(Some(merged));
        let tail = local.nodes.binary_search(&first.from).unwrap();
        let head = local.nodes.binary_search(&second.to).unwrap();
        for slot in out[tail].iter_mut().filter(|e| **e == e_in) {
            *slot = id;
        }
        for slot in inc[head].iter_mut().filter(|e| **e == e_out) {
            *slot = id;
        }
        removed[v] = true;
    }

    let nodes = local.nodes.iter().zip(&removed).filter(|(_, &r)| !r).map(|(&n, _)| n);
    AlternativeGraph::from_parts(
        ag.s,
        ag.t,
        &ag.main_weight,
        nodes.collect::<Vec<_>>(),
        edges.into_iter().flatten().collect(),
    )
}

/// Union of several alternative graphs over the same endpoints, re-weighted
/// under `main_weight`, pruned to a valid alternative graph and reduced.
pub fn merge(graph: &RoadGraph, ags: &[AlternativeGraph], main_weight: &str) -> Result<AlternativeGraph, AgError> {
    let first = ags.first().ok_or(AgError::Empty)?;
    if ags.iter().any(|ag| ag.s != first.s || ag.t != first.t) {
        return Err(AgError::MixedEndpoints);
    }
    let edges: BTreeSet<EdgeId> = ags.iter().flat_map(|ag| ag.road_edges()).collect();
    let union = AlternativeGraph::from_edge_set(graph, main_weight, first.s, first.t, edges)?;
    Ok(reduce(&union))
}

/// Number of loop-free `s`-`t` paths, saturating at `cap`.
pub fn count_simple_paths(ag: &AlternativeGraph, cap: u64) -> u64 {
    assert!(cap >= 1, "cap must be positive");
    let reduced = reduce(ag);
    let local = reduced.local();
    let mut on_stack = vec![false; local.nodes.len()];
    let mut count = 0u64;
    // (node, next out-edge position)
    let mut stack = vec![(local.s, 0usize)];
    on_stack[local.s] = true;
    while let Some(top) = stack.last_mut() {
        let u = top.0;
        if u == local.t || top.1 >= local.out[u].len() {
            if u == local.t {
                count += 1;
                if count >= cap {
                    return cap;
                }
            }
            on_stack[u] = false;
            stack.pop();
            continue;
        }
        let e = local.out[u][top.1];
        top.1 += 1;
        let v = local.heads[e];
        if !on_stack[v] {
            on_stack[v] = true;
            stack.push((v, 0));
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RoadGraph;

    /// s=0, a=1, b=2, t=3 with unit weights.
    fn diamond() -> (RoadGraph, Vec<Path>) {
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let w = g.main_weights();
        let p1 = Path::from_edges(&g, 0, vec![0, 1], w).unwrap();
        let p2 = Path::from_edges(&g, 0, vec![2, 3], w).unwrap();
        (g, vec![p1, p2])
    }

    #[test]
    fn single_path_union() {
        let (g, paths) = diamond();
        let ag = AlternativeGraph::from_paths(&g, &paths[..1], 0, 3).unwrap();
        assert_eq!(ag.nodes, vec![0, 1, 3]);
        assert_eq!(ag.edges.len(), 2);
        assert!(validate(&ag).is_empty());
    }

    #[test]
    fn diamond_union_has_four_edges() {
        let (g, paths) = diamond();
        let ag = AlternativeGraph::from_paths(&g, &paths, 0, 3).unwrap();
        assert_eq!(ag.edges.len(), 4);
        assert!(validate(&ag).is_empty());
        assert!(validate_against(&ag, &g).is_empty());
    }

    #[test]
    fn invalid_paths_are_rejected() {
        let (g, paths) = diamond();
        assert!(matches!(AlternativeGraph::from_paths(&g, &paths, 0, 2), Err(AgError::InvalidPath { index: 0, .. })));
        assert_eq!(AlternativeGraph::from_paths(&g, &paths, 1, 1), Err(AgError::SameEndpoints(1)));
        let mut broken = paths[0].clone();
        broken.edges = vec![0, 3];
        assert!(matches!(AlternativeGraph::from_paths(&g, &[broken], 0, 3), Err(AgError::InvalidPath { .. })));
    }

    #[test]
    fn dangling_edge_is_reported() {
        let g = RoadGraph::new(5, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1)]).unwrap();
        let mut ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 3, [0, 1, 2, 3]).unwrap();
        ag.edges.push(AgEdge::single(&g, g.main_weights(), 4));
        ag.nodes.push(4);
        let v = validate(&ag);
        assert_eq!(v, vec![Violation::NodeNotOnPath(4), Violation::EdgeNotOnPath { index: 4, from: 3, to: 4 }]);
    }

    #[test]
    fn tampered_weight_is_reported() {
        let (g, paths) = diamond();
        let mut ag = AlternativeGraph::from_paths(&g, &paths, 0, 3).unwrap();
        ag.edges[1].weight = 7;
        assert_eq!(validate(&ag), vec![Violation::WeightMismatch { index: 1, stated: 7, underlying: 1 }]);
    }

    #[test]
    fn chain_collapses_to_one_edge() {
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let p = Path::from_edges(&g, 0, vec![0, 1, 2], g.main_weights()).unwrap();
        let ag = AlternativeGraph::from_paths(&g, std::slice::from_ref(&p), 0, 3).unwrap();
        let r = reduce(&ag);
        assert_eq!(r.nodes, vec![0, 3]);
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.edges[0].weight, 3);
        assert_eq!(r.edges[0].underlying, p);
        assert_eq!(reduce(&r), r);
    }

    #[test]
    fn diamond_with_two_edge_arms_reduces_to_parallel_edges() {
        let (g, paths) = diamond();
        let r = reduce(&AlternativeGraph::from_paths(&g, &paths, 0, 3).unwrap());
        assert_eq!(r.edges.len(), 2);
        assert!(r.edges.iter().all(|e| e.from == 0 && e.to == 3 && e.weight == 2));
        assert!(validate(&r).is_empty());
    }

    #[test]
    fn merge_rejects_mixed_endpoints() {
        let (g, paths) = diamond();
        let a = AlternativeGraph::from_paths(&g, &paths[..1], 0, 3).unwrap();
        let b = AlternativeGraph::from_edge_set(&g, "weight", 0, 1, [0]).unwrap();
        assert_eq!(merge(&g, &[a, b], "weight"), Err(AgError::MixedEndpoints));
        assert_eq!(merge(&g, &[], "weight"), Err(AgError::Empty));
    }

    #[test]
    fn merge_with_itself_is_reduction() {
        let (g, paths) = diamond();
        let ag = AlternativeGraph::from_paths(&g, &paths, 0, 3).unwrap();
        assert_eq!(merge(&g, &[ag.clone(), ag.clone()], "weight").unwrap(), reduce(&ag));
        let a = AlternativeGraph::from_paths(&g, &paths[..1], 0, 3).unwrap();
        let b = AlternativeGraph::from_paths(&g, &paths[1..], 0, 3).unwrap();
        let m = merge(&g, &[a, b], "weight").unwrap();
        assert_eq!(m.edges.len(), 2);
        assert_eq!(count_simple_paths(&m, 100), 2);
    }

    #[test]
    fn path_counts() {
        let (g, paths) = diamond();
        let ag = AlternativeGraph::from_paths(&g, &paths, 0, 3).unwrap();
        assert_eq!(count_simple_paths(&ag, 100), 2);
        assert_eq!(count_simple_paths(&ag, 1), 1);

        // two diamonds in a row: 0 -> {1,2} -> 3 -> {4,5} -> 6
        let g = RoadGraph::new(
            7,
            &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1), (3, 5, 1), (4, 6, 1), (5, 6, 1)],
        )
        .unwrap();
        let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 6, 0..8).unwrap();
        assert_eq!(count_simple_paths(&ag, 1000), 4);
    }

    #[test]
    fn loops_do_not_count() {
        // s=0 -> 1 -> t=2, with 1 -> 3 -> 1 loop
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 2, 1), (1, 3, 1), (3, 1, 1)]).unwrap();
        let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 2, 0..4).unwrap();
        assert!(validate(&ag).is_empty());
        assert_eq!(ag.edges.len(), 4);
        assert_eq!(count_simple_paths(&ag, 100), 1);
        let r = reduce(&ag);
        assert!(validate(&r).is_empty());
        assert_eq!(reduce(&r), r);
    }

    #[test]
    fn shortest_path_inside() {
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 5)]).unwrap();
        let ag = reduce(&AlternativeGraph::from_edge_set(&g, "weight", 0, 3, 0..4).unwrap());
        let p = ag.shortest_path().unwrap();
        assert_eq!(p.edges, vec![0, 1]);
        assert_eq!(p.weight, 2);
    }
}
