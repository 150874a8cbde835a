//! Single-source shortest path trees on the forward and backward adjacency.
//!
//! Ties are broken deterministically: the queue pops the smaller node id among
//! equal distances, and among equally short parent edges the one with the
//! smaller `(tie_rank, edge id)` wins.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::{EdgeId, NodeId, Path, RoadGraph, Weight, WeightOverlay, INFINITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RouteError {
    #[error("no route from {s} to {t}")]
    NoRoute { s: NodeId, t: NodeId },
    #[error("node {node} is out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: NodeId, node_count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub root: NodeId,
    pub direction: Direction,
    /// Distance from (forward) or to (backward) the root; `INFINITY` if unreachable.
    pub dist: Vec<Weight>,
    /// Edge through which each node was reached. For backward trees this is an
    /// edge leaving the node, towards the root.
    pub parent_edge: Vec<Option<EdgeId>>,
}

impl ShortestPathTree {
    pub fn reachable(&self, node: NodeId) -> bool {
        self.dist[node] != INFINITY
    }

    /// Per-edge "is a tree edge" flags.
    pub fn tree_edges(&self, edge_count: usize) -> Vec<bool> {
        let mut flags = vec![false; edge_count];
        for e in self.parent_edge.iter().flatten() {
            flags[*e] = true;
        }
        flags
    }

    /// Tree edges from the root to `node` (forward) or from `node` to the
    /// root (backward), in travel order.
    pub fn edges_to(&self, graph: &RoadGraph, node: NodeId) -> Option<Vec<EdgeId>> {
        if !self.reachable(node) {
            return None;
        }
        let mut edges = Vec::new();
        let mut current = node;
        while let Some(e) = self.parent_edge[current] {
            edges.push(e);
            current = match self.direction {
                Direction::Forward => graph.tail(e),
                Direction::Backward => graph.head(e),
            };
        }
        if self.direction == Direction::Forward {
            edges.reverse();
        }
        Some(edges)
    }
}

/// Knobs for the internal search. Everything defaults to "off".
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions<'a> {
    pub blocked_edges: Option<&'a [bool]>,
    pub blocked_nodes: Option<&'a [bool]>,
    /// Lower value wins among parent edges giving the same distance.
    pub tie_rank: Option<&'a [u8]>,
    /// Stop as soon as this node is settled.
    pub target: Option<NodeId>,
    /// `(lower_bound, limit)`: skip nodes whose distance plus lower bound to
    /// the target exceeds `limit`.
    pub prune: Option<(&'a [Weight], Weight)>,
}

impl SearchOptions<'_> {
    fn is_plain(&self) -> bool {
        self.blocked_edges.is_none() && self.blocked_nodes.is_none() && self.target.is_none() && self.prune.is_none()
    }
}

/// Plain Dijkstra from `root` under the overlay's effective weights.
pub fn dijkstra(graph: &RoadGraph, weights: &WeightOverlay, root: NodeId, direction: Direction) -> ShortestPathTree {
    dijkstra_with(graph, weights.weights(), root, direction, SearchOptions::default())
}

pub fn dijkstra_with(
    graph: &RoadGraph,
    weights: &[Weight],
    root: NodeId,
    direction: Direction,
    options: SearchOptions<'_>,
) -> ShortestPathTree {
    let n = graph.node_count();
    assert!(root < n, "root {root} out of range");
    let mut dist = vec![INFINITY; n];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut queue = BinaryHeap::new();

    let node_blocked = |v: NodeId| options.blocked_nodes.is_some_and(|b| b[v]);
    let edge_blocked = |e: EdgeId| options.blocked_edges.is_some_and(|b| b[e]);
    let rank = |e: EdgeId| (options.tie_rank.map_or(0, |r| r[e]), e);

    if !node_blocked(root) {
        dist[root] = 0;
        queue.push(Reverse((0, root)));
    }

    while let Some(Reverse((d, u))) = queue.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        if options.target == Some(u) {
            break;
        }
        let edges = match direction {
            Direction::Forward => graph.out_edges(u),
            Direction::Backward => graph.in_edges(u),
        };
        for &e in edges {
            if edge_blocked(e) {
                continue;
            }
            let v = match direction {
                Direction::Forward => graph.head(e),
                Direction::Backward => graph.tail(e),
            };
            if settled[v] || node_blocked(v) {
                continue;
            }
            let nd = d.saturating_add(weights[e]);
            if let Some((lower_bound, limit)) = options.prune {
                if lower_bound[v] == INFINITY || nd.saturating_add(lower_bound[v]) > limit {
                    continue;
                }
            }
            if nd < dist[v] {
                dist[v] = nd;
                parent_edge[v] = Some(e);
                queue.push(Reverse((nd, v)));
            } else if nd == dist[v] && parent_edge[v].is_some_and(|p| rank(e) < rank(p)) {
                parent_edge[v] = Some(e);
            }
        }
    }

    let tree = ShortestPathTree { root, direction, dist, parent_edge };
    if cfg!(debug_assertions) && options.is_plain() {
        check_relaxed(graph, weights, &tree);
    }
    tree
}

/// Panics if some edge could still be relaxed.
fn check_relaxed(graph: &RoadGraph, weights: &[Weight], tree: &ShortestPathTree) {
    for (e, u, v) in graph.edges() {
        let (from, to) = match tree.direction {
            Direction::Forward => (u, v),
            Direction::Backward => (v, u),
        };
        if tree.dist[from] != INFINITY {
            assert!(tree.dist[from] + weights[e] >= tree.dist[to], "edge {e} not relaxed");
        }
    }
}

/// Shortest `s`-`t` path under the overlay's effective weights.
pub fn shortest_path(graph: &RoadGraph, weights: &WeightOverlay, s: NodeId, t: NodeId) -> Result<Path, RouteError> {
    shortest_path_with(graph, weights.weights(), s, t, SearchOptions::default())
}

pub(crate) fn shortest_path_with(
    graph: &RoadGraph,
    weights: &[Weight],
    s: NodeId,
    t: NodeId,
    options: SearchOptions<'_>,
) -> Result<Path, RouteError> {
    for node in [s, t] {
        if node >= graph.node_count() {
            return Err(RouteError::NodeOutOfRange { node, node_count: graph.node_count() });
        }
    }
    if s == t {
        return Ok(Path::empty(s));
    }
    let tree = dijkstra_with(graph, weights, s, Direction::Forward, SearchOptions { target: Some(t), ..options });
    let edges = tree.edges_to(graph, t).ok_or(RouteError::NoRoute { s, t })?;
    let path = Path::from_edges(graph, s, edges, weights).expect("tree path is connected");
    debug_assert_eq!(path.weight, tree.dist[t]);
    Ok(path)
}

/// Distance from `s` to `t` under the main weight function.
pub fn base_distance(graph: &RoadGraph, s: NodeId, t: NodeId) -> Result<Weight, RouteError> {
    Ok(shortest_path_with(graph, graph.main_weights(), s, t, SearchOptions::default())?.weight)
}
