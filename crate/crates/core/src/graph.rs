//! Immutable road graph storage, weight overlays and paths.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;
/// Edge weights are nonnegative integers (e.g. deciseconds of travel time).
pub type Weight = u64;

/// Distance of unreachable nodes.
pub const INFINITY: Weight = Weight::MAX;

/// Largest weight a single edge may carry. Keeps path sums far away from
/// `INFINITY` even on very long paths.
pub const MAX_EDGE_WEIGHT: Weight = 1 << 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} references node {node}, but the graph has {node_count} nodes")]
    NodeOutOfRange { edge: EdgeId, node: NodeId, node_count: usize },
    #[error("weight function `{name}` has {got} entries, expected {expected}")]
    WeightCountMismatch { name: String, got: usize, expected: usize },
    #[error("edge {edge} has weight {weight} in `{name}`, above the maximum {MAX_EDGE_WEIGHT}")]
    WeightTooLarge { name: String, edge: EdgeId, weight: Weight },
    #[error("weight function `{0}` already exists")]
    DuplicateWeightFunction(String),
    #[error("unknown weight function `{0}`")]
    UnknownWeightFunction(String),
    #[error("coordinate list has {got} entries, expected {expected}")]
    CoordinateCountMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq)]
struct WeightFunction {
    name: String,
    weights: Vec<Weight>,
}

/// Directed graph with one or more named edge weight functions.
///
/// Edges are identified by their insertion index. Adjacency is kept in CSR
/// form for both directions; the backward adjacency is what backward searches
/// run on, no reversed copy of the graph is ever built.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadGraph {
    node_count: usize,
    tails: Vec<NodeId>,
    heads: Vec<NodeId>,
    weight_functions: Vec<WeightFunction>,
    main: usize,
    first_out: Vec<usize>,
    out_edges: Vec<EdgeId>,
    first_in: Vec<usize>,
    in_edges: Vec<EdgeId>,
    coordinates: Option<Vec<(f64, f64)>>,
}

pub const DEFAULT_WEIGHT_NAME: &str = "weight";

impl RoadGraph {
    /// Builds a graph with a single weight function named [`DEFAULT_WEIGHT_NAME`].
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<Self, GraphError> {
        Self::with_weight_name(node_count, edges, DEFAULT_WEIGHT_NAME)
    }

    pub fn with_weight_name(
        node_count: usize,
        edges: &[(NodeId, NodeId, Weight)],
        weight_name: &str,
    ) -> Result<Self, GraphError> {
        let topology: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let weights: Vec<_> = edges.iter().map(|&(_, _, w)| w).collect();
        Self::from_topology(node_count, &topology, weight_name, weights)
    }

    pub fn from_topology(
        node_count: usize,
        edges: &[(NodeId, NodeId)],
        weight_name: &str,
        weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        for (edge, &(u, v)) in edges.iter().enumerate() {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { edge, node, node_count });
                }
            }
        }
        let tails: Vec<_> = edges.iter().map(|&(u, _)| u).collect();
        let heads: Vec<_> = edges.iter().map(|&(_, v)| v).collect();
        let (first_out, out_edges) = csr(node_count, &tails);
        let (first_in, in_edges) = csr(node_count, &heads);
        let mut graph = RoadGraph {
            node_count,
            tails,
            heads,
            weight_functions: Vec::new(),
            main: 0,
            first_out,
            out_edges,
            first_in,
            in_edges,
            coordinates: None,
        };
        graph.add_weight_function(weight_name, weights)?;
        Ok(graph)
    }

    /// Adds another named weight function over the same edge set.
    pub fn add_weight_function(&mut self, name: &str, weights: Vec<Weight>) -> Result<(), GraphError> {
        if self.weight_functions.iter().any(|wf| wf.name == name) {
            return Err(GraphError::DuplicateWeightFunction(name.to_string()));
        }
        if weights.len() != self.edge_count() {
            return Err(GraphError::WeightCountMismatch {
                name: name.to_string(),
                got: weights.len(),
                expected: self.edge_count(),
            });
        }
        if let Some((edge, &weight)) = weights.iter().enumerate().find(|(_, &w)| w > MAX_EDGE_WEIGHT) {
            return Err(GraphError::WeightTooLarge { name: name.to_string(), edge, weight });
        }
        self.weight_functions.push(WeightFunction { name: name.to_string(), weights });
        Ok(())
    }

    pub fn with_weight_function(mut self, name: &str, weights: Vec<Weight>) -> Result<Self, GraphError> {
        self.add_weight_function(name, weights)?;
        Ok(self)
    }

    /// Designates the weight function every metric is evaluated under.
    pub fn set_main_weight(&mut self, name: &str) -> Result<(), GraphError> {
        self.main = self.weight_index(name)?;
        Ok(())
    }

    pub fn with_coordinates(mut self, coordinates: Vec<(f64, f64)>) -> Result<Self, GraphError> {
        if coordinates.len() != self.node_count {
            return Err(GraphError::CoordinateCountMismatch { got: coordinates.len(), expected: self.node_count });
        }
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.tails.len()
    }

    pub fn tail(&self, edge: EdgeId) -> NodeId {
        self.tails[edge]
    }

    pub fn head(&self, edge: EdgeId) -> NodeId {
        self.heads[edge]
    }

    /// Outgoing edge ids of `node`, in ascending id order.
    pub fn out_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.out_edges[self.first_out[node]..self.first_out[node + 1]]
    }

    /// Incoming edge ids of `node`, in ascending id order.
    pub fn in_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.in_edges[self.first_in[node]..self.first_in[node + 1]]
    }

    pub fn main_weight_name(&self) -> &str {
        &self.weight_functions[self.main].name
    }

    pub fn main_weights(&self) -> &[Weight] {
        &self.weight_functions[self.main].weights
    }

    pub fn weight_names(&self) -> impl Iterator<Item = &str> {
        self.weight_functions.iter().map(|wf| wf.name.as_str())
    }

    pub fn weight_function_count(&self) -> usize {
        self.weight_functions.len()
    }

    pub fn weights(&self, name: &str) -> Result<&[Weight], GraphError> {
        Ok(&self.weight_functions[self.weight_index(name)?].weights)
    }

    fn weight_index(&self, name: &str) -> Result<usize, GraphError> {
        self.weight_functions
            .iter()
            .position(|wf| wf.name == name)
            .ok_or_else(|| GraphError::UnknownWeightFunction(name.to_string()))
    }

    pub fn coordinates(&self) -> Option<&[(f64, f64)]> {
        self.coordinates.as_deref()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, NodeId, NodeId)> + '_ {
        self.tails.iter().zip(&self.heads).enumerate().map(|(e, (&u, &v))| (e, u, v))
    }

    /// Sum of `weights` along `edges`. Saturates at `INFINITY`.
    pub fn path_weight(weights: &[Weight], edges: &[EdgeId]) -> Weight {
        edges.iter().fold(0, |acc: Weight, &e| acc.saturating_add(weights[e]))
    }
}

fn csr(node_count: usize, keys: &[NodeId]) -> (Vec<usize>, Vec<EdgeId>) {
    let mut first = vec![0usize; node_count + 1];
    for &k in keys {
        first[k + 1] += 1;
    }
    for i in 0..node_count {
        first[i + 1] += first[i];
    }
    let mut next = first.clone();
    let mut items = vec![0; keys.len()];
    for (edge, &k) in keys.iter().enumerate() {
        items[next[k]] = edge;
        next[k] += 1;
    }
    (first, items)
}

/// Multiplicative factor applied to a weight, kept as an exact fraction.
pub type Factor = Ratio<u64>;

/// Denominator used when turning decimal configuration values into factors.
pub const FACTOR_DENOMINATOR: u64 = 10_000;
const MAX_FACTOR_DENOMINATOR: u64 = 1_000_000;

/// Converts a decimal value (e.g. `1.4`) into an exact factor on a fixed grid
/// of `1 / FACTOR_DENOMINATOR`.
pub fn factor_from_f64(value: f64) -> Factor {
    assert!(value.is_finite() && value >= 0.0, "factor must be finite and nonnegative");
    Ratio::new((value * FACTOR_DENOMINATOR as f64).round() as u64, FACTOR_DENOMINATOR)
}

/// Multiplies two factors. Denominators that grow past a fixed bound are
/// snapped back to a `1 / 10^6` grid with round-half-up.
pub fn compose_factors(a: Factor, b: Factor) -> Factor {
    let num = *a.numer() as u128 * *b.numer() as u128;
    let den = *a.denom() as u128 * *b.denom() as u128;
    let g = num_integer::gcd(num, den);
    let (num, den) = (num / g, den / g);
    if den <= MAX_FACTOR_DENOMINATOR as u128 && num <= u64::MAX as u128 {
        return Ratio::new(num as u64, den as u64);
    }
    let m = MAX_FACTOR_DENOMINATOR as u128;
    let snapped = (num * m * 2 + den) / (den * 2);
    Ratio::new(snapped.min(u64::MAX as u128) as u64, MAX_FACTOR_DENOMINATOR)
}

/// `weight * factor` rounded half up.
pub fn scale_weight(weight: Weight, factor: Factor) -> Weight {
    let num = weight as u128 * *factor.numer() as u128;
    let den = *factor.denom() as u128;
    let scaled = (num * 2 + den) / (den * 2);
    scaled.min(INFINITY as u128 - 1) as Weight
}

/// Query-local weight adjustments on top of one of the graph's weight
/// functions: `effective(e) = round(base(e) * multiplicative(e)) + additive(e)`.
///
/// The sparse maps are the source of truth; a dense copy of the effective
/// weights is kept in sync so searches read one array.
#[derive(Debug, Clone)]
pub struct WeightOverlay {
    base_name: String,
    base: Vec<Weight>,
    multiplicative: BTreeMap<EdgeId, Factor>,
    additive: BTreeMap<EdgeId, Weight>,
    effective: Vec<Weight>,
}

impl WeightOverlay {
    /// Overlay without any adjustment over the main weight function.
    pub fn main(graph: &RoadGraph) -> Self {
        Self::over(graph, graph.main_weight_name()).expect("main weight exists")
    }

    pub fn over(graph: &RoadGraph, name: &str) -> Result<Self, GraphError> {
        let base = graph.weights(name)?.to_vec();
        Ok(WeightOverlay {
            base_name: name.to_string(),
            effective: base.clone(),
            base,
            multiplicative: BTreeMap::new(),
            additive: BTreeMap::new(),
        })
    }

    pub fn base_name(&self) -> &str {
        &self.base_name
    }

    pub fn base(&self) -> &[Weight] {
        &self.base
    }

    /// Effective weights of all edges.
    pub fn weights(&self) -> &[Weight] {
        &self.effective
    }

    pub fn weight(&self, edge: EdgeId) -> Weight {
        self.effective[edge]
    }

    pub fn factor(&self, edge: EdgeId) -> Factor {
        self.multiplicative.get(&edge).copied().unwrap_or_else(|| Ratio::from_integer(1))
    }

    pub fn additive(&self, edge: EdgeId) -> Weight {
        self.additive.get(&edge).copied().unwrap_or(0)
    }

    /// Multiplies the current factor of `edge` by `factor` (which must be >= 1).
    pub fn multiply(&mut self, edge: EdgeId, factor: Factor) {
        assert!(factor >= Ratio::from_integer(1), "overlay factors must be >= 1");
        let composed = compose_factors(self.factor(edge), factor);
        self.multiplicative.insert(edge, composed);
        self.refresh(edge);
    }

    pub fn add(&mut self, edge: EdgeId, amount: Weight) {
        if amount == 0 {
            return;
        }
        let entry = self.additive.entry(edge).or_insert(0);
        *entry = entry.saturating_add(amount).min(MAX_EDGE_WEIGHT);
        self.refresh(edge);
    }

    /// Takes back (part of) an earlier additive amount. Never goes below zero.
    pub fn subtract(&mut self, edge: EdgeId, amount: Weight) {
        if let Some(entry) = self.additive.get_mut(&edge) {
            *entry = entry.saturating_sub(amount);
            if *entry == 0 {
                self.additive.remove(&edge);
            }
            self.refresh(edge);
        }
    }

    fn refresh(&mut self, edge: EdgeId) {
        let scaled = scale_weight(self.base[edge], self.factor(edge));
        self.effective[edge] = scaled.saturating_add(self.additive(edge)).min(INFINITY - 1);
    }

    /// Edges with a non-neutral adjustment.
    pub fn adjusted_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let mut edges: Vec<_> = self.multiplicative.keys().chain(self.additive.keys()).copied().collect();
        edges.sort_unstable();
        edges.dedup();
        edges.into_iter()
    }
}

/// A walk through the road graph given by its edges, with its weight under
/// the weight function it was computed with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: NodeId,
    pub target: NodeId,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub weight: Weight,
}

impl Path {
    pub fn empty(node: NodeId) -> Self {
        Path { source: node, target: node, nodes: vec![node], edges: Vec::new(), weight: 0 }
    }

    /// Builds a path from consecutive edges. Returns `None` if two consecutive
    /// edges do not share a node.
    pub fn from_edges(graph: &RoadGraph, source: NodeId, edges: Vec<EdgeId>, weights: &[Weight]) -> Option<Self> {
        let mut nodes = Vec::with_capacity(edges.len() + 1);
        nodes.push(source);
        for &e in &edges {
            if graph.tail(e) != *nodes.last().unwrap() {
                return None;
            }
            nodes.push(graph.head(e));
        }
        let weight = RoadGraph::path_weight(weights, &edges);
        Some(Path { source, target: *nodes.last().unwrap(), nodes, edges, weight })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// True if no node is visited twice.
    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<_> = self.nodes.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Same path, weight recomputed under other weights.
    pub fn reweighted(&self, weights: &[Weight]) -> Self {
        Path { weight: RoadGraph::path_weight(weights, &self.edges), ..self.clone() }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.target, other.source, "paths do not connect");
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { source: self.source, target: other.target, nodes, edges, weight: self.weight + other.weight }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_matches_edge_list() {
        let g = RoadGraph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 5), (2, 0, 1)]).unwrap();
        assert_eq!(g.out_edges(0), &[0, 2]);
        assert_eq!(g.in_edges(2), &[1, 2]);
        assert_eq!(g.in_edges(0), &[3]);
        let mut fwd: Vec<_> = (0..3).flat_map(|u| g.out_edges(u).to_vec()).collect();
        let mut bwd: Vec<_> = (0..3).flat_map(|u| g.in_edges(u).to_vec()).collect();
        fwd.sort();
        bwd.sort();
        assert_eq!(fwd, bwd);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RoadGraph::new(2, &[(0, 2, 1)]), Err(GraphError::NodeOutOfRange { node: 2, .. })));
        let g = RoadGraph::new(2, &[(0, 1, 1)]).unwrap();
        assert!(matches!(
            g.clone().with_weight_function("weight", vec![1]),
            Err(GraphError::DuplicateWeightFunction(_))
        ));
        assert!(matches!(g.clone().with_weight_function("x", vec![]), Err(GraphError::WeightCountMismatch { .. })));
        assert!(matches!(
            g.with_weight_function("x", vec![MAX_EDGE_WEIGHT + 1]),
            Err(GraphError::WeightTooLarge { .. })
        ));
    }

    #[test]
    fn overlay_composes_factors_and_rounds_half_up() {
        let g = RoadGraph::new(2, &[(0, 1, 10), (0, 1, 5)]).unwrap();
        let mut o = WeightOverlay::main(&g);
        let k = factor_from_f64(1.4);
        assert_eq!(k, Ratio::new(7, 5));
        o.multiply(0, k);
        assert_eq!(o.weight(0), 14);
        o.multiply(0, k);
        // 10 * 1.96 = 19.6
        assert_eq!(o.weight(0), 20);
        o.multiply(1, factor_from_f64(1.5));
        // 7.5 rounds up
        assert_eq!(o.weight(1), 8);
        o.add(1, 3);
        assert_eq!(o.weight(1), 11);
        o.subtract(1, 5);
        assert_eq!(o.weight(1), 8);
        assert_eq!(o.adjusted_edges().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn composed_factor_denominator_stays_bounded() {
        let mut f = Ratio::from_integer(1);
        for _ in 0..20 {
            f = compose_factors(f, factor_from_f64(1.2345));
        }
        assert!(*f.denom() <= MAX_FACTOR_DENOMINATOR);
        let approx = *f.numer() as f64 / *f.denom() as f64;
        assert!((approx - 1.2345f64.powi(20)).abs() / approx < 1e-4);
    }

    #[test]
    fn path_from_edges_checks_continuity() {
        let g = RoadGraph::new(3, &[(0, 1, 2), (1, 2, 3), (0, 2, 9)]).unwrap();
        let p = Path::from_edges(&g, 0, vec![0, 1], g.main_weights()).unwrap();
        assert_eq!(p.nodes, vec![0, 1, 2]);
        assert_eq!(p.weight, 5);
        assert!(p.is_simple());
        assert!(Path::from_edges(&g, 0, vec![1], g.main_weights()).is_none());
    }
}
