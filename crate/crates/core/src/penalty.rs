//! Iterative penalty method: take the shortest path under adjusted weights,
//! keep it if it is a useful alternative, make its edges (and optionally the
//! edges around it) more expensive, and repeat.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use crate::altgraph::{reduce, validate, AlternativeGraph};
use crate::dijkstra::shortest_path;
use crate::graph::{factor_from_f64, EdgeId, NodeId, Path, RoadGraph, Weight, WeightOverlay, INFINITY};
use crate::methods::MethodError;
use crate::metrics::{within_stretch, AgDistances, Position};

/// Size of the additive penalty on edges that leave or join the current
/// alternative graph.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RejoinPenalty {
    /// Fraction of the upper bound `(k - 1) * d(s,t)`, in `[0, 1]`.
    Fraction(f64),
    Absolute(Weight),
}

/// Multiplier on the rejoin penalty as a function of the junction's position.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RejoinGrading {
    Constant,
    /// `at_start + (at_end - at_start) * pos`
    Linear {
        at_start: f64,
        at_end: f64,
    },
}

impl RejoinGrading {
    pub fn at(&self, pos: f64) -> f64 {
        match *self {
            RejoinGrading::Constant => 1.0,
            RejoinGrading::Linear { at_start, at_end } => at_start + (at_end - at_start) * pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Acceptance {
    /// Original length must stay within `(1 + max_stretch) * d(s,t)`.
    pub max_stretch: f64,
    /// Share of the original length that must run outside the current
    /// alternative graph.
    pub min_novelty: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyConfig {
    /// Multiplicative increase per penalization, `k`.
    pub factor: f64,
    pub rejoin: RejoinPenalty,
    pub rejoin_grading: RejoinGrading,
    pub max_increases_per_edge: u32,
    /// Instead of a flat `k`, the `j`-th increase of an edge uses
    /// `1 + (k - 1) * damping^j`.
    pub damping: Option<f64>,
    pub max_iterations: usize,
    /// Weight distance around the path whose edges get increased too; `0`
    /// turns this off.
    pub tube_radius: Weight,
    /// Exponent of the decay from `k` at the path to `1` at the tube border.
    pub tube_decay: f64,
    /// Scale of the balancing penalty on sparsely covered edges; `0` turns it
    /// off.
    pub cov_penalty_scale: f64,
    pub acceptance: Acceptance,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            factor: 1.4,
            rejoin: RejoinPenalty::Fraction(0.5),
            rejoin_grading: RejoinGrading::Constant,
            max_increases_per_edge: 4,
            damping: None,
            max_iterations: 20,
            tube_radius: 0,
            tube_decay: 1.0,
            cov_penalty_scale: 0.0,
            acceptance: Acceptance { max_stretch: 0.25, min_novelty: 0.2 },
        }
    }
}

impl PenaltyConfig {
    fn check(&self) -> Result<(), MethodError> {
        let bad = |msg: &str| Err(MethodError::InvalidParameter(msg.into()));
        if !(self.factor >= 1.0) || !self.factor.is_finite() {
            return bad("factor must be finite and at least 1");
        }
        if let RejoinPenalty::Fraction(f) = self.rejoin {
            if !(0.0..=1.0).contains(&f) {
                return bad("rejoin fraction must be in [0, 1]");
            }
        }
        if self.max_increases_per_edge == 0 || self.max_iterations == 0 {
            return bad("termination bounds must be positive");
        }
        if self.damping.is_some_and(|d| !(0.0..=1.0).contains(&d)) {
            return bad("damping must be in [0, 1]");
        }
        if !(self.tube_decay >= 0.0) || !(self.cov_penalty_scale >= 0.0) {
            return bad("tube_decay and cov_penalty_scale must be nonnegative");
        }
        if !(self.acceptance.max_stretch >= 0.0) || !(0.0..=1.0).contains(&self.acceptance.min_novelty) {
            return bad("acceptance bounds out of range");
        }
        Ok(())
    }

    /// Upper end of the rejoin range, `(k - 1) * d(s,t)`.
    pub fn rejoin_bound(&self, base_distance: Weight) -> Weight {
        ((self.factor - 1.0) * base_distance as f64).round() as Weight
    }

    fn increase(&self, previous_increases: u32) -> f64 {
        match self.damping {
            Some(d) => 1.0 + (self.factor - 1.0) * d.powi(previous_increases as i32),
            None => self.factor,
        }
    }
}

/// Mutable state of one penalty query.
#[derive(Debug, Clone)]
pub struct PenaltyState {
    pub s: NodeId,
    pub t: NodeId,
    pub overlay: WeightOverlay,
    pub increase_count: Vec<u32>,
    /// Road edges of the current alternative graph.
    pub ag_edges: BTreeSet<EdgeId>,
    pub iteration: usize,
    pub base_distance: Weight,
    /// Absolute rejoin penalty before grading.
    pub rejoin_amount: Weight,
    node_pos: HashMap<NodeId, f64>,
    cov_applied: BTreeMap<EdgeId, Weight>,
}

impl PenaltyState {
    pub fn new(graph: &RoadGraph, s: NodeId, t: NodeId, cfg: &PenaltyConfig) -> Result<Self, MethodError> {
        cfg.check()?;
        crate::methods::check_endpoints(graph.node_count(), s, t)?;
        let overlay = WeightOverlay::main(graph);
        let base_distance = shortest_path(graph, &overlay, s, t)?.weight;
        let bound = cfg.rejoin_bound(base_distance);
        let rejoin_amount = match cfg.rejoin {
            RejoinPenalty::Fraction(f) => (f * bound as f64).round() as Weight,
            RejoinPenalty::Absolute(a) if a <= bound => a,
            RejoinPenalty::Absolute(a) => {
                return Err(MethodError::InvalidParameter(format!("rejoin penalty {a} exceeds (k-1)*d(s,t) = {bound}")))
            }
        };
        Ok(PenaltyState {
            s,
            t,
            overlay,
            increase_count: vec![0; graph.edge_count()],
            ag_edges: BTreeSet::new(),
            iteration: 0,
            base_distance,
            rejoin_amount,
            node_pos: HashMap::new(),
            cov_applied: BTreeMap::new(),
        })
    }

    pub fn current_ag(&self, graph: &RoadGraph) -> Option<AlternativeGraph> {
        if self.ag_edges.is_empty() {
            return None;
        }
        AlternativeGraph::from_edge_set(graph, graph.main_weight_name(), self.s, self.t, self.ag_edges.iter().copied())
            .ok()
    }

    pub fn add_to_ag(&mut self, graph: &RoadGraph, edges: impl IntoIterator<Item = EdgeId>) {
        self.ag_edges.extend(edges);
        self.node_pos.clear();
        if let Some(ag) = self.current_ag(graph) {
            let d = AgDistances::new(&ag);
            for (i, &node) in ag.nodes.iter().enumerate() {
                let (a, b) = (d.from_s[i], d.to_t[i]);
                let pos = if a == INFINITY || b == INFINITY || a + b == 0 { 0.0 } else { a as f64 / (a + b) as f64 };
                self.node_pos.insert(node, pos);
            }
        }
    }

    /// Relative position of a node of the current alternative graph.
    pub fn pos(&self, node: NodeId) -> Option<f64> {
        self.node_pos.get(&node).copied()
    }

    /// Multiplies `edge` by `factor` unless its increase budget is spent.
    fn increase(&mut self, edge: EdgeId, factor: f64, cfg: &PenaltyConfig) -> bool {
        if self.increase_count[edge] >= cfg.max_increases_per_edge {
            return false;
        }
        let factor = factor_from_f64(factor);
        if factor <= num_rational::Ratio::from_integer(1) {
            return false;
        }
        self.overlay.multiply(edge, factor);
        self.increase_count[edge] += 1;
        true
    }
}

/// Adds the (graded) rejoin penalty to every edge of `path` that leaves or
/// joins the current alternative graph. Returns the penalized edges with the
/// amounts added.
pub fn apply_rejoin_penalty(
    state: &mut PenaltyState,
    graph: &RoadGraph,
    path: &Path,
    cfg: &PenaltyConfig,
) -> Vec<(EdgeId, Weight)> {
    let mut applied = Vec::new();
    if state.rejoin_amount == 0 {
        return applied;
    }
    for &e in &path.edges {
        if state.ag_edges.contains(&e) {
            continue;
        }
        let mut amount = 0;
        for junction in [graph.tail(e), graph.head(e)] {
            if let Some(pos) = state.pos(junction) {
                amount += (state.rejoin_amount as f64 * cfg.rejoin_grading.at(pos).max(0.0)).round() as Weight;
            }
        }
        if amount > 0 {
            state.overlay.add(e, amount);
            applied.push((e, amount));
        }
    }
    applied
}

/// Tube factor at weight distance `distance` from the path.
pub fn tube_factor(cfg: &PenaltyConfig, distance: Weight, previous_increases: u32) -> f64 {
    if cfg.tube_radius == 0 || distance >= cfg.tube_radius {
        return 1.0;
    }
    let closeness = 1.0 - distance as f64 / cfg.tube_radius as f64;
    1.0 + (cfg.increase(previous_increases) - 1.0) * closeness.powf(cfg.tube_decay)
}

/// Increases every edge within `tube_radius` of the path, with the full
/// factor on the path and decaying to 1 at the border. Returns the edges
/// whose weight was increased.
pub fn apply_tube_increase(
    state: &mut PenaltyState,
    graph: &RoadGraph,
    path: &Path,
    cfg: &PenaltyConfig,
) -> Vec<EdgeId> {
    if cfg.tube_radius == 0 {
        return Vec::new();
    }
    let distance = distance_to_path(graph, state.overlay.base(), &path.nodes, cfg.tube_radius);
    let mut touched = Vec::new();
    for (e, u, v) in graph.edges() {
        let d = distance[u].max(distance[v]);
        if d >= cfg.tube_radius {
            continue;
        }
        let factor = tube_factor(cfg, d, state.increase_count[e]);
        if state.increase(e, factor, cfg) {
            touched.push(e);
        }
    }
    touched
}

/// Weight distance of every node to the nearest of `sources`, in either
/// direction, up to `radius` (farther nodes get `INFINITY`).
fn distance_to_path(graph: &RoadGraph, weights: &[Weight], sources: &[NodeId], radius: Weight) -> Vec<Weight> {
    let mut best = vec![INFINITY; graph.node_count()];
    for forward in [true, false] {
        let mut dist = vec![INFINITY; graph.node_count()];
        let mut queue = BinaryHeap::new();
        for &v in sources {
            dist[v] = 0;
            queue.push(Reverse((0, v)));
        }
        while let Some(Reverse((d, u))) = queue.pop() {
            if d > dist[u] {
                continue;
            }
            let edges = if forward { graph.out_edges(u) } else { graph.in_edges(u) };
            for &e in edges {
                let v = if forward { graph.head(e) } else { graph.tail(e) };
                let nd = d + weights[e];
                if nd < radius && nd < dist[v] {
                    dist[v] = nd;
                    queue.push(Reverse((nd, v)));
                }
            }
        }
        for (b, d) in best.iter_mut().zip(dist) {
            *b = (*b).min(d);
        }
    }
    best
}

/// Replaces the previous balancing penalty: every alternative-graph edge
/// covered by fewer edges than the average gets
/// `scale * CoV * (average - count) * weight` on top.
pub fn apply_cov_penalty(state: &mut PenaltyState, graph: &RoadGraph, cfg: &PenaltyConfig) {
    for (e, amount) in std::mem::take(&mut state.cov_applied) {
        state.overlay.subtract(e, amount);
    }
    if cfg.cov_penalty_scale == 0.0 {
        return;
    }
    let Some(ag) = state.current_ag(graph) else { return };
    let d = AgDistances::new(&ag);
    let spans: Vec<_> = (0..ag.edges.len()).map(|e| d.span(e)).collect();
    let report = match crate::metrics::report(&ag, state.base_distance, 1) {
        Ok(r) => r,
        Err(_) => return,
    };
    let average = crate::metrics::to_f64(&report.total_distance);
    let cov = report.coefficient_of_variation();
    if cov == 0.0 {
        return;
    }
    for (i, edge) in ag.edges.iter().enumerate() {
        let Some((a, b)) = spans[i] else { continue };
        let mid = Position { num: a.num + b.num, den: 2 * a.den };
        let count = crate::metrics::edges_at_position(&spans, mid) as f64;
        if count >= average {
            continue;
        }
        let amount = (cfg.cov_penalty_scale * cov * (average - count) * edge.weight as f64).round() as Weight;
        if amount > 0 {
            let e = edge.underlying.edges[0];
            state.overlay.add(e, amount);
            state.cov_applied.insert(e, amount);
        }
    }
}

#[derive(Debug, Clone)]
pub struct PenaltyRun {
    /// Reduced alternative graph under the main weights.
    pub ag: AlternativeGraph,
    /// Accepted paths, with their original weights, in acceptance order.
    pub accepted: Vec<Path>,
    pub iterations: usize,
    /// The loop stopped because no edge of the last path could be increased.
    pub saturated: bool,
}

/// Runs the penalty loop, optionally starting from an existing alternative
/// graph computed by any other method.
pub fn penalty_alternatives(
    graph: &RoadGraph,
    s: NodeId,
    t: NodeId,
    cfg: &PenaltyConfig,
    seed: Option<&AlternativeGraph>,
) -> Result<PenaltyRun, MethodError> {
    let mut state = PenaltyState::new(graph, s, t, cfg)?;
    if let Some(seed) = seed {
        if seed.s != s || seed.t != t || !validate(seed).is_empty() {
            return Err(MethodError::InvalidParameter(
                "seed must be a valid alternative graph with the same endpoints".into(),
            ));
        }
        state.add_to_ag(graph, seed.road_edges());
    }
    let main = graph.main_weights();
    let mut accepted = Vec::new();
    let mut saturated = false;

    while state.iteration < cfg.max_iterations {
        state.iteration += 1;
        apply_cov_penalty(&mut state, graph, cfg);
        let path = shortest_path(graph, &state.overlay, s, t)?;
        let original = path.reweighted(main);

        let fresh: Weight = original.edges.iter().filter(|e| !state.ag_edges.contains(e)).map(|&e| main[e]).sum();
        let novel = if original.weight == 0 {
            fresh > 0 || state.ag_edges.is_empty()
        } else {
            fresh as f64 >= cfg.acceptance.min_novelty * original.weight as f64 && fresh > 0
        };
        let accept = novel && within_stretch(original.weight, state.base_distance, cfg.acceptance.max_stretch);
        log::debug!(
            "penalty iteration {}: length {} (orig {}), accepted {accept}",
            state.iteration,
            path.weight,
            original.weight
        );

        apply_rejoin_penalty(&mut state, graph, &path, cfg);
        if accept {
            state.add_to_ag(graph, original.edges.iter().copied());
            accepted.push(original);
        }

        let increased = if cfg.tube_radius > 0 {
            let touched: BTreeSet<_> = apply_tube_increase(&mut state, graph, &path, cfg).into_iter().collect();
            path.edges.iter().any(|e| touched.contains(e))
        } else {
            let mut any = false;
            for &e in &path.edges {
                let factor = cfg.increase(state.increase_count[e]);
                any |= state.increase(e, factor, cfg);
            }
            any
        };
        if !increased {
            saturated = true;
            break;
        }
    }

    let ag = state.current_ag(graph).expect("the first iteration always accepts a path");
    Ok(PenaltyRun { ag: reduce(&ag), accepted, iterations: state.iteration, saturated })
}
