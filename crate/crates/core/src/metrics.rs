//! Quality measures of alternative graphs and the combined objective.
//!
//! All values are exact rationals over the integer edge weights. Floating
//! point only appears in [`MetricsReport::coefficient_of_variation`] and at
//! serialization time.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::altgraph::{count_simple_paths, reduce, validate, AlternativeGraph, LocalGraph, Violation};
use crate::graph::{factor_from_f64, NodeId, Weight, INFINITY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("node {0} is not part of the alternative graph")]
    NodeNotInAg(NodeId),
    #[error("base distance d_G(s,t) is zero")]
    ZeroBaseDistance,
    #[error("alternative graph is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidAg(Vec<Violation>),
}

/// Nonnegative fraction with a cheap total order (cross-multiplication in
/// 128 bits). Numerators and denominators are path lengths.
#[derive(Debug, Clone, Copy)]
pub struct Position {
    pub num: Weight,
    pub den: Weight,
}

impl Position {
    fn new(num: Weight, den: Weight) -> Self {
        if den == 0 {
            Position { num: 0, den: 1 }
        } else {
            Position { num, den }
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Position {}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// Shortest distances inside the alternative graph from `s` and to `t`,
/// indexed like `ag.nodes`.
pub(crate) struct AgDistances {
    pub local: LocalGraph,
    pub weights: Vec<Weight>,
    pub from_s: Vec<Weight>,
    pub to_t: Vec<Weight>,
}

impl AgDistances {
    pub fn new(ag: &AlternativeGraph) -> Self {
        let local = ag.local();
        let weights: Vec<_> = ag.edges.iter().map(|e| e.weight).collect();
        let from_s = local.distances(&weights, local.s, true);
        let to_t = local.distances(&weights, local.t, false);
        AgDistances { local, weights, from_s, to_t }
    }

    /// Length of the shortest `s`-`t` path through edge `e`.
    pub fn through_length(&self, e: usize) -> Weight {
        let (u, v) = (self.local.tails[e], self.local.heads[e]);
        if self.from_s[u] == INFINITY || self.to_t[v] == INFINITY {
            return INFINITY;
        }
        self.from_s[u] + self.weights[e] + self.to_t[v]
    }

    /// Interval of relative positions edge `e` covers on its shortest
    /// `s`-`t` path.
    pub fn span(&self, e: usize) -> Option<(Position, Position)> {
        let length = self.through_length(e);
        if length == INFINITY {
            return None;
        }
        let start = self.from_s[self.local.tails[e]];
        Some((Position::new(start, length), Position::new(start + self.weights[e], length)))
    }
}

/// Relative position `d_H(s,u) / (d_H(s,u) + d_H(u,t))` of node `u`.
pub fn pos(ag: &AlternativeGraph, u: NodeId) -> Result<BigRational, MetricsError> {
    let idx = ag.nodes.binary_search(&u).map_err(|_| MetricsError::NodeNotInAg(u))?;
    let d = AgDistances::new(ag);
    let (before, after) = (d.from_s[idx], d.to_t[idx]);
    if before == INFINITY || after == INFINITY {
        return Err(MetricsError::InvalidAg(vec![Violation::NodeNotOnPath(u)]));
    }
    Ok(Position::new(before, before + after).to_rational())
}

/// `sum over edges (u,v) of w / (d_H(s,u) + w + d_H(v,t))`.
pub fn total_distance(ag: &AlternativeGraph) -> BigRational {
    total_distance_of(&AgDistances::new(ag))
}

fn total_distance_of(d: &AgDistances) -> BigRational {
    // group numerators by denominator to keep the rational sums small
    let mut by_length: BTreeMap<Weight, u128> = BTreeMap::new();
    for e in 0..d.weights.len() {
        let length = d.through_length(e);
        if length != INFINITY && length > 0 {
            *by_length.entry(length).or_default() += d.weights[e] as u128;
        }
    }
    by_length
        .into_iter()
        .fold(BigRational::zero(), |acc, (length, sum)| acc + BigRational::new(BigInt::from(sum), BigInt::from(length)))
}

/// `sum of weights / (d_G(s,t) * total distance)`.
pub fn average_distance(ag: &AlternativeGraph, d_g_st: Weight) -> Result<BigRational, MetricsError> {
    average_distance_of(ag.total_weight(), &total_distance(ag), d_g_st)
}

fn average_distance_of(total_weight: Weight, td: &BigRational, d_g_st: Weight) -> Result<BigRational, MetricsError> {
    if d_g_st == 0 || td.is_zero() {
        return Err(MetricsError::ZeroBaseDistance);
    }
    Ok(BigRational::from_integer(BigInt::from(total_weight)) / (td * BigInt::from(d_g_st)))
}

/// Sum of outdegrees over all nodes except `t`, minus one, on the reduced
/// alternative graph. With `outdegree(t) = 0` this is the reduced edge count
/// minus one.
pub fn decision_edges(ag: &AlternativeGraph) -> i64 {
    let reduced = reduce(ag);
    let leaving = reduced.edges.iter().filter(|e| e.from != reduced.t).count() as i64;
    leaving - 1
}

/// Position interval of every edge (in `ag.edges` order); `None` for edges on
/// no `s`-`t` path.
pub fn edge_spans(ag: &AlternativeGraph) -> Vec<Option<(Position, Position)>> {
    let d = AgDistances::new(ag);
    (0..ag.edges.len()).map(|e| d.span(e)).collect()
}

/// Number of edges whose span contains `x`.
pub fn edges_at_position(spans: &[Option<(Position, Position)>], x: Position) -> usize {
    spans.iter().flatten().filter(|(a, b)| *a <= x && x <= *b).count()
}

/// Splits `[0,1]` at every span end and returns each piece with the number of
/// edges covering it.
fn segments(spans: &[Option<(Position, Position)>]) -> Vec<(usize, Position, Position)> {
    let mut starts: Vec<Position> = spans.iter().flatten().map(|s| s.0).collect();
    let mut ends: Vec<Position> = spans.iter().flatten().map(|s| s.1).collect();
    starts.sort();
    ends.sort();
    let mut breaks: Vec<Position> = starts.iter().chain(&ends).copied().collect();
    breaks.push(Position::new(0, 1));
    breaks.push(Position::new(1, 1));
    breaks.sort();
    breaks.dedup();

    let (mut si, mut ei) = (0, 0);
    let mut out = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        // edges covering (a, b) are those with start <= a and end > a
        while si < starts.len() && starts[si] <= a {
            si += 1;
        }
        while ei < ends.len() && ends[ei] <= a {
            ei += 1;
        }
        out.push((si - ei, a, b));
    }
    out
}

/// Lengths of `[0,1]` covered by exactly `c` edges, for every count `c`.
fn coverage(spans: &[Option<(Position, Position)>]) -> BTreeMap<usize, BigRational> {
    let mut lengths: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (count, a, b) in segments(spans) {
        *lengths.entry(count).or_insert_with(BigRational::zero) += b.to_rational() - a.to_rational();
    }
    lengths
}

/// `integral over [0,1] of (total distance - edges at x)^2 dx`.
pub fn variance(ag: &AlternativeGraph) -> BigRational {
    let d = AgDistances::new(ag);
    let td = total_distance_of(&d);
    let spans: Vec<_> = (0..ag.edges.len()).map(|e| d.span(e)).collect();
    variance_of(&td, &spans)
}

fn variance_of(td: &BigRational, spans: &[Option<(Position, Position)>]) -> BigRational {
    coverage(spans).into_iter().fold(BigRational::zero(), |acc, (count, width)| {
        let diff = td - BigRational::from_integer(BigInt::from(count));
        acc + &diff * &diff * width
    })
}

/// Squared coefficient of variation, `variance / total_distance^2`; kept
/// squared so it stays exact.
pub fn coefficient_of_variation_squared(ag: &AlternativeGraph) -> BigRational {
    let td = total_distance(ag);
    if td.is_zero() {
        return BigRational::zero();
    }
    variance(ag) / (&td * &td)
}

pub fn coefficient_of_variation(ag: &AlternativeGraph) -> f64 {
    coefficient_of_variation_squared(ag).to_f64().unwrap_or(f64::NAN).sqrt()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    pub total_distance: BigRational,
    pub average_distance: BigRational,
    pub decision_edges: i64,
    pub variance: BigRational,
    pub coefficient_of_variation_squared: BigRational,
    /// Loop-free `s`-`t` paths, saturated at the configured cap.
    pub simple_path_count: u64,
    pub d_g_st: Weight,
}

impl MetricsReport {
    pub fn coefficient_of_variation(&self) -> f64 {
        to_f64(&self.coefficient_of_variation_squared).sqrt()
    }
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub const DEFAULT_PATH_COUNT_CAP: u64 = 10_000;

/// All measures of a valid alternative graph at once.
pub fn report(ag: &AlternativeGraph, d_g_st: Weight, path_count_cap: u64) -> Result<MetricsReport, MetricsError> {
    let violations = validate(ag);
    if !violations.is_empty() {
        return Err(MetricsError::InvalidAg(violations));
    }
    let d = AgDistances::new(ag);
    let td = total_distance_of(&d);
    let spans: Vec<_> = (0..ag.edges.len()).map(|e| d.span(e)).collect();
    let variance = variance_of(&td, &spans);
    let cov2 = if td.is_zero() { BigRational::zero() } else { &variance / (&td * &td) };
    Ok(MetricsReport {
        average_distance: average_distance_of(ag.total_weight(), &td, d_g_st)?,
        total_distance: td,
        decision_edges: decision_edges(ag),
        variance,
        coefficient_of_variation_squared: cov2,
        simple_path_count: count_simple_paths(ag, path_count_cap),
        d_g_st,
    })
}

/// Weights and bounds of the combined objective
/// `score = total_distance - alpha * average_distance`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveConfig {
    pub alpha: f64,
    pub max_decision_edges: i64,
    /// Every edge must lie on an `s`-`t` path of length at most
    /// `(1 + max_stretch) * d_G(s,t)`.
    pub max_stretch: f64,
    pub max_cov: Option<f64>,
    pub path_count_cap: u64,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            alpha: 1.0,
            max_decision_edges: 10,
            max_stretch: 0.25,
            max_cov: None,
            path_count_cap: DEFAULT_PATH_COUNT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub score: BigRational,
    pub feasible: bool,
    pub report: MetricsReport,
}

/// True if `length <= (1 + stretch) * base`, with the bound on the fixed
/// factor grid.
pub fn within_stretch(length: Weight, base: Weight, stretch: f64) -> bool {
    if stretch.is_infinite() {
        return true;
    }
    let bound = factor_from_f64(1.0 + stretch);
    length as u128 * *bound.denom() as u128 <= base as u128 * *bound.numer() as u128
}

/// Longest shortest-through-path over all edges, i.e. the stretch every edge
/// is guaranteed to be reachable within.
pub fn max_through_length(ag: &AlternativeGraph) -> Weight {
    let d = AgDistances::new(ag);
    (0..ag.edges.len()).map(|e| d.through_length(e)).max().unwrap_or(0)
}

pub fn evaluate(ag: &AlternativeGraph, d_g_st: Weight, cfg: &ObjectiveConfig) -> Result<Evaluation, MetricsError> {
    let report = report(ag, d_g_st, cfg.path_count_cap)?;
    let (score, feasible) = score(ag, d_g_st, cfg)?;
    Ok(Evaluation { score, feasible, report })
}

/// Score and feasibility of `ag` without the full report. `ag` must be
/// valid; nothing is checked.
pub fn score(
    ag: &AlternativeGraph,
    d_g_st: Weight,
    cfg: &ObjectiveConfig,
) -> Result<(BigRational, bool), MetricsError> {
    let d = AgDistances::new(ag);
    let td = total_distance_of(&d);
    let ad = average_distance_of(ag.total_weight(), &td, d_g_st)?;
    let alpha = BigRational::from_float(cfg.alpha).expect("finite alpha");
    let score = &td - alpha * ad;
    let longest = (0..ag.edges.len()).map(|e| d.through_length(e)).max().unwrap_or(0);
    let mut feasible = decision_edges(ag) <= cfg.max_decision_edges && within_stretch(longest, d_g_st, cfg.max_stretch);
    if let (true, Some(max)) = (feasible, cfg.max_cov) {
        let spans: Vec<_> = (0..ag.edges.len()).map(|e| d.span(e)).collect();
        let max = BigRational::from_float(max).expect("finite max_cov");
        feasible = variance_of(&td, &spans) <= &max * &max * &td * &td;
    }
    Ok((score, feasible))
}

/// Floating-point version of [`score`] for ranking many alternatives
/// quickly. Feasibility of the decision-edge and stretch bounds is exact; the
/// CoV bound is checked in floating point.
pub fn approx_score(ag: &AlternativeGraph, d_g_st: Weight, cfg: &ObjectiveConfig) -> Result<(f64, bool), MetricsError> {
    let d = AgDistances::new(ag);
    let lengths: Vec<Weight> = (0..ag.edges.len()).map(|e| d.through_length(e)).collect();
    let td: f64 = lengths
        .iter()
        .zip(&d.weights)
        .filter(|(&l, _)| l != INFINITY && l > 0)
        .map(|(&l, &w)| w as f64 / l as f64)
        .sum();
    if d_g_st == 0 || td == 0.0 {
        return Err(MetricsError::ZeroBaseDistance);
    }
    let ad = ag.total_weight() as f64 / (td * d_g_st as f64);
    let longest = lengths.iter().copied().max().unwrap_or(0);
    let mut feasible = decision_edges(ag) <= cfg.max_decision_edges && within_stretch(longest, d_g_st, cfg.max_stretch);
    if let (true, Some(max)) = (feasible, cfg.max_cov) {
        let spans: Vec<_> = (0..ag.edges.len()).map(|e| d.span(e)).collect();
        feasible = approx_variance(td, &spans).sqrt() <= max * td;
    }
    Ok((td - cfg.alpha * ad, feasible))
}

/// Scores single-edge removals from one alternative graph.
pub(crate) struct RemovalScorer {
    local: LocalGraph,
    weights: Vec<Weight>,
}

impl RemovalScorer {
    pub fn new(ag: &AlternativeGraph) -> Self {
        RemovalScorer { local: ag.local(), weights: ag.edges.iter().map(|e| e.weight).collect() }
    }

    /// Floating-point score of the graph with edge `removed` deleted, pruned
    /// and reduced; equal to [`approx_score`] of that graph up to rounding.
    pub fn score_without(
        &mut self,
        removed: usize,
        d_g_st: Weight,
        cfg: &ObjectiveConfig,
    ) -> Result<(f64, bool), MetricsError> {
        let saved = std::mem::replace(&mut self.weights[removed], INFINITY);
        let result = approx_score_local(&self.local, &self.weights, d_g_st, cfg);
        self.weights[removed] = saved;
        result
    }
}

fn approx_score_local(
    local: &LocalGraph,
    weights: &[Weight],
    d_g_st: Weight,
    cfg: &ObjectiveConfig,
) -> Result<(f64, bool), MetricsError> {
    let from_s = local.distances(weights, local.s, true);
    let to_t = local.distances(weights, local.t, false);
    let n = local.nodes.len();
    let (mut indeg, mut outdeg) = (vec![0usize; n], vec![0usize; n]);
    let mut self_loop = vec![false; n];
    let (mut td, mut total_weight, mut longest, mut kept, mut leaving_t) = (0.0, 0u64, 0, 0i64, 0i64);
    let mut spans = Vec::new();
    for (e, &w) in weights.iter().enumerate() {
        let (u, v) = (local.tails[e], local.heads[e]);
        if w == INFINITY || from_s[u] == INFINITY || to_t[v] == INFINITY {
            continue;
        }
        let length = from_s[u] + w + to_t[v];
        if length > 0 {
            td += w as f64 / length as f64;
        }
        total_weight += w;
        longest = longest.max(length);
        kept += 1;
        leaving_t += i64::from(u == local.t);
        outdeg[u] += 1;
        indeg[v] += 1;
        self_loop[u] |= u == v;
        spans.push(Some((Position::new(from_s[u], length), Position::new(from_s[u] + w, length))));
    }
    if d_g_st == 0 || td == 0.0 {
        return Err(MetricsError::ZeroBaseDistance);
    }
    let contracted = (0..n)
        .filter(|&v| v != local.s && v != local.t && indeg[v] == 1 && outdeg[v] == 1 && !self_loop[v])
        .count() as i64;
    let decision = kept - contracted - leaving_t - 1;
    let ad = total_weight as f64 / (td * d_g_st as f64);
    let mut feasible = decision <= cfg.max_decision_edges && within_stretch(longest, d_g_st, cfg.max_stretch);
    if let (true, Some(max)) = (feasible, cfg.max_cov) {
        feasible = approx_variance(td, &spans).sqrt() <= max * td;
    }
    Ok((td - cfg.alpha * ad, feasible))
}

fn approx_variance(td: f64, spans: &[Option<(Position, Position)>]) -> f64 {
    segments(spans).into_iter().map(|(count, a, b)| (td - count as f64).powi(2) * (b.to_f64() - a.to_f64())).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Path, RoadGraph};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ag_of(nodes: usize, edges: &[(NodeId, NodeId, Weight)], s: NodeId, t: NodeId) -> AlternativeGraph {
        let g = RoadGraph::new(nodes, edges).unwrap();
        AlternativeGraph::from_edge_set(&g, "weight", s, t, 0..edges.len()).unwrap()
    }

    #[test]
    fn positions() {
        let ag = ag_of(3, &[(0, 1, 1), (1, 2, 3)], 0, 2);
        assert_eq!(pos(&ag, 0).unwrap(), r(0, 1));
        assert_eq!(pos(&ag, 2).unwrap(), r(1, 1));
        assert_eq!(pos(&ag, 1).unwrap(), r(1, 4));
        assert_eq!(pos(&ag, 7), Err(MetricsError::NodeNotInAg(7)));
    }

    #[test]
    fn single_path_metrics() {
        let ag = ag_of(3, &[(0, 1, 1), (1, 2, 3)], 0, 2);
        assert_eq!(total_distance(&ag), r(1, 1));
        assert_eq!(average_distance(&ag, 4).unwrap(), r(1, 1));
        assert_eq!(decision_edges(&ag), 0);
        assert_eq!(variance(&ag), r(0, 1));
        assert_eq!(average_distance(&ag, 0), Err(MetricsError::ZeroBaseDistance));
    }

    #[test]
    fn uneven_diamond() {
        // arms of weight 1+1 and 2+2, d_G = 2
        let ag = ag_of(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 2), (2, 3, 2)], 0, 3);
        assert_eq!(total_distance(&ag), r(2, 1));
        assert_eq!(average_distance(&ag, 2).unwrap(), r(3, 2));
        assert_eq!(pos(&ag, 1).unwrap(), r(1, 2));
        assert_eq!(decision_edges(&ag), 1);
    }

    #[test]
    fn three_parallel_branches() {
        let ag = ag_of(2, &[(0, 1, 5), (0, 1, 6), (0, 1, 7)], 0, 1);
        assert_eq!(decision_edges(&ag), 2);
        assert_eq!(decision_edges(&reduce(&ag)), reduce(&ag).edges.len() as i64 - 1);
    }

    #[test]
    fn evaluate_baselines() {
        let ag = ag_of(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)], 0, 3);
        let cfg = ObjectiveConfig::default();
        let e = evaluate(&ag, 2, &cfg).unwrap();
        assert_eq!(e.score, r(1, 1));
        assert!(e.feasible);

        let g = RoadGraph::new(2, &[(0, 1, 4)]).unwrap();
        let p = Path::from_edges(&g, 0, vec![0], g.main_weights()).unwrap();
        let single = AlternativeGraph::from_paths(&g, &[p], 0, 1).unwrap();
        let e = evaluate(&single, 4, &cfg).unwrap();
        assert_eq!(e.score, r(0, 1));
        assert!(e.feasible);
    }

    #[test]
    fn decision_edge_cap_makes_infeasible() {
        // 12 parallel edges -> 11 decision edges
        let edges: Vec<_> = (0..12).map(|i| (0, 1, 10 + i as Weight % 2)).collect();
        let ag = ag_of(2, &edges, 0, 1);
        let e = evaluate(&ag, 10, &ObjectiveConfig::default()).unwrap();
        assert_eq!(e.report.decision_edges, 11);
        assert!(!e.feasible);
    }

    #[test]
    fn stretch_bound() {
        assert!(within_stretch(125, 100, 0.25));
        assert!(!within_stretch(126, 100, 0.25));
        assert!(within_stretch(u32::MAX as Weight, 1, f64::INFINITY));
        let ag = ag_of(2, &[(0, 1, 10), (0, 1, 13)], 0, 1);
        let e = evaluate(&ag, 10, &ObjectiveConfig::default()).unwrap();
        assert!(!e.feasible);
    }

    #[test]
    fn cov_cap() {
        // three arms over the first half, one over the second
        let ag = ag_of(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1)], 0, 4);
        let cfg = ObjectiveConfig { max_cov: Some(0.0), ..Default::default() };
        let unbalanced = ag_of(6, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1), (4, 5, 2)], 0, 5);
        assert!(evaluate(&ag, 2, &cfg).unwrap().feasible);
        assert!(!evaluate(&unbalanced, 4, &cfg).unwrap().feasible);
    }
}
