// Independent reference implementations used by the integration tests. They
// favor obviousness over speed and share no code with the library beyond the
// graph accessors.
#![allow(dead_code)]

use std::collections::VecDeque;

use altroute::graph::{EdgeId, NodeId, Path, RoadGraph, Weight};
use altroute::io::generate_grid;
use altroute::AlternativeGraph;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random directed multigraph with weights in `1..=max_weight`.
pub fn random_graph(seed: u64, nodes: usize, edges: usize, max_weight: Weight) -> RoadGraph {
    let mut r = rng(seed);
    let arcs: Vec<(NodeId, NodeId, Weight)> = (0..edges)
        .map(|_| {
            let u = r.random_range(0..nodes);
            let mut v = r.random_range(0..nodes - 1);
            if v >= u {
                v += 1;
            }
            (u, v, r.random_range(1..=max_weight))
        })
        .collect();
    RoadGraph::new(nodes, &arcs).unwrap()
}

/// Distances from `s` by repeated relaxation.
pub fn bellman_ford(graph: &RoadGraph, weights: &[Weight], s: NodeId) -> Vec<Option<Weight>> {
    let mut dist = vec![None; graph.node_count()];
    dist[s] = Some(0);
    for _ in 0..graph.node_count() {
        let mut changed = false;
        for (e, u, v) in graph.edges() {
            if let Some(du) = dist[u] {
                let nd = du + weights[e];
                if dist[v].is_none_or(|dv| nd < dv) {
                    dist[v] = Some(nd);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Every loop-free `s`-`t` path, as edge lists.
pub fn simple_paths(graph: &RoadGraph, s: NodeId, t: NodeId) -> Vec<Vec<EdgeId>> {
    fn walk(
        graph: &RoadGraph,
        at: NodeId,
        t: NodeId,
        seen: &mut Vec<bool>,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if at == t {
            out.push(stack.clone());
            return;
        }
        for (e, u, v) in graph.edges() {
            if u != at || seen[v] {
                continue;
            }
            seen[v] = true;
            stack.push(e);
            walk(graph, v, t, seen, stack, out);
            stack.pop();
            seen[v] = false;
        }
    }
    let mut seen = vec![false; graph.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    walk(graph, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

pub fn cost(weights: &[Weight], edges: &[EdgeId]) -> Weight {
    edges.iter().map(|&e| weights[e]).sum()
}

/// Cost vectors not weakly dominated by a different cost vector, deduplicated
/// and sorted.
pub fn pareto_front(costs: &[Vec<Weight>]) -> Vec<Vec<Weight>> {
    let dominated = |a: &Vec<Weight>| costs.iter().any(|b| b != a && b.iter().zip(a).all(|(x, y)| x <= y));
    let mut front: Vec<Vec<Weight>> = costs.iter().filter(|c| !dominated(c)).cloned().collect();
    front.sort();
    front.dedup();
    front
}

/// Maximum number of edge-disjoint `s`-`t` paths (unit capacities, BFS
/// augmentation on a residual graph).
pub fn unit_max_flow(graph: &RoadGraph, s: NodeId, t: NodeId) -> usize {
    let n = graph.node_count();
    // residual arcs: (to, capacity, index of the reverse arc)
    let mut adj: Vec<Vec<(usize, i32, usize)>> = vec![Vec::new(); n];
    for (_, u, v) in graph.edges() {
        let (iu, iv) = (adj[u].len(), adj[v].len());
        adj[u].push((v, 1, iv));
        adj[v].push((u, 0, iu));
    }
    let mut flow = 0;
    loop {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = VecDeque::from([s]);
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            if u == t {
                found = true;
                break;
            }
            for (i, &(v, cap, _)) in adj[u].iter().enumerate() {
                if cap > 0 && v != s && prev[v].is_none() {
                    prev[v] = Some((u, i));
                    queue.push_back(v);
                }
            }
        }
        if !found {
            return flow;
        }
        let mut v = t;
        while let Some((u, i)) = prev[v] {
            let rev = adj[u][i].2;
            adj[u][i].1 -= 1;
            adj[v][rev].1 += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Random `s`-`t` paths on a seeded grid: shortest paths under randomly
/// rescaled copies of the weights.
pub fn random_grid_paths(
    width: usize,
    height: usize,
    seed: u64,
    count: usize,
) -> (RoadGraph, NodeId, NodeId, Vec<Path>) {
    let graph = generate_grid(width, height, seed, 3).unwrap();
    let mut r = rng(seed ^ 0x5eed);
    let s = r.random_range(0..graph.node_count());
    let mut t = r.random_range(0..graph.node_count() - 1);
    if t >= s {
        t += 1;
    }
    let arcs: Vec<(NodeId, NodeId)> = graph.edges().map(|(_, u, v)| (u, v)).collect();
    let paths = (0..count)
        .map(|_| {
            let noisy: Vec<Weight> = graph.main_weights().iter().map(|&w| w * r.random_range(1..=6)).collect();
            let g = RoadGraph::from_topology(graph.node_count(), &arcs, "weight", noisy).unwrap();
            let edges = dijkstra_edges(&g, g.main_weights(), s, t);
            Path::from_edges(&graph, s, edges, graph.main_weights()).unwrap()
        })
        .collect();
    (graph, s, t, paths)
}

/// Plain textbook Dijkstra returning the edges of one shortest path.
pub fn dijkstra_edges(graph: &RoadGraph, weights: &[Weight], s: NodeId, t: NodeId) -> Vec<EdgeId> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut dist = vec![Weight::MAX; graph.node_count()];
    let mut parent: Vec<Option<EdgeId>> = vec![None; graph.node_count()];
    dist[s] = 0;
    let mut heap = BinaryHeap::from([Reverse((0, s))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (e, a, b) in graph.edges() {
            if a == u && d + weights[e] < dist[b] {
                dist[b] = d + weights[e];
                parent[b] = Some(e);
                heap.push(Reverse((dist[b], b)));
            }
        }
    }
    let mut edges = Vec::new();
    let mut at = t;
    while let Some(e) = parent[at] {
        edges.push(e);
        at = graph.tail(e);
    }
    assert_eq!(at, s, "target unreachable");
    edges.reverse();
    edges
}

/// Total distance, average distance and variance evaluated in floating point
/// from the definitions, with all-pairs distances. The variance integral is
/// summed piece by piece between consecutive span boundaries.
pub struct NumericMetrics {
    pub total_distance: f64,
    pub average_distance: f64,
    pub variance: f64,
}

pub fn numeric_metrics(ag: &AlternativeGraph, d_g_st: Weight) -> NumericMetrics {
    let nodes = &ag.nodes;
    let idx = |v: NodeId| nodes.binary_search(&v).unwrap();
    let n = nodes.len();
    let inf = Weight::MAX / 4;
    // all-pairs by Floyd-Warshall on the tiny alternative graph
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in &ag.edges {
        let (u, v) = (idx(e.from), idx(e.to));
        d[u][v] = d[u][v].min(e.weight);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let (s, t) = (idx(ag.s), idx(ag.t));
    let mut spans = Vec::new();
    let mut td = 0.0;
    let mut weight = 0u64;
    for e in &ag.edges {
        let (u, v) = (idx(e.from), idx(e.to));
        let through = d[s][u] + e.weight + d[v][t];
        weight += e.weight;
        if through > 0 {
            td += e.weight as f64 / through as f64;
            spans.push((d[s][u] as f64 / through as f64, (d[s][u] + e.weight) as f64 / through as f64));
        }
    }
    let mut cuts: Vec<f64> = spans.iter().flat_map(|&(a, b)| [a, b]).chain([0.0, 1.0]).collect();
    cuts.sort_by(f64::total_cmp);
    let variance = cuts
        .windows(2)
        .map(|w| {
            let mid = (w[0] + w[1]) / 2.0;
            let c = spans.iter().filter(|(a, b)| *a <= mid && mid <= *b).count() as f64;
            (td - c).powi(2) * (w[1] - w[0])
        })
        .sum();
    NumericMetrics { total_distance: td, average_distance: weight as f64 / (td * d_g_st as f64), variance }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Weight distance of every node to the nearest source, as the smaller of the
/// distance from the sources and the distance to them.
pub fn distance_to_sources(graph: &RoadGraph, weights: &[Weight], sources: &[NodeId]) -> Vec<Option<Weight>> {
    let one_way = |forward: bool| {
        let mut dist: Vec<Option<Weight>> = vec![None; graph.node_count()];
        for &v in sources {
            dist[v] = Some(0);
        }
        loop {
            let mut changed = false;
            for (e, u, v) in graph.edges() {
                let (a, b) = if forward { (u, v) } else { (v, u) };
                if let Some(da) = dist[a] {
                    let nd = da + weights[e];
                    if dist[b].is_none_or(|db| nd < db) {
                        dist[b] = Some(nd);
                        changed = true;
                    }
                }
            }
            if !changed {
                return dist;
            }
        }
    };
    let (fwd, bwd) = (one_way(true), one_way(false));
    fwd.into_iter()
        .zip(bwd)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
        .collect()
}
