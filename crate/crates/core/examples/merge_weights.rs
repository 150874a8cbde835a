//! Alternatives under two weight functions, merged into one graph.

use altroute::graph::WeightOverlay;
use altroute::io::generate_grid;
use altroute::merge;
use altroute::methods::plateau_candidates;
use altroute::metrics::report;
use altroute::AlternativeGraph;

fn main() {
    let g = generate_grid(10, 10, 6, 3).unwrap();
    // a second metric: the same roads, but the middle rows are slow
    let slow: Vec<u64> = g
        .edges()
        .map(|(e, u, _)| if (3..7).contains(&(u / 10)) { 3 * g.main_weights()[e] } else { g.main_weights()[e] })
        .collect();
    let g = g.with_weight_function("rush_hour", slow).unwrap();

    let mut parts = Vec::new();
    for name in ["weight", "rush_hour"] {
        let cands = plateau_candidates(&g, &WeightOverlay::over(&g, name).unwrap(), 0, 99, 3).unwrap();
        let paths: Vec<_> = cands.into_iter().map(|c| c.path).collect();
        parts.push(AlternativeGraph::from_paths_with(&g, name, &paths, 0, 99).unwrap());
    }
    let merged = merge(&g, &parts, "weight").unwrap();
    let d = merged.shortest_path().unwrap().weight;
    let r = report(&merged, d, 1000).unwrap();
    println!("{} edges after merging, {} decision edges", merged.edges.len(), r.decision_edges);
    println!(
        "total distance {:.3}, {} simple paths",
        altroute::metrics::to_f64(&r.total_distance),
        r.simple_path_count
    );
}
