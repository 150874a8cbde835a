//! Quality metrics of two small alternative graphs.

use altroute::graph::RoadGraph;
use altroute::metrics::{report, to_f64};
use altroute::AlternativeGraph;

fn show(name: &str, edges: &[(usize, usize, u64)], d_g_st: u64) {
    let g = RoadGraph::new(4, edges).unwrap();
    let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 3, 0..edges.len()).unwrap();
    let r = report(&ag, d_g_st, 100).unwrap();
    println!("{name}");
    println!("  total distance    {}", r.total_distance);
    println!("  average distance  {}", r.average_distance);
    println!("  decision edges    {}", r.decision_edges);
    println!("  variance          {} (~{:.4})", r.variance, to_f64(&r.variance));
    println!("  CoV               {:.4}", r.coefficient_of_variation());
}

fn main() {
    show("unit diamond", &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)], 2);
    show("uneven diamond", &[(0, 1, 1), (1, 3, 1), (0, 2, 2), (2, 3, 2)], 2);
    // a short hop between the arms
    show("diamond with a cross edge", &[(0, 1, 5), (1, 3, 5), (0, 2, 6), (2, 3, 6), (1, 2, 1)], 10);
}
