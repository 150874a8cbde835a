//! Edge-disjoint candidates: take the shortest path, delete it, repeat.

use altroute::graph::WeightOverlay;
use altroute::io::generate_grid;
use altroute::methods::disjoint_candidates;

fn main() {
    let g = generate_grid(6, 6, 1, 3).unwrap();
    // the corner target has two incoming roads, so at most two paths
    let cands = disjoint_candidates(&g, &WeightOverlay::main(&g), 14, 35, 10).unwrap();
    for (i, c) in cands.iter().enumerate() {
        println!("{i}: length {:3}, {} edges", c.path.weight, c.path.len());
    }
}
