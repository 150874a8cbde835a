//! The k shortest loopless paths, bounded by stretch.

use altroute::graph::WeightOverlay;
use altroute::io::generate_grid;
use altroute::methods::yen_candidates;

fn main() {
    let g = generate_grid(10, 10, 3, 3).unwrap();
    let cands = yen_candidates(&g, &WeightOverlay::main(&g), 0, 99, 12, 0.1).unwrap();
    let d = cands[0].path.weight;
    for c in &cands {
        println!("length {} ({:+.1}%)", c.path.weight, 100.0 * (c.path.weight as f64 / d as f64 - 1.0));
    }
}
