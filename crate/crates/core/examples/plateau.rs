//! Plateau candidates on a small grid.

use altroute::graph::WeightOverlay;
use altroute::io::generate_grid;
use altroute::methods::{plateau_candidates, Provenance};

fn main() {
    let g = generate_grid(8, 8, 5, 3).unwrap();
    let cands = plateau_candidates(&g, &WeightOverlay::main(&g), 0, 63, 8).unwrap();
    for c in &cands {
        if let Provenance::Plateau { start, end, plateau_length, .. } = c.provenance {
            println!(
                "length {:3}  rank {:3}  plateau {start:2} -> {end:2} ({plateau_length})",
                c.path.weight, c.rank_key
            );
        }
    }
}
