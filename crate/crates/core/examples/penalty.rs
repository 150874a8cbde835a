//! The penalty method with its main knobs.

use altroute::io::generate_grid;
use altroute::metrics::{decision_edges, to_f64, total_distance};
use altroute::penalty::{penalty_alternatives, PenaltyConfig, RejoinPenalty};

fn main() {
    let g = generate_grid(20, 20, 4, 3).unwrap();
    let (s, t) = (21, 378);
    let configs = [
        ("default", PenaltyConfig::default()),
        ("no rejoin penalty", PenaltyConfig { rejoin: RejoinPenalty::Fraction(0.0), ..Default::default() }),
        ("full rejoin penalty", PenaltyConfig { rejoin: RejoinPenalty::Fraction(1.0), ..Default::default() }),
        ("tube of radius 15", PenaltyConfig { tube_radius: 15, ..Default::default() }),
        ("damped increases", PenaltyConfig { damping: Some(0.5), max_increases_per_edge: 8, ..Default::default() }),
    ];
    for (name, cfg) in configs {
        let run = penalty_alternatives(&g, s, t, &cfg, None).unwrap();
        println!(
            "{name:20} iterations {:2}  accepted {:2}  total distance {:6.3}  decision edges {}",
            run.iterations,
            run.accepted.len(),
            to_f64(&total_distance(&run.ag)),
            decision_edges(&run.ag)
        );
    }
}
