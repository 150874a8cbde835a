//! Pareto-optimal paths under travel time and a second criterion, with and
//! without tightened domination.

use altroute::io::generate_grid;
use altroute::methods::{pareto_candidates, ParetoConfig};
use rand::{Rng, SeedableRng};

fn main() {
    let g = generate_grid(7, 7, 2, 3).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let tolls = (0..g.edge_count()).map(|_| rng.random_range(0..5)).collect();
    let g = g.with_weight_function("toll", tolls).unwrap();
    let criteria = vec!["weight".to_string(), "toll".to_string()];

    let plain = ParetoConfig::untightened(criteria.clone());
    let all = pareto_candidates(&g, 0, 48, &plain, 100_000).unwrap();
    println!("{} pareto-optimal cost vectors:", all.len());
    for c in &all {
        println!("  {:?}", c.provenance);
    }

    for eps in [0.2, 0.05] {
        let tight = ParetoConfig { epsilon: Some(eps), ..plain.clone() };
        let n = pareto_candidates(&g, 0, 48, &tight, 100_000).unwrap().len();
        println!("epsilon {eps}: {n} left");
    }
}
