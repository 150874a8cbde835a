//! All five methods on one query, refined under the same objective.

use altroute::io::generate_grid;
use altroute::metrics::to_f64;
use altroute::{run_method, MethodSpec, ObjectiveConfig};

fn main() {
    let g = generate_grid(30, 30, 12, 3).unwrap();
    let objective = ObjectiveConfig::default();
    println!("{:10} {:>6} {:>8} {:>8} {:>9} {:>6}", "method", "cands", "TD", "AD", "decisions", "score");
    for name in MethodSpec::NAMES {
        let spec = MethodSpec::default_for(name).unwrap();
        let out = run_method(&g, 0, 899, &spec, &objective).unwrap();
        let r = &out.evaluation.report;
        println!(
            "{name:10} {:>6} {:>8.3} {:>8.3} {:>9} {:>6.3}",
            out.candidates,
            to_f64(&r.total_distance),
            to_f64(&r.average_distance),
            r.decision_edges,
            to_f64(&out.evaluation.score)
        );
    }
}
