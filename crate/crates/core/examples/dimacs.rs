//! Parse a DIMACS graph from text and query a shortest path.

use altroute::graph::WeightOverlay;
use altroute::io::parse_dimacs;
use altroute::shortest_path;

const GRAPH: &str = "\
c six nodes, two routes from 1 to 6
p sp 6 7
a 1 2 4
a 2 3 4
a 3 6 4
a 1 4 5
a 4 5 5
a 5 6 3
a 2 5 2
";

fn main() {
    let g = parse_dimacs(GRAPH).unwrap();
    let p = shortest_path(&g, &WeightOverlay::main(&g), 0, 5).unwrap();
    // print with the file's 1-based ids
    let nodes: Vec<_> = p.nodes.iter().map(|v| v + 1).collect();
    println!("shortest path {nodes:?}, length {}", p.weight);

    match parse_dimacs("p sp 2 1\na 1 3 7\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("bad input: {e}"),
    }
}
