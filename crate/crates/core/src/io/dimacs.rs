//! DIMACS shortest-path format (`.gr` arcs, `.co` coordinates). Node ids are
//! 1-based in files and 0-based in memory.

use std::fmt::Write as _;
use std::path::Path;

use crate::graph::{NodeId, RoadGraph, Weight, MAX_EDGE_WEIGHT};

use super::{read_file, IoError};

fn numbers<const N: usize>(line: usize, fields: &[&str]) -> Result<[i64; N], IoError> {
    if fields.len() != N {
        return Err(IoError::MalformedLine { line, reason: format!("expected {N} numbers, found {}", fields.len()) });
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f.parse().map_err(|_| IoError::MalformedLine { line, reason: format!("not an integer: {f:?}") })?;
    }
    Ok(out)
}

fn node(line: usize, id: i64, node_count: usize) -> Result<NodeId, IoError> {
    if id < 1 || id as u64 > node_count as u64 {
        return Err(IoError::IdOutOfRange { line, id, node_count });
    }
    Ok(id as NodeId - 1)
}

pub fn parse_dimacs(text: &str) -> Result<RoadGraph, IoError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut arcs: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(IoError::MalformedHeader { line, reason: "second problem line".into() });
                }
                if fields.len() != 4 || fields[1] != "sp" {
                    return Err(IoError::MalformedHeader { line, reason: "expected `p sp <nodes> <arcs>`".into() });
                }
                let parse = |f: &str| {
                    f.parse::<usize>()
                        .map_err(|_| IoError::MalformedHeader { line, reason: format!("not a count: {f:?}") })
                };
                header = Some((line, parse(fields[2])?, parse(fields[3])?));
            }
            Some("a") => {
                let Some((_, n, m)) = header else {
                    return Err(IoError::MalformedHeader { line, reason: "arc before the problem line".into() });
                };
                let [u, v, w] = numbers::<3>(line, &fields[1..])?;
                let (u, v) = (node(line, u, n)?, node(line, v, n)?);
                if w < 0 {
                    return Err(IoError::NegativeWeight { line, weight: w });
                }
                if w as u64 > MAX_EDGE_WEIGHT {
                    return Err(IoError::MalformedLine {
                        line,
                        reason: format!("weight {w} exceeds {MAX_EDGE_WEIGHT}"),
                    });
                }
                if arcs.len() == m {
                    return Err(IoError::ArcCountMismatch { line, declared: m, found: m + 1 });
                }
                arcs.push((u, v, w as Weight));
            }
            Some(other) => {
                return Err(IoError::MalformedLine { line, reason: format!("unknown line type {other:?}") });
            }
        }
    }
    let Some((line, n, m)) = header else {
        return Err(IoError::MalformedHeader {
            line: text.lines().count().max(1),
            reason: "missing problem line".into(),
        });
    };
    if arcs.len() != m {
        return Err(IoError::ArcCountMismatch { line, declared: m, found: arcs.len() });
    }
    Ok(RoadGraph::new(n, &arcs)?)
}

/// Parses `v <id> <x> <y>` lines; every node needs exactly one.
pub fn parse_coordinates(text: &str, node_count: usize) -> Result<Vec<(f64, f64)>, IoError> {
    let mut coords: Vec<Option<(f64, f64)>> = vec![None; node_count];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") | Some("p") => {}
            Some("v") => {
                if fields.len() != 4 {
                    return Err(IoError::MalformedLine { line, reason: "expected `v <id> <x> <y>`".into() });
                }
                let id: i64 = fields[1]
                    .parse()
                    .map_err(|_| IoError::MalformedLine { line, reason: format!("not an integer: {:?}", fields[1]) })?;
                let id = node(line, id, node_count)?;
                let mut xy = [0.0; 2];
                for (slot, f) in xy.iter_mut().zip(&fields[2..]) {
                    *slot = f
                        .parse()
                        .map_err(|_| IoError::MalformedLine { line, reason: format!("not a number: {f:?}") })?;
                }
                if coords[id].replace((xy[0], xy[1])).is_some() {
                    return Err(IoError::MalformedLine { line, reason: format!("node {} listed twice", id + 1) });
                }
            }
            Some(other) => {
                return Err(IoError::MalformedLine { line, reason: format!("unknown line type {other:?}") });
            }
        }
    }
    coords.into_iter().enumerate().map(|(v, c)| c.ok_or(IoError::MissingCoordinate(v))).collect()
}

pub fn load_dimacs(gr: &Path, co: Option<&Path>) -> Result<RoadGraph, IoError> {
    let graph = parse_dimacs(&read_file(gr)?)?;
    match co {
        None => Ok(graph),
        Some(co) => {
            let coords = parse_coordinates(&read_file(co)?, graph.node_count())?;
            Ok(graph.with_coordinates(coords)?)
        }
    }
}

/// Arcs under the main weight function, in edge id order.
pub fn write_dimacs(graph: &RoadGraph) -> String {
    let weights = graph.main_weights();
    let mut out = format!("p sp {} {}\n", graph.node_count(), graph.edge_count());
    for (e, u, v) in graph.edges() {
        writeln!(out, "a {} {} {}", u + 1, v + 1, weights[e]).unwrap();
    }
    out
}

pub fn write_coordinates(graph: &RoadGraph) -> Option<String> {
    let coords = graph.coordinates()?;
    let mut out = format!("p aux sp co {}\n", coords.len());
    for (v, (x, y)) in coords.iter().enumerate() {
        writeln!(out, "v {} {x} {y}", v + 1).unwrap();
    }
    Some(out)
}
