use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::altgraph::{reduce, AlternativeGraph};
use crate::graph::RoadGraph;
use crate::metrics::{edge_spans, MetricsReport};

use super::{write_file, AgDocument, DocMetrics, IoError, MethodEcho};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Geojson,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "geojson" => Ok(Format::Geojson),
            other => Err(format!("unknown format {other:?} (json, dot, geojson)")),
        }
    }
}

/// Graphviz rendering of the reduced graph; edges are labelled
/// `weight / [start, end]` with their position span.
pub fn to_dot(ag: &AlternativeGraph) -> String {
    let reduced = reduce(ag);
    let spans = edge_spans(&reduced);
    let mut out = String::from("digraph alternatives {\n  rankdir=LR;\n");
    for &v in &reduced.nodes {
        let shape = if v == reduced.s || v == reduced.t { "doublecircle" } else { "circle" };
        writeln!(out, "  n{v} [label=\"{v}\", shape={shape}];").unwrap();
    }
    for (e, span) in reduced.edges.iter().zip(&spans) {
        let span = match span {
            Some((a, b)) => format!("[{:.3}, {:.3}]", a.to_f64(), b.to_f64()),
            None => "-".into(),
        };
        writeln!(out, "  n{} -> n{} [label=\"{} / {span}\"];", e.from, e.to, e.weight).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One LineString feature per reduced edge, following its road path. Metrics
/// go into the collection's `properties`.
pub fn to_geojson(ag: &AlternativeGraph, graph: &RoadGraph, report: Option<&MetricsReport>) -> Result<Value, IoError> {
    let coords = graph.coordinates().ok_or(IoError::MissingCoordinates)?;
    let reduced = reduce(ag);
    let spans = edge_spans(&reduced);
    let mut features = Vec::with_capacity(reduced.edges.len());
    for (e, span) in reduced.edges.iter().zip(&spans) {
        let line: Vec<[f64; 2]> = e
            .underlying
            .nodes
            .iter()
            .map(|&v| coords.get(v).map(|&(x, y)| [x, y]).ok_or(IoError::MissingCoordinate(v)))
            .collect::<Result<_, _>>()?;
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": line },
            "properties": {
                "from": e.from,
                "to": e.to,
                "weight": e.weight,
                "span": span.map(|(a, b)| [a.to_f64(), b.to_f64()]),
            },
        }));
    }
    Ok(json!({
        "type": "FeatureCollection",
        "features": features,
        "properties": { "s": ag.s, "t": ag.t, "metrics": report.map(DocMetrics::new) },
    }))
}

/// Writes `ag` to `path` in the given format.
pub fn export(
    ag: &AlternativeGraph,
    graph: &RoadGraph,
    report: Option<&MetricsReport>,
    method: Option<MethodEcho>,
    format: Format,
    path: &std::path::Path,
) -> Result<(), IoError> {
    let text = match format {
        Format::Json => AgDocument::new(ag, Some(graph), report, method).to_json(),
        Format::Dot => to_dot(ag),
        Format::Geojson => {
            let mut s = serde_json::to_string_pretty(&to_geojson(ag, graph, report)?)?;
            s.push('\n');
            s
        }
    };
    write_file(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_of_diamond() {
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 3, 0..4).unwrap();
        let dot = to_dot(&ag);
        assert_eq!(dot.matches("n0 -> n3").count(), 2);
        assert!(dot.contains("[label=\"2 / [0.000, 1.000]\"]"));
    }

    #[test]
    fn geojson_needs_coordinates() {
        let g = RoadGraph::new(2, &[(0, 1, 1)]).unwrap();
        let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 1, [0]).unwrap();
        assert!(matches!(to_geojson(&ag, &g, None), Err(IoError::MissingCoordinates)));
        let g = g.with_coordinates(vec![(0.0, 0.0), (3.0, 4.0)]).unwrap();
        let v = to_geojson(&ag, &g, None).unwrap();
        assert_eq!(v["features"][0]["geometry"]["coordinates"], json!([[0.0, 0.0], [3.0, 4.0]]));
    }
}
