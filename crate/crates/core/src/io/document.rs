//! JSON form of an alternative graph with its metrics.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::altgraph::{AgEdge, AlternativeGraph};
use crate::graph::{EdgeId, NodeId, Path, RoadGraph, Weight};
use crate::metrics::{to_f64, MetricsReport};

use super::IoError;

pub const SCHEMA_VERSION: u32 = 1;

/// Exact rational as `"p/q"` plus its float approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactValue {
    pub exact: String,
    pub approx: f64,
}

impl ExactValue {
    pub fn new(value: &BigRational) -> Self {
        ExactValue { exact: value.to_string(), approx: to_f64(value) }
    }

    pub fn value(&self) -> Result<BigRational, IoError> {
        BigRational::from_str(&self.exact).map_err(|_| IoError::Document(format!("not a rational: {:?}", self.exact)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocMetrics {
    pub total_distance: ExactValue,
    pub average_distance: ExactValue,
    pub decision_edges: i64,
    pub variance: ExactValue,
    pub coefficient_of_variation_squared: ExactValue,
    pub coefficient_of_variation: f64,
    pub simple_path_count: u64,
    pub d_g_st: Weight,
}

impl DocMetrics {
    pub fn new(report: &MetricsReport) -> Self {
        DocMetrics {
            total_distance: ExactValue::new(&report.total_distance),
            average_distance: ExactValue::new(&report.average_distance),
            decision_edges: report.decision_edges,
            variance: ExactValue::new(&report.variance),
            coefficient_of_variation_squared: ExactValue::new(&report.coefficient_of_variation_squared),
            coefficient_of_variation: report.coefficient_of_variation(),
            simple_path_count: report.simple_path_count,
            d_g_st: report.d_g_st,
        }
    }

    pub fn report(&self) -> Result<MetricsReport, IoError> {
        Ok(MetricsReport {
            total_distance: self.total_distance.value()?,
            average_distance: self.average_distance.value()?,
            decision_edges: self.decision_edges,
            variance: self.variance.value()?,
            coefficient_of_variation_squared: self.coefficient_of_variation_squared.value()?,
            simple_path_count: self.simple_path_count,
            d_g_st: self.d_g_st,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocNode {
    pub id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: Weight,
    pub path_nodes: Vec<NodeId>,
    pub path_edges: Vec<EdgeId>,
}

/// Method name and the configuration it ran with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEcho {
    pub name: String,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgDocument {
    pub schema_version: u32,
    pub s: NodeId,
    pub t: NodeId,
    pub main_weight: String,
    pub nodes: Vec<DocNode>,
    pub edges: Vec<DocEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<DocMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodEcho>,
}

impl AgDocument {
    /// Coordinates are taken from `graph` when it has them.
    pub fn new(
        ag: &AlternativeGraph,
        graph: Option<&RoadGraph>,
        report: Option<&MetricsReport>,
        method: Option<MethodEcho>,
    ) -> Self {
        let coords = graph.and_then(|g| g.coordinates());
        AgDocument {
            schema_version: SCHEMA_VERSION,
            s: ag.s,
            t: ag.t,
            main_weight: ag.main_weight.clone(),
            nodes: ag
                .nodes
                .iter()
                .map(|&id| DocNode { id, coordinates: coords.and_then(|c| c.get(id)).map(|&(x, y)| [x, y]) })
                .collect(),
            edges: ag
                .edges
                .iter()
                .map(|e| DocEdge {
                    from: e.from,
                    to: e.to,
                    weight: e.weight,
                    path_nodes: e.underlying.nodes.clone(),
                    path_edges: e.underlying.edges.clone(),
                })
                .collect(),
            metrics: report.map(DocMetrics::new),
            method,
        }
    }

    /// The alternative graph as stored; no validity check is made.
    pub fn alternative_graph(&self) -> Result<AlternativeGraph, IoError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.path_nodes.len() != e.path_edges.len() + 1 {
                return Err(IoError::Document(format!(
                    "edge {i}: path has {} nodes for {} edges",
                    e.path_nodes.len(),
                    e.path_edges.len()
                )));
            }
            let underlying = Path {
                source: e.path_nodes[0],
                target: *e.path_nodes.last().unwrap(),
                nodes: e.path_nodes.clone(),
                edges: e.path_edges.clone(),
                weight: e.weight,
            };
            edges.push(AgEdge { from: e.from, to: e.to, weight: e.weight, underlying });
        }
        let mut ag =
            AlternativeGraph::from_parts(self.s, self.t, &self.main_weight, self.nodes.iter().map(|n| n.id), edges);
        // from_parts always adds the endpoints; keep the document's node list as is
        ag.nodes = self.nodes.iter().map(|n| n.id).collect();
        ag.nodes.sort_unstable();
        ag.nodes.dedup();
        Ok(ag)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: AgDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(IoError::Document(format!("unsupported schema version {}", doc.schema_version)));
        }
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::report;

    fn diamond() -> (RoadGraph, AlternativeGraph) {
        let g = RoadGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 2), (2, 3, 2)])
            .unwrap()
            .with_coordinates(vec![(0.0, 0.0), (1.0, 1.0), (1.0, -1.0), (2.0, 0.1)])
            .unwrap();
        let ag = AlternativeGraph::from_edge_set(&g, "weight", 0, 3, 0..4).unwrap();
        (g, ag)
    }

    #[test]
    fn round_trip() {
        let (g, ag) = diamond();
        let r = report(&ag, 2, 100).unwrap();
        let echo = MethodEcho { name: "test".into(), config: serde_json::json!({ "alpha": 0.3 }) };
        let doc = AgDocument::new(&ag, Some(&g), Some(&r), Some(echo));
        let back = AgDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.alternative_graph().unwrap(), ag);
        assert_eq!(back.metrics.unwrap().report().unwrap(), r);
        assert_eq!(doc.metrics.as_ref().unwrap().average_distance.exact, "3/2");
    }

    #[test]
    fn strict_parsing() {
        let (_, ag) = diamond();
        let json = AgDocument::new(&ag, None, None, None).to_json();
        let extra = json.replacen("\"s\":", "\"typo\": 1,\n  \"s\":", 1);
        assert!(matches!(AgDocument::from_json(&extra), Err(IoError::Json(_))));
        let version = json.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
        assert!(matches!(AgDocument::from_json(&version), Err(IoError::Document(_))));
    }

    #[test]
    fn missing_endpoint_survives_round_trip() {
        let (_, mut ag) = diamond();
        ag.nodes.retain(|&n| n != 3);
        let back = AgDocument::from_json(&AgDocument::new(&ag, None, None, None).to_json()).unwrap();
        assert_eq!(back.alternative_graph().unwrap(), ag);
    }
}
