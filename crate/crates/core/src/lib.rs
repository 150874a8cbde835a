//! Alternative routes in road networks, represented as alternative graphs:
//! unions of `s`-`t` paths that leave the choice of route to the traveler.
//!
//! Alternative graphs can be built with several methods (see [`methods`] and
//! [`penalty`]), assembled and trimmed by [`selection`], and measured with
//! [`metrics`]. [`pipeline`] strings these together; [`io`] reads DIMACS road
//! graphs and writes results.

// `!(x >= 0.0)` is used on purpose so that NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod altgraph;
pub mod cli;
pub mod dijkstra;
pub mod graph;
pub mod io;
pub mod methods;
pub mod metrics;
pub mod penalty;
pub mod pipeline;
pub mod selection;

pub use altgraph::{merge, reduce, validate, AgEdge, AlternativeGraph};
pub use dijkstra::{shortest_path, RouteError};
pub use graph::{EdgeId, NodeId, Path, RoadGraph, Weight, WeightOverlay};
pub use metrics::{evaluate, report, MetricsReport, ObjectiveConfig};
pub use pipeline::{run_method, MethodSpec};
