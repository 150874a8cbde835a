//! One call from a road graph and a query to a finished alternative graph:
//! generate, select, refine, evaluate.

use thiserror::Error;

use crate::altgraph::AlternativeGraph;
use crate::dijkstra::{base_distance, RouteError};
use crate::graph::{NodeId, RoadGraph, WeightOverlay};
use crate::methods::{
    disjoint_candidates, pareto_candidates, plateau_candidates_with, with_overlap_criterion, yen_candidates, Candidate,
    MethodError, ParetoConfig, PlateauConfig, OVERLAP_WEIGHT_NAME,
};
use crate::metrics::{evaluate, Evaluation, MetricsError, ObjectiveConfig};
use crate::penalty::{penalty_alternatives, PenaltyConfig};
use crate::selection::{greedy_select, refine, SelectionError};

pub const DEFAULT_LABEL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "method", rename_all = "lowercase", deny_unknown_fields)]
pub enum MethodSpec {
    Penalty {
        config: PenaltyConfig,
        /// Method whose result the penalty loop starts from.
        seed: Option<Box<MethodSpec>>,
    },
    Plateau {
        config: PlateauConfig,
    },
    Disjoint {
        max_candidates: usize,
    },
    Yen {
        k: usize,
        max_stretch: f64,
    },
    Pareto {
        epsilon: Option<f64>,
        gamma: Option<f64>,
        /// Criteria; `None` uses every weight function of the graph, or the
        /// main weight plus shortest-path overlap if there is only one.
        weights: Option<Vec<String>>,
        label_cap: usize,
    },
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Penalty { .. } => "penalty",
            MethodSpec::Plateau { .. } => "plateau",
            MethodSpec::Disjoint { .. } => "disjoint",
            MethodSpec::Yen { .. } => "yen",
            MethodSpec::Pareto { .. } => "pareto",
        }
    }

    /// The method with its default parameters.
    pub fn default_for(name: &str) -> Option<Self> {
        Some(match name {
            "penalty" => MethodSpec::Penalty { config: PenaltyConfig::default(), seed: None },
            "plateau" => MethodSpec::Plateau { config: PlateauConfig::default() },
            "disjoint" => MethodSpec::Disjoint { max_candidates: 16 },
            "yen" => MethodSpec::Yen { k: 10, max_stretch: 0.25 },
            "pareto" => {
                MethodSpec::Pareto { epsilon: Some(0.25), gamma: None, weights: None, label_cap: DEFAULT_LABEL_CAP }
            }
            _ => return None,
        })
    }

    pub const NAMES: [&'static str; 5] = ["penalty", "plateau", "disjoint", "yen", "pareto"];
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Method(#[from] MethodError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Route(#[from] RouteError),
}

impl PipelineError {
    pub fn is_no_route(&self) -> bool {
        matches!(
            self,
            PipelineError::Route(RouteError::NoRoute { .. })
                | PipelineError::Method(MethodError::Route(RouteError::NoRoute { .. }))
                | PipelineError::Selection(SelectionError::Route(RouteError::NoRoute { .. }))
        )
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// Refined, reduced alternative graph.
    pub ag: AlternativeGraph,
    pub evaluation: Evaluation,
    /// Candidate paths (or accepted penalty paths) the result was built from.
    pub candidates: usize,
}

/// Candidate paths of one of the generating methods. Penalty has no
/// candidate stage and is rejected here.
pub fn candidates(graph: &RoadGraph, s: NodeId, t: NodeId, spec: &MethodSpec) -> Result<Vec<Candidate>, MethodError> {
    let main = WeightOverlay::main(graph);
    match spec {
        MethodSpec::Plateau { config } => plateau_candidates_with(graph, &main, s, t, config),
        MethodSpec::Disjoint { max_candidates } => disjoint_candidates(graph, &main, s, t, *max_candidates),
        MethodSpec::Yen { k, max_stretch } => yen_candidates(graph, &main, s, t, *k, *max_stretch),
        MethodSpec::Pareto { epsilon, gamma, weights, label_cap } => {
            let (graph, weights) = match weights {
                Some(w) => (std::borrow::Cow::Borrowed(graph), w.clone()),
                None if graph.weight_function_count() > 1 => {
                    let mut names = vec![graph.main_weight_name().to_string()];
                    names.extend(graph.weight_names().filter(|n| *n != graph.main_weight_name()).map(String::from));
                    (std::borrow::Cow::Borrowed(graph), names)
                }
                None => (
                    std::borrow::Cow::Owned(with_overlap_criterion(graph, s, t)?),
                    vec![graph.main_weight_name().to_string(), OVERLAP_WEIGHT_NAME.to_string()],
                ),
            };
            let cfg = ParetoConfig { epsilon: *epsilon, gamma: *gamma, weights };
            match pareto_candidates(&graph, s, t, &cfg, *label_cap) {
                Err(MethodError::LabelCapExceeded { cap, partial }) if !partial.is_empty() => {
                    log::warn!("pareto label cap {cap} reached, using {} partial candidates", partial.len());
                    Ok(partial)
                }
                other => other,
            }
        }
        MethodSpec::Penalty { .. } => Err(MethodError::InvalidParameter("penalty has no candidate stage".into())),
    }
}

/// Runs `spec` for the query `s -> t` and returns the refined result.
pub fn run_method(
    graph: &RoadGraph,
    s: NodeId,
    t: NodeId,
    spec: &MethodSpec,
    objective: &ObjectiveConfig,
) -> Result<Outcome, PipelineError> {
    let d_g_st = base_distance(graph, s, t)?;
    let (ag, count) = match spec {
        MethodSpec::Penalty { config, seed } => {
            let seed_ag = match seed {
                Some(seed) => Some(run_method(graph, s, t, seed, objective)?.ag),
                None => None,
            };
            let run = penalty_alternatives(graph, s, t, config, seed_ag.as_ref())?;
            (run.ag, run.accepted.len())
        }
        _ => {
            let cands = candidates(graph, s, t, spec)?;
            let selection = greedy_select(graph, s, t, &cands, objective)?;
            (selection.ag, cands.len())
        }
    };
    let ag = refine(&ag, d_g_st, objective)?;
    let evaluation = evaluate(&ag, d_g_st, objective)?;
    Ok(Outcome { ag, evaluation, candidates: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::altgraph::validate;

    #[test]
    fn every_method_on_a_diamond() {
        let g = RoadGraph::new(4, &[(0, 1, 10), (1, 3, 10), (0, 2, 10), (2, 3, 11)]).unwrap();
        for name in MethodSpec::NAMES {
            let spec = MethodSpec::default_for(name).unwrap();
            let out = run_method(&g, 0, 3, &spec, &ObjectiveConfig::default()).unwrap();
            assert!(validate(&out.ag).is_empty(), "{name}");
            assert!(out.evaluation.feasible, "{name}");
        }
    }

    #[test]
    fn no_route_is_recognized() {
        let g = RoadGraph::new(3, &[(0, 1, 1)]).unwrap();
        for name in MethodSpec::NAMES {
            let err =
                run_method(&g, 0, 2, &MethodSpec::default_for(name).unwrap(), &ObjectiveConfig::default()).unwrap_err();
            assert!(err.is_no_route(), "{name}: {err:?}");
        }
    }

    #[test]
    fn spec_json() {
        let spec = MethodSpec::Penalty {
            config: PenaltyConfig::default(),
            seed: Some(Box::new(MethodSpec::default_for("plateau").unwrap())),
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<MethodSpec>(&json).unwrap(), spec);
        assert!(MethodSpec::default_for("dijkstra").is_none());
    }
}
