//! Command-line front end. Node ids on the command line are DIMACS ids
//! (1-based); documents written by the tool use 0-based ids.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::altgraph::{validate, validate_against};
use crate::dijkstra::base_distance;
use crate::graph::{NodeId, RoadGraph, Weight};
use crate::io::{
    export, generate_grid, generate_ring, load_dimacs, write_coordinates, write_dimacs, AgDocument, DocMetrics,
    ExactValue, Format, IoError, MethodEcho,
};
use crate::methods::PlateauConfig;
use crate::metrics::{report, ObjectiveConfig};
use crate::penalty::{PenaltyConfig, RejoinPenalty};
use crate::pipeline::{run_method, MethodSpec, PipelineError, DEFAULT_LABEL_CAP};

#[derive(Debug, Parser)]
#[command(name = "altroute", version, about = "Alternative graphs for road networks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an alternative graph with one method.
    Compute(ComputeArgs),
    /// Validate a stored alternative graph and recompute its metrics.
    Metrics(MetricsArgs),
    /// Write a synthetic road graph in DIMACS format.
    Generate(GenerateArgs),
    /// Run several methods on the same query and report their metrics.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Penalty,
    Plateau,
    Disjoint,
    Yen,
    Pareto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Geojson,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphKind {
    Grid,
    Ring,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// DIMACS `.gr` file.
    #[arg(long)]
    graph: PathBuf,
    /// DIMACS `.co` coordinate file.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Source node (DIMACS id).
    #[arg(long)]
    source: u64,
    /// Target node (DIMACS id).
    #[arg(long)]
    target: u64,
}

#[derive(Debug, Clone, Args)]
struct MethodArgs {
    /// Yen: number of paths; plateau and disjoint: maximum candidates.
    #[arg(long)]
    k: Option<usize>,
    /// Pareto length slack (`inf` disables the rule).
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Pareto trade-off constant.
    #[arg(long)]
    gamma: Option<f64>,
    /// Pareto label limit.
    #[arg(long, default_value_t = DEFAULT_LABEL_CAP)]
    label_cap: usize,
    /// Penalty factor.
    #[arg(long, default_value_t = 1.4)]
    factor: f64,
    /// Rejoin penalty as a fraction of its maximum (factor - 1) * d(s,t).
    #[arg(long, default_value_t = 0.5)]
    rejoin: f64,
    /// Penalty tube radius (0 disables).
    #[arg(long, default_value_t = 0)]
    tube_radius: Weight,
    /// Penalty iteration limit.
    #[arg(long, default_value_t = 20)]
    max_iter: usize,
    /// Penalty: start from the result of this method.
    #[arg(long)]
    seed_method: Option<Method>,
}

#[derive(Debug, Clone, Args)]
struct ObjectiveArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    max_decision_edges: i64,
    #[arg(long, default_value_t = 0.25)]
    max_stretch: f64,
    #[arg(long)]
    max_cov: Option<f64>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    method_args: MethodArgs,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Alternative graph document written by `compute`.
    #[arg(long)]
    ag: PathBuf,
    /// Road graph to check the document against.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GraphKind,
    /// Grid columns, or nodes per ring.
    #[arg(long)]
    width: usize,
    /// Grid rows, or number of rings.
    #[arg(long)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Weights are drawn from [10 - perturb, 10 + perturb].
    #[arg(long, default_value_t = 0)]
    perturb: Weight,
    #[arg(long)]
    out: PathBuf,
    /// Coordinate file; defaults to the output path with extension `.co`.
    #[arg(long)]
    coords_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "penalty,plateau,disjoint,yen,pareto")]
    methods: Vec<Method>,
    #[command(flatten)]
    method_args: MethodArgs,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    NoRoute(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NoRoute(_) => 3,
            CliError::Data(_) => 1,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        use crate::methods::MethodError;
        if e.is_no_route() {
            return CliError::NoRoute(e.to_string());
        }
        match e {
            PipelineError::Method(MethodError::InvalidParameter(_)) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl MethodArgs {
    fn spec(&self, method: Method) -> MethodSpec {
        match method {
            Method::Penalty => MethodSpec::Penalty {
                config: PenaltyConfig {
                    factor: self.factor,
                    rejoin: RejoinPenalty::Fraction(self.rejoin),
                    tube_radius: self.tube_radius,
                    max_iterations: self.max_iter,
                    ..Default::default()
                },
                seed: self.seed_method.filter(|&m| m != Method::Penalty).map(|m| Box::new(self.spec(m))),
            },
            Method::Plateau => MethodSpec::Plateau {
                config: PlateauConfig { max_candidates: self.k.unwrap_or(16), ..Default::default() },
            },
            Method::Disjoint => MethodSpec::Disjoint { max_candidates: self.k.unwrap_or(16) },
            Method::Yen => MethodSpec::Yen { k: self.k.unwrap_or(10), max_stretch: 0.25 },
            Method::Pareto => MethodSpec::Pareto {
                epsilon: Some(self.epsilon).filter(|e| e.is_finite()),
                gamma: self.gamma.filter(|g| g.is_finite()),
                weights: None,
                label_cap: self.label_cap,
            },
        }
    }
}

impl ObjectiveArgs {
    fn config(&self) -> Result<ObjectiveConfig, CliError> {
        if !self.alpha.is_finite() || !(self.max_stretch >= 0.0) || self.max_cov.is_some_and(|c| !c.is_finite()) {
            return Err(CliError::Usage("objective parameters must be finite and nonnegative".into()));
        }
        Ok(ObjectiveConfig {
            alpha: self.alpha,
            max_decision_edges: self.max_decision_edges,
            max_stretch: self.max_stretch,
            max_cov: self.max_cov,
            ..Default::default()
        })
    }
}

impl QueryArgs {
    fn load(&self) -> Result<(RoadGraph, NodeId, NodeId), CliError> {
        let graph = load_dimacs(&self.graph, self.coords.as_deref())?;
        let node = |id: u64, flag: &str| {
            if id == 0 || id > graph.node_count() as u64 {
                Err(CliError::Usage(format!("--{flag} {id} is not a node id in 1..={}", graph.node_count())))
            } else {
                Ok(id as NodeId - 1)
            }
        };
        let (s, t) = (node(self.source, "source")?, node(self.target, "target")?);
        if s == t {
            return Err(CliError::Usage("source and target must differ".into()));
        }
        Ok((graph, s, t))
    }
}

fn echo(spec: &MethodSpec) -> MethodEcho {
    MethodEcho { name: spec.name().into(), config: serde_json::to_value(spec).expect("specs serialize") }
}

fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    let (graph, s, t) = args.query.load()?;
    let objective = args.objective.config()?;
    let spec = args.method_args.spec(args.method);
    let outcome = run_method(&graph, s, t, &spec, &objective)?;
    let format = match args.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Dot => Format::Dot,
        OutputFormat::Geojson => Format::Geojson,
    };
    export(&outcome.ag, &graph, Some(&outcome.evaluation.report), Some(echo(&spec)), format, &args.out)?;
    log::info!("{}: {} edges, score {}", spec.name(), outcome.ag.edges.len(), outcome.evaluation.score);
    Ok(())
}

fn metrics(args: &MetricsArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.ag).map_err(|e| CliError::Data(format!("{}: {e}", args.ag.display())))?;
    let doc = AgDocument::from_json(&text)?;
    let ag = doc.alternative_graph()?;
    let graph = args.graph.as_deref().map(|p| load_dimacs(p, None)).transpose()?;
    let violations = match &graph {
        Some(g) => validate_against(&ag, g),
        None => validate(&ag),
    };
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(CliError::Data(format!("invalid alternative graph:\n{}", lines.join("\n"))));
    }
    let d_g_st = match (&graph, &doc.metrics) {
        (Some(g), _) => base_distance(g, ag.s, ag.t).map_err(|e| CliError::NoRoute(e.to_string()))?,
        (None, Some(m)) => m.d_g_st,
        (None, None) => ag.shortest_path().map(|p| p.weight).unwrap_or(0),
    };
    let r = report(&ag, d_g_st, crate::metrics::DEFAULT_PATH_COUNT_CAP).map_err(|e| CliError::Data(e.to_string()))?;
    let recomputed = DocMetrics::new(&r);
    if doc.metrics.as_ref().is_some_and(|m| *m != recomputed) {
        log::warn!("stored metrics differ from the recomputed ones");
    }
    println!("{}", serde_json::to_string_pretty(&recomputed).expect("metrics serialize"));
    Ok(())
}

fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let graph = match args.kind {
        GraphKind::Grid => generate_grid(args.width, args.height, args.seed, args.perturb)?,
        GraphKind::Ring => generate_ring(args.width, args.height, args.seed, args.perturb)?,
    };
    let coords_out = args.coords_out.clone().unwrap_or_else(|| args.out.with_extension("co"));
    write(&args.out, &write_dimacs(&graph))?;
    if let Some(coords) = write_coordinates(&graph) {
        write(&coords_out, &coords)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CompareEntry {
    method: MethodEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    score: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<DocMetrics>,
}

#[derive(Debug, Serialize)]
struct CompareReport {
    schema_version: u32,
    s: NodeId,
    t: NodeId,
    d_g_st: Weight,
    objective: ObjectiveConfig,
    results: Vec<CompareEntry>,
}

fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let (graph, s, t) = args.query.load()?;
    let objective = args.objective.config()?;
    let d_g_st = base_distance(&graph, s, t).map_err(|e| CliError::NoRoute(e.to_string()))?;
    let specs: Vec<MethodSpec> = args.methods.iter().map(|&m| args.method_args.spec(m)).collect();
    let outcomes: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            specs.iter().map(|spec| scope.spawn(|| run_method(&graph, s, t, spec, &objective))).collect();
        handles.into_iter().map(|h| h.join().expect("method thread panicked")).collect()
    });
    let mut results = Vec::new();
    for (spec, outcome) in specs.iter().zip(outcomes) {
        let entry = match outcome {
            Ok(o) => CompareEntry {
                method: echo(spec),
                error: None,
                candidates: Some(o.candidates),
                reduced_edges: Some(o.ag.edges.len()),
                score: Some(ExactValue::new(&o.evaluation.score)),
                feasible: Some(o.evaluation.feasible),
                metrics: Some(DocMetrics::new(&o.evaluation.report)),
            },
            Err(e) if e.is_no_route() => return Err(e.into()),
            Err(e) => {
                log::warn!("{} failed: {e}", spec.name());
                CompareEntry {
                    method: echo(spec),
                    error: Some(e.to_string()),
                    candidates: None,
                    reduced_edges: None,
                    score: None,
                    feasible: None,
                    metrics: None,
                }
            }
        };
        results.push(entry);
    }
    let report = CompareReport { schema_version: crate::io::SCHEMA_VERSION, s, t, d_g_st, objective, results };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write(&args.out, &text)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("ALTROUTE_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Metrics(a) => metrics(a),
        Command::Generate(a) => generate(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::NoRoute(msg) | CliError::Data(msg)) = &e;
            eprintln!("error: {msg}");
            e.exit_code()
        }
    }
}
