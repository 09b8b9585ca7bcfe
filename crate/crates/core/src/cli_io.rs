//! Instance and result files, experiment reports, and the command-line
//! drivers behind the `lipext` binary.
//!
//! Instances and results are JSON; tabular experiment reports are written
//! both as CSV (one header row, one row per configuration) and JSON.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, AnalysisError, DimRule, GrowthConfig, GrowthReport, SampleRule};
use crate::gauss::{self, default_samples, Dependence, GaussError, MaxSquareReport, TailRow};
use crate::jl_ext::{self, AnchorSet, JlError, LipCertificate};
use crate::matrix::RowMatrix;
use crate::metric::{self, FiniteMetric, MetricError, QuerySet};

pub const INSTANCE_FORMAT_VERSION: u32 = 1;
pub const RESULT_FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable capping the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "LIPEXT_THREADS";

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("schema error in `{block}`: {message}")]
    Schema { block: String, message: String },
    #[error("invalid metric in `{block}`: {source}")]
    Metric { block: String, source: MetricError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Euclidean,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorsBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueriesBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_dists: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_dists: Option<Vec<Vec<f64>>>,
}

/// On-disk instance layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub mode: Mode,
    pub anchors: AnchorsBlock,
    pub values: Vec<Vec<f64>>,
    pub queries: QueriesBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub mode: Mode,
    pub anchors: AnchorSet,
    pub queries: QuerySet,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Also check explicit query distances against the triangle inequality.
    pub strict: bool,
}

fn schema(block: &str, message: impl Into<String>) -> InstanceError {
    InstanceError::Schema {
        block: block.to_string(),
        message: message.into(),
    }
}

fn to_matrix(block: &str, rows: &[Vec<f64>]) -> Result<RowMatrix, InstanceError> {
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != rows[0].len()) {
        return Err(schema(
            block,
            format!(
                "row {i} has {} entries, expected {} (ragged matrix)",
                r.len(),
                rows[0].len()
            ),
        ));
    }
    Ok(RowMatrix::from_rows(rows).expect("checked rectangular"))
}

impl InstanceFile {
    pub fn validate(&self, opts: ParseOptions) -> Result<Instance, InstanceError> {
        if self.format_version != INSTANCE_FORMAT_VERSION {
            return Err(schema(
                "format_version",
                format!(
                    "unsupported version {} (expected {INSTANCE_FORMAT_VERSION})",
                    self.format_version
                ),
            ));
        }
        let metric_err = |block: &str| {
            let block = block.to_string();
            move |source| InstanceError::Metric { block, source }
        };
        let metric: FiniteMetric = match self.mode {
            Mode::Euclidean => {
                let coords = self
                    .anchors
                    .coords
                    .as_ref()
                    .ok_or_else(|| schema("anchors", "euclidean mode requires anchors.coords"))?;
                if self.anchors.distances.is_some() {
                    return Err(schema("anchors", "euclidean mode takes coords, not distances"));
                }
                if coords.is_empty() {
                    return Err(schema("anchors.coords", "at least one anchor is required"));
                }
                let c = to_matrix("anchors.coords", coords)?;
                if c.cols() == 0 {
                    return Err(schema("anchors.coords", "coordinates must have dimension >= 1"));
                }
                metric::euclidean_metric(c).map_err(metric_err("anchors.coords"))?
            }
            Mode::Explicit => {
                let d = self
                    .anchors
                    .distances
                    .as_ref()
                    .ok_or_else(|| schema("anchors", "explicit mode requires anchors.distances"))?;
                if self.anchors.coords.is_some() {
                    return Err(schema("anchors", "explicit mode takes distances, not coords"));
                }
                if d.is_empty() {
                    return Err(schema("anchors.distances", "at least one anchor is required"));
                }
                let d = to_matrix("anchors.distances", d)?;
                FiniteMetric::from_distances(d).map_err(metric_err("anchors.distances"))?
            }
        };
        let n = metric.len();
        if self.values.len() != n {
            return Err(schema(
                "values",
                format!("has {} rows, expected one per anchor ({n})", self.values.len()),
            ));
        }
        let values = to_matrix("values", &self.values)?;
        if values.cols() == 0 {
            return Err(schema("values", "target dimension must be >= 1"));
        }
        if !values.all_finite() {
            return Err(schema("values", "entries must be finite"));
        }
        let queries = match self.mode {
            Mode::Euclidean => {
                let q = &self.queries;
                if q.anchor_dists.is_some() || q.pair_dists.is_some() {
                    return Err(schema("queries", "euclidean mode takes queries.coords only"));
                }
                let coords = q
                    .coords
                    .as_ref()
                    .ok_or_else(|| schema("queries", "euclidean mode requires queries.coords"))?;
                let c = if coords.is_empty() {
                    RowMatrix::zeros(0, metric.coords().unwrap().cols())
                } else {
                    to_matrix("queries.coords", coords)?
                };
                let qs = QuerySet::euclidean(c);
                qs.check_compatible(&metric).map_err(metric_err("queries.coords"))?;
                qs
            }
            Mode::Explicit => {
                let q = &self.queries;
                if q.coords.is_some() {
                    return Err(schema("queries", "explicit mode takes anchor_dists, not coords"));
                }
                let ad = q
                    .anchor_dists
                    .as_ref()
                    .ok_or_else(|| schema("queries", "explicit mode requires queries.anchor_dists"))?;
                let ad = if ad.is_empty() {
                    RowMatrix::zeros(0, n)
                } else {
                    to_matrix("queries.anchor_dists", ad)?
                };
                if ad.cols() != n {
                    return Err(schema(
                        "queries.anchor_dists",
                        format!("rows have {} entries, expected one per anchor ({n})", ad.cols()),
                    ));
                }
                let pd = match &q.pair_dists {
                    Some(pd) if pd.is_empty() => Some(RowMatrix::zeros(0, 0)),
                    Some(pd) => Some(to_matrix("queries.pair_dists", pd)?),
                    None => None,
                };
                let block = if pd.is_some() {
                    "queries.pair_dists"
                } else {
                    "queries.anchor_dists"
                };
                let qs = QuerySet::explicit(ad, pd).map_err(metric_err(block))?;
                if opts.strict {
                    let tol = metric::DEFAULT_RELATIVE_TOL * metric.max_distance();
                    qs.check_consistency(&metric, tol)
                        .map_err(metric_err("queries"))?;
                }
                qs
            }
        };
        let anchors = AnchorSet::new(metric, values).map_err(|e| schema("values", e.to_string()))?;
        Ok(Instance {
            mode: self.mode,
            anchors,
            queries,
            seed: self.seed,
            samples: self.samples,
        })
    }
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        let metric = self.anchors.metric();
        let anchors = match self.mode {
            Mode::Euclidean => AnchorsBlock {
                coords: metric.coords().map(RowMatrix::to_rows),
                distances: None,
            },
            Mode::Explicit => AnchorsBlock {
                coords: None,
                distances: Some(metric.distances().to_rows()),
            },
        };
        let queries = match &self.queries {
            QuerySet::Euclidean { coords } => QueriesBlock {
                coords: Some(coords.to_rows()),
                ..QueriesBlock::default()
            },
            QuerySet::Explicit {
                anchor_dists,
                pair_dists,
            } => QueriesBlock {
                coords: None,
                anchor_dists: Some(anchor_dists.to_rows()),
                pair_dists: pair_dists.as_ref().map(RowMatrix::to_rows),
            },
        };
        InstanceFile {
            format_version: INSTANCE_FORMAT_VERSION,
            mode: self.mode,
            anchors,
            values: self.anchors.values().to_rows(),
            queries,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

/// Parses and validates an instance from JSON text. Parse errors carry the
/// JSON path of the offending element.
pub fn parse_instance_str(text: &str, opts: ParseOptions) -> Result<Instance, InstanceError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: InstanceFile =
        serde_path_to_error::deserialize(de).map_err(|e| InstanceError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    file.validate(opts)
}

pub fn parse_instance<R: Read>(mut r: R, opts: ParseOptions) -> Result<Instance, InstanceError> {
    let mut text = String::new();
    r.read_to_string(&mut text).map_err(|source| InstanceError::Io {
        path: "<stream>".into(),
        source,
    })?;
    parse_instance_str(&text, opts)
}

pub fn parse_instance_path(path: &Path, opts: ParseOptions) -> Result<Instance, InstanceError> {
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance_str(&text, opts)
}

pub fn emit_instance(inst: &Instance) -> String {
    serde_json::to_string_pretty(&inst.to_file()).expect("instance serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub samples: usize,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineBlock {
    pub values: Vec<Vec<f64>>,
    pub bound: f64,
}

/// On-disk result layout written by `extend`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub format_version: u32,
    pub values: Vec<Vec<f64>>,
    /// `bound` is certified; `rms_sample_lip` is the plug-in estimate.
    pub certificate: LipCertificate,
    pub lip_f: f64,
    pub exactness_residual: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineBlock>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<JlError> for CliError {
    fn from(e: JlError) -> Self {
        match e {
            JlError::RankDeficient(_) | JlError::SolverFailure(_) => Self::Numerical(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Jl(inner) => inner.into(),
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<GaussError> for CliError {
    fn from(e: GaussError) -> Self {
        Self::Validation(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Validation(format!("cannot write {}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Validation(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    w.flush().map_err(io_err(path))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

// --- command line -----------------------------------------------------------

#[derive(Debug, Parser)]
#[command(name = "lipext", version, about = "Lipschitz extension into Euclidean space via Gaussian embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the extension operator for an instance and evaluate it at the queries.
    Extend(ExtendArgs),
    /// Monte Carlo check of E[max Gᵢ²] against 2·ln m + 4.
    Gaussmax(GaussmaxArgs),
    /// Empirical Gaussian tail probabilities against e^{-t²/2}.
    Tail(TailArgs),
    /// Certificate growth as the number of anchors increases.
    Growth(GrowthArgs),
    /// Validate an instance file without running anything.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExtendArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Overrides the seed stored in the instance.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Gaussian samples; defaults to max(64·p, 1024).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also run the coordinate-wise McShane baseline.
    #[arg(long)]
    pub baseline: bool,
    /// Check explicit query distances against the triangle inequality.
    #[arg(long)]
    pub strict: bool,
    /// Persist the built operator to this path.
    #[arg(long)]
    pub save_operator: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DependenceArg {
    Independent,
    PairDifferences,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct GaussmaxArgs {
    /// Numbers of Gaussians, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DependenceArg::Both)]
    pub dependence: DependenceArg,
    /// Ambient dimension of the point cloud for pair differences.
    #[arg(long, default_value_t = 4)]
    pub pair_dim: usize,
    /// Output prefix; writes PREFIX.csv and PREFIX.json.
    #[arg(long, default_value = "gaussmax")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TailArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0])]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "tail")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GrowthArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![16, 64, 256])]
    pub n: Vec<usize>,
    /// Sample rule: `<k>n`, a fixed count, or `auto`.
    #[arg(long, default_value = "64n")]
    pub mrule: SampleRule,
    /// Target dimension: a fixed count or `n`.
    #[arg(long, default_value = "4")]
    pub p: DimRule,
    #[arg(long, value_delimiter = ',', default_values_t = vec![DEFAULT_SEED])]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 64)]
    pub queries: usize,
    #[arg(long, default_value_t = 3)]
    pub anchor_dim: usize,
    #[arg(long, default_value = "growth")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

/// Reads `LIPEXT_THREADS`; `None` means automatic.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Validation(format!(
                "{THREADS_ENV} must be a nonnegative integer, got {s:?}"
            ))),
        },
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extend(a) => run_extend(&a).map(|_| ()),
        Command::Gaussmax(a) => run_gaussmax(&a).map(|_| ()),
        Command::Tail(a) => run_tail(&a).map(|_| ()),
        Command::Growth(a) => run_growth(&a).map(|_| ()),
        Command::Validate(a) => run_validate(&a),
    }
}

pub fn run_extend(args: &ExtendArgs) -> Result<ResultFile, CliError> {
    let inst = parse_instance_path(&args.input, ParseOptions { strict: args.strict })?;
    let seed = args.seed.or(inst.seed).unwrap_or(DEFAULT_SEED);
    let p = inst.anchors.p();
    let samples = args
        .samples
        .or(inst.samples)
        .unwrap_or_else(|| default_samples(p));
    let op = jl_ext::build(&inst.anchors, seed, samples)?;
    let values = jl_ext::evaluate(&op, &inst.anchors, &inst.queries)?;
    let certificate = jl_ext::certificate(&op);
    let exactness_residual = jl_ext::exactness_check(&op, &inst.anchors)?;
    let baseline = if args.baseline {
        let (vals, bound) = analysis::coordwise_baseline(&inst.anchors, &inst.queries)?;
        Some(BaselineBlock {
            values: vals.to_rows(),
            bound,
        })
    } else {
        None
    };
    if let Some(path) = &args.save_operator {
        let file = fs::File::create(path).map_err(io_err(path))?;
        jl_ext::save_operator(&op, BufWriter::new(file))?;
    }
    let result = ResultFile {
        format_version: RESULT_FORMAT_VERSION,
        values: values.to_rows(),
        certificate,
        lip_f: inst.anchors.lip_f(),
        exactness_residual,
        provenance: Provenance {
            seed,
            samples,
            tool_version: TOOL_VERSION.to_string(),
        },
        baseline,
    };
    write_json(&args.output, &result)?;
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussmaxReport {
    pub tool_version: String,
    pub seed: u64,
    pub trials: usize,
    pub pair_dim: usize,
    pub rows: Vec<MaxSquareReport>,
}

pub fn run_gaussmax(args: &GaussmaxArgs) -> Result<GaussmaxReport, CliError> {
    if let Some(&m) = args.m.iter().find(|&&m| m < 2) {
        return Err(CliError::Validation(format!(
            "--m values must be >= 2 for the max-square bound, got {m}"
        )));
    }
    if args.trials == 0 {
        return Err(CliError::Validation("--trials must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for &m in &args.m {
        if matches!(args.dependence, DependenceArg::Independent | DependenceArg::Both) {
            rows.push(gauss::max_square_mc(args.seed, m, args.trials, &Dependence::Independent)?);
        }
        if matches!(args.dependence, DependenceArg::PairDifferences | DependenceArg::Both) {
            let dep = Dependence::random_pair_differences(args.seed, m, args.pair_dim)?;
            rows.push(gauss::max_square_mc(args.seed, m, args.trials, &dep)?);
        }
    }
    let report = GaussmaxReport {
        tool_version: TOOL_VERSION.to_string(),
        seed: args.seed,
        trials: args.trials,
        pair_dim: args.pair_dim,
        rows,
    };
    write_csv(&with_ext(&args.out, "csv"), &report.rows)?;
    write_json(&with_ext(&args.out, "json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub tool_version: String,
    pub seed: u64,
    pub rows: Vec<TailRow>,
}

pub fn run_tail(args: &TailArgs) -> Result<TailReport, CliError> {
    let rows = gauss::tail_prob_check(args.seed, &args.t, args.trials)?;
    let report = TailReport {
        tool_version: TOOL_VERSION.to_string(),
        seed: args.seed,
        rows,
    };
    write_csv(&with_ext(&args.out, "csv"), &report.rows)?;
    write_json(&with_ext(&args.out, "json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReportFile {
    pub tool_version: String,
    #[serde(flatten)]
    pub report: GrowthReport,
}

pub fn run_growth(args: &GrowthArgs) -> Result<GrowthReport, CliError> {
    if let Some(&n) = args.n.iter().find(|&&n| n < 2) {
        return Err(CliError::Validation(format!("--n values must be >= 2, got {n}")));
    }
    if args.seeds.is_empty() || args.anchor_dim == 0 {
        return Err(CliError::Validation(
            "--seeds must be nonempty and --anchor-dim >= 1".into(),
        ));
    }
    let cfg = GrowthConfig {
        n_list: args.n.clone(),
        p_rule: args.p,
        m_rule: args.mrule,
        seeds: args.seeds.clone(),
        query_count: args.queries,
        anchor_dim: args.anchor_dim,
        ..GrowthConfig::default()
    };
    let report = analysis::growth_experiment(&cfg)?;
    write_csv(&with_ext(&args.out, "csv"), &report.rows)?;
    write_json(
        &with_ext(&args.out, "json"),
        &GrowthReportFile {
            tool_version: TOOL_VERSION.to_string(),
            report: report.clone(),
        },
    )?;
    Ok(report)
}

pub fn run_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let inst = parse_instance_path(&args.input, ParseOptions { strict: args.strict })?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "ok: mode={:?} anchors={} dim={} queries={} lip_f={}",
        inst.mode,
        inst.anchors.n(),
        inst.anchors.p(),
        inst.queries.len(),
        inst.anchors.lip_f()
    )
    .map_err(|e| CliError::Validation(e.to_string()))
}
