//! Empirical Lipschitz estimates, the coordinate-wise McShane baseline and
//! the growth experiment for the certificate as the anchor count grows.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{aux_rng, default_samples, Stream};
use crate::jl_ext::{self, AnchorSet, JlError, KernelConfig};
use crate::matrix::{norm2, RowMatrix};
use crate::metric::{euclidean_metric, MetricError, QuerySet};
use crate::scalar_ext::{lip_const, ScalarExtError, ScalarExtension};

/// Above this many queries, `empirical_lip` samples pairs instead of
/// enumerating them.
pub const ALL_PAIRS_MAX_QUERIES: usize = 2048;
pub const SAMPLED_PAIRS: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("queries {i} and {j} are at distance 0 but have different values")]
    ZeroDistanceDistinctValues { i: usize, j: usize },
    #[error("distance between queries {i} and {j} is not finite or negative")]
    BadDistance { i: usize, j: usize },
    #[error("query set has no query-to-query distances")]
    MissingPairDistances,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Jl(#[from] JlError),
    #[error(transparent)]
    Scalar(#[from] ScalarExtError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// `max ‖F(x_i) − F(x_j)‖₂ / d(x_i, x_j)` over the listed pairs.
pub fn empirical_lip_pairs(
    values: &RowMatrix,
    pairs: &[(usize, usize)],
    dist: impl Fn(usize, usize) -> f64,
) -> Result<f64, AnalysisError> {
    let mut best = 0.0_f64;
    let mut diff = vec![0.0; values.cols()];
    for &(i, j) in pairs {
        if i == j {
            continue;
        }
        for ((o, a), b) in diff.iter_mut().zip(values.row(i)).zip(values.row(j)) {
            *o = a - b;
        }
        let num = norm2(&diff);
        let d = dist(i, j);
        if !d.is_finite() || d < 0.0 {
            return Err(AnalysisError::BadDistance { i, j });
        }
        if d == 0.0 {
            if num == 0.0 {
                continue;
            }
            return Err(AnalysisError::ZeroDistanceDistinctValues { i, j });
        }
        best = best.max(num / d);
    }
    Ok(best)
}

/// Pairs used by [`empirical_lip`]: all `i < j` for up to 2048 points,
/// otherwise 2·10⁶ seeded random pairs.
pub fn query_pairs(q: usize, seed: u64) -> Vec<(usize, usize)> {
    if q <= ALL_PAIRS_MAX_QUERIES {
        return (0..q)
            .flat_map(|i| ((i + 1)..q).map(move |j| (i, j)))
            .collect();
    }
    let mut rng = aux_rng(seed, Stream::Pairs);
    (0..SAMPLED_PAIRS)
        .map(|_| {
            let v = sample_indices(&mut rng, q, 2);
            (v.index(0), v.index(1))
        })
        .collect()
}

/// Empirical Lipschitz constant of evaluated values over a query set with
/// known query-to-query distances.
pub fn empirical_lip(values: &RowMatrix, qs: &QuerySet, seed: u64) -> Result<f64, AnalysisError> {
    if !qs.has_pair_distances() {
        return Err(AnalysisError::MissingPairDistances);
    }
    let pairs = query_pairs(values.rows(), seed);
    empirical_lip_pairs(values, &pairs, |i, j| qs.pair_distance(i, j).unwrap())
}

/// Coordinate-wise McShane extension: coordinate `i` is extended with its own
/// constant `Lᵢ = Lip(fᵢ)`. The certified bound is `sqrt(Σ Lᵢ²)`.
pub fn coordwise_baseline(
    anchors: &AnchorSet,
    qs: &QuerySet,
) -> Result<(RowMatrix, f64), AnalysisError> {
    let (n, p) = (anchors.n(), anchors.p());
    let mut out = RowMatrix::zeros(qs.len(), p);
    let mut sum_sq = 0.0;
    for i in 0..p {
        let col: Vec<f64> = (0..n).map(|t| anchors.values().get(t, i)).collect();
        let lip = lip_const(&col, anchors.metric());
        sum_sq += lip * lip;
        let ext = ScalarExtension::with_lip(col, lip, anchors.metric())?;
        for (k, v) in ext.extend_batch(qs)?.into_iter().enumerate() {
            out.set(k, i, v);
        }
    }
    Ok((out, sum_sq.sqrt()))
}

/// Random anchors uniform in `[0,1]^dim` with values `f(x) = A·x + noise`,
/// rescaled so that `Lip(f) = 1`.
pub fn random_instance(
    seed: u64,
    n: usize,
    dim: usize,
    p: usize,
    noise: f64,
) -> Result<AnchorSet, AnalysisError> {
    if n == 0 || dim == 0 || p == 0 {
        return Err(AnalysisError::Config(format!(
            "instance needs n, dim, p >= 1 (got {n}, {dim}, {p})"
        )));
    }
    let mut rng = aux_rng(seed, Stream::Instances);
    let coords: Vec<f64> = (0..n * dim).map(|_| rng.random::<f64>()).collect();
    let coords = RowMatrix::from_vec(n, dim, coords).expect("sized");
    let a: Vec<f64> = (0..p * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut values = RowMatrix::zeros(n, p);
    for t in 0..n {
        let x = coords.row(t);
        for i in 0..p {
            let lin: f64 = a[i * dim..(i + 1) * dim].iter().zip(x).map(|(u, v)| u * v).sum();
            values.set(t, i, lin + noise * rng.random_range(-1.0..1.0));
        }
    }
    let metric = euclidean_metric(coords)?;
    let raw = AnchorSet::new(metric, values)?;
    let lip = raw.lip_f();
    if lip == 0.0 {
        return Ok(raw);
    }
    Ok(raw.scaled(1.0 / lip)?)
}

/// Query coordinates uniform in `[-0.25, 1.25]^dim`.
pub fn random_queries(seed: u64, q: usize, dim: usize) -> RowMatrix {
    let mut rng = aux_rng(seed.wrapping_add(0x5151), Stream::Instances);
    let data = (0..q * dim).map(|_| rng.random_range(-0.25..1.25)).collect();
    RowMatrix::from_vec(q, dim, data).expect("sized")
}

/// Number of samples as a function of anchor count `n` and dimension `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleRule {
    /// `m = k·n`.
    PerAnchor(usize),
    Fixed(usize),
    /// `max(64·p, 1024)`.
    Auto,
}

impl SampleRule {
    pub fn samples(&self, n: usize, p: usize) -> usize {
        match *self {
            Self::PerAnchor(k) => k * n,
            Self::Fixed(m) => m,
            Self::Auto => default_samples(p),
        }
    }
}

impl FromStr for SampleRule {
    type Err = String;

    /// `"64n"`, `"4096"` or `"auto"`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        if let Some(k) = s.strip_suffix('n') {
            return k
                .parse()
                .ok()
                .filter(|&k| k > 0)
                .map(Self::PerAnchor)
                .ok_or_else(|| format!("bad per-anchor sample rule {s:?}"));
        }
        s.parse()
            .ok()
            .filter(|&m| m > 0)
            .map(Self::Fixed)
            .ok_or_else(|| format!("bad sample rule {s:?} (expected e.g. 64n, 4096, auto)"))
    }
}

impl fmt::Display for SampleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PerAnchor(k) => write!(f, "{k}n"),
            Self::Fixed(m) => write!(f, "{m}"),
            Self::Auto => write!(f, "auto"),
        }
    }
}

/// Target dimension as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimRule {
    Fixed(usize),
    /// `p = n`.
    MatchAnchors,
}

impl DimRule {
    pub fn dim(&self, n: usize) -> usize {
        match *self {
            Self::Fixed(p) => p,
            Self::MatchAnchors => n,
        }
    }
}

impl FromStr for DimRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "n" {
            return Ok(Self::MatchAnchors);
        }
        s.parse()
            .ok()
            .filter(|&p| p > 0)
            .map(Self::Fixed)
            .ok_or_else(|| format!("bad dimension rule {s:?} (expected a positive integer or n)"))
    }
}

impl fmt::Display for DimRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(p) => write!(f, "{p}"),
            Self::MatchAnchors => write!(f, "n"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrowthConfig {
    pub n_list: Vec<usize>,
    pub p_rule: DimRule,
    pub m_rule: SampleRule,
    pub seeds: Vec<u64>,
    pub query_count: usize,
    /// Ambient dimension of the anchor cube.
    pub anchor_dim: usize,
    pub noise: f64,
    pub kernel: KernelConfig,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        Self {
            n_list: vec![16, 64, 256],
            p_rule: DimRule::Fixed(4),
            m_rule: SampleRule::PerAnchor(64),
            seeds: vec![42],
            query_count: 64,
            anchor_dim: 3,
            noise: 0.1,
            kernel: KernelConfig::default(),
        }
    }
}

/// One configuration of the growth experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub seed: u64,
    pub lip_f: f64,
    pub rms_sample_lip: f64,
    pub s_min: f64,
    pub bound: f64,
    pub theory_reference: f64,
    pub empirical_lip: f64,
    /// `bound / sqrt(ln n)`, the empirical constant.
    pub bound_over_sqrt_log_n: f64,
    pub exactness: f64,
    /// Wall time; the only field that is not reproducible.
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub p_rule: String,
    pub m_rule: String,
    pub anchor_dim: usize,
    pub query_count: usize,
    pub rows: Vec<GrowthRow>,
}

pub fn growth_row(cfg: &GrowthConfig, n: usize, seed: u64) -> Result<GrowthRow, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::Config(format!("growth needs n >= 2, got {n}")));
    }
    let start = Instant::now();
    let p = cfg.p_rule.dim(n);
    let m = cfg.m_rule.samples(n, p);
    let anchors = random_instance(seed, n, cfg.anchor_dim, p, cfg.noise)?;
    let op = jl_ext::build_with(&anchors, seed, m, cfg.kernel)?;
    let cert = jl_ext::certificate(&op);

    // anchors first, then fresh points
    let fresh = random_queries(seed, cfg.query_count, cfg.anchor_dim);
    let ac = anchors.metric().coords().expect("euclidean instance");
    let mut all = ac.to_rows();
    all.extend(fresh.to_rows());
    let qs = QuerySet::euclidean(RowMatrix::from_rows(&all).expect("same dim"));
    let fx = jl_ext::evaluate(&op, &anchors, &qs)?;
    let empirical = empirical_lip(&fx, &qs, seed)?;

    let mut exact = 0.0_f64;
    for t in 0..n {
        let f = anchors.values().row(t);
        let diff: Vec<f64> = fx.row(t).iter().zip(f).map(|(a, b)| a - b).collect();
        exact = exact.max(norm2(&diff) / (1.0 + norm2(f)));
    }
    Ok(GrowthRow {
        n,
        p,
        m,
        seed,
        lip_f: anchors.lip_f(),
        rms_sample_lip: cert.rms_sample_lip,
        s_min: cert.s_min,
        bound: cert.bound,
        theory_reference: cert.theory_reference,
        empirical_lip: empirical,
        bound_over_sqrt_log_n: cert.bound / (n as f64).ln().sqrt(),
        exactness: exact,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every `(n, seed)` configuration in order.
pub fn growth_experiment(cfg: &GrowthConfig) -> Result<GrowthReport, AnalysisError> {
    if cfg.n_list.is_empty() || cfg.seeds.is_empty() {
        return Err(AnalysisError::Config("need at least one n and one seed".into()));
    }
    let mut rows = Vec::with_capacity(cfg.n_list.len() * cfg.seeds.len());
    for &n in &cfg.n_list {
        for &seed in &cfg.seeds {
            rows.push(growth_row(cfg, n, seed)?);
        }
    }
    Ok(GrowthReport {
        p_rule: cfg.p_rule.to_string(),
        m_rule: cfg.m_rule.to_string(),
        anchor_dim: cfg.anchor_dim,
        query_count: cfg.query_count,
        rows,
    })
}
