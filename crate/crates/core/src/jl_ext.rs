//! The Gaussian-embedding Lipschitz extension operator.
//!
//! Given anchors `T` with values `f: T → ℝᵖ`, the operator
//!
//! 1. embeds `f` through `k(y) = G·y`, giving per-sample scalar maps
//!    `u_ω(t) = ⟨f(t), g_ω⟩` on the anchors,
//! 2. extends each `u_ω` to the superspace by McShane's formula with
//!    constant `λ_ω = Lip(u_ω)`,
//! 3. maps the resulting `m`-vector `U(x)` back to `ℝᵖ` by least squares
//!    against `G` (orthogonal projection onto `range(G)` followed by `k⁻¹`).
//!
//! The result `F` agrees with `f` on `T`. With `B = sqrt(mean λ_ω²)` and
//! `s_min` the smallest singular value of `G/√m`, `F` is `B/s_min`-Lipschitz.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{sample_embedding, GaussError, GaussianEmbedding};
use crate::matrix::{dot, norm2, RowMatrix};
use crate::metric::{FiniteMetric, MetricError, QuerySet};
use crate::scalar_ext::mcshane_min_raw;

/// Rank tolerance relative to the largest singular value of `G`.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum JlError {
    #[error("embedding is rank deficient: {0}")]
    RankDeficient(String),
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite anchor value at ({row}, {col})")]
    NonFiniteValue { row: usize, col: usize },
    #[error("non-finite distance from query {query} to anchor {anchor}")]
    NonFiniteDistance { query: usize, anchor: usize },
    #[error("least-squares solve failed: {0}")]
    SolverFailure(String),
    #[error("anchor values differ from those the operator was built from")]
    AnchorMismatch,
    #[error("operator file: {0}")]
    Format(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Anchor metric together with the anchor values `f(t) ∈ ℝᵖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    metric: FiniteMetric,
    values: RowMatrix,
    lip_f: f64,
}

impl AnchorSet {
    pub fn new(metric: FiniteMetric, values: RowMatrix) -> Result<Self, JlError> {
        if values.rows() != metric.len() {
            return Err(JlError::DimensionMismatch {
                what: "anchor values (rows)",
                expected: metric.len(),
                got: values.rows(),
            });
        }
        if values.cols() == 0 {
            return Err(JlError::DimensionMismatch {
                what: "anchor values (columns)",
                expected: 1,
                got: 0,
            });
        }
        if let Some(idx) = values.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(JlError::NonFiniteValue {
                row: idx / values.cols(),
                col: idx % values.cols(),
            });
        }
        let lip_f = vector_lip(&values, &metric);
        Ok(Self {
            metric,
            values,
            lip_f,
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn values(&self) -> &RowMatrix {
        &self.values
    }

    /// `max_{s≠t} ‖f(s) − f(t)‖₂ / d(s,t)`.
    pub fn lip_f(&self) -> f64 {
        self.lip_f
    }

    pub fn n(&self) -> usize {
        self.metric.len()
    }

    pub fn p(&self) -> usize {
        self.values.cols()
    }

    /// Same anchors with values scaled by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self, JlError> {
        Self::new(self.metric.clone(), self.values.map(|v| v * c))
    }

    /// Same anchors relabelled so that new anchor `i` is old anchor `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, JlError> {
        Self::new(self.metric.permuted(perm), self.values.permute_rows(perm))
    }
}

fn vector_lip(values: &RowMatrix, metric: &FiniteMetric) -> f64 {
    let n = values.rows();
    let mut best = 0.0_f64;
    let mut diff = vec![0.0; values.cols()];
    for s in 0..n {
        for t in (s + 1)..n {
            for ((d, a), b) in diff.iter_mut().zip(values.row(s)).zip(values.row(t)) {
                *d = a - b;
            }
            best = best.max(norm2(&diff) / metric.dist(s, t));
        }
    }
    best
}

/// Blocking parameters for the per-sample Lipschitz kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Anchor pairs per block.
    pub pair_block: usize,
    /// Samples per parallel task.
    pub sample_block: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            pair_block: 4096,
            sample_block: 256,
        }
    }
}

/// Least-squares solver for `min_y ‖G·y − b‖₂` via Householder QR.
#[derive(Debug, Clone)]
struct LeastSquares {
    qr: nalgebra::linalg::QR<f64, nalgebra::Dyn, nalgebra::Dyn>,
    r: DMatrix<f64>,
}

impl LeastSquares {
    fn new(g: &RowMatrix) -> Self {
        let (m, p) = g.shape();
        let qr = DMatrix::from_row_slice(m, p, g.as_slice()).qr();
        let r = qr.r();
        Self { qr, r }
    }

    /// Singular values of `G` (those of `R`).
    fn singular_values(&self) -> (f64, f64) {
        let sv = self.r.clone().singular_values();
        let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
        let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        (min, max)
    }

    fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let p = self.r.ncols();
        let mut b = DVector::from_column_slice(rhs);
        self.qr.q_tr_mul(&mut b);
        let top = b.rows(0, p).into_owned();
        let y = self.r.solve_upper_triangular(&top)?;
        y.iter().all(|v| v.is_finite()).then(|| y.as_slice().to_vec())
    }
}

/// A built extension operator. Immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct JLOperator {
    emb: GaussianEmbedding,
    values: RowMatrix,
    /// `m × n`, `V[ω][t] = ⟨f(t), g_ω⟩`.
    anchor_images: RowMatrix,
    /// `λ_ω = Lip(u_ω)` over the anchors.
    sample_lips: Vec<f64>,
    lsq: LeastSquares,
    s_min: f64,
    s_max: f64,
    kernel: KernelConfig,
}

/// Computable Lipschitz bound for the built operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipCertificate {
    /// `B = sqrt((1/m) Σ λ_ω²)`; the plug-in estimate of `Lip(F)` that
    /// treats the discretized embedding as an isometry.
    pub rms_sample_lip: f64,
    /// Smallest singular value of `G/√m`.
    pub s_min: f64,
    /// Certified bound `B / s_min`.
    pub bound: f64,
    /// `sqrt(2 ln(n(n−1)) + 4)`, the expected-value bound on `B` when
    /// `Lip(f) = 1`. Zero for a single anchor.
    pub theory_reference: f64,
}

/// `sqrt(2 ln(n(n−1)) + 4)` for `n ≥ 2`, zero otherwise.
pub fn theory_reference(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let pairs = (n * (n - 1)) as f64;
    (2.0 * pairs.ln() + 4.0).sqrt()
}

/// Normalized differences `(f(s) − f(t)) / d(s,t)` for `s < t`, in
/// lexicographic order.
fn pair_directions(anchors: &AnchorSet) -> RowMatrix {
    let (n, p) = (anchors.n(), anchors.p());
    let pairs = n * n.saturating_sub(1) / 2;
    let mut dirs = RowMatrix::zeros(pairs, p);
    let mut k = 0;
    for s in 0..n {
        let fs = anchors.values.row(s);
        let drow = anchors.metric.distances().row(s);
        for t in (s + 1)..n {
            let ft = anchors.values.row(t);
            let inv = drow[t];
            for ((o, a), b) in dirs.row_mut(k).iter_mut().zip(fs).zip(ft) {
                *o = (a - b) / inv;
            }
            k += 1;
        }
    }
    dirs
}

/// `λ_ω = max_pairs |⟨w_st, g_ω⟩|` for every sample row of `g`.
///
/// Samples are split into blocks handled by independent tasks; inside a
/// task the block of `G` is transposed so that each pair direction updates a
/// contiguous strip of accumulators. Every `λ_ω` is a max over the same set
/// of dot products, each summed in coordinate order, so the result does not
/// depend on the block sizes or the thread count.
fn sample_lipschitz(dirs: &RowMatrix, g: &RowMatrix, cfg: KernelConfig) -> Vec<f64> {
    let (m, p) = g.shape();
    let pairs = dirs.rows();
    let sb = cfg.sample_block.max(1);
    let pb = cfg.pair_block.max(1);
    let mut lips = vec![0.0_f64; m];
    if pairs == 0 {
        return lips;
    }
    lips.par_chunks_mut(sb).enumerate().for_each(|(b, out)| {
        let start = b * sb;
        let len = out.len();
        // p × len, column k holds sample start + k
        let mut gt = vec![0.0; p * len];
        for k in 0..len {
            for (i, &v) in g.row(start + k).iter().enumerate() {
                gt[i * len + k] = v;
            }
        }
        let mut acc = vec![0.0; len];
        for block_start in (0..pairs).step_by(pb) {
            let block_end = (block_start + pb).min(pairs);
            for w in (block_start..block_end).map(|k| dirs.row(k)) {
                acc.iter_mut().for_each(|a| *a = 0.0);
                for (i, &wi) in w.iter().enumerate() {
                    let col = &gt[i * len..(i + 1) * len];
                    for (a, &gv) in acc.iter_mut().zip(col) {
                        *a += wi * gv;
                    }
                }
                for (o, a) in out.iter_mut().zip(&acc) {
                    let v = a.abs();
                    if v > *o {
                        *o = v;
                    }
                }
            }
        }
    });
    lips
}

fn anchor_images(emb: &GaussianEmbedding, values: &RowMatrix) -> RowMatrix {
    let (m, n) = (emb.m(), values.rows());
    let mut v = RowMatrix::zeros(m, n);
    v.as_mut_slice()
        .par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(j, row)| {
            let g = emb.sample(j);
            for (o, f) in row.iter_mut().zip(values.row_iter()) {
                *o = dot(f, g);
            }
        });
    v
}

/// Builds the operator with `m` Gaussian samples drawn from `seed`.
pub fn build(anchors: &AnchorSet, seed: u64, m: usize) -> Result<JLOperator, JlError> {
    build_with(anchors, seed, m, KernelConfig::default())
}

pub fn build_with(
    anchors: &AnchorSet,
    seed: u64,
    m: usize,
    kernel: KernelConfig,
) -> Result<JLOperator, JlError> {
    let p = anchors.p();
    if m < p {
        return Err(JlError::RankDeficient(format!(
            "need at least p = {p} samples for full column rank, got m = {m}"
        )));
    }
    let emb = sample_embedding(seed, m, p)?;
    let dirs = pair_directions(anchors);
    let sample_lips = sample_lipschitz(&dirs, emb.matrix(), kernel);
    let images = anchor_images(&emb, &anchors.values);
    finish(emb, anchors.values.clone(), images, sample_lips, kernel, None)
}

fn finish(
    emb: GaussianEmbedding,
    values: RowMatrix,
    anchor_images: RowMatrix,
    sample_lips: Vec<f64>,
    kernel: KernelConfig,
    expected_s_min: Option<f64>,
) -> Result<JLOperator, JlError> {
    let lsq = LeastSquares::new(emb.matrix());
    let (sv_min, sv_max) = lsq.singular_values();
    if !(sv_min.is_finite() && sv_max > 0.0) || sv_min <= RANK_TOL * sv_max {
        return Err(JlError::RankDeficient(format!(
            "smallest singular value {sv_min:e} is below {RANK_TOL:e} × largest {sv_max:e}"
        )));
    }
    let scale = (emb.m() as f64).sqrt();
    let (s_min, s_max) = (sv_min / scale, sv_max / scale);
    if let Some(expected) = expected_s_min {
        if expected.to_bits() != s_min.to_bits() {
            return Err(JlError::Format(format!(
                "stored s_min {expected:e} does not match regenerated {s_min:e}"
            )));
        }
    }
    Ok(JLOperator {
        emb,
        values,
        anchor_images,
        sample_lips,
        lsq,
        s_min,
        s_max,
        kernel,
    })
}

impl JLOperator {
    pub fn embedding(&self) -> &GaussianEmbedding {
        &self.emb
    }

    pub fn seed(&self) -> u64 {
        self.emb.seed()
    }

    pub fn m(&self) -> usize {
        self.emb.m()
    }

    pub fn p(&self) -> usize {
        self.emb.p()
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn values(&self) -> &RowMatrix {
        &self.values
    }

    pub fn anchor_images(&self) -> &RowMatrix {
        &self.anchor_images
    }

    pub fn sample_lips(&self) -> &[f64] {
        &self.sample_lips
    }

    /// Smallest singular value of `G/√m`.
    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    /// Largest singular value of `G/√m`.
    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn kernel(&self) -> KernelConfig {
        self.kernel
    }

    /// `U(x)`: the per-sample McShane extensions at a point with the given
    /// anchor distances.
    pub fn sample_extension(&self, dists: &[f64]) -> Vec<f64> {
        self.anchor_images
            .row_iter()
            .zip(&self.sample_lips)
            .map(|(v, &lam)| mcshane_min_raw(v, lam, dists))
            .collect()
    }

    /// `F(x)` from the distances of `x` to every anchor.
    pub fn evaluate_point(&self, dists: &[f64]) -> Result<Vec<f64>, JlError> {
        if dists.len() != self.n() {
            return Err(JlError::DimensionMismatch {
                what: "anchor distances",
                expected: self.n(),
                got: dists.len(),
            });
        }
        if let Some(anchor) = dists.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(JlError::NonFiniteDistance { query: 0, anchor });
        }
        self.solve(&self.sample_extension(dists))
    }

    fn solve(&self, u: &[f64]) -> Result<Vec<f64>, JlError> {
        self.lsq
            .solve(u)
            .ok_or_else(|| JlError::SolverFailure("non-finite least-squares solution".into()))
    }

    fn check_anchors(&self, anchors: &AnchorSet) -> Result<(), JlError> {
        if anchors.n() != self.n() {
            return Err(JlError::DimensionMismatch {
                what: "anchor count",
                expected: self.n(),
                got: anchors.n(),
            });
        }
        if anchors.values != self.values {
            return Err(JlError::AnchorMismatch);
        }
        Ok(())
    }
}

/// `F(x)` for every query; row `i` of the result is `F(queries[i])`.
pub fn evaluate(
    op: &JLOperator,
    anchors: &AnchorSet,
    qs: &QuerySet,
) -> Result<RowMatrix, JlError> {
    op.check_anchors(anchors)?;
    qs.check_compatible(&anchors.metric)?;
    let (q, p, n) = (qs.len(), op.p(), op.n());
    let rows: Vec<Vec<f64>> = (0..q)
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |buf, i| {
                qs.anchor_distances_into(&anchors.metric, i, buf)?;
                if let Some(anchor) = buf.iter().position(|d| !d.is_finite()) {
                    return Err(JlError::NonFiniteDistance { query: i, anchor });
                }
                op.solve(&op.sample_extension(buf))
            },
        )
        .collect::<Result<_, _>>()?;
    let mut out = RowMatrix::zeros(q, p);
    for (i, r) in rows.iter().enumerate() {
        out.row_mut(i).copy_from_slice(r);
    }
    Ok(out)
}

pub fn certificate(op: &JLOperator) -> LipCertificate {
    let m = op.m() as f64;
    let mean_sq = op.sample_lips.iter().map(|l| l * l).sum::<f64>() / m;
    let rms = mean_sq.sqrt();
    LipCertificate {
        rms_sample_lip: rms,
        s_min: op.s_min,
        bound: rms / op.s_min,
        theory_reference: theory_reference(op.n()),
    }
}

/// `max_t ‖F(t) − f(t)‖₂ / (1 + ‖f(t)‖₂)` over the anchors.
pub fn exactness_check(op: &JLOperator, anchors: &AnchorSet) -> Result<f64, JlError> {
    let qs = QuerySet::from_anchors(&anchors.metric);
    let fx = evaluate(op, anchors, &qs)?;
    let mut worst = 0.0_f64;
    let mut diff = vec![0.0; op.p()];
    for t in 0..anchors.n() {
        let f = anchors.values.row(t);
        for ((d, a), b) in diff.iter_mut().zip(fx.row(t)).zip(f) {
            *d = a - b;
        }
        worst = worst.max(norm2(&diff) / (1.0 + norm2(f)));
    }
    Ok(worst)
}

// --- persistence -----------------------------------------------------------

const MAGIC: &[u8; 8] = b"LIPEXTOP";
pub const OPERATOR_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct OperatorHeader {
    format_version: u32,
    seed: u64,
    m: usize,
    p: usize,
    n: usize,
    pair_block: usize,
    sample_block: usize,
}

/// Writes the operator: magic, a little-endian `u32` header length, a JSON
/// header, then little-endian `f64` payload (anchor values `n×p` row-major,
/// `λ` (`m`), `s_min`). `G` is not stored; it is regenerated from the seed.
pub fn save_operator<W: Write>(op: &JLOperator, mut w: W) -> Result<(), JlError> {
    let header = OperatorHeader {
        format_version: OPERATOR_FORMAT_VERSION,
        seed: op.seed(),
        m: op.m(),
        p: op.p(),
        n: op.n(),
        pair_block: op.kernel.pair_block,
        sample_block: op.kernel.sample_block,
    };
    let json = serde_json::to_vec(&header).map_err(|e| JlError::Format(e.to_string()))?;
    w.write_all(MAGIC)?;
    w.write_all(&(json.len() as u32).to_le_bytes())?;
    w.write_all(&json)?;
    let mut payload = Vec::with_capacity(8 * (op.values.as_slice().len() + op.m() + 1));
    for v in op
        .values
        .as_slice()
        .iter()
        .chain(&op.sample_lips)
        .chain(std::iter::once(&op.s_min))
    {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&payload)?;
    w.flush()?;
    Ok(())
}

/// Reads an operator written by [`save_operator`].
pub fn load_operator<R: Read>(mut r: R) -> Result<JLOperator, JlError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(JlError::Format("bad magic".into()));
    }
    let mut len = [0u8; 4];
    r.read_exact(&mut len)?;
    let len = u32::from_le_bytes(len) as usize;
    if len > 1 << 20 {
        return Err(JlError::Format(format!("header length {len} too large")));
    }
    let mut json = vec![0u8; len];
    r.read_exact(&mut json)?;
    let h: OperatorHeader =
        serde_json::from_slice(&json).map_err(|e| JlError::Format(e.to_string()))?;
    if h.format_version != OPERATOR_FORMAT_VERSION {
        return Err(JlError::Format(format!(
            "unsupported format version {}",
            h.format_version
        )));
    }
    if h.n == 0 || h.p == 0 || h.m < h.p {
        return Err(JlError::Format(format!(
            "invalid shape n = {}, p = {}, m = {}",
            h.n, h.p, h.m
        )));
    }
    let count = h
        .n
        .checked_mul(h.p)
        .and_then(|np| np.checked_add(h.m + 1))
        .ok_or_else(|| JlError::Format("shape overflow".into()))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * count {
        return Err(JlError::Format(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            8 * count
        )));
    }
    let nums: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let (vals, rest) = nums.split_at(h.n * h.p);
    let (lips, s_min) = rest.split_at(h.m);
    let values = RowMatrix::from_vec(h.n, h.p, vals.to_vec()).expect("sized above");
    if !values.all_finite() || lips.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(JlError::Format("payload contains invalid numbers".into()));
    }
    let emb = sample_embedding(h.seed, h.m, h.p)?;
    let images = anchor_images(&emb, &values);
    let kernel = KernelConfig {
        pair_block: h.pair_block,
        sample_block: h.sample_block,
    };
    finish(emb, values, images, lips.to_vec(), kernel, Some(s_min[0]))
}
