//! Seeded Gaussian sampling and the Gaussian embedding `k(x) = Σᵢ xᵢ gᵢ`.
//!
//! The probability space is discretized into `m` equally weighted atoms. Atom
//! `j` is row `j` of an `m × p` matrix `G` of standard normals, so
//! `k(x)` becomes the `m`-vector `G·x` and the `L₂(Ω)` norm becomes the RMS
//! norm `‖a‖_H² = (1/m) Σⱼ aⱼ²`.
//!
//! Every normal is addressable by `(seed, row, column)`: each row is its own
//! ChaCha8 stream, and column pair `(2c, 2c+1)` is produced by Box–Muller from
//! the two 64-bit words at position `c` of that stream. Rows can therefore be
//! generated in any order, on any number of threads, with identical bits.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{dot, RowMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Independent sub-streams derived from one user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Embedding = 0,
    MaxSquare = 1,
    TailCheck = 2,
    Instances = 3,
    Pairs = 4,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 256-bit ChaCha key for `(seed, stream)`.
fn derive_key(seed: u64, stream: Stream) -> [u8; 32] {
    let mut state = seed ^ (stream as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Seeded uniform generator for auxiliary draws (instance generation, pair
/// sampling) that must not share bits with the Gaussian streams.
pub fn aux_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_key(seed, stream))
}

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

#[inline]
fn box_muller(a: u64, b: u64) -> (f64, f64) {
    // u1 ∈ (0, 1] keeps the log finite
    let u1 = ((a >> 11) as f64 + 1.0) * TWO_POW_M53;
    let u2 = (b >> 11) as f64 * TWO_POW_M53;
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Counter-addressable source of standard normals.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    key: [u8; 32],
}

impl GaussianSource {
    pub fn new(seed: u64, stream: Stream) -> Self {
        Self {
            key: derive_key(seed, stream),
        }
    }

    /// Fills `out` with columns `0..out.len()` of `row`.
    pub fn fill_row(&self, row: u64, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(row);
        let mut pairs = out.chunks_exact_mut(2);
        for pair in &mut pairs {
            let (z0, z1) = box_muller(rng.next_u64(), rng.next_u64());
            pair[0] = z0;
            pair[1] = z1;
        }
        if let [last] = pairs.into_remainder() {
            *last = box_muller(rng.next_u64(), rng.next_u64()).0;
        }
    }

    /// A single entry, computed without generating the rest of the row.
    pub fn entry(&self, row: u64, col: u64) -> f64 {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(row);
        // each column pair consumes two u64, i.e. four 32-bit words
        rng.set_word_pos(u128::from(col / 2) * 4);
        let (z0, z1) = box_muller(rng.next_u64(), rng.next_u64());
        if col.is_multiple_of(2) {
            z0
        } else {
            z1
        }
    }
}

/// The `m × p` sample matrix realizing the discretized embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianEmbedding {
    seed: u64,
    samples: RowMatrix,
}

/// Draws the `m × p` standard normal matrix for `seed`.
pub fn sample_embedding(seed: u64, m: usize, p: usize) -> Result<GaussianEmbedding, GaussError> {
    if m == 0 || p == 0 {
        return Err(GaussError::Domain(format!(
            "embedding needs m >= 1 and p >= 1, got m = {m}, p = {p}"
        )));
    }
    let source = GaussianSource::new(seed, Stream::Embedding);
    let mut samples = RowMatrix::zeros(m, p);
    samples
        .as_mut_slice()
        .par_chunks_mut(p)
        .enumerate()
        .for_each(|(j, row)| source.fill_row(j as u64, row));
    Ok(GaussianEmbedding { seed, samples })
}

/// Default number of samples for target dimension `p`: `max(64·p, 1024)`.
pub fn default_samples(p: usize) -> usize {
    (64 * p).max(1024)
}

impl GaussianEmbedding {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of samples (atoms of Ω).
    pub fn m(&self) -> usize {
        self.samples.rows()
    }

    /// Target dimension.
    pub fn p(&self) -> usize {
        self.samples.cols()
    }

    pub fn matrix(&self) -> &RowMatrix {
        &self.samples
    }

    #[inline]
    pub fn sample(&self, j: usize) -> &[f64] {
        self.samples.row(j)
    }

    /// `k(x) = G·x`.
    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>, GaussError> {
        if x.len() != self.p() {
            return Err(GaussError::DimensionMismatch {
                expected: self.p(),
                got: x.len(),
            });
        }
        Ok(self.samples.row_iter().map(|g| dot(g, x)).collect())
    }
}

/// `⟨a, b⟩_H = (1/m) Σⱼ aⱼ bⱼ`.
pub fn h_inner(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    dot(a, b) / a.len() as f64
}

pub fn h_norm(a: &[f64]) -> f64 {
    h_inner(a, a).sqrt()
}

/// Upper bound on `E[max{G₁², …, G_m²}]` for `m ≥ 2` standard Gaussians
/// under any dependence: the tail split at `s = 2 ln m` gives `2 ln m + 4`.
pub fn max_square_bound(m_gaussians: usize) -> Result<f64, GaussError> {
    if m_gaussians < 2 {
        return Err(GaussError::Domain(format!(
            "max-square bound requires m >= 2, got {m_gaussians}"
        )));
    }
    Ok(2.0 * (m_gaussians as f64).ln() + 4.0)
}

/// Dependence structure of the Gaussians in [`max_square_mc`].
#[derive(Debug, Clone, PartialEq)]
pub enum Dependence {
    Independent,
    /// `G_z = ⟨z, g⟩` for the unit rows `z` of `directions`, with `g` a
    /// standard normal vector in the ambient dimension.
    PairDifferences { directions: RowMatrix },
}

impl Dependence {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Independent => "independent",
            Self::PairDifferences { .. } => "pair_differences",
        }
    }

    /// Normalized differences `(x_s − x_t)/‖x_s − x_t‖` of the first
    /// `m_gaussians` pairs `s < t` of `points`, in lexicographic order.
    pub fn pair_differences(points: &RowMatrix, m_gaussians: usize) -> Result<Self, GaussError> {
        let k = points.rows();
        let available = k * k.saturating_sub(1) / 2;
        if available < m_gaussians {
            return Err(GaussError::Domain(format!(
                "{k} points give {available} pairs, need {m_gaussians}"
            )));
        }
        let d = points.cols();
        let mut directions = RowMatrix::zeros(m_gaussians, d);
        let mut row = 0;
        'outer: for s in 0..k {
            for t in (s + 1)..k {
                if row == m_gaussians {
                    break 'outer;
                }
                let out = directions.row_mut(row);
                for ((o, a), b) in out.iter_mut().zip(points.row(s)).zip(points.row(t)) {
                    *o = a - b;
                }
                let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 || !norm.is_finite() {
                    return Err(GaussError::Domain(format!(
                        "points {s} and {t} coincide or are not finite"
                    )));
                }
                out.iter_mut().for_each(|x| *x /= norm);
                row += 1;
            }
        }
        Ok(Self::PairDifferences { directions })
    }

    /// Pair-difference family over the smallest uniformly random point cloud
    /// in `[0,1]^dim` that has at least `m_gaussians` pairs.
    pub fn random_pair_differences(
        seed: u64,
        m_gaussians: usize,
        dim: usize,
    ) -> Result<Self, GaussError> {
        use rand::Rng;
        if dim == 0 {
            return Err(GaussError::Domain("point dimension must be >= 1".into()));
        }
        let mut k = 2;
        while k * (k - 1) / 2 < m_gaussians {
            k += 1;
        }
        let mut rng = aux_rng(seed, Stream::Pairs);
        let data = (0..k * dim).map(|_| rng.random::<f64>()).collect();
        let points = RowMatrix::from_vec(k, dim, data).expect("sized above");
        Self::pair_differences(&points, m_gaussians)
    }
}

/// Monte Carlo estimate of `E[max Gᵢ²]` with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxSquareReport {
    pub m_gaussians: usize,
    pub dependence: String,
    pub seed: u64,
    pub trials: usize,
    pub estimate: f64,
    pub std_error: f64,
    /// `2 ln m + 4`. Serialized under the report's published column name.
    #[serde(rename = "paper_bound")]
    pub bound: f64,
}

/// Mean and standard error of the mean; deterministic summation order.
pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn max_square_mc(
    seed: u64,
    m_gaussians: usize,
    trials: usize,
    dependence: &Dependence,
) -> Result<MaxSquareReport, GaussError> {
    if trials == 0 {
        return Err(GaussError::Domain("trials must be >= 1".into()));
    }
    if m_gaussians == 0 {
        return Err(GaussError::Domain("m_gaussians must be >= 1".into()));
    }
    let source = GaussianSource::new(seed, Stream::MaxSquare);
    let maxima: Vec<f64> = match dependence {
        Dependence::Independent => (0..trials)
            .into_par_iter()
            .map_init(
                || vec![0.0; m_gaussians],
                |buf, t| {
                    source.fill_row(t as u64, buf);
                    buf.iter().fold(0.0_f64, |m, g| m.max(g * g))
                },
            )
            .collect(),
        Dependence::PairDifferences { directions } => {
            if directions.rows() != m_gaussians {
                return Err(GaussError::DimensionMismatch {
                    expected: m_gaussians,
                    got: directions.rows(),
                });
            }
            let d = directions.cols();
            (0..trials)
                .into_par_iter()
                .map_init(
                    || vec![0.0; d],
                    |buf, t| {
                        source.fill_row(t as u64, buf);
                        directions.row_iter().fold(0.0_f64, |m, z| {
                            let g = dot(z, buf);
                            m.max(g * g)
                        })
                    },
                )
                .collect()
        }
    };
    let (estimate, std_error) = mean_and_se(&maxima);
    Ok(MaxSquareReport {
        m_gaussians,
        dependence: dependence.label().to_string(),
        seed,
        trials,
        estimate,
        std_error,
        bound: 2.0 * (m_gaussians as f64).ln() + 4.0,
    })
}

/// One row of the tail check: empirical `Pr[G ≥ t]` against `e^{−t²/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub t: f64,
    pub trials: usize,
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
}

const TAIL_ROW_WIDTH: usize = 1024;

pub fn tail_prob_check(seed: u64, t_grid: &[f64], trials: usize) -> Result<Vec<TailRow>, GaussError> {
    if trials == 0 {
        return Err(GaussError::Domain("trials must be >= 1".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(GaussError::Domain(format!("tail grid point {t} must be finite and >= 0")));
    }
    let source = GaussianSource::new(seed, Stream::TailCheck);
    let blocks = trials.div_ceil(TAIL_ROW_WIDTH);
    let counts = (0..blocks)
        .into_par_iter()
        .map_init(
            || vec![0.0; TAIL_ROW_WIDTH],
            |buf, b| {
                let len = TAIL_ROW_WIDTH.min(trials - b * TAIL_ROW_WIDTH);
                source.fill_row(b as u64, &mut buf[..len]);
                t_grid
                    .iter()
                    .map(|&t| buf[..len].iter().filter(|&&g| g >= t).count())
                    .collect::<Vec<_>>()
            },
        )
        .reduce(
            || vec![0usize; t_grid.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let n = trials as f64;
    Ok(t_grid
        .iter()
        .zip(counts)
        .map(|(&t, c)| {
            let p = c as f64 / n;
            TailRow {
                t,
                trials,
                empirical: p,
                std_error: (p * (1.0 - p) / n).sqrt(),
                bound: (-t * t / 2.0).exp(),
            }
        })
        .collect())
}
