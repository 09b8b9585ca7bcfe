//! Shared helpers for integration tests, including an independent dense-loop
//! reimplementation of the extension pipeline.
//!
//! The oracle shares only its inputs (anchor distances, values, and the
//! Gaussian sample matrix) with the library. Everything else is recomputed
//! with plain loops: anchor images, per-sample constants from image
//! differences, McShane minima, Gram–Schmidt least squares and a one-sided
//! Jacobi SVD for the smallest singular value.
#![allow(dead_code)]

use lipext::analysis::random_instance;
use lipext::jl_ext::AnchorSet;
use lipext::RowMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Oracle {
    pub images: Vec<Vec<f64>>,
    pub lips: Vec<f64>,
    pub s_min: f64,
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl Oracle {
    /// `dist[s][t]` anchor distances, `values[t]` anchor values, `g[ω]` samples.
    pub fn build(dist: &[Vec<f64>], values: &[Vec<f64>], g: &[Vec<f64>]) -> Self {
        let n = values.len();
        let m = g.len();
        let p = g[0].len();
        let mut images = vec![vec![0.0; n]; m];
        for w in 0..m {
            for t in 0..n {
                let mut acc = 0.0;
                for i in 0..p {
                    acc += values[t][i] * g[w][i];
                }
                images[w][t] = acc;
            }
        }
        let mut lips = vec![0.0; m];
        for w in 0..m {
            for s in 0..n {
                for t in 0..n {
                    if s != t {
                        let r = (images[w][s] - images[w][t]).abs() / dist[s][t];
                        if r > lips[w] {
                            lips[w] = r;
                        }
                    }
                }
            }
        }
        let (q, r) = gram_schmidt(g);
        let s_min = smallest_singular_value(g) / (m as f64).sqrt();
        Self {
            images,
            lips,
            s_min,
            q,
            r,
        }
    }

    pub fn evaluate(&self, dists: &[f64]) -> Vec<f64> {
        let m = self.images.len();
        let mut u = vec![0.0; m];
        for w in 0..m {
            let mut best = f64::INFINITY;
            for (t, d) in dists.iter().enumerate() {
                best = best.min(self.images[w][t] + self.lips[w] * d);
            }
            u[w] = best;
        }
        // y = R⁻¹ Qᵀ u
        let p = self.r.len();
        let mut rhs = vec![0.0; p];
        for j in 0..p {
            for w in 0..m {
                rhs[j] += self.q[j][w] * u[w];
            }
        }
        let mut y = vec![0.0; p];
        for j in (0..p).rev() {
            let mut acc = rhs[j];
            for k in (j + 1)..p {
                acc -= self.r[j][k] * y[k];
            }
            y[j] = acc / self.r[j][j];
        }
        y
    }

    pub fn rms_lip(&self) -> f64 {
        (self.lips.iter().map(|l| l * l).sum::<f64>() / self.lips.len() as f64).sqrt()
    }
}

/// Classical Gram–Schmidt with one reorthogonalization pass. Returns the
/// orthonormal columns (as rows of `q`) and upper-triangular `r`.
fn gram_schmidt(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let m = g.len();
    let p = g[0].len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut r = vec![vec![0.0; p]; p];
    for j in 0..p {
        let mut v: Vec<f64> = (0..m).map(|w| g[w][j]).collect();
        for _pass in 0..2 {
            for (k, qk) in q.iter().enumerate() {
                let c: f64 = qk.iter().zip(&v).map(|(a, b)| a * b).sum();
                r[k][j] += c;
                for w in 0..m {
                    v[w] -= c * qk[w];
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        r[j][j] = norm;
        q.push(v.into_iter().map(|x| x / norm).collect());
    }
    (q, r)
}

/// Smallest singular value of `g` by one-sided (Hestenes) Jacobi rotations
/// applied to the columns of `g` directly, so the conditioning is not squared.
fn smallest_singular_value(g: &[Vec<f64>]) -> f64 {
    let p = g[0].len();
    let mut cols: Vec<Vec<f64>> = (0..p).map(|j| g.iter().map(|row| row[j]).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _sweep in 0..60 {
        let mut rotated = false;
        for k in 0..p {
            for l in (k + 1)..p {
                let alpha = dot(&cols[k], &cols[k]);
                let beta = dot(&cols[l], &cols[l]);
                let gamma = dot(&cols[k], &cols[l]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(l);
                for (a, b) in left[k].iter_mut().zip(right[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.iter().map(|c| dot(c, c).sqrt()).fold(f64::INFINITY, f64::min)
}

pub fn rows(m: &RowMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

/// `|a − b| ≤ tol · max(|b|, scale)`.
pub fn rel_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(scale)
}

/// Random Euclidean instance with `Lip(f) = 1`.
pub fn instance(seed: u64, n: usize, dim: usize, p: usize) -> AnchorSet {
    random_instance(seed, n, dim, p, 0.3).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, q: usize, dim: usize, lo: f64, hi: f64) -> RowMatrix {
    let data = (0..q * dim).map(|_| rng.random_range(lo..hi)).collect();
    RowMatrix::from_vec(q, dim, data).unwrap()
}

/// Anchors followed by `extra` random points.
pub fn anchors_plus_random(anchors: &AnchorSet, rng: &mut ChaCha8Rng, extra: usize) -> RowMatrix {
    let ac = anchors.metric().coords().unwrap();
    let mut all = ac.to_rows();
    all.extend(random_points(rng, extra, ac.cols(), -0.5, 1.5).to_rows());
    RowMatrix::from_rows(&all).unwrap()
}
