//! Finite metric spaces (the anchor set `T`) and query sets drawn from a
//! superspace `X ⊇ T`.

use thiserror::Error;

use crate::matrix::{euclidean, RowMatrix};

/// Triangle checks are on by default up to this many points.
pub const TRIANGLE_CHECK_MAX_POINTS: usize = 512;

/// Default triangle tolerance, relative to the largest distance.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("metric must contain at least one point")]
    Empty,
    #[error("distance d[{i}][{j}] is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("nonzero diagonal entry d[{i}][{i}] = {value}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("negative distance d[{i}][{j}] = {value}")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("asymmetric distances: d[{i}][{j}] = {dij} but d[{j}][{i}] = {dji}")]
    Asymmetry { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("points {i} and {j} coincide (zero off-diagonal distance)")]
    DuplicatePoints { i: usize, j: usize },
    #[error("triangle inequality violated: d[{i}][{k}] = {dik} > d[{i}][{j}] + d[{j}][{k}] = {via}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        dik: f64,
        via: f64,
    },
    #[error("anchors carry no coordinates, required for euclidean queries")]
    MissingCoordinates,
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("index out of range in {what}: {index} >= {len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("query {query} is inconsistent with anchors {s} and {t}: {detail}")]
    InconsistentQuery {
        query: usize,
        s: usize,
        t: usize,
        detail: String,
    },
}

/// A validated finite metric space.
///
/// Distances are stored as a dense symmetric matrix. When the metric was
/// derived from Euclidean coordinates those are kept so that Euclidean queries
/// can be answered.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    dist: RowMatrix,
    coords: Option<RowMatrix>,
}

impl FiniteMetric {
    /// Validates with the default policy: triangle checks for `n ≤ 512`,
    /// tolerance `1e-9 · max distance`.
    pub fn from_distances(dist: RowMatrix) -> Result<Self, MetricError> {
        let check = dist.rows() <= TRIANGLE_CHECK_MAX_POINTS;
        let tol = DEFAULT_RELATIVE_TOL * dist.max_abs();
        validate_metric(dist, check, tol)
    }

    pub fn len(&self) -> usize {
        self.dist.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist.get(i, j)
    }

    pub fn distances(&self) -> &RowMatrix {
        &self.dist
    }

    pub fn coords(&self) -> Option<&RowMatrix> {
        self.coords.as_ref()
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.max_abs()
    }

    /// Relabels points so that new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.len();
        let mut dist = RowMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                dist.set(i, j, self.dist(perm[i], perm[j]));
            }
        }
        Self {
            dist,
            coords: self.coords.as_ref().map(|c| c.permute_rows(perm)),
        }
    }
}

/// Checks the metric axioms and returns the validated space, or the first
/// violated axiom in row-major scan order. Triangle checks run last.
pub fn validate_metric(
    dist: RowMatrix,
    check_triangle: bool,
    tol: f64,
) -> Result<FiniteMetric, MetricError> {
    let (rows, cols) = dist.shape();
    if rows != cols {
        return Err(MetricError::NotSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Err(MetricError::Empty);
    }
    for i in 0..n {
        for j in 0..n {
            let dij = dist.get(i, j);
            if !dij.is_finite() {
                return Err(MetricError::NonFinite { i, j });
            }
            if i == j {
                if dij != 0.0 {
                    return Err(MetricError::NonzeroDiagonal { i, value: dij });
                }
                continue;
            }
            if dij < 0.0 {
                return Err(MetricError::NegativeDistance { i, j, value: dij });
            }
            let dji = dist.get(j, i);
            if dij != dji {
                // report each asymmetric pair once, with i < j
                let (a, b) = (i.min(j), i.max(j));
                return Err(MetricError::Asymmetry {
                    i: a,
                    j: b,
                    dij: dist.get(a, b),
                    dji: dist.get(b, a),
                });
            }
            if dij == 0.0 {
                return Err(MetricError::DuplicatePoints {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
        }
    }
    if check_triangle {
        check_triangle_inequality(&dist, tol)?;
    }
    Ok(FiniteMetric { dist, coords: None })
}

fn check_triangle_inequality(dist: &RowMatrix, tol: f64) -> Result<(), MetricError> {
    let n = dist.rows();
    for i in 0..n {
        let row_i = dist.row(i);
        for k in (i + 1)..n {
            let dik = row_i[k];
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let via = row_i[j] + dist.get(j, k);
                if dik > via + tol {
                    return Err(MetricError::TriangleViolation { i, j, k, dik, via });
                }
            }
        }
    }
    Ok(())
}

/// Metric induced by the Euclidean norm on the rows of `coords`.
pub fn euclidean_metric(coords: RowMatrix) -> Result<FiniteMetric, MetricError> {
    let n = coords.rows();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    if !coords.all_finite() {
        let idx = coords.as_slice().iter().position(|x| !x.is_finite()).unwrap();
        let d = coords.cols().max(1);
        return Err(MetricError::NonFinite {
            i: idx / d,
            j: idx % d,
        });
    }
    let mut dist = RowMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(coords.row(i), coords.row(j));
            if d == 0.0 {
                return Err(MetricError::DuplicatePoints { i, j });
            }
            dist.set(i, j, d);
            dist.set(j, i, d);
        }
    }
    Ok(FiniteMetric {
        dist,
        coords: Some(coords),
    })
}

/// Points of the superspace at which an extension is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum QuerySet {
    /// Query coordinates in the same ambient space as the anchors.
    Euclidean { coords: RowMatrix },
    /// Explicit query-to-anchor distances (`q × n`), and optionally the
    /// query-to-query distances (`q × q`).
    Explicit {
        anchor_dists: RowMatrix,
        pair_dists: Option<RowMatrix>,
    },
}

impl QuerySet {
    pub fn euclidean(coords: RowMatrix) -> Self {
        Self::Euclidean { coords }
    }

    /// Builds and validates an explicit query set: entries finite and
    /// nonnegative, `pair_dists` square, symmetric and zero on the diagonal.
    ///
    /// No check is made that the distances are realizable in a metric
    /// superspace; see [`QuerySet::check_consistency`] for the optional strict
    /// check.
    pub fn explicit(
        anchor_dists: RowMatrix,
        pair_dists: Option<RowMatrix>,
    ) -> Result<Self, MetricError> {
        for i in 0..anchor_dists.rows() {
            for (j, &d) in anchor_dists.row(i).iter().enumerate() {
                if !d.is_finite() {
                    return Err(MetricError::NonFinite { i, j });
                }
                if d < 0.0 {
                    return Err(MetricError::NegativeDistance { i, j, value: d });
                }
            }
        }
        if let Some(pd) = &pair_dists {
            let q = anchor_dists.rows();
            if pd.rows() != q || pd.cols() != q {
                return Err(MetricError::DimensionMismatch {
                    what: "pair_dists",
                    expected: q,
                    got: if pd.rows() != q { pd.rows() } else { pd.cols() },
                });
            }
            for i in 0..q {
                for j in 0..q {
                    let d = pd.get(i, j);
                    if !d.is_finite() {
                        return Err(MetricError::NonFinite { i, j });
                    }
                    if i == j && d != 0.0 {
                        return Err(MetricError::NonzeroDiagonal { i, value: d });
                    }
                    if d < 0.0 {
                        return Err(MetricError::NegativeDistance { i, j, value: d });
                    }
                    if d != pd.get(j, i) {
                        return Err(MetricError::Asymmetry {
                            i: i.min(j),
                            j: i.max(j),
                            dij: pd.get(i.min(j), i.max(j)),
                            dji: pd.get(i.max(j), i.min(j)),
                        });
                    }
                }
            }
        }
        Ok(Self::Explicit {
            anchor_dists,
            pair_dists,
        })
    }

    /// The anchors themselves as an explicit query set.
    pub fn from_anchors(anchors: &FiniteMetric) -> Self {
        Self::Explicit {
            anchor_dists: anchors.distances().clone(),
            pair_dists: Some(anchors.distances().clone()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Euclidean { coords } => coords.rows(),
            Self::Explicit { anchor_dists, .. } => anchor_dists.rows(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that the query set can be evaluated against `anchors`.
    pub fn check_compatible(&self, anchors: &FiniteMetric) -> Result<(), MetricError> {
        match self {
            Self::Euclidean { coords } => {
                let ac = anchors.coords().ok_or(MetricError::MissingCoordinates)?;
                if coords.rows() > 0 && coords.cols() != ac.cols() {
                    return Err(MetricError::DimensionMismatch {
                        what: "query coordinates",
                        expected: ac.cols(),
                        got: coords.cols(),
                    });
                }
                if !coords.all_finite() {
                    let idx = coords.as_slice().iter().position(|x| !x.is_finite()).unwrap();
                    return Err(MetricError::NonFinite {
                        i: idx / coords.cols(),
                        j: idx % coords.cols(),
                    });
                }
            }
            Self::Explicit { anchor_dists, .. } => {
                if anchor_dists.rows() > 0 && anchor_dists.cols() != anchors.len() {
                    return Err(MetricError::DimensionMismatch {
                        what: "anchor_dists",
                        expected: anchors.len(),
                        got: anchor_dists.cols(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Fills `out` with the distances from query `qi` to every anchor.
    pub fn anchor_distances_into(
        &self,
        anchors: &FiniteMetric,
        qi: usize,
        out: &mut [f64],
    ) -> Result<(), MetricError> {
        let n = anchors.len();
        if out.len() != n {
            return Err(MetricError::DimensionMismatch {
                what: "distance buffer",
                expected: n,
                got: out.len(),
            });
        }
        if qi >= self.len() {
            return Err(MetricError::IndexOutOfRange {
                what: "query index",
                index: qi,
                len: self.len(),
            });
        }
        match self {
            Self::Euclidean { coords } => {
                let ac = anchors.coords().ok_or(MetricError::MissingCoordinates)?;
                let x = coords.row(qi);
                for (t, o) in out.iter_mut().enumerate() {
                    *o = euclidean(x, ac.row(t));
                }
            }
            Self::Explicit { anchor_dists, .. } => {
                if anchor_dists.cols() != n {
                    return Err(MetricError::DimensionMismatch {
                        what: "anchor_dists",
                        expected: n,
                        got: anchor_dists.cols(),
                    });
                }
                out.copy_from_slice(anchor_dists.row(qi));
            }
        }
        Ok(())
    }

    /// Distance between two queries, when it is known.
    pub fn pair_distance(&self, i: usize, j: usize) -> Option<f64> {
        match self {
            Self::Euclidean { coords } => Some(euclidean(coords.row(i), coords.row(j))),
            Self::Explicit { pair_dists, .. } => pair_dists.as_ref().map(|pd| pd.get(i, j)),
        }
    }

    pub fn has_pair_distances(&self) -> bool {
        match self {
            Self::Euclidean { .. } => true,
            Self::Explicit { pair_dists, .. } => pair_dists.is_some(),
        }
    }

    /// Optional strict check that explicit distances are consistent with the
    /// triangle inequality against the anchor metric (and between queries
    /// when `pair_dists` is present). Euclidean query sets always pass.
    pub fn check_consistency(&self, anchors: &FiniteMetric, tol: f64) -> Result<(), MetricError> {
        self.check_compatible(anchors)?;
        let Self::Explicit {
            anchor_dists,
            pair_dists,
        } = self
        else {
            return Ok(());
        };
        let n = anchors.len();
        for x in 0..anchor_dists.rows() {
            let row = anchor_dists.row(x);
            for s in 0..n {
                for t in 0..n {
                    if s == t {
                        continue;
                    }
                    // d(x,s) ≤ d(x,t) + d(t,s)
                    if row[s] > row[t] + anchors.dist(t, s) + tol {
                        return Err(MetricError::InconsistentQuery {
                            query: x,
                            s,
                            t,
                            detail: format!(
                                "d(x,{s}) = {} > d(x,{t}) + d({t},{s}) = {}",
                                row[s],
                                row[t] + anchors.dist(t, s)
                            ),
                        });
                    }
                }
            }
        }
        if let Some(pd) = pair_dists {
            let q = anchor_dists.rows();
            for x in 0..q {
                for y in (x + 1)..q {
                    for t in 0..n {
                        let via = anchor_dists.get(x, t) + anchor_dists.get(y, t);
                        if pd.get(x, y) > via + tol {
                            return Err(MetricError::InconsistentQuery {
                                query: x,
                                s: t,
                                t,
                                detail: format!(
                                    "d(x,q{y}) = {} > d(x,{t}) + d({t},q{y}) = {via}",
                                    pd.get(x, y)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Distance from query `query_index` to anchor `anchor_index`.
pub fn query_anchor_distance(
    qs: &QuerySet,
    anchors: &FiniteMetric,
    query_index: usize,
    anchor_index: usize,
) -> Result<f64, MetricError> {
    if query_index >= qs.len() {
        return Err(MetricError::IndexOutOfRange {
            what: "query index",
            index: query_index,
            len: qs.len(),
        });
    }
    if anchor_index >= anchors.len() {
        return Err(MetricError::IndexOutOfRange {
            what: "anchor index",
            index: anchor_index,
            len: anchors.len(),
        });
    }
    match qs {
        QuerySet::Euclidean { coords } => {
            let ac = anchors.coords().ok_or(MetricError::MissingCoordinates)?;
            if coords.cols() != ac.cols() {
                return Err(MetricError::DimensionMismatch {
                    what: "query coordinates",
                    expected: ac.cols(),
                    got: coords.cols(),
                });
            }
            Ok(euclidean(coords.row(query_index), ac.row(anchor_index)))
        }
        QuerySet::Explicit { anchor_dists, .. } => {
            if anchor_dists.cols() != anchors.len() {
                return Err(MetricError::DimensionMismatch {
                    what: "anchor_dists",
                    expected: anchors.len(),
                    got: anchor_dists.cols(),
                });
            }
            Ok(anchor_dists.get(query_index, anchor_index))
        }
    }
}
