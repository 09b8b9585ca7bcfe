//! Scalar Lipschitz constants over finite sets and the McShane extension.
//!
//! For `q: T → ℝ` that is `L`-Lipschitz on a finite anchor set,
//!
//! ```text
//! Q(x)  = min_t q(t) + L·d(x,t)     (upper extension)
//! Q̃(x) = max_t q(t) − L·d(x,t)     (lower extension)
//! ```
//!
//! are both `L`-Lipschitz extensions of `q`, and every `L`-Lipschitz
//! extension lies between them.

use rayon::prelude::*;
use thiserror::Error;

use crate::metric::{FiniteMetric, MetricError, QuerySet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarExtError {
    #[error("non-finite distance {value} to anchor {anchor}")]
    NonFiniteDistance { anchor: usize, value: f64 },
    #[error("non-finite anchor value at index {index}")]
    NonFiniteValue { index: usize },
    #[error("invalid Lipschitz constant {0}")]
    InvalidLipschitz(f64),
    #[error("expected {expected} anchor values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Exact Lipschitz constant of `values` over the metric, `max_{i≠j} |vᵢ − vⱼ| / d(i,j)`.
///
/// Returns 0 for a single point.
pub fn lip_const(values: &[f64], metric: &FiniteMetric) -> f64 {
    assert_eq!(values.len(), metric.len(), "one value per point");
    let n = values.len();
    let mut best = 0.0_f64;
    for i in 0..n {
        let row = metric.distances().row(i);
        for j in (i + 1)..n {
            let r = (values[i] - values[j]).abs() / row[j];
            if r > best {
                best = r;
            }
        }
    }
    best
}

/// Upper McShane form over raw slices: `min_t values[t] + lip·dists[t]`.
///
/// A zero distance identifies the query with that anchor and returns its
/// value exactly; otherwise rounding in `lip·d` for another anchor could land
/// an ulp below it. Caller guarantees equal lengths and at least one anchor.
#[inline]
pub fn mcshane_min_raw(values: &[f64], lip: f64, dists: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), dists.len());
    let mut best = f64::INFINITY;
    for (&v, &d) in values.iter().zip(dists) {
        if d == 0.0 {
            return v;
        }
        let c = v + lip * d;
        if c < best {
            best = c;
        }
    }
    best
}

/// Lower McShane form over raw slices: `max_t values[t] − lip·dists[t]`.
#[inline]
pub fn mcshane_max_raw(values: &[f64], lip: f64, dists: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), dists.len());
    let mut best = f64::NEG_INFINITY;
    for (&v, &d) in values.iter().zip(dists) {
        if d == 0.0 {
            return v;
        }
        let c = v - lip * d;
        if c > best {
            best = c;
        }
    }
    best
}

fn check_dists(dists: &[f64]) -> Result<(), ScalarExtError> {
    match dists.iter().position(|d| !d.is_finite()) {
        Some(anchor) => Err(ScalarExtError::NonFiniteDistance {
            anchor,
            value: dists[anchor],
        }),
        None => Ok(()),
    }
}

/// A scalar function on the anchors together with the Lipschitz constant
/// used to extend it.
#[derive(Debug, Clone)]
pub struct ScalarExtension<'a> {
    values: Vec<f64>,
    lip: f64,
    anchors: &'a FiniteMetric,
}

impl<'a> ScalarExtension<'a> {
    /// Extension with `L = lip_const(values)`.
    pub fn new(values: Vec<f64>, anchors: &'a FiniteMetric) -> Result<Self, ScalarExtError> {
        Self::check_values(&values, anchors)?;
        let lip = lip_const(&values, anchors);
        Ok(Self {
            values,
            lip,
            anchors,
        })
    }

    /// Extension with an explicit constant. `lip` must be finite, nonnegative
    /// and at least `lip_const(values)`.
    pub fn with_lip(
        values: Vec<f64>,
        lip: f64,
        anchors: &'a FiniteMetric,
    ) -> Result<Self, ScalarExtError> {
        Self::check_values(&values, anchors)?;
        if !lip.is_finite() || lip < 0.0 || lip < lip_const(&values, anchors) {
            return Err(ScalarExtError::InvalidLipschitz(lip));
        }
        Ok(Self {
            values,
            lip,
            anchors,
        })
    }

    fn check_values(values: &[f64], anchors: &FiniteMetric) -> Result<(), ScalarExtError> {
        if values.len() != anchors.len() {
            return Err(ScalarExtError::DimensionMismatch {
                expected: anchors.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(ScalarExtError::NonFiniteValue { index });
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lip(&self) -> f64 {
        self.lip
    }

    pub fn anchors(&self) -> &FiniteMetric {
        self.anchors
    }

    /// `Q(x)` given the distances from `x` to every anchor.
    pub fn mcshane_min(&self, dists: &[f64]) -> Result<f64, ScalarExtError> {
        self.check_len(dists)?;
        check_dists(dists)?;
        Ok(mcshane_min_raw(&self.values, self.lip, dists))
    }

    /// `Q̃(x)` given the distances from `x` to every anchor.
    pub fn mcshane_max(&self, dists: &[f64]) -> Result<f64, ScalarExtError> {
        self.check_len(dists)?;
        check_dists(dists)?;
        Ok(mcshane_max_raw(&self.values, self.lip, dists))
    }

    fn check_len(&self, dists: &[f64]) -> Result<(), ScalarExtError> {
        if dists.len() != self.values.len() {
            return Err(ScalarExtError::DimensionMismatch {
                expected: self.values.len(),
                got: dists.len(),
            });
        }
        Ok(())
    }

    /// `Q` at every query of `qs`. Queries are evaluated in parallel; each
    /// output depends only on its own query.
    pub fn extend_batch(&self, qs: &QuerySet) -> Result<Vec<f64>, ScalarExtError> {
        qs.check_compatible(self.anchors)?;
        (0..qs.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; self.values.len()],
                |buf, i| {
                    qs.anchor_distances_into(self.anchors, i, buf)?;
                    self.mcshane_min(buf)
                },
            )
            .collect()
    }
}
