//! Lipschitz extension of maps from a finite metric space into Euclidean
//! space.
//!
//! Given anchors `T` with values `f: T → ℝᵖ`, [`jl_ext::build`] constructs an
//! operator whose extension `F` agrees with `f` on `T` and is defined on any
//! superspace. [`jl_ext::certificate`] returns a computable bound on
//! `Lip(F)`, which grows like `sqrt(log n)·Lip(f)` in the number of anchors.
//!
//! Modules:
//! - [`metric`]: finite metrics and query sets.
//! - [`scalar_ext`]: scalar Lipschitz constants and McShane extensions.
//! - [`gauss`]: seeded Gaussian sampling, the embedding, max-of-squares
//!   and tail experiments.
//! - [`jl_ext`]: the extension operator and its certificate.
//! - [`analysis`]: empirical Lipschitz estimates, baseline, growth experiment.
//! - [`cli_io`]: file formats and the `lipext` command line.

pub mod analysis;
pub mod cli_io;
pub mod gauss;
pub mod jl_ext;
pub mod matrix;
pub mod metric;
pub mod scalar_ext;

pub use jl_ext::{AnchorSet, JLOperator, LipCertificate};
pub use matrix::RowMatrix;
pub use metric::{FiniteMetric, QuerySet};
