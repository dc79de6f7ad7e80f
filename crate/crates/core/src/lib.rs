//! Flag curvature of homogeneous Finsler spaces `G/H` carrying a generalized
//! m-Kropina metric `F = α^{m+1}/β^m`, computed from Lie-algebra data at the
//! origin coset.
//!
//! The crate is organized bottom-up:
//!
//! - [`lie`]: structure constants, reductive decompositions, inner products
//! - [`metric`]: the norm, its profile and convexity checks
//! - [`tensor`]: fundamental and Cartan tensors with finite-difference oracles
//! - [`curvature`]: Riemannian curvature backends
//! - [`flag`]: flag curvature by the general definition and closed forms
//! - [`reductivity`]: natural-reductivity criteria and their equivalence report
//! - [`scenario`] / [`report`]: JSON scenarios in, CSV/JSON reports out
//!
//! Per-item loops (flags, samples, oracle checks) go through [`par`], which uses
//! rayon when the `parallel` feature is enabled.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature;
pub mod error;
pub mod flag;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod par;
pub mod reductivity;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod tensor;

pub use curvature::{BackendKind, CurvatureBackend, Geometry, Sigma};
pub use error::{Error, Result};
pub use flag::{Flag, FlagCurvatureReport, Method};
pub use lie::{Check, InnerProductPair, LieAlgebra, Part, ReductiveDecomposition};
pub use linalg::{Matrix, Vector};
pub use metric::MKropinaMetric;
pub use par::Execution;
pub use scenario::Scenario;
pub use tensor::TensorEvalContext;
