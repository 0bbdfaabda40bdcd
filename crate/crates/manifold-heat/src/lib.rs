//! Spectral geometry toolkit pairing closed-form model manifolds (circles,
//! flat tori, the round sphere, hyperbolic spaces) with the discrete
//! graph-Laplacian pipeline (Gaussian weight graphs, eigenmaps, diffusion
//! maps), so every discrete computation can be validated against exact
//! analytic values.
//!
//! The analytic side exposes geodesic distances, explicit spectra, heat
//! kernels through several independent representations, distance recovery
//! from small-time kernel asymptotics, and eigenfunction embeddings with
//! their pullback metrics. The discrete side builds neighborhood graphs
//! from point clouds, assembles the standard Laplacian variants, and runs
//! eigenmap / diffusion-map embeddings through a deterministic dense
//! eigensolver. `suites` wires both sides into named verification suites
//! used by the `mheat verify` command.

// Numeric kernels index matrices directly, reject NaN through negated
// comparisons, and pass eigenvalue blocks as range-literal slices.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::single_range_in_vec_init)]

pub mod eigenmaps;
pub mod embeddings;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod manifolds;
pub mod quad;
pub mod samplers;
pub mod suites;
pub mod truncation;
pub mod varadhan;

pub use error::{Error, Result};
pub use manifolds::{AnalyticManifold, EigenPair, KernelMethod, Point, Tangent};
