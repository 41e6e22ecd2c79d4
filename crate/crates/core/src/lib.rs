//! Dense tripartite lattice graphs in which every edge lies in a triangle
//! while no edge lies in many, plus the tooling to verify them.
//!
//! The pipeline is:
//!
//! 1. [`construct::build_preconstruction`] lays out `A = B = [r]^d` and
//!    `C = {0, ..., r+1}^d` and joins cross-part pairs whose squared
//!    distance falls in a fixed window.
//! 2. [`construct::sparsify_random`] or [`construct::sparsify_greedy`] keeps
//!    only a subset of `C`.
//! 3. [`construct::prune_uncovered`] deletes every edge that lies in no
//!    triangle.
//! 4. Optionally [`construct::blow_up`] replaces each vertex of `A` and `B`
//!    by `m` copies.
//!
//! [`analyze`] computes per-edge triangle statistics and checks the exact
//! algebraic identities behind the upper and lower triangle-count bounds,
//! [`oracle`] provides brute-force ground truth for small instances, and
//! [`verify`] bundles all hard checks into one suite.

pub mod analyze;
pub mod caps;
pub mod cli;
pub mod construct;
mod error;
pub mod graph;
pub mod lattice;
pub mod oracle;
pub mod verify;

pub use caps::Caps;
pub use error::{Error, Result};
pub use graph::{EdgeRef, Pair, Part, TripartiteGraph};
pub use lattice::{ConstructionParams, LatticePoint};

/// Version string embedded in every emitted report.
pub const TOOL_VERSION: &str = concat!("booksize ", env!("CARGO_PKG_VERSION"));
