//! Tensor products, exponential graphs and exact coloring tools, with
//! mechanical checks of the mapping constructions that bound χ(G × H).
//!
//! * [`graph`]: finite graphs with optional loops, distances, girth, file formats.
//! * [`products`]: tensor product, strong product with a clique, coloring lifts.
//! * [`chromatic`]: proper colorings, an exact DSATUR branch-and-bound solver,
//!   and the relabeling that makes a coloring of `E_c(Γ)` suited.
//! * [`fractional`]: exact fractional chromatic number via a rational simplex.
//! * [`exponential`]: the exponential graph `E_c(Γ)` as a lazy oracle or a
//!   materialized graph.
//! * [`verifier`]: robust classes, the clique `M`, the mapping `ν`, and the
//!   step-by-step claim report.
//! * [`cli`]: command implementations behind the `hedetniemi` binary.

pub mod chromatic;
pub mod cli;
pub mod error;
pub mod exponential;
pub mod fractional;
pub mod graph;
pub mod products;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{Graph, Guard, Length, VertexSet};
