//! Exact and numerical tools for counting copies of a small graph in
//! quasi-stars, quasi-cliques and the three-class hosts between them.
//!
//! - [`graph`]: small labelled graphs, parsers, invariants, enumeration.
//! - [`weighting`]: half-integral fractional independence weightings and
//!   the `(r, y, b)` spectrum that drives every density formula.
//! - [`density`]: homomorphism densities, optimisation over the host
//!   parameter, crossovers and small-density exponents.
//! - [`lp`]: the vertex-weight linear program and its dual, solved exactly.
//! - [`oracle`]: explicit finite hosts and brute-force counting.
//! - [`classify`]: type classification, sweeps and exhaustive searches.

pub mod classify;
pub mod density;
pub mod error;
pub mod graph;
pub mod lp;
pub mod numeric;
pub mod oracle;
pub mod weighting;

pub use error::{Error, Result};
pub use graph::Graph;
pub use weighting::WeightingSpectrum;
