//! Brute-force searches used to cross-check the constructions.

mod cover;
mod lattice;
mod weak;

pub use cover::{exact_cover_solve, CoverMode, CoverOutcome, CoverProblem};
pub use lattice::{direct_lattice_partition, LatticeSearch};
pub use weak::{weak_partition_search, Finding, WeakFindings};
