//! Constructive tilings of Boolean lattices and product sets.
//!
//! The crate is split along the lines of the constructions it implements:
//!
//! - [`poset`]: finite posets, Boolean-lattice elements, embedding search and
//!   copy enumeration.
//! - [`weak`]: weight functions and the builders for `r`-partition and
//!   `(1 mod r)`-partition certificates of `B(n)`.
//! - [`engine`]: the product-system recursion over an abstract ground set `S`,
//!   emitting explicit tile certificates for regions of `S^n`.
//! - [`oracle`]: independent brute-force search (exact cover, weak-partition
//!   witnesses) used to cross-check everything above.
//! - [`artifact`]: the on-disk format shared by all of the above.
//!
//! Every builder returns data that can be re-verified without trusting the
//! builder; the verifiers live next to the types they check.

pub mod artifact;
pub mod budget;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod poset;
pub mod weak;

pub use budget::Budget;
pub use error::{Error, Result};
