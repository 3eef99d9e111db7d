//! Exact-arithmetic linear programming bounds for communication and query
//! complexity of small explicit functions and relations.
//!
//! Everything here is computed over arbitrary-precision rationals: LP solves
//! terminate with verified strong-duality certificates, witness checks are
//! exact with zero tolerance, and reported values are fractions, never
//! floating-point approximations.
//!
//! The main entry points are:
//!
//! - [`comm::compute_comm_bound`]: build and solve the partition, rectangle,
//!   smooth rectangle, discrepancy and smooth discrepancy LPs for a two-party
//!   function or relation given as a matrix.
//! - [`query::compute_query_bound`]: the analogous LPs over assignments
//!   (subcubes) for query complexity.
//! - [`comm::lemmas`] and the witness constructors in [`instances`]: explicit
//!   dual/primal witnesses (fooling sets, block-sensitivity duals, the tribes
//!   dual, the list-non-equality primal) together with exact verification.
//! - [`oracle`]: small brute-force baselines (deterministic communication,
//!   decision-tree depth, matrix rank over the rationals) used to cross-check
//!   the LP route.

pub mod bound;
pub mod comm;
pub mod error;
pub mod instances;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod query;
pub mod rat;
pub mod textio;

pub use error::{Error, Result};
pub use rat::Rat;
