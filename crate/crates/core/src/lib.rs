//! Exact Floquet and periodic spectral invariants of discrete Schrödinger
//! operators `H = A + Q` on periodic graphs.
//!
//! A periodic graph is represented by its finite fundamental graph whose
//! oriented edges carry integer index vectors. Adding a zero-index loop at
//! every vertex gives the modified fundamental graph; prime cycles of that
//! graph which use at least one added loop produce the invariants
//!
//! ```text
//! I_n^m(Q) = sum_{r, c : r|c| = n, r tau(c) = m} (1/r) w(c, Q)^r
//! ```
//!
//! as exact polynomials in the potential values. The [`floquet`] module is
//! an independent numeric oracle built on traces of powers of the Floquet
//! matrices `H(k)`.

pub mod builtins;
pub mod closed_form;
pub mod cycles;
pub mod error;
pub mod floquet;
pub mod graph;
pub mod invariants;
pub mod isospectral;
pub mod lattice;
pub mod poly;
pub mod potential;

#[doc(hidden)]
pub mod cli;

pub use builtins::Builtin;
pub use error::{Error, Result};
pub use graph::{FundamentalGraph, ModifiedGraph, OrientedEdge};
pub use invariants::{InvariantTable, Limits};
pub use poly::PotentialPolynomial;
pub use potential::{CRational, Potential};

/// Default cap on closed-path and cycle lengths.
pub const DEFAULT_LENGTH_CAP: usize = 12;
