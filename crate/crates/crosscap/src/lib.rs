//! Bounds for the non-orientable 4-genus of small knots.
//!
//! The non-orientable 4-genus (or 4-dimensional crosscap number) of a knot
//! is the smallest first Betti number of a non-orientable surface smoothly
//! and properly embedded in the 4-ball with the knot as boundary. This
//! crate determines it for the knots in the shipped tables by combining:
//!
//! - a congruence on the knot signature and Arf invariant that rules out
//!   low-genus surfaces outright ([`gamma4::congruence_class`]),
//! - obstructions from the diagonalizability of definite intersection
//!   forms: a definite Goeritz form of the knot, possibly extended by a
//!   rank-one summand, must embed in a diagonal unimodular lattice of a
//!   prescribed rank, and an exhaustive search can rule that out
//!   ([`embed::find_embedding`]),
//! - explicit non-oriented band moves and concordances, which propagate
//!   upper bounds through a graph of knots ([`gamma4::upper_bound`]).
//!
//! The [`forms`] module builds Goeritz matrices from checkerboard data,
//! [`brown`] classifies Z/4-quadratic refinements and computes the Brown
//! invariant used to justify the congruence bounds, and [`dataset`] loads
//! the vendored knot tables and renders reports.
//!
//! Each capability has a runnable example under `examples/`; start with
//! `full_table`, which reproduces the whole genus table in well under a
//! second.

pub mod brown;
pub mod dataset;
pub mod embed;
pub mod forms;
pub mod gamma4;
