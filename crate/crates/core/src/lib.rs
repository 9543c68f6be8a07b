//! Exact symbolic calculus on the free group and its crossed products.
//!
//! The crate is organised in layers:
//!
//! * [`freegroup`] — reduced words in `F_n` and their arithmetic;
//! * [`regset`] — regular subsets of `F_n` as canonical minimal DFAs
//!   (cylinders, pattern sets, boolean algebra, left translation);
//! * [`funcalc`] — integer/rational step functions with regular level
//!   sets, the mod-finite comparison mode, and refinement coordinates;
//! * [`xprod`] — finitely supported crossed-product elements with
//!   twisted convolution, adjoints and inner products;
//! * [`intlinalg`] — exact integer matrices: Hermite/Smith normal
//!   forms, kernels, solving, lattice intersection;
//! * [`ktheory`] — the induction map on K-class data for the two
//!   worked algebras, kernel and image computations, and replayable
//!   reduction certificates;
//! * [`paradox`] — paradoxical-decomposition certificates and the
//!   partial isometries they induce;
//! * [`dynamics`] — topological-freeness, minimality and amenability
//!   witnesses;
//! * [`sexpr`] — the s-expression grammar for sets and functions used
//!   by the CLI and test fixtures;
//! * [`report`] — the versioned JSON report schema.
//!
//! Everything is exact: values are big rationals, sets are automata,
//! and every claim that an operation emits can be replayed from its
//! serialized certificate.

pub mod dynamics;
pub mod freegroup;
pub mod funcalc;
pub mod intlinalg;
pub mod ktheory;
pub mod paradox;
pub mod regset;
pub mod report;
pub mod sexpr;
pub mod xprod;

pub use freegroup::{FreeGroup, Letter, Word};
pub use funcalc::StepFunction;
pub use regset::{Pattern, RegSet};
