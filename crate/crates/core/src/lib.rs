//! Generalized cofactor expansion of Boolean functions and the CNF
//! decomposition it induces.
//!
//! The crate is split into five layers:
//!
//! - [`boolfn`]: dense truth tables, cofactor intervals, expansions over
//!   arbitrary base sets and the consistency tests for `f = 1`.
//! - [`cnf`]: clauses, formulas, DIMACS I/O, clause SAT sets and the
//!   partial assignments they induce, and substitution.
//! - [`decompose`]: clause-pivot and variable-partition decomposition into
//!   self-contained [`decompose::WorkItem`]s, plus the cost estimate.
//! - [`allsat`]: the leaf enumerator and the gather/patch step.
//! - [`cli`]: the command-line pipeline with parallel leaf solving.

pub mod allsat;
pub mod boolfn;
pub mod cli;
pub mod cnf;
pub mod decompose;
mod error;

pub use error::{Error, Result};
