//! Mutation-analysis toolkit built around the kill matrix: which tests kill
//! which mutants. On top of that single table the crate computes dynamic
//! subsumption between mutants, groups mutually subsuming mutants into a
//! transitively reduced graph, identifies the subsuming (minimal) groups,
//! and filters each group down to one representative — exposing how much of
//! a mutant population is redundant and how much of the apparent mutation
//! coverage it inflates.
//!
//! Matrices come from three places: a CSV file (with an optional sidecar
//! manifest of mutant metadata), a directory of per-mutant test results, or
//! the built-in mini-language harness, which parses a small imperative
//! program, generates first-order mutants, and executes a test suite
//! against each under a step budget.

pub mod cli;
pub mod ingest;
pub mod matrix;
pub mod minilang;
pub mod report;
pub mod subsumption;
