//! A deliberately small imperative language — 64-bit integers, assignment,
//! `if`/`while`/`break`/`return` — together with a mutation harness that
//! generates first-order mutants, runs a test suite against each, and emits
//! a kill matrix for the analyses in the rest of the crate.

pub mod ast;
pub mod demo;
pub mod harness;
pub mod interp;
pub mod lexer;
pub mod mutate;
pub mod parser;
pub mod printer;
