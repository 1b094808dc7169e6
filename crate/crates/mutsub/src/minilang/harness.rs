//! Mutation harness: runs a test suite against the base program and every
//! mutant, and assembles the resulting kill matrix.
//!
//! A test is an input binding plus the outcome the base program produced
//! for it. A mutant fails a test when its outcome differs from the base
//! outcome in any way — a different value, a different runtime error, or
//! exhausting the step budget all count.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use super::ast::Program;
use super::interp::{execute, ExecutionOutcome, InvocationError};
use super::mutate::{apply_edit, GeneratedMutant};
use crate::matrix::{KillMatrix, MatrixError, MutantRecord, TestRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessTest {
    pub id: u64,
    pub name: String,
    pub inputs: BTreeMap<String, i64>,
    /// Outcome of the unmutated program, recorded before any mutant runs.
    pub expected: ExecutionOutcome,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("test {name}: {source}")]
    BadInputs {
        name: String,
        #[source]
        source: InvocationError,
    },
    #[error("{path}:{line}: {message}")]
    SuiteFormat {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One parsed suite line: the test id and its input bindings.
pub type SuiteRow = (u64, BTreeMap<String, i64>);

/// Parse a test-suite file. Each non-blank line is
/// `<id>,<name=value;...>`, e.g. `3,a=10;b=-2`. The binding list may be
/// empty for a nullary entry function. Test names are `t<id>`.
pub fn parse_test_suite(path: &Path, text: &str) -> Result<Vec<SuiteRow>, HarnessError> {
    let label = path.display().to_string();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (id_field, bindings_field) = line.split_once(',').ok_or_else(|| HarnessError::SuiteFormat {
            path: label.clone(),
            line: line_no,
            message: "expected \"<id>,<name=value;...>\"".into(),
        })?;
        let id: u64 = id_field.trim().parse().map_err(|_| HarnessError::SuiteFormat {
            path: label.clone(),
            line: line_no,
            message: format!("invalid test id {id_field:?}"),
        })?;
        if !seen.insert(id) {
            return Err(HarnessError::SuiteFormat {
                path: label.clone(),
                line: line_no,
                message: format!("duplicate test id {id}"),
            });
        }
        let mut inputs = BTreeMap::new();
        for binding in bindings_field.split(';') {
            let binding = binding.trim();
            if binding.is_empty() {
                continue;
            }
            let (name, value) = binding.split_once('=').ok_or_else(|| HarnessError::SuiteFormat {
                path: label.clone(),
                line: line_no,
                message: format!("binding {binding:?} is not \"name=value\""),
            })?;
            let value: i64 = value.trim().parse().map_err(|_| HarnessError::SuiteFormat {
                path: label.clone(),
                line: line_no,
                message: format!("invalid integer {value:?} for {name:?}"),
            })?;
            if inputs.insert(name.trim().to_string(), value).is_some() {
                return Err(HarnessError::SuiteFormat {
                    path: label.clone(),
                    line: line_no,
                    message: format!("duplicate binding for {:?}", name.trim()),
                });
            }
        }
        rows.push((id, inputs));
    }
    Ok(rows)
}

/// Run every input against the base program, recording the outcome each
/// test expects. Fails when a test's bindings do not match the entry
/// function's parameters.
pub fn record_tests(
    program: &Program,
    rows: Vec<SuiteRow>,
    step_limit: u64,
) -> Result<Vec<HarnessTest>, HarnessError> {
    rows.into_iter()
        .map(|(id, inputs)| {
            let name = format!("t{id}");
            let expected = execute(program, &inputs, step_limit)
                .map_err(|source| HarnessError::BadInputs {
                    name: name.clone(),
                    source,
                })?;
            Ok(HarnessTest {
                id,
                name,
                inputs,
                expected,
            })
        })
        .collect()
}

/// Execute every mutant against every test and assemble the kill matrix.
/// Rows keep the mutants' generated order; mutant metadata records where
/// each mutant would be written (`mutants/mutant_<id>.mlang`).
pub fn run_kill_matrix(
    program: &Program,
    mutants: &[GeneratedMutant],
    tests: &[HarnessTest],
    step_limit: u64,
    source_path: &str,
) -> Result<KillMatrix, HarnessError> {
    let cells: Vec<Vec<bool>> = mutants
        .par_iter()
        .map(|mutant| {
            let mutated = apply_edit(program, &mutant.edit);
            tests
                .iter()
                .map(|test| {
                    // Inputs were validated against the entry signature when
                    // the base outcomes were recorded; mutation never changes
                    // the signature.
                    let outcome = execute(&mutated, &test.inputs, step_limit)
                        .expect("mutant has the same entry signature as the base program");
                    outcome != test.expected
                })
                .collect()
        })
        .collect();
    let records: Vec<MutantRecord> = mutants
        .iter()
        .map(|m| MutantRecord {
            id: m.id,
            source_path: source_path.to_string(),
            mutant_path: format!("mutants/mutant_{}.mlang", m.id),
            line_number: m.line,
            operator_tag: m.operator.tag().to_string(),
            equivalence_annotation: None,
        })
        .collect();
    let test_records: Vec<TestRecord> = tests
        .iter()
        .map(|t| TestRecord {
            id: t.id,
            name: t.name.clone(),
        })
        .collect();
    Ok(KillMatrix::new(records, test_records, cells)?)
}
