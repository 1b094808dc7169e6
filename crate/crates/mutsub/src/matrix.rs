//! The shared data model: mutants, tests, and the boolean kill matrix that
//! every analysis in this crate consumes.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// External mutant identifier. Preserved verbatim from the input; the matrix
/// keeps its own dense row indices internally.
pub type MutantId = u64;
/// External test identifier.
pub type TestId = u64;

/// Identity and metadata of a single mutant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantRecord {
    pub id: MutantId,
    pub source_path: String,
    pub mutant_path: String,
    /// 1-based line of the mutated statement.
    pub line_number: u32,
    pub operator_tag: String,
    /// Externally asserted equivalence. `None` means "not annotated", which
    /// is distinct from `Some(false)`.
    pub equivalence_annotation: Option<bool>,
}

impl MutantRecord {
    /// Record with empty metadata, for matrices loaded without a manifest.
    pub fn bare(id: MutantId) -> Self {
        MutantRecord {
            id,
            source_path: String::new(),
            mutant_path: String::new(),
            line_number: 1,
            operator_tag: String::new(),
            equivalence_annotation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestRecord {
    pub id: TestId,
    pub name: String,
}

/// The set of tests that kill a given mutant, by test id.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct KillSet(BTreeSet<TestId>);

impl KillSet {
    pub fn new() -> Self {
        KillSet(BTreeSet::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, test: TestId) -> bool {
        self.0.contains(&test)
    }

    pub fn insert(&mut self, test: TestId) {
        self.0.insert(test);
    }

    pub fn is_subset(&self, other: &KillSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Subset and not equal.
    pub fn is_strict_subset(&self, other: &KillSet) -> bool {
        self.0.len() < other.0.len() && self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = TestId> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<TestId> for KillSet {
    fn from_iter<I: IntoIterator<Item = TestId>>(iter: I) -> Self {
        KillSet(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("cell table is {rows} rows x {cols} columns, expected {mutants} x {tests}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        mutants: usize,
        tests: usize,
    },
    #[error("duplicate mutant id {0}")]
    DuplicateMutantId(MutantId),
    #[error("duplicate test id {0}")]
    DuplicateTestId(TestId),
    #[error("duplicate test name {0:?}")]
    DuplicateTestName(String),
    #[error("mutant {0} has line number 0 (must be >= 1)")]
    ZeroLineNumber(MutantId),
    #[error("unknown mutant id {0}")]
    UnknownMutant(MutantId),
    #[error("mutation coverage is undefined: no mutant is free of an equivalence annotation")]
    UndefinedCoverage,
}

/// Boolean mutant x test outcome table. `cells[m][t]` is true when test `t`
/// kills mutant `m`. Immutable after construction; killed/survived status is
/// always derived from the cells, never stored.
#[derive(Debug, Clone)]
pub struct KillMatrix {
    mutants: Vec<MutantRecord>,
    tests: Vec<TestRecord>,
    cells: Vec<Vec<bool>>,
    row_index: HashMap<MutantId, usize>,
}

impl PartialEq for KillMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mutants == other.mutants && self.tests == other.tests && self.cells == other.cells
    }
}

impl Eq for KillMatrix {}

impl KillMatrix {
    /// Validates dimensions, id uniqueness, test-name uniqueness, and line
    /// numbers. Row and column order is preserved as given.
    pub fn new(
        mutants: Vec<MutantRecord>,
        tests: Vec<TestRecord>,
        cells: Vec<Vec<bool>>,
    ) -> Result<Self, MatrixError> {
        if cells.len() != mutants.len() || cells.iter().any(|row| row.len() != tests.len()) {
            return Err(MatrixError::DimensionMismatch {
                rows: cells.len(),
                cols: cells.first().map_or(tests.len(), Vec::len),
                mutants: mutants.len(),
                tests: tests.len(),
            });
        }
        let mut row_index = HashMap::with_capacity(mutants.len());
        for (idx, mutant) in mutants.iter().enumerate() {
            if row_index.insert(mutant.id, idx).is_some() {
                return Err(MatrixError::DuplicateMutantId(mutant.id));
            }
            if mutant.line_number == 0 {
                return Err(MatrixError::ZeroLineNumber(mutant.id));
            }
        }
        let mut test_ids = BTreeSet::new();
        let mut test_names = BTreeSet::new();
        for test in &tests {
            if !test_ids.insert(test.id) {
                return Err(MatrixError::DuplicateTestId(test.id));
            }
            if !test_names.insert(test.name.as_str()) {
                return Err(MatrixError::DuplicateTestName(test.name.clone()));
            }
        }
        Ok(KillMatrix {
            mutants,
            tests,
            cells,
            row_index,
        })
    }

    pub fn mutants(&self) -> &[MutantRecord] {
        &self.mutants
    }

    pub fn tests(&self) -> &[TestRecord] {
        &self.tests
    }

    pub fn cells(&self) -> &[Vec<bool>] {
        &self.cells
    }

    pub fn mutant(&self, id: MutantId) -> Result<&MutantRecord, MatrixError> {
        self.row_of(id).map(|idx| &self.mutants[idx])
    }

    /// Row index for an external mutant id.
    pub fn row_of(&self, id: MutantId) -> Result<usize, MatrixError> {
        self.row_index
            .get(&id)
            .copied()
            .ok_or(MatrixError::UnknownMutant(id))
    }

    pub fn row(&self, id: MutantId) -> Result<&[bool], MatrixError> {
        self.row_of(id).map(|idx| self.cells[idx].as_slice())
    }

    /// Every test that kills the given mutant.
    pub fn killers(&self, id: MutantId) -> Result<KillSet, MatrixError> {
        let row = self.row(id)?;
        Ok(self
            .tests
            .iter()
            .zip(row)
            .filter(|(_, &killed)| killed)
            .map(|(test, _)| test.id)
            .collect())
    }

    /// A mutant is killed iff at least one cell in its row is true.
    pub fn is_killed(&self, id: MutantId) -> Result<bool, MatrixError> {
        Ok(self.row(id)?.iter().any(|&c| c))
    }

    pub fn killed_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|row| row.iter().any(|&c| c))
            .count()
    }

    /// Killed mutants over all mutants, with no equivalence accounting.
    /// `None` for an empty matrix.
    pub fn raw_coverage(&self) -> Option<f64> {
        if self.mutants.is_empty() {
            None
        } else {
            Some(self.killed_count() as f64 / self.mutants.len() as f64)
        }
    }

    /// Killed mutants over non-equivalent mutants. Mutants annotated
    /// equivalent are excluded from both numerator and denominator; fails
    /// when that leaves an empty denominator.
    pub fn mutation_coverage(&self) -> Result<f64, MatrixError> {
        let mut killed = 0usize;
        let mut considered = 0usize;
        for (mutant, row) in self.mutants.iter().zip(&self.cells) {
            if mutant.equivalence_annotation == Some(true) {
                continue;
            }
            considered += 1;
            if row.iter().any(|&c| c) {
                killed += 1;
            }
        }
        if considered == 0 {
            return Err(MatrixError::UndefinedCoverage);
        }
        Ok(killed as f64 / considered as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[u8]]) -> KillMatrix {
        let tests = (0..rows.first().map_or(0, |r| r.len()))
            .map(|i| TestRecord {
                id: i as TestId,
                name: format!("t{i}"),
            })
            .collect();
        let mutants = (0..rows.len())
            .map(|i| MutantRecord::bare(i as MutantId))
            .collect();
        let cells = rows
            .iter()
            .map(|row| row.iter().map(|&c| c != 0).collect())
            .collect();
        KillMatrix::new(mutants, tests, cells).unwrap()
    }

    #[test]
    fn killers_reads_the_row() {
        let m = matrix(&[&[1, 0], &[0, 0], &[1, 1]]);
        assert_eq!(m.killers(0).unwrap(), KillSet::from_iter([0]));
        assert_eq!(m.killers(1).unwrap(), KillSet::new());
        assert_eq!(m.killers(2).unwrap(), KillSet::from_iter([0, 1]));
    }

    #[test]
    fn killers_unknown_mutant() {
        let m = matrix(&[&[1, 0]]);
        assert_eq!(m.killers(9), Err(MatrixError::UnknownMutant(9)));
    }

    #[test]
    fn killers_with_no_tests_is_empty() {
        let m = KillMatrix::new(
            vec![MutantRecord::bare(0), MutantRecord::bare(1)],
            vec![],
            vec![vec![], vec![]],
        )
        .unwrap();
        assert_eq!(m.killers(0).unwrap(), KillSet::new());
        assert!(!m.is_killed(1).unwrap());
    }

    #[test]
    fn killed_iff_killers_nonempty() {
        let m = matrix(&[&[1, 0], &[0, 0], &[1, 1]]);
        for mutant in m.mutants() {
            assert_eq!(
                m.is_killed(mutant.id).unwrap(),
                !m.killers(mutant.id).unwrap().is_empty()
            );
        }
    }

    #[test]
    fn coverage_matches_killed_ratio() {
        // 160 mutants, 96 killed, no annotations.
        let rows: Vec<Vec<bool>> = (0..160).map(|i| vec![i < 96]).collect();
        let mutants = (0..160).map(MutantRecord::bare).collect();
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let m = KillMatrix::new(mutants, tests, rows).unwrap();
        assert!((m.mutation_coverage().unwrap() - 0.600).abs() < 1e-12);
    }

    #[test]
    fn coverage_zero_when_nothing_killed() {
        let rows = vec![vec![false]; 10];
        let mutants = (0..10).map(MutantRecord::bare).collect();
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let m = KillMatrix::new(mutants, tests, rows).unwrap();
        assert_eq!(m.mutation_coverage().unwrap(), 0.0);
    }

    #[test]
    fn coverage_excludes_annotated_equivalents() {
        let mut mutants: Vec<MutantRecord> = (0..4).map(MutantRecord::bare).collect();
        mutants[0].equivalence_annotation = Some(true);
        mutants[3].equivalence_annotation = Some(true);
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let cells = vec![vec![false], vec![true], vec![true], vec![false]];
        let m = KillMatrix::new(mutants, tests, cells).unwrap();
        assert_eq!(m.mutation_coverage().unwrap(), 1.0);
    }

    #[test]
    fn coverage_undefined_when_all_annotated() {
        let mut mutants: Vec<MutantRecord> = (0..2).map(MutantRecord::bare).collect();
        for m in &mut mutants {
            m.equivalence_annotation = Some(true);
        }
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let m = KillMatrix::new(mutants, tests, vec![vec![false], vec![false]]).unwrap();
        assert_eq!(m.mutation_coverage(), Err(MatrixError::UndefinedCoverage));
    }

    #[test]
    fn new_rejects_duplicate_mutant_id() {
        let mutants = vec![MutantRecord::bare(3), MutantRecord::bare(3)];
        let err = KillMatrix::new(mutants, vec![], vec![vec![], vec![]]).unwrap_err();
        assert_eq!(err, MatrixError::DuplicateMutantId(3));
    }

    #[test]
    fn new_rejects_duplicate_test_name() {
        let tests = vec![
            TestRecord {
                id: 0,
                name: "same".into(),
            },
            TestRecord {
                id: 1,
                name: "same".into(),
            },
        ];
        let err = KillMatrix::new(vec![], tests, vec![]).unwrap_err();
        assert_eq!(err, MatrixError::DuplicateTestName("same".into()));
    }

    #[test]
    fn new_rejects_ragged_cells() {
        let mutants = vec![MutantRecord::bare(0)];
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let err = KillMatrix::new(mutants, tests, vec![vec![true, false]]).unwrap_err();
        assert!(matches!(err, MatrixError::DimensionMismatch { .. }));
    }

    #[test]
    fn new_rejects_zero_line_number() {
        let mut record = MutantRecord::bare(0);
        record.line_number = 0;
        let err = KillMatrix::new(vec![record], vec![], vec![vec![]]).unwrap_err();
        assert_eq!(err, MatrixError::ZeroLineNumber(0));
    }
}
