//! Built-in demonstration: a sign-aware multiply routine with eight mutants
//! whose killing inputs are known in closed form as regions of the
//! `(a, b)` input plane. Four representative tests, one per region corner,
//! produce a small matrix exercising every analysis stage: equivalent
//! mutants, mutually subsuming groups, and a three-node graph with a single
//! subsuming group.

use crate::matrix::{KillMatrix, MutantRecord, TestRecord};

/// A set of integers that kill a mutant for one input variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeSpec {
    /// No value kills.
    Empty,
    /// Every value except zero kills.
    NonZero,
    /// Strictly negative values kill.
    Negative,
    /// Every value kills.
    All,
}

impl RangeSpec {
    pub fn contains(self, value: i64) -> bool {
        match self {
            RangeSpec::Empty => false,
            RangeSpec::NonZero => value != 0,
            RangeSpec::Negative => value < 0,
            RangeSpec::All => true,
        }
    }
}

/// Killing region of one demo mutant: a test `(a, b)` kills the mutant iff
/// `a` falls in the first range and `b` in the second.
#[derive(Debug, Clone, Copy)]
pub struct KillRegion {
    pub a: RangeSpec,
    pub b: RangeSpec,
}

impl KillRegion {
    pub fn kills(&self, a: i64, b: i64) -> bool {
        self.a.contains(a) && self.b.contains(b)
    }
}

/// The eight demo mutants' killing regions, indexed by mutant id. Mutants
/// 0 and 7 cannot be killed (their regions are empty) and are annotated
/// equivalent.
pub fn kill_regions() -> [KillRegion; 8] {
    use RangeSpec::*;
    [
        KillRegion { a: Empty, b: Empty },       // 0: equivalent
        KillRegion { a: NonZero, b: Negative },  // 1
        KillRegion { a: NonZero, b: NonZero },   // 2
        KillRegion { a: NonZero, b: NonZero },   // 3
        KillRegion { a: NonZero, b: Negative },  // 4
        KillRegion { a: NonZero, b: All },       // 5
        KillRegion { a: NonZero, b: NonZero },   // 6
        KillRegion { a: Empty, b: Empty },       // 7: equivalent
    ]
}

/// The four demo tests: one input from each distinct corner of the kill
/// regions. `(1, -1)` exercises the negative-b regions, `(1, 1)` the
/// both-positive ones, `(1, 0)` the b-irrelevant one, and `(0, -1)` kills
/// nothing.
pub fn demo_tests() -> Vec<(u64, i64, i64)> {
    vec![(1, 1, -1), (2, 1, 1), (3, 1, 0), (4, 0, -1)]
}

/// Build the demo kill matrix by evaluating every region against every test.
pub fn demo_matrix() -> KillMatrix {
    let regions = kill_regions();
    let tests = demo_tests();
    let test_records: Vec<TestRecord> = tests
        .iter()
        .map(|&(id, _, _)| TestRecord {
            id,
            name: format!("t{id}"),
        })
        .collect();
    let mutants: Vec<MutantRecord> = regions
        .iter()
        .enumerate()
        .map(|(idx, region)| MutantRecord {
            id: idx as u64,
            source_path: "multiply.mlang".to_string(),
            mutant_path: format!("M{idx}"),
            line_number: 1,
            operator_tag: "REGION".to_string(),
            equivalence_annotation: if region.a == RangeSpec::Empty {
                Some(true)
            } else {
                None
            },
        })
        .collect();
    let cells: Vec<Vec<bool>> = regions
        .iter()
        .map(|region| tests.iter().map(|&(_, a, b)| region.kills(a, b)).collect())
        .collect();
    KillMatrix::new(mutants, test_records, cells).expect("demo matrix is well formed by construction")
}
