//! Shared helpers for the integration suites: an independent brute-force
//! implementation of the subsumption analyses (straight off the boolean
//! rows, no shared code with the library), plus seeded random generators.

#![allow(dead_code)] // each test target uses its own subset

use std::collections::BTreeSet;

use mutsub::matrix::{KillMatrix, MutantId, MutantRecord, TestRecord};
use rand::Rng;

/// Row index of every killed mutant: any true cell.
pub fn oracle_killed(cells: &[Vec<bool>]) -> Vec<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, row)| row.iter().any(|&c| c))
        .map(|(idx, _)| idx)
        .collect()
}

/// Row-level dynamic subsumption: `a` killed and every killer of `a` kills
/// `b` too.
pub fn oracle_subsumes(a: &[bool], b: &[bool]) -> bool {
    a.iter().any(|&c| c) && a.iter().zip(b).all(|(&ka, &kb)| !ka || kb)
}

fn strict_row_subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&ka, &kb)| !ka || kb) && a.iter().zip(b).any(|(&ka, &kb)| kb && !ka)
}

/// Partition killed rows by identical row content; groups ordered by their
/// smallest row index. Returns row-index sets.
pub fn oracle_groups(cells: &[Vec<bool>]) -> Vec<BTreeSet<usize>> {
    let killed = oracle_killed(cells);
    let mut groups: Vec<BTreeSet<usize>> = Vec::new();
    for &row in &killed {
        match groups
            .iter_mut()
            .find(|g| cells[*g.iter().next().unwrap()] == cells[row])
        {
            Some(group) => {
                group.insert(row);
            }
            None => {
                groups.push(BTreeSet::from([row]));
            }
        }
    }
    groups.sort_by_key(|g| *g.iter().next().unwrap());
    groups
}

/// Strict containment between groups, as (subsumer, subsumed) index pairs:
/// the subsumer's row is a strict subset of the subsumed's.
pub fn oracle_containment(cells: &[Vec<bool>], groups: &[BTreeSet<usize>]) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for (i, a) in groups.iter().enumerate() {
        let row_a = &cells[*a.iter().next().unwrap()];
        for (j, b) in groups.iter().enumerate() {
            if i == j {
                continue;
            }
            let row_b = &cells[*b.iter().next().unwrap()];
            if strict_row_subset(row_a, row_b) {
                edges.insert((i, j));
            }
        }
    }
    edges
}

/// Indices of groups with minimal rows (no other group's row strictly
/// contained in theirs).
pub fn oracle_subsuming(cells: &[Vec<bool>], groups: &[BTreeSet<usize>]) -> BTreeSet<usize> {
    let edges = oracle_containment(cells, groups);
    (0..groups.len())
        .filter(|&g| edges.iter().all(|&(_, to)| to != g))
        .collect()
}

/// One representative (smallest row index) per subsuming group.
pub fn oracle_filter(cells: &[Vec<bool>], groups: &[BTreeSet<usize>]) -> BTreeSet<usize> {
    oracle_subsuming(cells, groups)
        .into_iter()
        .map(|g| *groups[g].iter().next().unwrap())
        .collect()
}

/// Reachability closure of an edge set (Floyd–Warshall).
pub fn oracle_reachability(nodes: usize, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; nodes]; nodes];
    for &(u, v) in edges {
        reach[u][v] = true;
    }
    for k in 0..nodes {
        for i in 0..nodes {
            if reach[i][k] {
                let via = reach[k].clone();
                for (cell, step) in reach[i].iter_mut().zip(via) {
                    *cell = *cell || step;
                }
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                pairs.insert((i, j));
            }
        }
    }
    pairs
}

/// Random matrix with the given maximum dimensions. Cell density is drawn
/// per matrix so sparse and dense kill patterns both occur; a few mutants
/// get random equivalence annotations.
pub fn random_matrix(rng: &mut impl Rng, max_mutants: usize, max_tests: usize) -> KillMatrix {
    let mutant_count = rng.gen_range(1..=max_mutants);
    let test_count = rng.gen_range(0..=max_tests);
    let density: f64 = rng.gen_range(0.02..0.6);
    let mutants: Vec<MutantRecord> = (0..mutant_count)
        .map(|i| {
            let mut record = MutantRecord::bare(i as MutantId);
            if rng.gen_bool(0.1) {
                record.equivalence_annotation = Some(rng.gen_bool(0.5));
            }
            record
        })
        .collect();
    let tests: Vec<TestRecord> = (0..test_count)
        .map(|i| TestRecord {
            id: i as u64,
            name: format!("t{i}"),
        })
        .collect();
    let cells: Vec<Vec<bool>> = (0..mutant_count)
        .map(|_| (0..test_count).map(|_| rng.gen_bool(density)).collect())
        .collect();
    KillMatrix::new(mutants, tests, cells).expect("generated matrix is well formed")
}

/// Random family of distinct non-empty kill sets over `universe` tests.
pub fn random_kill_sets(rng: &mut impl Rng, max_sets: usize, universe: u64) -> Vec<BTreeSet<u64>> {
    let target = rng.gen_range(1..=max_sets);
    let mut family: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    for _ in 0..target * 3 {
        if family.len() >= target {
            break;
        }
        let density: f64 = rng.gen_range(0.1..0.9);
        let set: BTreeSet<u64> = (0..universe).filter(|_| rng.gen_bool(density)).collect();
        if !set.is_empty() {
            family.insert(set);
        }
    }
    family.into_iter().collect()
}
