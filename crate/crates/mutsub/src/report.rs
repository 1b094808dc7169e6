//! Human- and machine-readable outputs: the per-mutant report CSV, the
//! subsumption graph in DOT form, and the one-screen summary.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::matrix::{KillMatrix, MutantId};
use crate::subsumption::{filter_redundant, Dmsg, GroupId};

/// One report line per mutant. The subsumption columns list the *other*
/// mutants related to this one under the full (unreduced) relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub mutant_id: MutantId,
    pub mutant_path: String,
    pub source_path: String,
    pub line_number: u32,
    /// Member of a subsuming (minimal) group.
    pub is_subsuming: bool,
    /// How many tests kill this mutant.
    pub failed_tests: usize,
    /// Strictly subsumed mutants: killed by every test that kills this one,
    /// plus at least one more.
    pub subsumes: Vec<MutantId>,
    /// Mutants that strictly subsume this one.
    pub subsumed_by: Vec<MutantId>,
    /// Other members of this mutant's group (identical kill sets).
    pub mutually_subsuming: Vec<MutantId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("group {0} contains mutant {1} which is not in the matrix")]
    UnknownGroupMember(GroupId, MutantId),
    #[error("mutant {1} appears in more than one group (group {0})")]
    DuplicateMember(GroupId, MutantId),
    #[error("group {0}'s kill set does not match the matrix killers of mutant {1}")]
    KillSetMismatch(GroupId, MutantId),
    #[error("killed mutant {0} is missing from the groups")]
    MissingKilledMutant(MutantId),
}

/// Cross-check a graph against the matrix it claims to describe, then build
/// one row per mutant (ascending id). The graph's groups must partition the
/// matrix's killed mutants with matching kill sets.
pub fn build_report(matrix: &KillMatrix, dmsg: &Dmsg) -> Result<Vec<ReportRow>, ReportError> {
    let mut group_of: BTreeMap<MutantId, GroupId> = BTreeMap::new();
    for group in &dmsg.groups {
        for &member in &group.members {
            let killers = matrix
                .killers(member)
                .map_err(|_| ReportError::UnknownGroupMember(group.id, member))?;
            if group_of.insert(member, group.id).is_some() {
                return Err(ReportError::DuplicateMember(group.id, member));
            }
            if killers != group.kill_set {
                return Err(ReportError::KillSetMismatch(group.id, member));
            }
        }
    }
    for mutant in matrix.mutants() {
        let killed = matrix
            .is_killed(mutant.id)
            .expect("mutant taken from the matrix itself");
        if killed && !group_of.contains_key(&mutant.id) {
            return Err(ReportError::MissingKilledMutant(mutant.id));
        }
    }

    let by_id: BTreeMap<GroupId, &crate::subsumption::SubsumptionGroup> =
        dmsg.groups.iter().map(|g| (g.id, g)).collect();
    let mut rows: Vec<ReportRow> = matrix
        .mutants()
        .iter()
        .map(|mutant| {
            let mut row = ReportRow {
                mutant_id: mutant.id,
                mutant_path: mutant.mutant_path.clone(),
                source_path: mutant.source_path.clone(),
                line_number: mutant.line_number,
                is_subsuming: false,
                failed_tests: matrix
                    .killers(mutant.id)
                    .expect("mutant taken from the matrix itself")
                    .len(),
                subsumes: Vec::new(),
                subsumed_by: Vec::new(),
                mutually_subsuming: Vec::new(),
            };
            if let Some(&gid) = group_of.get(&mutant.id) {
                let group = by_id[&gid];
                row.is_subsuming = group.is_subsuming;
                row.mutually_subsuming = group
                    .members
                    .iter()
                    .copied()
                    .filter(|&m| m != mutant.id)
                    .collect();
                for other in &dmsg.groups {
                    if other.id == gid {
                        continue;
                    }
                    if group.kill_set.is_strict_subset(&other.kill_set) {
                        row.subsumes.extend(other.members.iter().copied());
                    } else if other.kill_set.is_strict_subset(&group.kill_set) {
                        row.subsumed_by.extend(other.members.iter().copied());
                    }
                }
                row.subsumes.sort_unstable();
                row.subsumed_by.sort_unstable();
            }
            row
        })
        .collect();
    rows.sort_by_key(|r| r.mutant_id);
    Ok(rows)
}

fn join_ids(ids: &[MutantId]) -> String {
    ids.iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

/// Report CSV: fixed header, one row per mutant, id lists `|`-separated in
/// ascending order, empty when there are no related mutants.
pub fn render_report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "mutant_id,mutant_path,source_path,line_number,is_subsuming,failed_tests,subsumes,subsumed_by,mutually_subsuming\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.mutant_id,
            row.mutant_path,
            row.source_path,
            row.line_number,
            row.is_subsuming,
            row.failed_tests,
            join_ids(&row.subsumes),
            join_ids(&row.subsumed_by),
            join_ids(&row.mutually_subsuming),
        ));
    }
    out
}

/// DOT rendering of the graph. Nodes are groups labeled by their members;
/// subsuming groups are double-circled. Edges are the transitive reduction,
/// so paths — not single edges — encode the full relation (the report CSV
/// lists it in full).
pub fn render_dmsg_dot(dmsg: &Dmsg) -> String {
    let mut out = String::from(
        "// Subsumption graph: an edge means every test killing the source\n\
         // group also kills the target group. Double circles mark subsuming\n\
         // (minimal) groups. Edges implied by longer paths are omitted; the\n\
         // report CSV carries the full relation.\n\
         digraph dmsg {\n",
    );
    for group in &dmsg.groups {
        let label = group
            .members
            .iter()
            .map(|id| format!("M{id}"))
            .collect::<Vec<_>>()
            .join(",");
        let shape = if group.is_subsuming {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&format!(
            "  g{} [label=\"{}\", shape={}];\n",
            group.id, label, shape
        ));
    }
    for (from, to) in &dmsg.edges {
        out.push_str(&format!("  g{from} -> g{to};\n"));
    }
    out.push_str("}\n");
    out
}

/// Counters and coverage at a glance. `raw` counts every mutant; the
/// non-equivalent figure drops annotated-equivalent mutants from both sides
/// of the division and reads `n/a` when no mutant remains.
pub fn render_summary(matrix: &KillMatrix, dmsg: &Dmsg) -> String {
    let total = matrix.mutants().len();
    let killed = matrix.killed_count();
    let subsuming: BTreeSet<GroupId> = dmsg
        .groups
        .iter()
        .filter(|g| g.is_subsuming)
        .map(|g| g.id)
        .collect();
    let retained = filter_redundant(dmsg).len();
    let raw = match matrix.raw_coverage() {
        Some(value) => format!("{value:.3}"),
        None => "n/a".to_string(),
    };
    let adjusted = match matrix.mutation_coverage() {
        Ok(value) => format!("{value:.3}"),
        Err(_) => "n/a".to_string(),
    };
    format!(
        "mutants: {total}\n\
         killed: {killed}\n\
         survived: {}\n\
         groups: {}\n\
         subsuming groups: {}\n\
         retained after filtering: {retained}\n\
         mutation coverage (raw): {raw}\n\
         mutation coverage (non-equivalent): {adjusted}\n",
        total - killed,
        dmsg.groups.len(),
        subsuming.len(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{MutantRecord, TestRecord};
    use crate::subsumption::{build_dmsg, group_mutants};

    fn matrix(rows: &[&[u8]]) -> KillMatrix {
        let tests = (0..rows.first().map_or(0, |r| r.len()))
            .map(|i| TestRecord {
                id: i as u64,
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

    fn report(row_cells: &[&[u8]]) -> Vec<ReportRow> {
        let m = matrix(row_cells);
        let dmsg = build_dmsg(group_mutants(&m)).unwrap();
        build_report(&m, &dmsg).unwrap()
    }

    #[test]
    fn rows_cover_all_mutants_ascending() {
        let rows = report(&[&[0, 0], &[1, 0], &[1, 1]]);
        let ids: Vec<MutantId> = rows.iter().map(|r| r.mutant_id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn survived_mutants_have_empty_columns() {
        let rows = report(&[&[0, 0], &[1, 0]]);
        let survivor = &rows[0];
        assert!(!survivor.is_subsuming);
        assert_eq!(survivor.failed_tests, 0);
        assert!(survivor.subsumes.is_empty());
        assert!(survivor.subsumed_by.is_empty());
        assert!(survivor.mutually_subsuming.is_empty());
    }

    #[test]
    fn subsumption_columns_use_full_relation() {
        // Chain of kill sets: {t0} < {t0,t1} < {t0,t1,t2}. The reduced graph
        // has no 0 -> 2 edge, but the report still lists 2 under mutant 0.
        let rows = report(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        assert_eq!(rows[0].subsumes, vec![1, 2]);
        assert_eq!(rows[2].subsumed_by, vec![0, 1]);
        assert!(rows[0].is_subsuming);
        assert!(!rows[2].is_subsuming);
    }

    #[test]
    fn mutual_subsumption_lists_group_peers() {
        let rows = report(&[&[1, 1], &[1, 1], &[1, 1]]);
        assert_eq!(rows[0].mutually_subsuming, vec![1, 2]);
        assert_eq!(rows[1].mutually_subsuming, vec![0, 2]);
        assert_eq!(rows[2].mutually_subsuming, vec![0, 1]);
    }

    #[test]
    fn csv_layout_is_stable() {
        let rows = report(&[&[1, 0], &[1, 1]]);
        let csv = render_report_csv(&rows);
        assert_eq!(
            csv,
            "mutant_id,mutant_path,source_path,line_number,is_subsuming,failed_tests,subsumes,subsumed_by,mutually_subsuming\n\
             0,,,1,true,1,1,,\n\
             1,,,1,false,2,,0,\n"
        );
    }

    #[test]
    fn dot_marks_subsuming_groups() {
        let m = matrix(&[&[1, 0], &[1, 1]]);
        let dmsg = build_dmsg(group_mutants(&m)).unwrap();
        let dot = render_dmsg_dot(&dmsg);
        assert!(dot.contains("g0 [label=\"M0\", shape=doublecircle];"), "{dot}");
        assert!(dot.contains("g1 [label=\"M1\", shape=circle];"), "{dot}");
        assert!(dot.contains("  g0 -> g1;\n"), "{dot}");
        assert!(dot.starts_with("//"), "{dot}");
        assert!(dot.ends_with("}\n"), "{dot}");
    }

    #[test]
    fn dot_text_reparses_to_the_graph_content() {
        // Diamond: {t0} and {t1} are incomparable, both below {t0,t1},
        // which is below {t0,t1,t2}.
        let m = matrix(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 1, 1]]);
        let dmsg = build_dmsg(group_mutants(&m)).unwrap();
        let dot = render_dmsg_dot(&dmsg);

        let mut nodes: BTreeMap<u32, (String, bool)> = BTreeMap::new();
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        for line in dot.lines() {
            let Some(rest) = line.trim().strip_prefix('g') else {
                continue;
            };
            if let Some((id, attrs)) = rest.split_once(" [label=\"") {
                let (label, tail) = attrs.split_once("\", shape=").unwrap();
                let doubled = tail.starts_with("doublecircle");
                assert!(doubled || tail.starts_with("circle"), "{line}");
                let previous = nodes.insert(id.parse().unwrap(), (label.to_string(), doubled));
                assert!(previous.is_none(), "node listed twice: {line}");
            } else {
                let (from, to) = rest.split_once(" -> g").unwrap();
                let inserted =
                    edges.insert((from.parse().unwrap(), to.trim_end_matches(';').parse().unwrap()));
                assert!(inserted, "edge listed twice: {line}");
            }
        }

        assert_eq!(nodes.len(), dmsg.groups.len());
        for group in &dmsg.groups {
            let expected_label = group
                .members
                .iter()
                .map(|m| format!("M{m}"))
                .collect::<Vec<_>>()
                .join(",");
            assert_eq!(nodes[&group.id], (expected_label, group.is_subsuming));
        }
        assert_eq!(edges, dmsg.edges);
    }

    #[test]
    fn empty_graph_renders_without_nodes() {
        let dmsg = build_dmsg(Vec::new()).unwrap();
        let dot = render_dmsg_dot(&dmsg);
        assert!(dot.ends_with("digraph dmsg {\n}\n"), "{dot}");
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(
            render_report_csv(&[]),
            "mutant_id,mutant_path,source_path,line_number,is_subsuming,failed_tests,subsumes,subsumed_by,mutually_subsuming\n"
        );
    }

    #[test]
    fn report_rejects_mismatched_graph() {
        let m = matrix(&[&[1, 0], &[1, 1]]);
        let other = matrix(&[&[1, 1], &[1, 1]]);
        let dmsg = build_dmsg(group_mutants(&other)).unwrap();
        let err = build_report(&m, &dmsg).unwrap_err();
        assert!(matches!(
            err,
            ReportError::KillSetMismatch(..) | ReportError::MissingKilledMutant(..)
        ));
    }

    #[test]
    fn report_rejects_foreign_members() {
        let m = matrix(&[&[1]]);
        let bigger = matrix(&[&[1], &[1]]);
        let dmsg = build_dmsg(group_mutants(&bigger)).unwrap();
        let err = build_report(&m, &dmsg).unwrap_err();
        assert_eq!(err, ReportError::UnknownGroupMember(0, 1));
    }

    #[test]
    fn summary_counts_and_coverage() {
        let m = matrix(&[&[1, 0], &[1, 0], &[1, 1], &[0, 0]]);
        let dmsg = build_dmsg(group_mutants(&m)).unwrap();
        let summary = render_summary(&m, &dmsg);
        assert_eq!(
            summary,
            "mutants: 4\n\
             killed: 3\n\
             survived: 1\n\
             groups: 2\n\
             subsuming groups: 1\n\
             retained after filtering: 1\n\
             mutation coverage (raw): 0.750\n\
             mutation coverage (non-equivalent): 0.750\n"
        );
    }

    #[test]
    fn summary_reports_na_when_coverage_undefined() {
        let mut mutants: Vec<MutantRecord> = (0..2).map(MutantRecord::bare).collect();
        for m in &mut mutants {
            m.equivalence_annotation = Some(true);
        }
        let tests = vec![TestRecord {
            id: 0,
            name: "t0".into(),
        }];
        let m = KillMatrix::new(mutants, tests, vec![vec![false], vec![false]]).unwrap();
        let dmsg = build_dmsg(group_mutants(&m)).unwrap();
        let summary = render_summary(&m, &dmsg);
        assert!(summary.contains("mutation coverage (non-equivalent): n/a\n"), "{summary}");
        assert!(summary.contains("mutation coverage (raw): 0.000\n"), "{summary}");
    }
}
