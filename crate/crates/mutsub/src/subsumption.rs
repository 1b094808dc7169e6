//! Dynamic subsumption over a kill matrix: the pairwise relation, grouping
//! by identical kill sets, the reduced subsumption graph, and the
//! redundant-mutant filter.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::matrix::{KillMatrix, KillSet, MatrixError, MutantId};

/// Dense group identifier, assigned in ascending order of each group's
/// smallest member id.
pub type GroupId = u32;

/// A maximal set of mutants sharing one (non-empty) kill set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsumptionGroup {
    pub id: GroupId,
    pub members: BTreeSet<MutantId>,
    pub kill_set: KillSet,
    /// True when no other group's kill set is a strict subset of this one,
    /// i.e. the group is minimal in the containment order.
    pub is_subsuming: bool,
}

/// Subsumption graph: nodes are groups, edges point from subsumer to
/// subsumed and form the transitive reduction of strict kill-set
/// containment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dmsg {
    pub groups: Vec<SubsumptionGroup>,
    pub edges: BTreeSet<(GroupId, GroupId)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DmsgError {
    #[error("duplicate group id {0}")]
    DuplicateGroupId(GroupId),
    #[error("groups {0} and {1} have identical kill sets; they must be merged")]
    DuplicateKillSet(GroupId, GroupId),
    #[error("group {0} has an empty kill set; survived mutants do not form groups")]
    EmptyKillSet(GroupId),
    #[error("edge set contains a cycle")]
    CycleDetected,
}

/// Mutant `a` dynamically subsumes `b` iff `a` is killed and every test that
/// kills `a` also kills `b`. Reflexive for killed mutants; never true for
/// survived `a`.
pub fn dynamically_subsumes(
    matrix: &KillMatrix,
    a: MutantId,
    b: MutantId,
) -> Result<bool, MatrixError> {
    let ka = matrix.killers(a)?;
    let kb = matrix.killers(b)?;
    Ok(!ka.is_empty() && ka.is_subset(&kb))
}

/// Partition the killed mutants into groups by identical kill set. Survived
/// mutants are excluded entirely. Groups are ordered (and numbered) by their
/// smallest member id.
pub fn group_mutants(matrix: &KillMatrix) -> Vec<SubsumptionGroup> {
    let mut by_kill_set: BTreeMap<KillSet, BTreeSet<MutantId>> = BTreeMap::new();
    for mutant in matrix.mutants() {
        let killers = matrix
            .killers(mutant.id)
            .expect("mutant taken from the matrix itself");
        if killers.is_empty() {
            continue;
        }
        by_kill_set.entry(killers).or_default().insert(mutant.id);
    }
    let mut groups: Vec<(KillSet, BTreeSet<MutantId>)> = by_kill_set.into_iter().collect();
    groups.sort_by_key(|(_, members)| *members.iter().next().expect("groups are non-empty"));
    let groups: Vec<SubsumptionGroup> = groups
        .into_iter()
        .enumerate()
        .map(|(idx, (kill_set, members))| SubsumptionGroup {
            id: idx as GroupId,
            members,
            kill_set,
            is_subsuming: false,
        })
        .collect();
    mark_subsuming(groups)
}

fn mark_subsuming(mut groups: Vec<SubsumptionGroup>) -> Vec<SubsumptionGroup> {
    let kill_sets: Vec<KillSet> = groups.iter().map(|g| g.kill_set.clone()).collect();
    for (idx, group) in groups.iter_mut().enumerate() {
        group.is_subsuming = kill_sets
            .iter()
            .enumerate()
            .all(|(other, ks)| other == idx || !ks.is_strict_subset(&group.kill_set));
    }
    groups
}

/// Full strict-containment relation between groups: an edge `(a, b)` means
/// group `a`'s kill set is a strict subset of group `b`'s, i.e. `a`'s
/// mutants subsume `b`'s.
pub fn containment_edges(groups: &[SubsumptionGroup]) -> BTreeSet<(GroupId, GroupId)> {
    let mut edges = BTreeSet::new();
    for a in groups {
        for b in groups {
            if a.id != b.id && a.kill_set.is_strict_subset(&b.kill_set) {
                edges.insert((a.id, b.id));
            }
        }
    }
    edges
}

/// Transitive reduction of a DAG given as an edge set: drops every edge
/// implied by a longer path. Errors when the input has a cycle (the
/// reduction would not be unique).
pub fn transitive_reduction(
    edges: &BTreeSet<(GroupId, GroupId)>,
) -> Result<BTreeSet<(GroupId, GroupId)>, DmsgError> {
    let mut succ: HashMap<GroupId, BTreeSet<GroupId>> = HashMap::new();
    let mut nodes: BTreeSet<GroupId> = BTreeSet::new();
    for &(u, v) in edges {
        succ.entry(u).or_default().insert(v);
        nodes.insert(u);
        nodes.insert(v);
    }

    // Kahn's algorithm, purely to reject cyclic inputs.
    let mut indegree: HashMap<GroupId, usize> = nodes.iter().map(|&n| (n, 0)).collect();
    for &(_, v) in edges {
        *indegree.get_mut(&v).expect("node was registered above") += 1;
    }
    let mut queue: VecDeque<GroupId> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&n, _)| n)
        .collect();
    let mut visited = 0usize;
    while let Some(n) = queue.pop_front() {
        visited += 1;
        for &next in succ.get(&n).into_iter().flatten() {
            let d = indegree.get_mut(&next).expect("node was registered above");
            *d -= 1;
            if *d == 0 {
                queue.push_back(next);
            }
        }
    }
    if visited != nodes.len() {
        return Err(DmsgError::CycleDetected);
    }

    // Reachability closure per node, then keep (u, v) only when no other
    // successor of u already reaches v.
    let mut reach: HashMap<GroupId, BTreeSet<GroupId>> = HashMap::new();
    for &node in nodes.iter().rev() {
        // BTreeSet iteration is ascending; order does not matter for the
        // fixpoint below because we recurse on demand.
        reach_of(node, &succ, &mut reach);
    }
    let mut reduced = BTreeSet::new();
    for &(u, v) in edges {
        let implied = succ[&u].iter().any(|&w| {
            w != v
                && reach
                    .get(&w)
                    .is_some_and(|reachable| reachable.contains(&v))
        });
        if !implied {
            reduced.insert((u, v));
        }
    }
    Ok(reduced)
}

fn reach_of(
    node: GroupId,
    succ: &HashMap<GroupId, BTreeSet<GroupId>>,
    memo: &mut HashMap<GroupId, BTreeSet<GroupId>>,
) -> BTreeSet<GroupId> {
    if let Some(cached) = memo.get(&node) {
        return cached.clone();
    }
    let mut result = BTreeSet::new();
    for &next in succ.get(&node).into_iter().flatten() {
        result.insert(next);
        result.extend(reach_of(next, succ, memo));
    }
    memo.insert(node, result.clone());
    result
}

/// Assemble the graph from pre-built groups: validates them, recomputes the
/// minimality flags, and reduces the containment relation. Groups normally
/// come from [`group_mutants`].
pub fn build_dmsg(groups: Vec<SubsumptionGroup>) -> Result<Dmsg, DmsgError> {
    let mut seen_ids = BTreeSet::new();
    let mut seen_sets: BTreeMap<&KillSet, GroupId> = BTreeMap::new();
    for group in &groups {
        if !seen_ids.insert(group.id) {
            return Err(DmsgError::DuplicateGroupId(group.id));
        }
        if group.kill_set.is_empty() {
            return Err(DmsgError::EmptyKillSet(group.id));
        }
        if let Some(&earlier) = seen_sets.get(&group.kill_set) {
            return Err(DmsgError::DuplicateKillSet(earlier, group.id));
        }
        seen_sets.insert(&group.kill_set, group.id);
    }
    let edges = transitive_reduction(&containment_edges(&groups))?;
    let groups = mark_subsuming(groups);
    Ok(Dmsg { groups, edges })
}

/// Groups whose kill set is minimal under strict containment — the subsuming
/// groups. Computed from kill sets, not from the reduced edges.
pub fn subsuming_groups(dmsg: &Dmsg) -> Vec<&SubsumptionGroup> {
    dmsg.groups.iter().filter(|g| g.is_subsuming).collect()
}

/// Redundant-mutant filter: from each subsuming group keep the member with
/// the smallest id, drop every other killed mutant. Survived mutants are
/// not retained either — the result is exactly one representative per
/// subsuming group.
pub fn filter_redundant(dmsg: &Dmsg) -> BTreeSet<MutantId> {
    dmsg.groups
        .iter()
        .filter(|g| g.is_subsuming)
        .map(|g| {
            *g.members
                .iter()
                .next()
                .expect("groups are validated non-empty")
        })
        .collect()
}
