//! First-order mutant generation. Each operator enumerates its sites over
//! the syntax tree; a mutant is one edit applied to a copy of the program.
//!
//! Mutants are ordered deterministically by (line, column, operator tag,
//! replacement rank) and numbered from 0 in that order.

use std::collections::BTreeSet;
use std::str::FromStr;

use thiserror::Error;

use super::ast::{ArithOp, BinOp, Block, CmpOp, Expr, ExprKind, NodeId, Program, Stmt, StmtKind, UnOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MutationOperator {
    /// Replace an arithmetic operator with each of the other four.
    Aor,
    /// Replace a comparison operator with each of the other five.
    Ror,
    /// Negate an `if` or `while` condition.
    CondNeg,
    /// Delete a `break` statement.
    BreakDel,
    /// Negate one variable reference.
    UoiNeg,
}

impl MutationOperator {
    pub const ALL: [MutationOperator; 5] = [
        MutationOperator::Aor,
        MutationOperator::Ror,
        MutationOperator::CondNeg,
        MutationOperator::BreakDel,
        MutationOperator::UoiNeg,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            MutationOperator::Aor => "AOR",
            MutationOperator::Ror => "ROR",
            MutationOperator::CondNeg => "COND-NEG",
            MutationOperator::BreakDel => "BREAK-DEL",
            MutationOperator::UoiNeg => "UOI-NEG",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown mutation operator {0:?}")]
pub struct UnknownOperator(String);

impl FromStr for MutationOperator {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "AOR" => Ok(MutationOperator::Aor),
            "ROR" => Ok(MutationOperator::Ror),
            "COND-NEG" => Ok(MutationOperator::CondNeg),
            "BREAK-DEL" => Ok(MutationOperator::BreakDel),
            "UOI-NEG" => Ok(MutationOperator::UoiNeg),
            other => Err(UnknownOperator(other.to_string())),
        }
    }
}

/// Parse a comma-separated operator list, e.g. `"AOR,ROR"`. Empty input
/// selects no operators; whitespace around names is tolerated.
pub fn parse_operator_set(s: &str) -> Result<BTreeSet<MutationOperator>, UnknownOperator> {
    let mut set = BTreeSet::new();
    for part in s.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        set.insert(name.parse()?);
    }
    Ok(set)
}

/// One applicable rewrite, addressed by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationEdit {
    ReplaceArith { node: NodeId, with: ArithOp },
    ReplaceCmp { node: NodeId, with: CmpOp },
    NegateCondition { node: NodeId },
    DeleteBreak { node: NodeId },
    NegateVarRef { node: NodeId },
}

/// A generated mutant: which edit, plus the metadata that names it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedMutant {
    pub id: u64,
    pub operator: MutationOperator,
    /// Source line of the mutated token in the printed base program.
    pub line: u32,
    pub edit: MutationEdit,
}

/// Canonical ordering key: (line, col, operator tag, replacement rank).
type SiteKey = (u32, u32, &'static str, u8);

/// Enumerate all mutants for the selected operators, in canonical order.
pub fn generate_mutants(
    program: &Program,
    operators: &BTreeSet<MutationOperator>,
) -> Vec<GeneratedMutant> {
    let mut sites: Vec<(SiteKey, MutationOperator, MutationEdit)> = Vec::new();

    if operators.contains(&MutationOperator::Aor) || operators.contains(&MutationOperator::Ror) {
        program.visit_exprs(&mut |expr| match expr.kind {
            ExprKind::Binary {
                op: BinOp::Arith(original),
                ..
            } if operators.contains(&MutationOperator::Aor) => {
                let mut rank = 0u8;
                for replacement in ArithOp::ALL {
                    if replacement == original {
                        continue;
                    }
                    sites.push((
                        (expr.pos.line, expr.pos.col, MutationOperator::Aor.tag(), rank),
                        MutationOperator::Aor,
                        MutationEdit::ReplaceArith {
                            node: expr.id,
                            with: replacement,
                        },
                    ));
                    rank += 1;
                }
            }
            ExprKind::Binary {
                op: BinOp::Cmp(original),
                ..
            } if operators.contains(&MutationOperator::Ror) => {
                let mut rank = 0u8;
                for replacement in CmpOp::ALL {
                    if replacement == original {
                        continue;
                    }
                    sites.push((
                        (expr.pos.line, expr.pos.col, MutationOperator::Ror.tag(), rank),
                        MutationOperator::Ror,
                        MutationEdit::ReplaceCmp {
                            node: expr.id,
                            with: replacement,
                        },
                    ));
                    rank += 1;
                }
            }
            _ => {}
        });
    }

    program.visit_stmts(&mut |stmt| match &stmt.kind {
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. }
            if operators.contains(&MutationOperator::CondNeg) =>
        {
            sites.push((
                (stmt.pos.line, stmt.pos.col, MutationOperator::CondNeg.tag(), 0),
                MutationOperator::CondNeg,
                MutationEdit::NegateCondition { node: cond.id },
            ));
        }
        StmtKind::Break if operators.contains(&MutationOperator::BreakDel) => {
            sites.push((
                (stmt.pos.line, stmt.pos.col, MutationOperator::BreakDel.tag(), 0),
                MutationOperator::BreakDel,
                MutationEdit::DeleteBreak { node: stmt.id },
            ));
        }
        _ => {}
    });

    if operators.contains(&MutationOperator::UoiNeg) {
        program.visit_exprs(&mut |expr| {
            if matches!(expr.kind, ExprKind::Var(_)) {
                sites.push((
                    (expr.pos.line, expr.pos.col, MutationOperator::UoiNeg.tag(), 0),
                    MutationOperator::UoiNeg,
                    MutationEdit::NegateVarRef { node: expr.id },
                ));
            }
        });
    }

    sites.sort_by(|a, b| a.0.cmp(&b.0));
    sites
        .into_iter()
        .enumerate()
        .map(|(idx, (key, operator, edit))| GeneratedMutant {
            id: idx as u64,
            operator,
            line: key.0,
            edit,
        })
        .collect()
}

/// Apply one edit to a copy of the program. Nodes introduced by the edit
/// get fresh ids above the existing range. Panics if the edit's target node
/// is absent — edits are only valid against the program they were generated
/// from.
pub fn apply_edit(program: &Program, edit: &MutationEdit) -> Program {
    let mut mutated = program.clone();
    let mut next_id = mutated.node_count;
    let mut applied = false;
    for function in &mut mutated.functions {
        edit_block(&mut function.body, edit, &mut next_id, &mut applied);
    }
    assert!(applied, "edit target {edit:?} not found in program");
    mutated.node_count = next_id;
    mutated
}

fn edit_block(block: &mut Block, edit: &MutationEdit, next_id: &mut u32, applied: &mut bool) {
    if let MutationEdit::DeleteBreak { node } = edit {
        let before = block.stmts.len();
        block
            .stmts
            .retain(|stmt| !(stmt.id == *node && matches!(stmt.kind, StmtKind::Break)));
        if block.stmts.len() != before {
            *applied = true;
        }
    }
    for stmt in &mut block.stmts {
        edit_stmt(stmt, edit, next_id, applied);
    }
}

fn edit_stmt(stmt: &mut Stmt, edit: &MutationEdit, next_id: &mut u32, applied: &mut bool) {
    match &mut stmt.kind {
        StmtKind::Assign { value, .. } => edit_expr(value, edit, next_id, applied),
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            edit_expr(cond, edit, next_id, applied);
            edit_block(then_block, edit, next_id, applied);
            if let Some(else_block) = else_block {
                edit_block(else_block, edit, next_id, applied);
            }
        }
        StmtKind::While { cond, body } => {
            edit_expr(cond, edit, next_id, applied);
            edit_block(body, edit, next_id, applied);
        }
        StmtKind::Break => {}
        StmtKind::Return(expr) => edit_expr(expr, edit, next_id, applied),
    }
}

fn edit_expr(expr: &mut Expr, edit: &MutationEdit, next_id: &mut u32, applied: &mut bool) {
    match edit {
        MutationEdit::ReplaceArith { node, with } if expr.id == *node => {
            if let ExprKind::Binary { op, .. } = &mut expr.kind {
                *op = BinOp::Arith(*with);
                *applied = true;
            }
        }
        MutationEdit::ReplaceCmp { node, with } if expr.id == *node => {
            if let ExprKind::Binary { op, .. } = &mut expr.kind {
                *op = BinOp::Cmp(*with);
                *applied = true;
            }
        }
        MutationEdit::NegateCondition { node } | MutationEdit::NegateVarRef { node }
            if expr.id == *node =>
        {
            let inner = expr.clone();
            let negate_with = if matches!(edit, MutationEdit::NegateCondition { .. }) {
                UnOp::Not
            } else {
                UnOp::Neg
            };
            *expr = Expr {
                id: NodeId(*next_id),
                pos: inner.pos,
                kind: ExprKind::Unary {
                    op: negate_with,
                    operand: Box::new(inner),
                },
            };
            *next_id += 1;
            *applied = true;
            return; // do not descend into the wrapped copy
        }
        _ => {}
    }
    match &mut expr.kind {
        ExprKind::Int(_) | ExprKind::Var(_) => {}
        ExprKind::Unary { operand, .. } => edit_expr(operand, edit, next_id, applied),
        ExprKind::Binary { lhs, rhs, .. } => {
            edit_expr(lhs, edit, next_id, applied);
            edit_expr(rhs, edit, next_id, applied);
        }
    }
}
