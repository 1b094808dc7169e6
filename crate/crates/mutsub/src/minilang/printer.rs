//! Pretty-printer emitting canonical source: 4-space indentation, one
//! statement per line, and the minimum parentheses needed to reparse to the
//! same tree.

use super::ast::{ArithOp, BinOp, Block, Expr, ExprKind, LogicOp, Program, Stmt, StmtKind};

pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for (idx, function) in program.functions.iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&format!("fn {}({}) {{\n", function.name, function.params.join(", ")));
        print_block(&function.body, 1, &mut out);
        out.push_str("}\n");
    }
    out
}

fn print_block(block: &Block, depth: usize, out: &mut String) {
    for stmt in &block.stmts {
        print_stmt(stmt, depth, out);
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn print_stmt(stmt: &Stmt, depth: usize, out: &mut String) {
    indent(depth, out);
    match &stmt.kind {
        StmtKind::Assign { name, value } => {
            out.push_str(&format!("{name} = {};\n", print_expr(value)));
        }
        StmtKind::If { .. } => print_if(stmt, depth, out),
        StmtKind::While { cond, body } => {
            out.push_str(&format!("while ({}) {{\n", print_expr(cond)));
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        StmtKind::Break => out.push_str("break;\n"),
        StmtKind::Return(expr) => {
            out.push_str(&format!("return {};\n", print_expr(expr)));
        }
    }
}

/// Prints an if statement, folding `else { if … }` with a single nested if
/// back into an `else if` chain. Assumes the caller already indented.
fn print_if(stmt: &Stmt, depth: usize, out: &mut String) {
    let StmtKind::If {
        cond,
        then_block,
        else_block,
    } = &stmt.kind
    else {
        unreachable!("print_if is only called on if statements");
    };
    out.push_str(&format!("if ({}) {{\n", print_expr(cond)));
    print_block(then_block, depth + 1, out);
    indent(depth, out);
    out.push('}');
    match else_block {
        None => out.push('\n'),
        Some(block) if block.stmts.len() == 1 && matches!(block.stmts[0].kind, StmtKind::If { .. }) => {
            out.push_str(" else ");
            print_if(&block.stmts[0], depth, out);
        }
        Some(block) => {
            out.push_str(" else {\n");
            print_block(block, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
    }
}

pub fn print_expr(expr: &Expr) -> String {
    render_expr(expr, 1)
}

fn level(op: BinOp) -> u8 {
    match op {
        BinOp::Logic(LogicOp::Or) => 1,
        BinOp::Logic(LogicOp::And) => 2,
        BinOp::Cmp(_) => 3,
        BinOp::Arith(ArithOp::Add) | BinOp::Arith(ArithOp::Sub) => 4,
        BinOp::Arith(_) => 5,
    }
}

/// Renders with parens only where the surrounding context demands at least
/// `min_level`. Left children inherit the operator's level (left
/// associativity), right children need one level more.
fn render_expr(expr: &Expr, min_level: u8) -> String {
    match &expr.kind {
        ExprKind::Int(v) => v.to_string(),
        ExprKind::Var(name) => name.clone(),
        ExprKind::Unary { op, operand } => {
            format!("{}{}", op.symbol(), render_expr(operand, 6))
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let this = level(*op);
            let body = format!(
                "{} {} {}",
                render_expr(lhs, this),
                op.symbol(),
                render_expr(rhs, this + 1)
            );
            if this < min_level {
                format!("({body})")
            } else {
                body
            }
        }
    }
}
