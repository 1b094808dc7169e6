//! Syntax tree for the mini language. Every expression and statement node
//! carries a stable id (used to address mutation sites) and the source
//! position of its defining token.

use std::fmt;

/// Node identifier, unique within one [`Program`]. Ids are assigned in
/// parse order and reused as mutation-site addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// 1-based source position of a token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl ArithOp {
    /// Canonical operator order; replacement ranks are positions in this
    /// list with the original operator skipped.
    pub const ALL: [ArithOp; 5] = [
        ArithOp::Add,
        ArithOp::Sub,
        ArithOp::Mul,
        ArithOp::Div,
        ArithOp::Rem,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Rem => "%",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [
        CmpOp::Eq,
        CmpOp::Ne,
        CmpOp::Lt,
        CmpOp::Le,
        CmpOp::Gt,
        CmpOp::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicOp {
    And,
    Or,
}

impl LogicOp {
    pub fn symbol(self) -> &'static str {
        match self {
            LogicOp::And => "&&",
            LogicOp::Or => "||",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Arith(ArithOp),
    Cmp(CmpOp),
    Logic(LogicOp),
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Arith(op) => op.symbol(),
            BinOp::Cmp(op) => op.symbol(),
            BinOp::Logic(op) => op.symbol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnOp {
    /// Arithmetic negation, `-e`.
    Neg,
    /// Logical negation, `!e`; yields 1 for 0 and 0 otherwise.
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "!",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Var(String),
    Unary {
        op: UnOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub id: NodeId,
    pub pos: Pos,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Assign {
        name: String,
        value: Expr,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
    },
    While {
        cond: Expr,
        body: Block,
    },
    Break,
    Return(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub id: NodeId,
    pub pos: Pos,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Function {
    pub name: String,
    pub params: Vec<String>,
    pub body: Block,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub functions: Vec<Function>,
    /// One past the largest assigned [`NodeId`]; fresh ids for edited trees
    /// start here.
    pub node_count: u32,
}

impl Program {
    /// The function executed by the harness: the first one in the file.
    pub fn entry(&self) -> &Function {
        self.functions.first().expect("parser rejects empty programs")
    }

    /// Copy with all node ids and positions zeroed, for structural
    /// comparison across a print/reparse round trip.
    pub fn normalized(&self) -> Program {
        let mut copy = self.clone();
        copy.node_count = 0;
        for function in &mut copy.functions {
            function.pos = Pos::default();
            normalize_block(&mut function.body);
        }
        copy
    }

    pub fn visit_exprs<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        for function in &self.functions {
            visit_block_exprs(&function.body, visit);
        }
    }

    pub fn visit_stmts<'a>(&'a self, visit: &mut impl FnMut(&'a Stmt)) {
        for function in &self.functions {
            visit_block_stmts(&function.body, visit);
        }
    }
}

fn normalize_block(block: &mut Block) {
    for stmt in &mut block.stmts {
        stmt.id = NodeId(0);
        stmt.pos = Pos::default();
        match &mut stmt.kind {
            StmtKind::Assign { value, .. } => normalize_expr(value),
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                normalize_expr(cond);
                normalize_block(then_block);
                if let Some(e) = else_block {
                    normalize_block(e);
                }
            }
            StmtKind::While { cond, body } => {
                normalize_expr(cond);
                normalize_block(body);
            }
            StmtKind::Break => {}
            StmtKind::Return(expr) => normalize_expr(expr),
        }
    }
}

fn normalize_expr(expr: &mut Expr) {
    expr.id = NodeId(0);
    expr.pos = Pos::default();
    match &mut expr.kind {
        ExprKind::Int(_) | ExprKind::Var(_) => {}
        ExprKind::Unary { operand, .. } => normalize_expr(operand),
        ExprKind::Binary { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
    }
}

fn visit_block_exprs<'a>(block: &'a Block, visit: &mut impl FnMut(&'a Expr)) {
    for stmt in &block.stmts {
        match &stmt.kind {
            StmtKind::Assign { value, .. } => visit_expr(value, visit),
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                visit_expr(cond, visit);
                visit_block_exprs(then_block, visit);
                if let Some(e) = else_block {
                    visit_block_exprs(e, visit);
                }
            }
            StmtKind::While { cond, body } => {
                visit_expr(cond, visit);
                visit_block_exprs(body, visit);
            }
            StmtKind::Break => {}
            StmtKind::Return(expr) => visit_expr(expr, visit),
        }
    }
}

fn visit_expr<'a>(expr: &'a Expr, visit: &mut impl FnMut(&'a Expr)) {
    visit(expr);
    match &expr.kind {
        ExprKind::Int(_) | ExprKind::Var(_) => {}
        ExprKind::Unary { operand, .. } => visit_expr(operand, visit),
        ExprKind::Binary { lhs, rhs, .. } => {
            visit_expr(lhs, visit);
            visit_expr(rhs, visit);
        }
    }
}

fn visit_block_stmts<'a>(block: &'a Block, visit: &mut impl FnMut(&'a Stmt)) {
    for stmt in &block.stmts {
        visit(stmt);
        match &stmt.kind {
            StmtKind::If {
                then_block,
                else_block,
                ..
            } => {
                visit_block_stmts(then_block, visit);
                if let Some(e) = else_block {
                    visit_block_stmts(e, visit);
                }
            }
            StmtKind::While { body, .. } => visit_block_stmts(body, visit),
            _ => {}
        }
    }
}
