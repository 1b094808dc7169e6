//! Recursive-descent parser producing id-annotated syntax trees.
//!
//! Precedence, loosest to tightest: `||`, `&&`, comparisons, `+ -`,
//! `* / %`, unary `- !`. All binary operators are left-associative.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ast::{
    ArithOp, BinOp, Block, CmpOp, Expr, ExprKind, Function, LogicOp, NodeId, Pos, Program, Stmt,
    StmtKind, UnOp,
};
use super::lexer::{tokenize, Token, TokenKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        next_id: 0,
        loop_depth: 0,
    };
    let mut functions = Vec::new();
    let mut names = BTreeSet::new();
    while parser.peek().kind != TokenKind::Eof {
        let function = parser.function()?;
        if !names.insert(function.name.clone()) {
            return Err(ParseError::new(
                function.pos,
                format!("duplicate function name {:?}", function.name),
            ));
        }
        functions.push(function);
    }
    if functions.is_empty() {
        return Err(ParseError::new(
            parser.peek().pos,
            "program must define at least one function",
        ));
    }
    Ok(Program {
        functions,
        node_count: parser.next_id,
    })
}

struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
    next_id: u32,
    loop_depth: u32,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.cursor].clone();
        if token.kind != TokenKind::Eof {
            self.cursor += 1;
        }
        token
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        let token = self.peek();
        if token.kind == kind {
            Ok(self.advance())
        } else {
            Err(ParseError::new(
                token.pos,
                format!("expected {}, found {}", kind.describe(), token.kind.describe()),
            ))
        }
    }

    fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn function(&mut self) -> Result<Function, ParseError> {
        let fn_token = self.expect(TokenKind::KwFn)?;
        let name = self.expect(TokenKind::Ident)?.text;
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        let mut seen = BTreeSet::new();
        if self.peek().kind != TokenKind::RParen {
            loop {
                let param = self.expect(TokenKind::Ident)?;
                if !seen.insert(param.text.clone()) {
                    return Err(ParseError::new(
                        param.pos,
                        format!("duplicate parameter {:?}", param.text),
                    ));
                }
                params.push(param.text);
                if self.peek().kind == TokenKind::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        let body = self.block()?;
        Ok(Function {
            name,
            params,
            body,
            pos: fn_token.pos,
        })
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        self.expect(TokenKind::LBrace)?;
        let mut stmts = Vec::new();
        while self.peek().kind != TokenKind::RBrace {
            if self.peek().kind == TokenKind::Eof {
                return Err(ParseError::new(self.peek().pos, "unclosed block"));
            }
            stmts.push(self.statement()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(Block { stmts })
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().kind {
            TokenKind::KwIf => self.if_statement(),
            TokenKind::KwWhile => {
                let token = self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.expression()?;
                self.expect(TokenKind::RParen)?;
                self.loop_depth += 1;
                let body = self.block();
                self.loop_depth -= 1;
                Ok(Stmt {
                    id: self.fresh_id(),
                    pos: token.pos,
                    kind: StmtKind::While { cond, body: body? },
                })
            }
            TokenKind::KwBreak => {
                let token = self.advance();
                if self.loop_depth == 0 {
                    return Err(ParseError::new(token.pos, "break outside of a loop"));
                }
                self.expect(TokenKind::Semi)?;
                Ok(Stmt {
                    id: self.fresh_id(),
                    pos: token.pos,
                    kind: StmtKind::Break,
                })
            }
            TokenKind::KwReturn => {
                let token = self.advance();
                let value = self.expression()?;
                self.expect(TokenKind::Semi)?;
                Ok(Stmt {
                    id: self.fresh_id(),
                    pos: token.pos,
                    kind: StmtKind::Return(value),
                })
            }
            TokenKind::Ident => {
                let name_token = self.advance();
                self.expect(TokenKind::Assign)?;
                let value = self.expression()?;
                self.expect(TokenKind::Semi)?;
                Ok(Stmt {
                    id: self.fresh_id(),
                    pos: name_token.pos,
                    kind: StmtKind::Assign {
                        name: name_token.text,
                        value,
                    },
                })
            }
            other => Err(ParseError::new(
                self.peek().pos,
                format!("expected a statement, found {}", other.describe()),
            )),
        }
    }

    fn if_statement(&mut self) -> Result<Stmt, ParseError> {
        let token = self.expect(TokenKind::KwIf)?;
        self.expect(TokenKind::LParen)?;
        let cond = self.expression()?;
        self.expect(TokenKind::RParen)?;
        let then_block = self.block()?;
        let else_block = if self.peek().kind == TokenKind::KwElse {
            self.advance();
            if self.peek().kind == TokenKind::KwIf {
                // `else if` nests as an else block holding a single if.
                let nested = self.if_statement()?;
                Some(Block { stmts: vec![nested] })
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(Stmt {
            id: self.fresh_id(),
            pos: token.pos,
            kind: StmtKind::If {
                cond,
                then_block,
                else_block,
            },
        })
    }

    fn expression(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    /// Precedence-climbing over the binary levels (1 = `||` … 5 = `* / %`).
    fn binary(&mut self, min_level: u8) -> Result<Expr, ParseError> {
        if min_level > 5 {
            return self.unary();
        }
        let mut lhs = self.binary(min_level + 1)?;
        while let Some(op) = binop_at_level(self.peek().kind, min_level) {
            let token = self.advance();
            let rhs = self.binary(min_level + 1)?;
            lhs = Expr {
                id: self.fresh_id(),
                pos: token.pos,
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let op = match self.peek().kind {
            TokenKind::Minus => Some(UnOp::Neg),
            TokenKind::Bang => Some(UnOp::Not),
            _ => None,
        };
        if let Some(op) = op {
            let token = self.advance();
            let operand = self.unary()?;
            return Ok(Expr {
                id: self.fresh_id(),
                pos: token.pos,
                kind: ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::Int => {
                self.advance();
                let value: i64 = token.text.parse().map_err(|_| {
                    ParseError::new(
                        token.pos,
                        format!("integer literal {} does not fit in 64 bits", token.text),
                    )
                })?;
                Ok(Expr {
                    id: self.fresh_id(),
                    pos: token.pos,
                    kind: ExprKind::Int(value),
                })
            }
            TokenKind::Ident => {
                self.advance();
                Ok(Expr {
                    id: self.fresh_id(),
                    pos: token.pos,
                    kind: ExprKind::Var(token.text),
                })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expression()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError::new(
                token.pos,
                format!("expected an expression, found {}", other.describe()),
            )),
        }
    }
}

fn binop_at_level(kind: TokenKind, level: u8) -> Option<BinOp> {
    let op = match kind {
        TokenKind::OrOr => BinOp::Logic(LogicOp::Or),
        TokenKind::AndAnd => BinOp::Logic(LogicOp::And),
        TokenKind::EqEq => BinOp::Cmp(CmpOp::Eq),
        TokenKind::NotEq => BinOp::Cmp(CmpOp::Ne),
        TokenKind::Lt => BinOp::Cmp(CmpOp::Lt),
        TokenKind::Le => BinOp::Cmp(CmpOp::Le),
        TokenKind::Gt => BinOp::Cmp(CmpOp::Gt),
        TokenKind::Ge => BinOp::Cmp(CmpOp::Ge),
        TokenKind::Plus => BinOp::Arith(ArithOp::Add),
        TokenKind::Minus => BinOp::Arith(ArithOp::Sub),
        TokenKind::Star => BinOp::Arith(ArithOp::Mul),
        TokenKind::Slash => BinOp::Arith(ArithOp::Div),
        TokenKind::Percent => BinOp::Arith(ArithOp::Rem),
        _ => return None,
    };
    let op_level = match op {
        BinOp::Logic(LogicOp::Or) => 1,
        BinOp::Logic(LogicOp::And) => 2,
        BinOp::Cmp(_) => 3,
        BinOp::Arith(ArithOp::Add) | BinOp::Arith(ArithOp::Sub) => 4,
        BinOp::Arith(_) => 5,
    };
    (op_level == level).then_some(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry_body(src: &str) -> Block {
        parse_program(src).unwrap().entry().body.clone()
    }

    fn only_expr(src: &str) -> Expr {
        let body = entry_body(&format!("fn f() {{ return {src}; }}"));
        match &body.stmts[0].kind {
            StmtKind::Return(e) => e.clone(),
            other => panic!("expected return, got {other:?}"),
        }
    }

    fn shape(expr: &Expr) -> String {
        match &expr.kind {
            ExprKind::Int(v) => v.to_string(),
            ExprKind::Var(n) => n.clone(),
            ExprKind::Unary { op, operand } => {
                format!("({}{})", op.symbol(), shape(operand))
            }
            ExprKind::Binary { op, lhs, rhs } => {
                format!("({} {} {})", shape(lhs), op.symbol(), shape(rhs))
            }
        }
    }

    #[test]
    fn precedence_mul_over_add() {
        assert_eq!(shape(&only_expr("1 + 2 * 3")), "(1 + (2 * 3))");
    }

    #[test]
    fn precedence_cmp_over_logic() {
        assert_eq!(
            shape(&only_expr("a < b && c == d || e")),
            "(((a < b) && (c == d)) || e)"
        );
    }

    #[test]
    fn binary_ops_are_left_associative() {
        assert_eq!(shape(&only_expr("a - b - c")), "((a - b) - c)");
        assert_eq!(shape(&only_expr("a / b % c")), "((a / b) % c)");
        assert_eq!(shape(&only_expr("a && b && c")), "((a && b) && c)");
    }

    #[test]
    fn parens_override_precedence() {
        assert_eq!(shape(&only_expr("(1 + 2) * 3")), "((1 + 2) * 3)");
    }

    #[test]
    fn unary_binds_tighter_than_binary() {
        assert_eq!(shape(&only_expr("-a * b")), "((-a) * b)");
        assert_eq!(shape(&only_expr("!a && b")), "((!a) && b)");
        assert_eq!(shape(&only_expr("--a")), "(-(-a))");
    }

    #[test]
    fn else_if_chains() {
        let body = entry_body(
            "fn f(x) { if (x < 0) { return 0; } else if (x == 0) { return 1; } else { return 2; } }",
        );
        let StmtKind::If { else_block, .. } = &body.stmts[0].kind else {
            panic!("expected if");
        };
        let else_block = else_block.as_ref().unwrap();
        assert_eq!(else_block.stmts.len(), 1);
        assert!(matches!(else_block.stmts[0].kind, StmtKind::If { .. }));
    }

    #[test]
    fn node_ids_are_unique() {
        let program = parse_program(
            "fn f(a, b) { x = a + b * 2; while (x > 0) { x = x - 1; if (x == 3) { break; } } return x; }",
        )
        .unwrap();
        let mut seen = BTreeSet::new();
        program.visit_exprs(&mut |e| {
            assert!(seen.insert(e.id), "duplicate expr id {:?}", e.id);
        });
        program.visit_stmts(&mut |s| {
            assert!(seen.insert(s.id), "duplicate stmt id {:?}", s.id);
        });
        assert!(seen.len() <= program.node_count as usize);
    }

    #[test]
    fn rejects_break_outside_loop() {
        let err = parse_program("fn f() { break; return 0; }").unwrap_err();
        assert_eq!(err.to_string(), "1:10: break outside of a loop");
    }

    #[test]
    fn accepts_break_in_nested_if_inside_loop() {
        parse_program("fn f() { while (1) { if (1) { break; } } return 0; }").unwrap();
    }

    #[test]
    fn rejects_duplicate_function() {
        let err = parse_program("fn f() { return 0; } fn f() { return 1; }").unwrap_err();
        assert!(err.to_string().contains("duplicate function"), "{err}");
    }

    #[test]
    fn rejects_duplicate_parameter() {
        let err = parse_program("fn f(a, a) { return 0; }").unwrap_err();
        assert!(err.to_string().contains("duplicate parameter"), "{err}");
    }

    #[test]
    fn rejects_empty_program() {
        let err = parse_program("  // nothing here\n").unwrap_err();
        assert!(err.to_string().contains("at least one function"), "{err}");
    }

    #[test]
    fn rejects_literal_overflow() {
        let err = parse_program("fn f() { return 9223372036854775808; }").unwrap_err();
        assert!(err.to_string().contains("64 bits"), "{err}");
        // The maximum i64 value parses fine.
        parse_program("fn f() { return 9223372036854775807; }").unwrap();
    }

    #[test]
    fn error_reports_position() {
        let err = parse_program("fn f() {\n  x = ;\n}").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 7 });
        assert!(err.to_string().starts_with("2:7: "), "{err}");
    }

    #[test]
    fn statement_positions_point_at_keywords() {
        let program = parse_program("fn f() {\n  while (1) {\n    break;\n  }\n  return 0;\n}").unwrap();
        let mut positions = Vec::new();
        program.visit_stmts(&mut |s| positions.push((s.pos.line, s.pos.col)));
        assert!(positions.contains(&(2, 3)), "{positions:?}"); // while
        assert!(positions.contains(&(3, 5)), "{positions:?}"); // break
    }
}
