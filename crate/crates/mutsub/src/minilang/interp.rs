//! Tree-walking interpreter. All values are `i64`; arithmetic wraps at 64
//! bits. Conditions treat 0 as false and anything else as true, and
//! comparisons yield 1 or 0.
//!
//! Execution is bounded by a statement budget so that non-terminating
//! mutants finish with [`ExecutionOutcome::StepLimitExceeded`] instead of
//! hanging the harness.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::{ArithOp, BinOp, Block, CmpOp, Expr, ExprKind, LogicOp, Program, Stmt, StmtKind, UnOp};

/// Default statement budget per execution.
pub const DEFAULT_STEP_LIMIT: u64 = 100_000;

/// How one execution ended. Two runs behave the same only if their outcomes
/// are equal, including the runtime-error reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecutionOutcome {
    Value(i64),
    RuntimeError(RuntimeError),
    StepLimitExceeded,
}

impl fmt::Display for ExecutionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecutionOutcome::Value(v) => write!(f, "value({v})"),
            ExecutionOutcome::RuntimeError(e) => write!(f, "runtime error: {e}"),
            ExecutionOutcome::StepLimitExceeded => write!(f, "step limit exceeded"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("undefined variable {0:?}")]
    UndefinedVariable(String),
    #[error("function ended without returning")]
    MissingReturn,
}

/// Errors in how the interpreter was invoked, as opposed to failures of the
/// interpreted program.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvocationError {
    #[error("missing value for parameter {0:?}")]
    MissingParameter(String),
    #[error("input {0:?} does not name a parameter of the entry function")]
    UnknownParameter(String),
}

/// Run the program's entry function with named inputs. `Err` means the
/// inputs do not fit the entry function; every outcome of the program
/// itself (including runtime errors and budget exhaustion) is `Ok`.
pub fn execute(
    program: &Program,
    inputs: &BTreeMap<String, i64>,
    step_limit: u64,
) -> Result<ExecutionOutcome, InvocationError> {
    let entry = program.entry();
    for name in inputs.keys() {
        if !entry.params.contains(name) {
            return Err(InvocationError::UnknownParameter(name.clone()));
        }
    }
    let mut vars = BTreeMap::new();
    for param in &entry.params {
        let value = inputs
            .get(param)
            .ok_or_else(|| InvocationError::MissingParameter(param.clone()))?;
        vars.insert(param.clone(), *value);
    }
    let mut machine = Machine {
        vars,
        steps_left: step_limit,
    };
    Ok(match machine.run_block(&entry.body) {
        Ok(Flow::Return(value)) => ExecutionOutcome::Value(value),
        Ok(Flow::Continue) => ExecutionOutcome::RuntimeError(RuntimeError::MissingReturn),
        // A break can only escape its own loop; run_block in a function body
        // never sees one (the parser rejects break outside loops).
        Ok(Flow::Break) => unreachable!("break cannot escape the function body"),
        Err(Stop::Runtime(e)) => ExecutionOutcome::RuntimeError(e),
        Err(Stop::OutOfSteps) => ExecutionOutcome::StepLimitExceeded,
    })
}

enum Flow {
    Continue,
    Break,
    Return(i64),
}

enum Stop {
    Runtime(RuntimeError),
    OutOfSteps,
}

struct Machine {
    vars: BTreeMap<String, i64>,
    steps_left: u64,
}

impl Machine {
    fn charge(&mut self) -> Result<(), Stop> {
        if self.steps_left == 0 {
            return Err(Stop::OutOfSteps);
        }
        self.steps_left -= 1;
        Ok(())
    }

    fn run_block(&mut self, block: &Block) -> Result<Flow, Stop> {
        for stmt in &block.stmts {
            match self.run_stmt(stmt)? {
                Flow::Continue => {}
                flow => return Ok(flow),
            }
        }
        Ok(Flow::Continue)
    }

    /// One budget unit per statement execution; a loop's guard evaluation
    /// charges the `while` statement again on every iteration.
    fn run_stmt(&mut self, stmt: &Stmt) -> Result<Flow, Stop> {
        self.charge()?;
        match &stmt.kind {
            StmtKind::Assign { name, value } => {
                let value = self.eval(value)?;
                self.vars.insert(name.clone(), value);
                Ok(Flow::Continue)
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                if self.eval(cond)? != 0 {
                    self.run_block(then_block)
                } else if let Some(else_block) = else_block {
                    self.run_block(else_block)
                } else {
                    Ok(Flow::Continue)
                }
            }
            StmtKind::While { cond, body } => {
                if self.eval(cond)? == 0 {
                    return Ok(Flow::Continue);
                }
                loop {
                    match self.run_block(body)? {
                        Flow::Break => return Ok(Flow::Continue),
                        Flow::Return(v) => return Ok(Flow::Return(v)),
                        Flow::Continue => {}
                    }
                    self.charge()?;
                    if self.eval(cond)? == 0 {
                        return Ok(Flow::Continue);
                    }
                }
            }
            StmtKind::Break => Ok(Flow::Break),
            StmtKind::Return(expr) => Ok(Flow::Return(self.eval(expr)?)),
        }
    }

    fn eval(&mut self, expr: &Expr) -> Result<i64, Stop> {
        match &expr.kind {
            ExprKind::Int(v) => Ok(*v),
            ExprKind::Var(name) => self.vars.get(name).copied().ok_or_else(|| {
                Stop::Runtime(RuntimeError::UndefinedVariable(name.clone()))
            }),
            ExprKind::Unary { op, operand } => {
                let value = self.eval(operand)?;
                Ok(match op {
                    UnOp::Neg => value.wrapping_neg(),
                    UnOp::Not => i64::from(value == 0),
                })
            }
            ExprKind::Binary { op, lhs, rhs } => match op {
                BinOp::Logic(LogicOp::And) => {
                    if self.eval(lhs)? == 0 {
                        Ok(0)
                    } else {
                        Ok(i64::from(self.eval(rhs)? != 0))
                    }
                }
                BinOp::Logic(LogicOp::Or) => {
                    if self.eval(lhs)? != 0 {
                        Ok(1)
                    } else {
                        Ok(i64::from(self.eval(rhs)? != 0))
                    }
                }
                BinOp::Cmp(op) => {
                    let l = self.eval(lhs)?;
                    let r = self.eval(rhs)?;
                    Ok(i64::from(match op {
                        CmpOp::Eq => l == r,
                        CmpOp::Ne => l != r,
                        CmpOp::Lt => l < r,
                        CmpOp::Le => l <= r,
                        CmpOp::Gt => l > r,
                        CmpOp::Ge => l >= r,
                    }))
                }
                BinOp::Arith(op) => {
                    let l = self.eval(lhs)?;
                    let r = self.eval(rhs)?;
                    match op {
                        ArithOp::Add => Ok(l.wrapping_add(r)),
                        ArithOp::Sub => Ok(l.wrapping_sub(r)),
                        ArithOp::Mul => Ok(l.wrapping_mul(r)),
                        ArithOp::Div => {
                            if r == 0 {
                                Err(Stop::Runtime(RuntimeError::DivisionByZero))
                            } else {
                                Ok(l.wrapping_div(r))
                            }
                        }
                        ArithOp::Rem => {
                            if r == 0 {
                                Err(Stop::Runtime(RuntimeError::DivisionByZero))
                            } else {
                                Ok(l.wrapping_rem(r))
                            }
                        }
                    }
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parser::parse_program;

    fn run(src: &str, inputs: &[(&str, i64)]) -> ExecutionOutcome {
        run_limited(src, inputs, DEFAULT_STEP_LIMIT)
    }

    fn run_limited(src: &str, inputs: &[(&str, i64)], limit: u64) -> ExecutionOutcome {
        let program = parse_program(src).unwrap();
        let inputs: BTreeMap<String, i64> = inputs
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        execute(&program, &inputs, limit).unwrap()
    }

    #[test]
    fn arithmetic_and_return() {
        assert_eq!(
            run("fn f(a, b) { return a * b + 1; }", &[("a", 3), ("b", 4)]),
            ExecutionOutcome::Value(13)
        );
    }

    #[test]
    fn arithmetic_wraps() {
        assert_eq!(
            run("fn f(a) { return a + 1; }", &[("a", i64::MAX)]),
            ExecutionOutcome::Value(i64::MIN)
        );
        assert_eq!(
            run("fn f(a) { return -a; }", &[("a", i64::MIN)]),
            ExecutionOutcome::Value(i64::MIN)
        );
        assert_eq!(
            run("fn f(a, b) { return a * b; }", &[("a", i64::MAX), ("b", 2)]),
            ExecutionOutcome::Value(-2)
        );
        // MIN / -1 overflows in two's complement and must wrap, not trap.
        assert_eq!(
            run("fn f(a, b) { return a / b; }", &[("a", i64::MIN), ("b", -1)]),
            ExecutionOutcome::Value(i64::MIN)
        );
        assert_eq!(
            run("fn f(a, b) { return a % b; }", &[("a", i64::MIN), ("b", -1)]),
            ExecutionOutcome::Value(0)
        );
    }

    #[test]
    fn division_by_zero_is_a_runtime_error() {
        assert_eq!(
            run("fn f(a) { return 1 / a; }", &[("a", 0)]),
            ExecutionOutcome::RuntimeError(RuntimeError::DivisionByZero)
        );
        assert_eq!(
            run("fn f(a) { return 1 % a; }", &[("a", 0)]),
            ExecutionOutcome::RuntimeError(RuntimeError::DivisionByZero)
        );
    }

    #[test]
    fn truthiness_is_nonzero() {
        let src = "fn f(x) { if (x) { return 1; } return 0; }";
        assert_eq!(run(src, &[("x", -7)]), ExecutionOutcome::Value(1));
        assert_eq!(run(src, &[("x", 0)]), ExecutionOutcome::Value(0));
    }

    #[test]
    fn comparisons_yield_one_or_zero() {
        assert_eq!(
            run("fn f(a, b) { return (a < b) + (a == a); }", &[("a", 1), ("b", 2)]),
            ExecutionOutcome::Value(2)
        );
    }

    #[test]
    fn logic_normalizes_and_short_circuits() {
        assert_eq!(
            run("fn f(a, b) { return a && b; }", &[("a", 5), ("b", -3)]),
            ExecutionOutcome::Value(1)
        );
        assert_eq!(
            run("fn f(a, b) { return a || b; }", &[("a", 0), ("b", 7)]),
            ExecutionOutcome::Value(1)
        );
        // Short circuit: the divide-by-zero on the right is never evaluated.
        assert_eq!(
            run("fn f(a) { return 0 && 1 / a; }", &[("a", 0)]),
            ExecutionOutcome::Value(0)
        );
        assert_eq!(
            run("fn f(a) { return 1 || 1 / a; }", &[("a", 0)]),
            ExecutionOutcome::Value(1)
        );
    }

    #[test]
    fn logical_not() {
        assert_eq!(run("fn f(x) { return !x; }", &[("x", 0)]), ExecutionOutcome::Value(1));
        assert_eq!(run("fn f(x) { return !x; }", &[("x", 42)]), ExecutionOutcome::Value(0));
    }

    #[test]
    fn while_loop_and_break() {
        let src = "fn f(n) { i = 0; s = 0; while (1) { if (i >= n) { break; } s = s + i; i = i + 1; } return s; }";
        assert_eq!(run(src, &[("n", 5)]), ExecutionOutcome::Value(10));
    }

    #[test]
    fn undefined_variable_is_a_runtime_error() {
        assert_eq!(
            run("fn f() { return nope; }", &[]),
            ExecutionOutcome::RuntimeError(RuntimeError::UndefinedVariable("nope".into()))
        );
    }

    #[test]
    fn falling_off_the_end_is_missing_return() {
        assert_eq!(
            run("fn f(x) { if (x) { return 1; } }", &[("x", 0)]),
            ExecutionOutcome::RuntimeError(RuntimeError::MissingReturn)
        );
    }

    #[test]
    fn infinite_loop_hits_step_limit() {
        assert_eq!(
            run_limited("fn f() { while (1) { x = 0; } return 0; }", &[], 1000),
            ExecutionOutcome::StepLimitExceeded
        );
    }

    #[test]
    fn zero_step_limit_exhausts_immediately() {
        assert_eq!(
            run_limited("fn f() { return 0; }", &[], 0),
            ExecutionOutcome::StepLimitExceeded
        );
    }

    #[test]
    fn budget_charges_guard_reevaluations() {
        // Body: one assignment per iteration; guard re-check also charges.
        // 3 iterations: 1 (first guard via while stmt) + 3 * (assign + re-check)
        // = 7 statements.
        let src = "fn f() { i = 0; while (i < 3) { i = i + 1; } return i; }";
        // i = 0 (1) + while entry (1) + 3 * (assign + recheck) (6) + return (1) = 9.
        assert_eq!(run_limited(src, &[], 9), ExecutionOutcome::Value(3));
        assert_eq!(run_limited(src, &[], 8), ExecutionOutcome::StepLimitExceeded);
    }

    #[test]
    fn execute_validates_inputs() {
        let program = parse_program("fn f(a) { return a; }").unwrap();
        let missing = execute(&program, &BTreeMap::new(), 100).unwrap_err();
        assert_eq!(missing, InvocationError::MissingParameter("a".into()));
        let extra: BTreeMap<String, i64> =
            [("a".to_string(), 1), ("z".to_string(), 2)].into_iter().collect();
        assert_eq!(
            execute(&program, &extra, 100).unwrap_err(),
            InvocationError::UnknownParameter("z".into())
        );
    }

    #[test]
    fn later_functions_are_inert() {
        let src = "fn main(x) { return x + 1; } fn other(y) { return y * 100; }";
        assert_eq!(run(src, &[("x", 1)]), ExecutionOutcome::Value(2));
    }
}
