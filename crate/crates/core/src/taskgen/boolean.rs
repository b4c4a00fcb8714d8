//! Nested boolean expressions evaluated one tree level per transition.

use std::fmt;

use rand::Rng;

use super::projection::{project, RunPath};
use super::{Answer, Built, TaskContent, TaskError};

pub(crate) const MAX_DEPTH: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Not,
    Xor,
}

impl BoolOp {
    /// Operator pool in the order it is drawn from.
    pub const POOL: [BoolOp; 4] = [BoolOp::And, BoolOp::Or, BoolOp::Not, BoolOp::Xor];
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoolOp::And => "and",
            BoolOp::Or => "or",
            BoolOp::Not => "not",
            BoolOp::Xor => "xor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Lit(bool),
    Not(Box<BoolExpr>),
    Binary(BoolOp, Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Binary(BoolOp::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Binary(BoolOp::Or, Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> u32 {
        match self {
            BoolExpr::Lit(_) => 0,
            BoolExpr::Not(e) => 1 + e.depth(),
            BoolExpr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn value(&self) -> bool {
        match self {
            BoolExpr::Lit(v) => *v,
            BoolExpr::Not(e) => !e.value(),
            BoolExpr::Binary(op, a, b) => match op {
                BoolOp::And => a.value() && b.value(),
                BoolOp::Or => a.value() || b.value(),
                BoolOp::Xor => a.value() ^ b.value(),
                BoolOp::Not => unreachable!("not is unary"),
            },
        }
    }

    fn operand(&self) -> String {
        match self {
            BoolExpr::Lit(_) => self.to_string(),
            _ => format!("({self})"),
        }
    }

    /// Values of the nodes at `level` (root is level 0), left to right.
    fn level_values(&self, level: u32, out: &mut Vec<bool>) {
        if level == 0 {
            out.push(self.value());
            return;
        }
        match self {
            BoolExpr::Lit(v) => out.push(*v),
            BoolExpr::Not(e) => e.level_values(level - 1, out),
            BoolExpr::Binary(_, a, b) => {
                a.level_values(level - 1, out);
                b.level_values(level - 1, out);
            }
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Lit(true) => f.write_str("True"),
            BoolExpr::Lit(false) => f.write_str("False"),
            BoolExpr::Not(e) => write!(f, "not {}", e.operand()),
            BoolExpr::Binary(op, a, b) => write!(f, "{} {op} {}", a.operand(), b.operand()),
        }
    }
}

/// A full tree: every leaf sits at depth `n`.
pub(crate) fn sample<R: Rng>(operators: u32, n: u32, rng: &mut R) -> TaskContent {
    fn grow<R: Rng>(pool: &[BoolOp], depth: u32, rng: &mut R) -> BoolExpr {
        if depth == 0 {
            return BoolExpr::Lit(rng.gen_bool(0.5));
        }
        match pool[rng.gen_range(0..pool.len())] {
            BoolOp::Not => BoolExpr::Not(Box::new(grow(pool, depth - 1, rng))),
            op => {
                let a = grow(pool, depth - 1, rng);
                let b = grow(pool, depth - 1, rng);
                BoolExpr::Binary(op, Box::new(a), Box::new(b))
            }
        }
    }
    let pool = &BoolOp::POOL[..operators as usize];
    TaskContent::NestedBoolean { expr: grow(pool, n, rng) }
}

fn label(values: &[bool]) -> String {
    values.iter().map(|&v| if v { 'T' } else { 'F' }).collect()
}

/// State `i` is the vector of node values at depth `N - i`; each transition
/// evaluates one level of operators.
pub(crate) fn build(expr: &BoolExpr) -> Result<Built, TaskError> {
    let depth = expr.depth();
    if depth == 0 {
        return Err(TaskError::ContentMismatch("expression has no operators".into()));
    }
    let states: Vec<String> = (0..=depth)
        .rev()
        .map(|level| {
            let mut v = Vec::new();
            expr.level_values(level, &mut v);
            label(&v)
        })
        .collect();
    let symbols: Vec<String> = (0..depth).rev().map(|level| format!("evaluate depth {level}")).collect();
    let step = |s: &String, sym: &str| {
        let i = symbols.iter().position(|x| x == sym)?;
        (states[i] == *s).then(|| states[i + 1].clone())
    };
    let decode = |s: &String| match s.as_str() {
        "T" => Some(Answer::Boolean(true)),
        "F" => Some(Answer::Boolean(false)),
        _ => None,
    };
    project(
        RunPath { states: states.clone(), symbols: symbols.clone() },
        step,
        |s| s == "T",
        decode,
    )
}

pub(crate) fn render(expr: &BoolExpr) -> String {
    format!("Evaluate the following boolean expression:\n\ntruth_value = {expr}")
}
