//! Multi-step arithmetic: parenthesized four-atom groups joined by operators.

use std::fmt;

use rand::Rng;

use super::projection::{project, RunPath};
use super::{Answer, Built, TaskContent, TaskError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub const POOL: [ArithOp; 3] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul];
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArithGroup {
    pub atoms: [i64; 4],
    pub ops: [ArithOp; 3],
}

/// Running state of a precedence-respecting left fold: value = sum + term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Fold {
    sum: i64,
    term: i64,
}

impl Fold {
    const START: Fold = Fold { sum: 0, term: 0 };

    fn push(self, op: ArithOp, x: i64) -> Option<Fold> {
        Some(match op {
            ArithOp::Mul => Fold { sum: self.sum, term: self.term.checked_mul(x)? },
            ArithOp::Add => Fold { sum: self.sum.checked_add(self.term)?, term: x },
            ArithOp::Sub => Fold { sum: self.sum.checked_add(self.term)?, term: x.checked_neg()? },
        })
    }

    fn value(self) -> Option<i64> {
        self.sum.checked_add(self.term)
    }
}

impl ArithGroup {
    fn value(&self) -> Option<i64> {
        let mut f = Fold::START.push(ArithOp::Add, self.atoms[0])?;
        for (op, &x) in self.ops.iter().zip(&self.atoms[1..]) {
            f = f.push(*op, x)?;
        }
        f.value()
    }
}

impl fmt::Display for ArithGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.atoms;
        let [o1, o2, o3] = self.ops;
        write!(f, "({a} {o1} {b} {o2} {c} {o3} {d})")
    }
}

/// Retries on overflow; `joins.len() == n - 1`.
pub(crate) fn sample<R: Rng>(range: u32, operators: u32, n: u32, rng: &mut R) -> Result<TaskContent, TaskError> {
    let pool = &ArithOp::POOL[..operators as usize];
    let r = range as i64;
    for _ in 0..1000 {
        let groups: Vec<ArithGroup> = (0..n)
            .map(|_| ArithGroup {
                atoms: [(); 4].map(|_| rng.gen_range(-r..=r)),
                ops: [(); 3].map(|_| pool[rng.gen_range(0..pool.len())]),
            })
            .collect();
        let joins: Vec<ArithOp> = (1..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        if fold_states(&groups, &joins).is_some() {
            return Ok(TaskContent::Arithmetic { groups, joins });
        }
    }
    Err(TaskError::Unsatisfiable(format!(
        "could not draw {n} groups over [-{range}, {range}] without 64-bit overflow"
    )))
}

fn fold_states(groups: &[ArithGroup], joins: &[ArithOp]) -> Option<Vec<Fold>> {
    let mut states = vec![Fold::START];
    let mut f = Fold::START;
    for (i, g) in groups.iter().enumerate() {
        let op = if i == 0 { ArithOp::Add } else { joins[i - 1] };
        f = f.push(op, g.value()?)?;
        f.value()?;
        states.push(f);
    }
    Some(states)
}

/// One transition per group, folding its value into the running total.
pub(crate) fn build(groups: &[ArithGroup], joins: &[ArithOp]) -> Result<Built, TaskError> {
    if groups.is_empty() || joins.len() + 1 != groups.len() {
        return Err(TaskError::ContentMismatch(format!(
            "{} groups need {} joining operators, got {}",
            groups.len(),
            groups.len().saturating_sub(1),
            joins.len()
        )));
    }
    let states = fold_states(groups, joins)
        .ok_or_else(|| TaskError::ContentMismatch("expression overflows 64-bit integers".into()))?;
    let symbols: Vec<String> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| if i == 0 { format!("#{i} {g}") } else { format!("#{i} {} {g}", joins[i - 1]) })
        .collect();
    let step = |s: &Fold, sym: &str| {
        let i = symbols.iter().position(|x| x == sym)?;
        (states[i] == *s).then_some(states[i + 1])
    };
    project(
        RunPath { states: states.clone(), symbols: symbols.clone() },
        step,
        |_| false,
        |f| f.value().map(Answer::Integer),
    )
}

pub(crate) fn render(groups: &[ArithGroup], joins: &[ArithOp]) -> String {
    let mut expr = groups[0].to_string();
    for (op, g) in joins.iter().zip(&groups[1..]) {
        expr.push_str(&format!(" {op} {g}"));
    }
    format!("Solve the following multi-step arithmetic problem:\n\nanswer = {expr}")
}
