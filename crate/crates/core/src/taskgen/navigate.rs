//! Navigate: does a sequence of axis-aligned moves return to the origin?

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::projection::{project, RunPath};
use super::{Answer, Built, TaskContent, TaskError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    Forward,
    Back,
    Up,
    Down,
}

impl Direction {
    /// Directions available with `k_d` dimensions, in axis order.
    fn for_dims(k_d: u32) -> &'static [Direction] {
        use Direction::*;
        const ALL: [Direction; 6] = [Left, Right, Forward, Back, Up, Down];
        &ALL[..2 * k_d as usize]
    }

    fn axis_sign(self) -> (usize, i64) {
        match self {
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
            Direction::Forward => (1, 1),
            Direction::Back => (1, -1),
            Direction::Up => (2, 1),
            Direction::Down => (2, -1),
        }
    }

    fn from_axis_sign(axis: usize, sign: i64) -> Direction {
        match (axis, sign > 0) {
            (0, false) => Direction::Left,
            (0, true) => Direction::Right,
            (1, true) => Direction::Forward,
            (1, false) => Direction::Back,
            (2, true) => Direction::Up,
            _ => Direction::Down,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Forward => "forward",
            Direction::Back => "back",
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub steps: u32,
    pub direction: Direction,
}

impl Move {
    pub fn new(steps: u32, direction: Direction) -> Self {
        Move { steps, direction }
    }

    fn offset(&self) -> [i64; 3] {
        let (axis, sign) = self.direction.axis_sign();
        let mut v = [0; 3];
        v[axis] = sign * self.steps as i64;
        v
    }

    fn from_offset(axis: usize, signed: i64) -> Move {
        Move::new(signed.unsigned_abs() as u32, Direction::from_axis_sign(axis, signed))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let noun = if self.steps == 1 { "step" } else { "steps" };
        write!(f, "Take {} {noun} {}.", self.steps, self.direction)
    }
}

/// Half of the instances (when `n >= 2`) are built as closed walks: moves
/// come in cancelling pairs, plus one cancelling triple on a single axis when
/// `n` is odd, then the order is shuffled. The rest are unconstrained walks.
pub(crate) fn sample<R: Rng>(k_d: u32, k_s: u32, n: u32, rng: &mut R) -> TaskContent {
    let dirs = Direction::for_dims(k_d);
    let closed = n >= 2 && rng.gen_bool(0.5);
    let mut moves = Vec::with_capacity(n as usize);
    if closed {
        let mut remaining = n;
        if n % 2 == 1 {
            // a + b = c with all of a, b, c in 1..=k_s; needs k_s >= 2
            if k_s >= 2 {
                let axis = rng.gen_range(0..k_d as usize);
                let a = rng.gen_range(1..k_s) as i64;
                let b = rng.gen_range(1..=(k_s as i64 - a));
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                moves.push(Move::from_offset(axis, sign * a));
                moves.push(Move::from_offset(axis, sign * b));
                moves.push(Move::from_offset(axis, -sign * (a + b)));
                remaining -= 3;
            } else {
                // unit steps cannot close an odd walk
                moves.push(Move::new(1, *dirs.choose(rng).expect("nonempty")));
                remaining -= 1;
            }
        }
        for _ in 0..remaining / 2 {
            let m = Move::new(rng.gen_range(1..=k_s), *dirs.choose(rng).expect("nonempty"));
            let (axis, sign) = m.direction.axis_sign();
            moves.push(m);
            moves.push(Move::from_offset(axis, -sign * m.steps as i64));
        }
        moves.shuffle(rng);
    } else {
        for _ in 0..n {
            moves.push(Move::new(rng.gen_range(1..=k_s), *dirs.choose(rng).expect("nonempty")));
        }
    }
    TaskContent::Navigate { moves }
}

fn apply(pos: &[i64; 3], m: &Move) -> [i64; 3] {
    let o = m.offset();
    [pos[0] + o[0], pos[1] + o[1], pos[2] + o[2]]
}

pub(crate) fn build(moves: &[Move]) -> Result<Built, TaskError> {
    let mut states = vec![[0i64; 3]];
    for m in moves {
        let next = apply(states.last().expect("nonempty"), m);
        states.push(next);
    }
    let symbols: Vec<String> = moves.iter().map(|m| format!("{} {}", m.direction, m.steps)).collect();
    let by_label: Vec<(String, Move)> = symbols.iter().cloned().zip(moves.iter().copied()).collect();
    let step = |pos: &[i64; 3], sym: &str| {
        by_label.iter().find(|(s, _)| s == sym).map(|(_, m)| apply(pos, m))
    };
    project(
        RunPath { states, symbols },
        step,
        |pos| *pos == [0, 0, 0],
        |pos| Some(Answer::Boolean(*pos == [0, 0, 0])),
    )
}

pub(crate) fn render(moves: &[Move]) -> String {
    let steps: Vec<String> = moves.iter().map(Move::to_string).collect();
    format!(
        "If you follow these instructions, do you return to the starting point? Always face forward. \n\n{}",
        steps.join(" ")
    )
}
