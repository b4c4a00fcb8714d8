//! Index tracking and even/odd tracking: a pointer walking a circular array.

use rand::Rng;

use super::{Answer, Built, TaskContent, TaskError};
use crate::automata::Dfa;

pub(crate) const MAX_ARRAY: u64 = 4096;

/// Increments are `c * k_m` with `c` uniform over `±1 ..= ±(k_s - 1)`.
pub(crate) fn sample<R: Rng>(k_s: u32, k_m: u32, n: u32, rng: &mut R) -> TaskContent {
    let increments = (0..n)
        .map(|_| {
            let c = rng.gen_range(1..k_s) as i64;
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            sign * c * k_m as i64
        })
        .collect();
    TaskContent::PointerWalk { increments }
}

/// One state per array slot; the alphabet is the set of distinct increments.
/// Even/odd tracking accepts the even slots and answers with a boolean.
pub(crate) fn build(length: i64, increments: &[i64], parity: bool) -> Result<Built, TaskError> {
    if length < 1 || length as u64 > MAX_ARRAY {
        return Err(TaskError::InvalidSpec(format!("array length {length} out of range")));
    }
    let mut alphabet: Vec<i64> = increments.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let size = length as usize;
    let delta = (0..length)
        .map(|q| alphabet.iter().map(|&c| (q + c).rem_euclid(length) as usize).collect())
        .collect();
    let input = increments
        .iter()
        .map(|c| alphabet.binary_search(c).expect("increment is in the alphabet"))
        .collect();
    let labels = alphabet.iter().map(|c| format!("{c:+}")).collect();
    let (accepting, state_answers): (Vec<usize>, Vec<Option<Answer>>) = if parity {
        (
            (0..size).filter(|q| q % 2 == 0).collect(),
            (0..size).map(|q| Some(Answer::Boolean(q % 2 == 0))).collect(),
        )
    } else {
        (Vec::new(), (0..length).map(|q| Some(Answer::Integer(q))).collect())
    };
    let dfa = Dfa::new(size, labels, delta, 0, accepting)?;
    Ok(Built { dfa, input, state_answers })
}

fn lines(increments: &[i64]) -> String {
    let mut out = String::from("pointer = 0");
    for &c in increments {
        let (op, mag) = if c < 0 { ('-', -c) } else { ('+', c) };
        out.push_str(&format!("\npointer = pointer {op} {mag}"));
    }
    out
}

pub(crate) fn render_index(length: i64, increments: &[i64]) -> String {
    format!(
        "You are given a length-{length} array and must track the index of a 0-indexed pointer to the array. \
The pointer undergoes several modifications. The pointer wraps around the length of the array on both ends, \
so when it reaches {length} it becomes 0, when it reaches {} it becomes 1, when it reaches -1 it becomes {}, etc. \
What is the index of the pointer after all the modifications are complete? Provide the answer in the range [0, {length}).\n\n{}",
        length + 1,
        length - 1,
        lines(increments)
    )
}

pub(crate) fn render_even_odd(length: i64, increments: &[i64]) -> String {
    format!(
        "You are tracking a pointer into a length-{length} array. The pointer is zero-indexed. \
It undergoes several modifications. The pointer wraps around the length of the array on both ends, \
so when it reaches {length} it becomes 0, when it reaches {} it becomes 1, when it reaches -1 it becomes {}, etc. \
After all the modifications are complete, is the final pointer index even?\n\n{}",
        length + 1,
        length - 1,
        lines(increments)
    )
}
