//! Dyck-D strings: balanced brackets with bounded nesting depth.

use std::collections::HashMap;

use rand::Rng;

use super::{Answer, Built, TaskContent, TaskError};
use crate::automata::Dfa;

pub(crate) const MAX_DEPTH: u32 = 6;

const PAIRS: [(char, char); 4] = [('(', ')'), ('[', ']'), ('{', '}'), ('<', '>')];

fn classify(c: char) -> Option<(usize, bool)> {
    PAIRS.iter().enumerate().find_map(|(t, &(o, cl))| {
        if c == o {
            Some((t, true))
        } else if c == cl {
            Some((t, false))
        } else {
            None
        }
    })
}

fn is_balanced(text: &str) -> bool {
    let mut stack = Vec::new();
    for c in text.chars() {
        match classify(c) {
            Some((t, true)) => stack.push(t),
            Some((t, false)) => {
                if stack.pop() != Some(t) {
                    return false;
                }
            }
            None => return false,
        }
    }
    stack.is_empty()
}

fn nesting_depth(text: &str) -> usize {
    let mut h: i64 = 0;
    let mut max = 0;
    for c in text.chars() {
        h += if matches!(classify(c), Some((_, true))) { 1 } else { -1 };
        max = max.max(h.max(0) as usize);
    }
    max
}

/// Uniform over balanced strings of length `n` with depth <= `depth` over
/// the first `types` bracket pairs, via completion counts by height.
fn sample_balanced<R: Rng>(depth: u32, types: u32, n: u32, rng: &mut R) -> String {
    let n = n as usize;
    let d = depth as usize;
    let t = types as f64;
    // ways[i][h]: weighted completions of positions i..n starting at height h
    let mut ways = vec![vec![0.0f64; d + 2]; n + 1];
    ways[n][0] = 1.0;
    for i in (0..n).rev() {
        for h in 0..=d {
            let up = if h < d { t * ways[i + 1][h + 1] } else { 0.0 };
            let down = if h > 0 { ways[i + 1][h - 1] } else { 0.0 };
            ways[i][h] = up + down;
        }
    }
    let mut out = String::with_capacity(n);
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        let h = stack.len();
        let up = if h < d { t * ways[i + 1][h + 1] } else { 0.0 };
        let down = if h > 0 { ways[i + 1][h - 1] } else { 0.0 };
        if rng.gen::<f64>() * (up + down) < up {
            let ty = rng.gen_range(0..types as usize);
            stack.push(ty);
            out.push(PAIRS[ty].0);
        } else {
            let ty = stack.pop().expect("height > 0 when closing");
            out.push(PAIRS[ty].1);
        }
    }
    out
}

#[derive(Clone, Copy)]
enum Corruption {
    Swap,
    Flip,
    Substitute,
}

fn corrupt<R: Rng>(text: &str, types: u32, rng: &mut R) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    let options: &[Corruption] = if types >= 2 {
        &[Corruption::Swap, Corruption::Flip, Corruption::Substitute]
    } else {
        &[Corruption::Swap, Corruption::Flip]
    };
    for _ in 0..64 {
        let mut c = chars.clone();
        match options[rng.gen_range(0..options.len())] {
            Corruption::Swap => {
                let i = rng.gen_range(0..c.len());
                let j = rng.gen_range(0..c.len());
                c.swap(i, j);
            }
            Corruption::Flip => {
                let i = rng.gen_range(0..c.len());
                let (t, open) = classify(c[i]).expect("bracket");
                c[i] = if open { PAIRS[t].1 } else { PAIRS[t].0 };
            }
            Corruption::Substitute => {
                let i = rng.gen_range(0..c.len());
                let (t, open) = classify(c[i]).expect("bracket");
                let mut u = rng.gen_range(0..types as usize - 1);
                if u >= t {
                    u += 1;
                }
                c[i] = if open { PAIRS[u].0 } else { PAIRS[u].1 };
            }
        }
        let s: String = c.iter().collect();
        if !is_balanced(&s) {
            return s;
        }
    }
    // flipping one bracket changes the open/close count, which is never balanced
    let (t, open) = classify(chars[0]).expect("bracket");
    chars[0] = if open { PAIRS[t].1 } else { PAIRS[t].0 };
    chars.into_iter().collect()
}

pub(crate) fn sample<R: Rng>(depth: u32, types: u32, n: u32, rng: &mut R) -> Result<TaskContent, TaskError> {
    if n == 0 || n % 2 == 1 {
        return Err(TaskError::Unsatisfiable(format!("dyck length {n} must be even and positive")));
    }
    let balanced = sample_balanced(depth, types, n, rng);
    let text = if rng.gen_bool(0.5) { balanced } else { corrupt(&balanced, types, rng) };
    Ok(TaskContent::Dyck { text })
}

/// States are the bracket stacks of height <= `depth`, plus a reject sink.
/// The empty stack is both start and accepting state.
pub(crate) fn build(depth: u32, types: u32, text: &str) -> Result<Built, TaskError> {
    if is_balanced(text) && nesting_depth(text) > depth as usize {
        return Err(TaskError::ContentMismatch(format!(
            "balanced string nests deeper than the declared depth {depth}"
        )));
    }
    let types = types as usize;
    let mut stacks: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier = 0;
    for _ in 0..depth {
        let end = stacks.len();
        for i in frontier..end {
            for t in 0..types {
                let mut s = stacks[i].clone();
                s.push(t as u8);
                stacks.push(s);
            }
        }
        frontier = end;
    }
    let index: HashMap<&[u8], usize> = stacks.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let sink = stacks.len();
    let mut alphabet = Vec::with_capacity(2 * types);
    for &(o, c) in &PAIRS[..types] {
        alphabet.push(o.to_string());
        alphabet.push(c.to_string());
    }
    let mut delta = vec![vec![sink; alphabet.len()]; stacks.len() + 1];
    for (q, s) in stacks.iter().enumerate() {
        for t in 0..types {
            let mut pushed = s.clone();
            pushed.push(t as u8);
            if let Some(&to) = index.get(pushed.as_slice()) {
                delta[q][2 * t] = to;
            }
            if s.last() == Some(&(t as u8)) {
                delta[q][2 * t + 1] = index[&s[..s.len() - 1]];
            }
        }
    }
    let input = text
        .chars()
        .map(|c| match classify(c) {
            Some((t, open)) if t < types => Ok(2 * t + usize::from(!open)),
            _ => Err(TaskError::ContentMismatch(format!("character '{c}' is not one of the instance's brackets"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut state_answers: Vec<Option<Answer>> =
        stacks.iter().map(|s| Some(Answer::Boolean(s.is_empty()))).collect();
    state_answers.push(Some(Answer::Boolean(false)));
    let dfa = Dfa::new(stacks.len() + 1, alphabet, delta, 0, [0])?;
    Ok(Built { dfa, input, state_answers })
}

pub(crate) fn render(text: &str) -> String {
    format!(
        "Determine whether the following string belongs to the Dyck language, i.e. is a balanced string of brackets \
such that every single open bracket has a corresponding closed bracket later in the string.\n\nInput: {text}"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn balanced_samples_respect_depth_and_types() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = sample_balanced(2, 3, 20, &mut rng);
            assert_eq!(s.len(), 20);
            assert!(is_balanced(&s));
            assert!(nesting_depth(&s) <= 2);
            assert!(!s.contains('<') && !s.contains('>'));
        }
    }

    #[test]
    fn corruption_is_never_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for types in 1..=4 {
            for _ in 0..200 {
                let s = sample_balanced(3, types, 12, &mut rng);
                assert!(!is_balanced(&corrupt(&s, types, &mut rng)));
            }
        }
    }

    #[test]
    fn dfa_state_count() {
        let b = build(2, 4, "()").unwrap();
        // 1 + 4 + 16 stacks plus the sink
        assert_eq!(b.dfa.state_count(), 22);
        assert!(b.dfa.accepts(&b.input).unwrap());
        let shallow = build(1, 2, "(][)").unwrap();
        assert!(!shallow.dfa.accepts(&shallow.input).unwrap());
        assert!(build(1, 2, "(())").is_err());
    }
}
