//! Shuffled objects: players trade positions pairwise.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;

use super::words::{join_list, PLAYER_NAMES, POSITIONS};
use super::{Answer, Built, TaskContent, TaskError};
use crate::automata::Dfa;

/// k! states, so the full automaton stays tabulable.
pub(crate) const MAX_OBJECTS: u32 = 7;

pub(crate) fn sample<R: Rng>(objects: u32, n: u32, rng: &mut R) -> TaskContent {
    let k = objects as usize;
    let people: Vec<String> = PLAYER_NAMES.choose_multiple(rng, k).map(|s| s.to_string()).collect();
    let positions: Vec<String> = POSITIONS.choose_multiple(rng, k).map(|s| s.to_string()).collect();
    let swaps = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..k);
            let mut b = rng.gen_range(0..k - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let query = rng.gen_range(0..k);
    TaskContent::Shuffled { people, positions, swaps, query }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Lexicographic rank of a permutation of `0..k`.
fn rank(perm: &[usize]) -> usize {
    let k = perm.len();
    let mut r = 0;
    for i in 0..k {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        r += smaller * factorial(k - 1 - i);
    }
    r
}

fn unrank(mut r: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let f = factorial(k - 1 - i);
        out.push(pool.remove(r / f));
        r %= f;
    }
    out
}

fn pairs_of(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect()
}

/// Swap tables depend only on `k`; they are computed once per process.
fn transition_table(k: usize) -> &'static Vec<Vec<usize>> {
    static TABLES: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        (0..=MAX_OBJECTS as usize)
            .map(|k| {
                let pairs = pairs_of(k);
                (0..factorial(k))
                    .map(|r| {
                        let perm = unrank(r, k);
                        pairs
                            .iter()
                            .map(|&(a, b)| {
                                let mut p = perm.clone();
                                p.swap(a, b);
                                rank(&p)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    });
    &tables[k]
}

/// A state is the full assignment `person -> position`; each unordered pair
/// of people is a symbol.
pub(crate) fn build(
    people: &[String],
    positions: &[String],
    swaps: &[(usize, usize)],
    query: usize,
) -> Result<Built, TaskError> {
    let k = people.len();
    if k < 2 || k > MAX_OBJECTS as usize || positions.len() != k || query >= k {
        return Err(TaskError::ContentMismatch(format!(
            "need 2..={MAX_OBJECTS} people with matching positions and a valid query"
        )));
    }
    let pairs = pairs_of(k);
    let count = factorial(k);
    let delta = transition_table(k).clone();
    let state_answers = (0..count)
        .map(|r| Some(Answer::Text(positions[unrank(r, k)[query]].clone())))
        .collect();
    let alphabet = pairs.iter().map(|&(a, b)| format!("{}<->{}", people[a], people[b])).collect();
    let input = swaps
        .iter()
        .map(|&(a, b)| {
            let key = (a.min(b), a.max(b));
            pairs
                .iter()
                .position(|&p| p == key && a != b)
                .ok_or_else(|| TaskError::ContentMismatch(format!("invalid swap ({a}, {b})")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dfa = Dfa::new(count, alphabet, delta, 0, [])?;
    Ok(Built { dfa, input, state_answers })
}

pub(crate) fn render(people: &[String], positions: &[String], swaps: &[(usize, usize)], query: usize) -> String {
    let assignments: Vec<String> =
        people.iter().zip(positions).map(|(p, pos)| format!("{p} is playing {pos}")).collect();
    let trades: Vec<String> = swaps
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let lead = if i == 0 {
                "First"
            } else if i + 1 == swaps.len() {
                "Finally"
            } else {
                "Then"
            };
            format!("{lead}, {} and {} trade positions.", people[a], people[b])
        })
        .collect();
    format!(
        "{} are on the same team in a soccer match. At the start of the match, they are each assigned to a position: {}.\n\
As the game progresses, pairs of players occasionally swap positions.  {}\n\
At the end of the match, what position is {} playing?",
        join_list(people),
        join_list(&assignments),
        trades.join(" "),
        people[query]
    )
}
