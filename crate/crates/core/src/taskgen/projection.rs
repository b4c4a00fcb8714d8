//! Run-projected automata for tasks whose full state space is impractical to
//! tabulate (displacement grids, expression evaluation states).
//!
//! The states are the distinct semantic states visited by the instance's run
//! plus one absorbing sink. Transitions between tracked states are exact;
//! anything that would leave the tracked set goes to the sink, which carries
//! no answer.

use std::collections::HashMap;
use std::hash::Hash;

use super::{Answer, Built, TaskError};
use crate::automata::Dfa;

pub(crate) struct RunPath<L> {
    /// Semantic states `s_0 .. s_N`.
    pub states: Vec<L>,
    /// Symbol label consumed by each transition, `len == N`.
    pub symbols: Vec<String>,
}

pub(crate) fn project<L, F, A, D>(path: RunPath<L>, step: F, accepting: A, decode: D) -> Result<Built, TaskError>
where
    L: Clone + Eq + Hash,
    F: Fn(&L, &str) -> Option<L>,
    A: Fn(&L) -> bool,
    D: Fn(&L) -> Option<Answer>,
{
    debug_assert_eq!(path.states.len(), path.symbols.len() + 1);
    let mut state_ids: HashMap<L, usize> = HashMap::new();
    let mut labels: Vec<L> = Vec::new();
    for s in &path.states {
        if !state_ids.contains_key(s) {
            state_ids.insert(s.clone(), labels.len());
            labels.push(s.clone());
        }
    }
    let mut symbol_ids: HashMap<&str, usize> = HashMap::new();
    let mut alphabet: Vec<String> = Vec::new();
    for sym in &path.symbols {
        if !symbol_ids.contains_key(sym.as_str()) {
            symbol_ids.insert(sym.as_str(), alphabet.len());
            alphabet.push(sym.clone());
        }
    }
    let sink = labels.len();
    let mut delta = vec![vec![sink; alphabet.len()]; labels.len() + 1];
    for (q, label) in labels.iter().enumerate() {
        for (a, sym) in alphabet.iter().enumerate() {
            if let Some(t) = step(label, sym).and_then(|t| state_ids.get(&t).copied()) {
                delta[q][a] = t;
            }
        }
    }
    let input: Vec<usize> = path.symbols.iter().map(|s| symbol_ids[s.as_str()]).collect();
    let accepting: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| accepting(l))
        .map(|(i, _)| i)
        .collect();
    let mut state_answers: Vec<Option<Answer>> = labels.iter().map(&decode).collect();
    state_answers.push(None);
    let dfa = Dfa::new(labels.len() + 1, alphabet, delta, state_ids[&path.states[0]], accepting)?;
    Ok(Built { dfa, input, state_answers })
}
