//! Web of lies: a chain of people vouching for (or against) the previous one.

use rand::seq::SliceRandom;
use rand::Rng;

use super::words::LIAR_NAMES;
use super::{Answer, Built, TaskContent, TaskError};
use crate::automata::Dfa;

const START: usize = 0;
const TRUTHFUL: usize = 1;
const LIAR: usize = 2;

pub(crate) fn sample<R: Rng>(people: u32, rng: &mut R) -> TaskContent {
    let names = LIAR_NAMES.choose_multiple(rng, people as usize).map(|s| s.to_string()).collect();
    let first_truthful = rng.gen_bool(0.5);
    let claims = (1..people).map(|_| rng.gen_bool(0.5)).collect();
    TaskContent::WebOfLies { people: names, first_truthful, claims }
}

/// Three states {start, truthful, liar} over symbols {"tells the truth", "lies"}.
/// The first symbol is the absolute fact; each later one is a claim about the
/// previous person, which flips the state when it says "lies".
pub(crate) fn build(people: &[String], first_truthful: bool, claims: &[bool]) -> Result<Built, TaskError> {
    if people.len() < 2 || claims.len() + 1 != people.len() {
        return Err(TaskError::ContentMismatch(format!(
            "{} people need {} claims, got {}",
            people.len(),
            people.len().saturating_sub(1),
            claims.len()
        )));
    }
    let alphabet = vec!["tells the truth".to_string(), "lies".to_string()];
    let delta = vec![vec![TRUTHFUL, LIAR], vec![TRUTHFUL, LIAR], vec![LIAR, TRUTHFUL]];
    let symbol = |truthful: bool| if truthful { 0 } else { 1 };
    let input = std::iter::once(symbol(first_truthful)).chain(claims.iter().map(|&c| symbol(c))).collect();
    let state_answers = vec![None, Some(Answer::Boolean(true)), Some(Answer::Boolean(false))];
    let dfa = Dfa::new(3, alphabet, delta, START, [TRUTHFUL])?;
    Ok(Built { dfa, input, state_answers })
}

pub(crate) fn render(people: &[String], first_truthful: bool, claims: &[bool]) -> String {
    let verb = |t: bool| if t { "tells the truth" } else { "lies" };
    let mut sentences = vec![format!("{} {}.", people[0], verb(first_truthful))];
    for (i, &c) in claims.iter().enumerate() {
        sentences.push(format!("{} says {} {}.", people[i + 1], people[i], verb(c)));
    }
    format!(
        "Question: {} Does {} tell the truth?",
        sentences.join(" "),
        people.last().expect("at least two people")
    )
}
