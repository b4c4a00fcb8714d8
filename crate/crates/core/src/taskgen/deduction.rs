//! Logical deduction: recover a price ordering from one absolute rank and
//! pairwise dollar offsets. Prices sit one dollar apart, so a dollar offset is
//! a rank difference.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::words::{cardinal, join_list, ordinal, FRUITS};
use super::{Answer, Built, TaskContent, TaskError};
use crate::automata::Dfa;

pub(crate) const MAX_OBJECTS: u32 = 9;

/// Ranks count from 1 = most expensive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statement {
    Rank { object: usize, rank: u32 },
    /// `subject` costs `dollars` more (or less, when `pricier` is false) than `other`.
    Offset { subject: usize, other: usize, dollars: u32, pricier: bool },
}

pub(crate) fn sample<R: Rng>(objects: u32, n: u32, rng: &mut R) -> TaskContent {
    let k = objects as usize;
    let names: Vec<String> = FRUITS.choose_multiple(rng, k).map(|s| s.to_string()).collect();
    loop {
        let mut ranks: Vec<u32> = (1..=objects).collect();
        ranks.shuffle(rng);
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(rng);
        // order[0] is the anchor, order[..n] the chain ending at the query
        let chain = &order[..n as usize];
        let mut statements = vec![Statement::Rank { object: chain[0], rank: ranks[chain[0]] }];
        let edge = |a: usize, b: usize, rng: &mut R| {
            let (subject, other) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            Statement::Offset {
                subject,
                other,
                dollars: ranks[subject].abs_diff(ranks[other]),
                pricier: ranks[subject] < ranks[other],
            }
        };
        for w in chain.windows(2) {
            statements.push(edge(w[0], w[1], rng));
        }
        for i in n as usize..k {
            let parent = order[rng.gen_range(0..i)];
            statements.push(edge(order[i], parent, rng));
        }
        statements.shuffle(rng);
        if count_orders(k, &statements, 2) == 1 {
            let query_rank = ranks[chain[n as usize - 1]];
            return TaskContent::Deduction { objects: names, statements, query_rank };
        }
    }
}

/// Number of rank assignments consistent with `statements`, stopping at `limit`.
pub(crate) fn count_orders(k: usize, statements: &[Statement], limit: usize) -> usize {
    fn consistent(ranks: &[Option<u32>], s: &Statement) -> bool {
        match *s {
            Statement::Rank { object, rank } => ranks[object].is_none_or(|r| r == rank),
            Statement::Offset { subject, other, dollars, pricier } => match (ranks[subject], ranks[other]) {
                (Some(a), Some(b)) => {
                    if pricier {
                        a + dollars == b
                    } else {
                        a == b + dollars
                    }
                }
                _ => true,
            },
        }
    }
    fn search(i: usize, ranks: &mut Vec<Option<u32>>, used: &mut Vec<bool>, st: &[Statement], limit: usize) -> usize {
        let k = ranks.len();
        if i == k {
            return 1;
        }
        let mut found = 0;
        for r in 1..=k as u32 {
            if used[r as usize] {
                continue;
            }
            ranks[i] = Some(r);
            if st.iter().all(|s| consistent(ranks, s)) {
                used[r as usize] = true;
                found += search(i + 1, ranks, used, st, limit - found);
                used[r as usize] = false;
                if found >= limit {
                    ranks[i] = None;
                    return found;
                }
            }
            ranks[i] = None;
        }
        found
    }
    search(0, &mut vec![None; k], &mut vec![false; k + 1], statements, limit)
}

/// Symbol the chain walker reads when stepping to an object `d` ranks away.
fn step_symbol(pricier: bool, d: u32) -> String {
    if pricier {
        format!("pricier by {d}")
    } else {
        format!("cheaper by {d}")
    }
}

/// States: start, one per rank, and a sink. The run reads the absolute
/// statement, then one offset per hop from the anchor to the queried object.
pub(crate) fn build(objects: &[String], statements: &[Statement], query_rank: u32) -> Result<Built, TaskError> {
    let k = objects.len();
    let mismatch = |m: String| TaskError::ContentMismatch(m);
    if !(2..=MAX_OBJECTS as usize).contains(&k) || !(1..=k as u32).contains(&query_rank) {
        return Err(mismatch(format!("need 2..={MAX_OBJECTS} objects and a query rank in range")));
    }
    // propagate ranks outward from the absolute statements, remembering hops
    let mut rank: Vec<Option<u32>> = vec![None; k];
    let mut hops: Vec<Vec<String>> = vec![Vec::new(); k];
    let mut queue = VecDeque::new();
    for s in statements {
        if let Statement::Rank { object, rank: r } = *s {
            if object >= k {
                return Err(mismatch(format!("object index {object} out of range")));
            }
            if rank[object].is_none() {
                rank[object] = Some(r);
                hops[object] = vec![format!("rank {r}")];
                queue.push_back(object);
            }
        }
    }
    while let Some(a) = queue.pop_front() {
        let ra = rank[a].expect("queued objects are ranked");
        for s in statements {
            if let Statement::Offset { subject, other, dollars, pricier } = *s {
                // from the known object, step to the unknown one
                let (next, next_pricier) = if other == a {
                    (subject, pricier)
                } else if subject == a {
                    (other, !pricier)
                } else {
                    continue;
                };
                if next >= k || rank[next].is_some() {
                    continue;
                }
                let r = if next_pricier { ra.checked_sub(dollars) } else { Some(ra + dollars) };
                let r = r.filter(|r| (1..=k as u32).contains(r)).ok_or_else(|| {
                    mismatch("offset statements push a rank outside the scale".into())
                })?;
                rank[next] = Some(r);
                let mut h = hops[a].clone();
                h.push(step_symbol(next_pricier, dollars));
                hops[next] = h;
                queue.push_back(next);
            }
        }
    }
    let mut at_rank: Vec<Option<usize>> = vec![None; k + 1];
    for (obj, r) in rank.iter().enumerate() {
        if let Some(r) = r {
            at_rank[*r as usize] = Some(obj);
        }
    }
    let query_obj = at_rank[query_rank as usize]
        .ok_or_else(|| mismatch(format!("no object is determined at rank {query_rank}")))?;

    let mut alphabet: Vec<String> = (1..=k as u32).map(|r| format!("rank {r}")).collect();
    for d in 1..k as u32 {
        alphabet.push(step_symbol(true, d));
        alphabet.push(step_symbol(false, d));
    }
    let sink = k + 1;
    let mut delta = vec![vec![sink; alphabet.len()]; k + 2];
    for (q, row) in delta.iter_mut().enumerate().take(k + 1) {
        for r in 1..=k {
            row[r - 1] = r;
        }
        if q == 0 {
            continue;
        }
        for d in 1..k {
            if q > d {
                row[k + 2 * (d - 1)] = q - d;
            }
            if q + d <= k {
                row[k + 2 * (d - 1) + 1] = q + d;
            }
        }
    }
    let input = hops[query_obj]
        .iter()
        .map(|s| alphabet.iter().position(|a| a == s).expect("hop symbols are in the alphabet"))
        .collect();
    let mut state_answers = vec![None];
    state_answers.extend((1..=k).map(|r| at_rank[r].map(|o| Answer::Text(objects[o].clone()))));
    state_answers.push(None);
    let dfa = Dfa::new(k + 2, alphabet, delta, 0, [])?;
    Ok(Built { dfa, input, state_answers })
}

fn rank_phrase(rank: u32, k: u32) -> String {
    if rank == 1 {
        "most expensive".to_string()
    } else if rank == k {
        "cheapest".to_string()
    } else {
        format!("{}-most expensive", ordinal(rank))
    }
}

pub(crate) fn render(objects: &[String], statements: &[Statement], query_rank: u32) -> String {
    let k = objects.len() as u32;
    let sentences: Vec<String> = statements
        .iter()
        .map(|s| match *s {
            Statement::Rank { object, rank } => {
                let article = if rank == 1 || rank == k { "the " } else { "" };
                format!("The {} are {article}{}.", objects[object], rank_phrase(rank, k))
            }
            Statement::Offset { subject, other, dollars, pricier } => format!(
                "{} are {} dollars {} {}.",
                objects[subject],
                cardinal(dollars),
                if pricier { "more expensive than" } else { "cheaper than" },
                objects[other]
            ),
        })
        .collect();
    format!(
        "The following is a logical deduction task which requires deducing the order of a sequence of objects.\n\n\
The following sentences each describe a set of {count} objects arranged in a fixed order. \
The statements are logically consistent within each paragraph. A fruit stand sells {count} fruits: {list}. \
{body} Which fruits are {question}?",
        count = cardinal(k),
        list = join_list(objects),
        body = sentences.join(" "),
        question = rank_phrase(query_rank, k),
    )
}
