//! Brute-force solvers that read only the prompt text.
//!
//! Nothing here touches the generators' bookkeeping: each kind is re-parsed
//! from its natural-language description and solved directly (modular fold,
//! displacement sum, recursive evaluation, stack scan, permutation
//! application, truth propagation, exhaustive order search).

use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;

use super::{Answer, TaskError, TaskInstance, TaskKind};

pub fn oracle_solve(instance: &TaskInstance) -> Result<Answer, TaskError> {
    oracle_solve_prompt(instance.kind(), &instance.prompt)
}

pub fn oracle_solve_prompt(kind: TaskKind, prompt: &str) -> Result<Answer, TaskError> {
    match kind {
        TaskKind::IndexTracking => pointer_final(prompt).map(Answer::Integer),
        TaskKind::EvenOddTracking => pointer_final(prompt).map(|p| Answer::Boolean(p % 2 == 0)),
        TaskKind::Navigate => navigate(prompt),
        TaskKind::NestedBoolean => boolean(prompt),
        TaskKind::Dyck => dyck(prompt),
        TaskKind::MultiStepArithmetic => arithmetic(prompt),
        TaskKind::ShuffledObjects => shuffled(prompt),
        TaskKind::WebOfLies => web_of_lies(prompt),
        TaskKind::LogicalDeduction => deduction(prompt),
    }
}

fn parse_err(msg: impl Into<String>) -> TaskError {
    TaskError::Parse(msg.into())
}

macro_rules! regex {
    ($re:literal) => {{
        static RE: OnceLock<Regex> = OnceLock::new();
        RE.get_or_init(|| Regex::new($re).expect("valid regex"))
    }};
}

fn pointer_final(prompt: &str) -> Result<i64, TaskError> {
    let len: i64 = regex!(r"length-(\d+) array")
        .captures(prompt)
        .and_then(|c| c[1].parse().ok())
        .ok_or_else(|| parse_err("missing array length"))?;
    if len <= 0 {
        return Err(parse_err("array length must be positive"));
    }
    let mut p: i64 = 0;
    for c in regex!(r"(?m)^pointer = pointer ([+-]) (\d+)$").captures_iter(prompt) {
        let v: i64 = c[2].parse().map_err(|_| parse_err("bad increment"))?;
        p += if &c[1] == "-" { -v } else { v };
        p = p.rem_euclid(len);
    }
    Ok(p)
}

fn navigate(prompt: &str) -> Result<Answer, TaskError> {
    let mut pos = [0i64; 3];
    let mut moves = 0;
    for c in regex!(r"Take (\d+) steps? (left|right|forward|back|up|down)\.").captures_iter(prompt) {
        let v: i64 = c[1].parse().map_err(|_| parse_err("bad step count"))?;
        match &c[2] {
            "right" => pos[0] += v,
            "left" => pos[0] -= v,
            "forward" => pos[1] += v,
            "back" => pos[1] -= v,
            "up" => pos[2] += v,
            _ => pos[2] -= v,
        }
        moves += 1;
    }
    if moves == 0 {
        return Err(parse_err("no moves found"));
    }
    Ok(Answer::Boolean(pos == [0, 0, 0]))
}

fn assignment_line<'a>(prompt: &'a str, lhs: &str) -> Result<&'a str, TaskError> {
    let prefix = format!("{lhs} = ");
    prompt
        .lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .ok_or_else(|| parse_err(format!("missing '{lhs} = ' line")))
}

// ---- boolean expressions -------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum BoolTok {
    Val(bool),
    And,
    Or,
    Xor,
    Not,
    Open,
    Close,
}

fn bool_tokens(src: &str) -> Result<Vec<BoolTok>, TaskError> {
    let spaced = src.replace('(', " ( ").replace(')', " ) ");
    spaced
        .split_whitespace()
        .map(|w| match w {
            "True" => Ok(BoolTok::Val(true)),
            "False" => Ok(BoolTok::Val(false)),
            "and" => Ok(BoolTok::And),
            "or" => Ok(BoolTok::Or),
            "xor" => Ok(BoolTok::Xor),
            "not" => Ok(BoolTok::Not),
            "(" => Ok(BoolTok::Open),
            ")" => Ok(BoolTok::Close),
            other => Err(parse_err(format!("unexpected token '{other}'"))),
        })
        .collect()
}

/// or < xor < and < not
struct BoolParser {
    toks: Vec<BoolTok>,
    pos: usize,
}

impl BoolParser {
    fn peek(&self) -> Option<&BoolTok> {
        self.toks.get(self.pos)
    }

    fn binary(&mut self, level: usize) -> Result<bool, TaskError> {
        const LEVELS: [BoolTok; 3] = [BoolTok::Or, BoolTok::Xor, BoolTok::And];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut v = self.binary(level + 1)?;
        while self.peek() == Some(&LEVELS[level]) {
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            v = match level {
                0 => v || rhs,
                1 => v ^ rhs,
                _ => v && rhs,
            };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<bool, TaskError> {
        match self.toks.get(self.pos).cloned() {
            Some(BoolTok::Not) => {
                self.pos += 1;
                Ok(!self.unary()?)
            }
            Some(BoolTok::Val(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(BoolTok::Open) => {
                self.pos += 1;
                let v = self.binary(0)?;
                if self.peek() != Some(&BoolTok::Close) {
                    return Err(parse_err("unbalanced parentheses"));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(parse_err(format!("unexpected {other:?}"))),
        }
    }
}

fn boolean(prompt: &str) -> Result<Answer, TaskError> {
    let src = assignment_line(prompt, "truth_value")?;
    let mut p = BoolParser { toks: bool_tokens(src)?, pos: 0 };
    let v = p.binary(0)?;
    if p.pos != p.toks.len() {
        return Err(parse_err("trailing tokens in boolean expression"));
    }
    Ok(Answer::Boolean(v))
}

// ---- brackets --------------------------------------------------------------

fn dyck(prompt: &str) -> Result<Answer, TaskError> {
    let input = prompt
        .lines()
        .find_map(|l| l.strip_prefix("Input: "))
        .ok_or_else(|| parse_err("missing 'Input: ' line"))?;
    let mut stack = Vec::new();
    for c in input.trim().chars() {
        match c {
            '(' | '[' | '{' | '<' => stack.push(c),
            ')' | ']' | '}' | '>' => {
                let want = match c {
                    ')' => '(',
                    ']' => '[',
                    '}' => '{',
                    _ => '<',
                };
                if stack.pop() != Some(want) {
                    return Ok(Answer::Boolean(false));
                }
            }
            other => return Err(parse_err(format!("unexpected character '{other}'"))),
        }
    }
    Ok(Answer::Boolean(stack.is_empty()))
}

// ---- arithmetic ------------------------------------------------------------

struct ArithParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ArithParser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn overflow() -> TaskError {
        parse_err("arithmetic overflow")
    }

    fn expr(&mut self) -> Result<i64, TaskError> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == b'+' { v.checked_add(rhs) } else { v.checked_sub(rhs) }.ok_or_else(Self::overflow)?;
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<i64, TaskError> {
        let mut v = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            v = v.checked_mul(self.factor()?).ok_or_else(Self::overflow)?;
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<i64, TaskError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(parse_err("unbalanced parentheses"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                self.factor()?.checked_neg().ok_or_else(Self::overflow)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii digits")
                    .parse()
                    .map_err(|_| parse_err("integer literal out of range"))
            }
            other => Err(parse_err(format!("unexpected byte {other:?} in arithmetic"))),
        }
    }
}

fn arithmetic(prompt: &str) -> Result<Answer, TaskError> {
    let src = assignment_line(prompt, "answer")?;
    let mut p = ArithParser { src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(parse_err("trailing input in arithmetic expression"));
    }
    Ok(Answer::Integer(v))
}

// ---- shuffled objects ------------------------------------------------------

fn shuffled(prompt: &str) -> Result<Answer, TaskError> {
    let mut holding: HashMap<String, String> = HashMap::new();
    for c in regex!(r"([A-Z][a-z]+) is playing ([a-z]+(?: [a-z]+)*)").captures_iter(prompt) {
        let pos = c[2].trim_end_matches(" and").to_string();
        holding.insert(c[1].to_string(), pos);
    }
    if holding.len() < 2 {
        return Err(parse_err("could not read the initial assignment"));
    }
    for c in regex!(r"([A-Z][a-z]+) and ([A-Z][a-z]+) trade positions").captures_iter(prompt) {
        let a = holding.get(&c[1]).cloned().ok_or_else(|| parse_err(format!("unknown player {}", &c[1])))?;
        let b = holding.get(&c[2]).cloned().ok_or_else(|| parse_err(format!("unknown player {}", &c[2])))?;
        holding.insert(c[1].to_string(), b);
        holding.insert(c[2].to_string(), a);
    }
    let who = regex!(r"what position is ([A-Z][a-z]+) playing\?")
        .captures(prompt)
        .ok_or_else(|| parse_err("missing question"))?;
    holding
        .get(&who[1])
        .map(|p| Answer::Text(p.clone()))
        .ok_or_else(|| parse_err(format!("unknown player {}", &who[1])))
}

// ---- web of lies -----------------------------------------------------------

fn web_of_lies(prompt: &str) -> Result<Answer, TaskError> {
    let mut known: HashMap<String, bool> = HashMap::new();
    let first = regex!(r"Question: ([A-Z][a-z]+) (tells the truth|lies)\.")
        .captures(prompt)
        .ok_or_else(|| parse_err("missing anchoring fact"))?;
    known.insert(first[1].to_string(), &first[2] == "tells the truth");
    let claims: Vec<(String, String, bool)> = regex!(r"([A-Z][a-z]+) says ([A-Z][a-z]+) (tells the truth|lies)\.")
        .captures_iter(prompt)
        .map(|c| (c[1].to_string(), c[2].to_string(), &c[3] == "tells the truth"))
        .collect();
    // propagate until nothing changes; claim order in the text is irrelevant
    loop {
        let mut changed = false;
        for (speaker, about, says_truthful) in &claims {
            if known.contains_key(speaker) {
                continue;
            }
            if let Some(&t) = known.get(about) {
                known.insert(speaker.clone(), t == *says_truthful);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let q = regex!(r"Does ([A-Z][a-z]+) tell the truth\?")
        .captures(prompt)
        .ok_or_else(|| parse_err("missing question"))?;
    known
        .get(&q[1])
        .map(|&t| Answer::Boolean(t))
        .ok_or_else(|| parse_err(format!("truth of {} is not determined", &q[1])))
}

// ---- logical deduction -----------------------------------------------------

fn small_number(word: &str) -> Option<u32> {
    const WORDS: [&str; 10] = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"];
    WORDS.iter().position(|w| *w == word).map(|i| i as u32)
}

fn ordinal_number(word: &str) -> Option<u32> {
    const WORDS: [&str; 10] =
        ["zeroth", "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth"];
    WORDS.iter().position(|w| *w == word).map(|i| i as u32)
}

fn rank_of_phrase(phrase: &str, k: u32) -> Option<u32> {
    match phrase {
        "most expensive" => Some(1),
        "cheapest" => Some(k),
        p => ordinal_number(p.strip_suffix("-most expensive")?),
    }
}

enum Constraint {
    Rank(usize, u32),
    /// rank[a] + diff == rank[b]
    Diff(usize, usize, i64),
}

fn deduction(prompt: &str) -> Result<Answer, TaskError> {
    let head = regex!(r"sells (\w+) fruits: ([a-z ,]+)\.")
        .captures(prompt)
        .ok_or_else(|| parse_err("missing object list"))?;
    let k = small_number(&head[1]).ok_or_else(|| parse_err("bad object count"))?;
    let fruits: Vec<String> = head[2]
        .replace(", and ", ", ")
        .replace(" and ", ", ")
        .split(", ")
        .map(|s| s.trim().to_string())
        .collect();
    if fruits.len() != k as usize {
        return Err(parse_err(format!("expected {k} objects, read {}", fruits.len())));
    }
    let idx = |name: &str| {
        fruits.iter().position(|f| f == name).ok_or_else(|| parse_err(format!("unknown object {name}")))
    };
    let mut constraints = Vec::new();
    for c in regex!(r"The (\w+) are (?:the )?(most expensive|cheapest|\w+-most expensive)\.").captures_iter(prompt) {
        let r = rank_of_phrase(&c[2], k).ok_or_else(|| parse_err("bad rank phrase"))?;
        constraints.push(Constraint::Rank(idx(&c[1])?, r));
    }
    for c in regex!(r"(\w+) are (\w+) dollars (more expensive|cheaper) than (\w+)\.").captures_iter(prompt) {
        let d = small_number(&c[2]).ok_or_else(|| parse_err("bad dollar amount"))? as i64;
        let (a, b) = (idx(&c[1])?, idx(&c[4])?);
        // pricier means a smaller rank number
        let diff = if &c[3] == "more expensive" { d } else { -d };
        constraints.push(Constraint::Diff(a, b, diff));
    }
    let q = regex!(r"Which fruits are (most expensive|cheapest|\w+-most expensive)\?")
        .captures(prompt)
        .ok_or_else(|| parse_err("missing question"))?;
    let want = rank_of_phrase(&q[1], k).ok_or_else(|| parse_err("bad question rank"))?;

    // fill ranks 1..=k with objects; a constraint is checked once both ends are placed
    let mut rank_of: Vec<Option<u32>> = vec![None; k as usize];
    let mut solutions: Vec<Vec<Option<u32>>> = Vec::new();
    fn ok(c: &Constraint, rank_of: &[Option<u32>]) -> bool {
        match *c {
            Constraint::Rank(o, r) => rank_of[o].is_none_or(|x| x == r),
            Constraint::Diff(a, b, d) => match (rank_of[a], rank_of[b]) {
                (Some(ra), Some(rb)) => ra as i64 + d == rb as i64,
                _ => true,
            },
        }
    }
    fn fill(r: u32, k: u32, rank_of: &mut Vec<Option<u32>>, cs: &[Constraint], out: &mut Vec<Vec<Option<u32>>>) {
        if out.len() > 1 {
            return;
        }
        if r > k {
            out.push(rank_of.clone());
            return;
        }
        for o in 0..k as usize {
            if rank_of[o].is_some() {
                continue;
            }
            rank_of[o] = Some(r);
            if cs.iter().all(|c| ok(c, rank_of)) {
                fill(r + 1, k, rank_of, cs, out);
            }
            rank_of[o] = None;
        }
    }
    fill(1, k, &mut rank_of, &constraints, &mut solutions);
    match solutions.as_slice() {
        [only] => {
            let o = only.iter().position(|r| *r == Some(want)).expect("complete assignment");
            Ok(Answer::Text(fruits[o].clone()))
        }
        [] => Err(parse_err("statements are inconsistent")),
        _ => Err(parse_err("statements admit more than one order")),
    }
}
