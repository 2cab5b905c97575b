//! The PGSolver text format.
//!
//! ```text
//! parity 2;
//! 0 3 1 1 "a";
//! 1 4 0 0,2 "b";
//! 2 5 1 2;
//! ```
//!
//! Each record is `<id> <priority> <owner> <successor>(,<successor>)*`
//! with an optional quoted name. The header is optional and `start`
//! directives are accepted and ignored. Nodes are numbered densely in
//! ascending order of their ids; the ids themselves are kept for output.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use thiserror::Error;

use crate::game::{NodeId, NodeSpec, ParityGame, Player};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("number does not fit in 64 bits")]
    NumberTooLarge,
    #[error("owner must be 0 or 1, found {0}")]
    InvalidOwner(u64),
    #[error("node {0} has no successors; every node needs at least one move")]
    MissingSuccessor(u64),
    #[error("node {0} is defined twice")]
    DuplicateId(u64),
    #[error("edge {from} -> {to} is listed twice")]
    DuplicateEdge { from: u64, to: u64 },
    #[error("successor {to} of node {from} is not defined")]
    UndefinedSuccessor { from: u64, to: u64 },
    #[error("node id {id} exceeds the declared maximum {max}")]
    IdAboveMaximum { id: u64, max: u64 },
    #[error("unterminated name")]
    UnterminatedName,
    #[error("the file defines no nodes")]
    NoNodes,
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

#[derive(Clone, Copy)]
struct Mark {
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn mark(&self) -> Mark {
        Mark {
            line: self.line,
            column: self.column,
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.mark(), kind)
    }

    fn error_at(&self, at: Mark, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            kind,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_space();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(what)))
        }
    }

    fn at_digit(&mut self) -> bool {
        self.skip_space();
        matches!(self.peek(), Some(c) if c.is_ascii_digit())
    }

    fn number(&mut self, what: &'static str) -> Result<(u64, Mark), ParseError> {
        self.skip_space();
        let at = self.mark();
        if !self.at_digit() {
            return Err(self.error(ParseErrorKind::Expected(what)));
        }
        let mut value: u64 = 0;
        while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or_else(|| self.error_at(at, ParseErrorKind::NumberTooLarge))?;
            self.bump();
        }
        Ok((value, at))
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_space();
        let end = self.pos + word.len();
        let matches = self.text.get(self.pos..end) == Some(word.as_bytes())
            && !matches!(self.text.get(end), Some(c) if c.is_ascii_alphanumeric());
        if matches {
            for _ in 0..word.len() {
                self.bump();
            }
        }
        matches
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let at = self.mark();
        self.bump();
        let mut bytes = Vec::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(at, ParseErrorKind::UnterminatedName)),
                Some(b'"') => break,
                Some(b'\\') => match self.bump() {
                    Some(c) => bytes.push(c),
                    None => return Err(self.error_at(at, ParseErrorKind::UnterminatedName)),
                },
                Some(c) => bytes.push(c),
            }
        }
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }
}

struct Record {
    id: u64,
    at: Mark,
    priority: u64,
    owner: Player,
    successors: Vec<(u64, Mark)>,
    name: Option<String>,
}

/// Parses a game in PGSolver format.
pub fn parse_game(text: &str) -> Result<ParityGame, ParseError> {
    let mut cur = Cursor::new(text);
    let mut max_id = None;
    if cur.keyword("parity") {
        let (max, _) = cur.number("the maximum node id")?;
        cur.expect(b';', "`;` after the header")?;
        max_id = Some(max);
    }

    let mut records: BTreeMap<u64, Record> = BTreeMap::new();
    loop {
        cur.skip_space();
        if cur.peek().is_none() {
            break;
        }
        if cur.keyword("start") {
            cur.number("a start node")?;
            cur.expect(b';', "`;` after the start directive")?;
            continue;
        }
        let record = parse_record(&mut cur)?;
        if let Some(max) = max_id {
            if record.id > max {
                return Err(cur.error_at(
                    record.at,
                    ParseErrorKind::IdAboveMaximum { id: record.id, max },
                ));
            }
        }
        if records.contains_key(&record.id) {
            return Err(cur.error_at(record.at, ParseErrorKind::DuplicateId(record.id)));
        }
        records.insert(record.id, record);
    }
    if records.is_empty() {
        return Err(cur.error(ParseErrorKind::NoNodes));
    }

    let dense: BTreeMap<u64, NodeId> = records
        .keys()
        .enumerate()
        .map(|(i, &id)| (id, NodeId(i)))
        .collect();
    let mut specs = Vec::with_capacity(records.len());
    for record in records.values() {
        let mut successors = Vec::with_capacity(record.successors.len());
        for &(to, at) in &record.successors {
            let target = dense.get(&to).ok_or_else(|| {
                cur.error_at(
                    at,
                    ParseErrorKind::UndefinedSuccessor {
                        from: record.id,
                        to,
                    },
                )
            })?;
            successors.push(*target);
        }
        let mut spec = NodeSpec::new(record.owner, record.priority, successors);
        spec.name = record.name.clone();
        specs.push(spec);
    }
    let ids: Vec<u64> = records.keys().copied().collect();
    Ok(ParityGame::with_ids(specs, ids).expect("records were validated while parsing"))
}

fn parse_record(cur: &mut Cursor<'_>) -> Result<Record, ParseError> {
    let (id, at) = cur.number("a node id")?;
    let (priority, _) = cur.number("a priority")?;
    let (owner, owner_at) = cur.number("an owner (0 or 1)")?;
    let owner = match owner {
        0 => Player::Even,
        1 => Player::Odd,
        other => return Err(cur.error_at(owner_at, ParseErrorKind::InvalidOwner(other))),
    };
    if !cur.at_digit() {
        return Err(cur.error(ParseErrorKind::MissingSuccessor(id)));
    }
    let mut successors = Vec::new();
    let mut seen = HashSet::new();
    loop {
        let (to, to_at) = cur.number("a successor id")?;
        if !seen.insert(to) {
            return Err(cur.error_at(to_at, ParseErrorKind::DuplicateEdge { from: id, to }));
        }
        successors.push((to, to_at));
        if !cur.eat(b',') {
            break;
        }
    }
    cur.skip_space();
    let name = if cur.peek() == Some(b'"') {
        Some(cur.name()?)
    } else {
        None
    };
    cur.expect(b';', "`;` at the end of the node")?;
    Ok(Record {
        id,
        at,
        priority,
        owner,
        successors,
        name,
    })
}

/// Writes `game` in PGSolver format using its external ids.
pub fn emit_game(game: &ParityGame) -> String {
    let mut out = String::new();
    let max = game.external_ids().iter().max().copied().unwrap_or(0);
    let _ = writeln!(out, "parity {max};");
    for v in game.nodes() {
        let succ: Vec<String> = game
            .successors(v)
            .iter()
            .map(|&w| game.external_id(w).to_string())
            .collect();
        let _ = write!(
            out,
            "{} {} {} {}",
            game.external_id(v),
            game.priority(v),
            game.owner(v),
            succ.join(",")
        );
        if let Some(name) = game.name(v) {
            let _ = write!(out, " \"{}\"", escape(name));
        }
        out.push_str(";\n");
    }
    out
}

fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}
