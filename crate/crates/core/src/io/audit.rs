//! Offline audit of solver traces.
//!
//! The audit reads the size column of a trace and checks that it increases
//! strictly in lexicographic order, using its own parser and comparison.
//! Given the game, it also replays the recorded steps, recounts the size
//! tuple from scratch after each one and re-checks the recorded safety
//! claims.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::game::{ParityGame, Player};
use crate::justification::{DirectJustification, Justification, Update};
use crate::justify::TRACE_HEADER;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("trace does not start with the expected header")]
    Header,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: step {step} cannot be replayed: {message}")]
    Replay {
        line: usize,
        step: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub steps: usize,
    /// First step whose size does not exceed the previous one.
    pub first_non_increase: Option<usize>,
    /// Steps recorded as unsafe.
    pub unsafe_claims: Vec<usize>,
    /// Whether the steps were replayed against a game.
    pub replayed: bool,
    /// Steps whose recorded size differs from the recount.
    pub size_mismatches: Vec<usize>,
    /// Steps recorded as safe whose replayed justification is not.
    pub false_safety_claims: Vec<usize>,
}

impl AuditReport {
    pub fn monotone(&self) -> bool {
        self.first_non_increase.is_none()
    }

    pub fn passed(&self) -> bool {
        self.monotone()
            && self.unsafe_claims.is_empty()
            && self.size_mismatches.is_empty()
            && self.false_safety_claims.is_empty()
    }
}

/// A justification level as written in traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Lvl {
    Finite(u64),
    Infinite,
}

type Counts = BTreeMap<Lvl, usize>;

/// Compares two size tuples level by level, starting at the highest level.
fn compare(a: &Counts, b: &Counts) -> Ordering {
    let mut levels: Vec<Lvl> = a.keys().chain(b.keys()).copied().collect();
    levels.sort_unstable_by(|x, y| y.cmp(x));
    levels.dedup();
    for l in levels {
        let x = a.get(&l).copied().unwrap_or(0);
        let y = b.get(&l).copied().unwrap_or(0);
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

fn parse_counts(field: &str) -> Option<Counts> {
    let mut counts = Counts::new();
    if field == "-" {
        return Some(counts);
    }
    for entry in field.split(',') {
        let (level, count) = entry.split_once('=')?;
        let level = match level {
            "inf" => Lvl::Infinite,
            l => Lvl::Finite(l.parse().ok()?),
        };
        let count: usize = count.parse().ok()?;
        if count > 0 && counts.insert(level, count).is_some() {
            return None;
        }
    }
    Some(counts)
}

fn parse_ids(field: &str) -> Option<Vec<u64>> {
    if field == "-" {
        return Some(Vec::new());
    }
    field.split(',').map(|s| s.parse().ok()).collect()
}

struct Row {
    line: usize,
    step: usize,
    node: u64,
    targets: Vec<u64>,
    winner: Player,
    reset: Vec<u64>,
    size: Counts,
    safe: Option<bool>,
}

fn parse_rows(text: &str) -> Result<Vec<Row>, AuditError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == TRACE_HEADER => {}
        _ => return Err(AuditError::Header),
    }
    let mut rows = Vec::new();
    for (index, raw) in lines {
        let line = index + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let syntax = |message: &str| AuditError::Syntax {
            line,
            message: message.to_owned(),
        };
        let cols: Vec<&str> = raw.trim_end().split('\t').collect();
        if cols.len() != 8 {
            return Err(syntax("expected 8 tab-separated columns"));
        }
        let step = cols[0].parse().map_err(|_| syntax("invalid step number"))?;
        let node = cols[1].parse().map_err(|_| syntax("invalid node"))?;
        let targets = parse_ids(cols[2]).ok_or_else(|| syntax("invalid targets"))?;
        let winner = match cols[3] {
            "0" => Player::Even,
            "1" => Player::Odd,
            _ => return Err(syntax("winner must be 0 or 1")),
        };
        let reset_count: usize = cols[4].parse().map_err(|_| syntax("invalid reset count"))?;
        let size = parse_counts(cols[5]).ok_or_else(|| syntax("invalid size tuple"))?;
        let reset = parse_ids(cols[6]).ok_or_else(|| syntax("invalid reset nodes"))?;
        if reset.len() != reset_count {
            return Err(syntax("reset count does not match the reset nodes"));
        }
        let safe = match cols[7] {
            "yes" => Some(true),
            "no" => Some(false),
            "-" => None,
            _ => return Err(syntax("safety must be yes, no or -")),
        };
        rows.push(Row {
            line,
            step,
            node,
            targets,
            winner,
            reset,
            size,
            safe,
        });
    }
    Ok(rows)
}

/// Audits a trace in the format written by
/// [`JustifyTrace::to_tsv`](crate::justify::JustifyTrace::to_tsv). With a
/// game, the steps are replayed from the empty justification as well.
pub fn audit_trace(text: &str, game: Option<&ParityGame>) -> Result<AuditReport, AuditError> {
    let rows = parse_rows(text)?;
    let mut report = AuditReport {
        steps: rows.len(),
        first_non_increase: None,
        unsafe_claims: Vec::new(),
        replayed: game.is_some(),
        size_mismatches: Vec::new(),
        false_safety_claims: Vec::new(),
    };
    let mut previous = Counts::new();
    for row in &rows {
        if report.first_non_increase.is_none() && compare(&row.size, &previous) != Ordering::Greater
        {
            report.first_non_increase = Some(row.step);
        }
        if row.safe == Some(false) {
            report.unsafe_claims.push(row.step);
        }
        previous = row.size.clone();
    }
    if let Some(game) = game {
        replay(game, &rows, &mut report)?;
    }
    Ok(report)
}

fn replay(game: &ParityGame, rows: &[Row], report: &mut AuditReport) -> Result<(), AuditError> {
    let mut j = Justification::new(game);
    for row in rows {
        let fail = |message: String| AuditError::Replay {
            line: row.line,
            step: row.step,
            message,
        };
        let node = |id: u64| {
            game.node_by_external_id(id)
                .ok_or_else(|| fail(format!("node {id} is not in the game")))
        };
        let v = node(row.node)?;
        let targets = row
            .targets
            .iter()
            .map(|&id| node(id))
            .collect::<Result<Vec<_>, _>>()?;
        let succ = game.successors(v);
        let direct = match targets.as_slice() {
            [w] => DirectJustification::Edge(*w),
            _ if targets.len() == succ.len() && succ.iter().all(|w| targets.contains(w)) => {
                DirectJustification::AllSuccessors
            }
            _ => {
                return Err(fail(
                    "targets are neither one edge nor all edges".to_owned(),
                ))
            }
        };
        let mut batch = Vec::with_capacity(row.reset.len() + 1);
        for &id in &row.reset {
            let w = node(id)?;
            batch.push(Update {
                node: w,
                direct: None,
                hypothesis: Player::of_priority(game.priority(w)),
            });
        }
        batch.push(Update {
            node: v,
            direct: Some(direct),
            hypothesis: row.winner,
        });
        j.apply(&batch).map_err(|e| fail(e.to_string()))?;
        if recount(&j) != row.size {
            report.size_mismatches.push(row.step);
        }
        if row.safe == Some(true) && !j.check_safe().safe {
            report.false_safety_claims.push(row.step);
        }
    }
    Ok(())
}

/// Size tuple of `j` from explicit reachability over its `D`-edges.
fn recount(j: &Justification<'_>) -> Counts {
    let game = j.game();
    let mut counts = Counts::new();
    for v in game.nodes() {
        if !j.is_justified(v) {
            continue;
        }
        let mut seen = vec![false; game.node_count()];
        let mut queue = VecDeque::from([v]);
        seen[v.index()] = true;
        let mut lowest = Lvl::Infinite;
        while let Some(u) = queue.pop_front() {
            if !j.is_justified(u) {
                lowest = lowest.min(Lvl::Finite(game.priority(u)));
                continue;
            }
            for &w in j.targets(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        *counts.entry(lowest).or_insert(0) += 1;
    }
    counts
}
