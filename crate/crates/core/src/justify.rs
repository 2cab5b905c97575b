//! The `Justify` step, its preconditions and the size-tuple progress measure.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::game::{NodeId, ParityGame, Player};
use crate::justification::{
    DirectJustification, Justification, Level, SafetyReport, ShapeError, Update,
};

/// Which nodes are reset when a justification step flips the hypothesis of a
/// node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResetPolicy {
    /// Only the nodes reaching the flipped node.
    #[default]
    Minimal,
    /// Every node whose level is below the level of the new direct
    /// justification.
    Aggressive,
}

/// Number of justified nodes per justification level, compared
/// lexicographically from `+inf` downwards.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SizeTuple {
    counts: BTreeMap<Level, usize>,
}

impl SizeTuple {
    pub fn of(j: &Justification<'_>) -> SizeTuple {
        let mut counts = BTreeMap::new();
        for v in j.game().nodes() {
            if j.is_justified(v) {
                *counts.entry(j.level(v)).or_insert(0) += 1;
            }
        }
        SizeTuple { counts }
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (Level, usize)>) -> SizeTuple {
        SizeTuple {
            counts: counts.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn count(&self, level: Level) -> usize {
        self.counts.get(&level).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Non-zero entries from the highest level down.
    pub fn entries(&self) -> impl Iterator<Item = (Level, usize)> + '_ {
        self.counts.iter().rev().map(|(&l, &c)| (l, c))
    }
}

impl Ord for SizeTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.entries().peekable();
        let mut b = other.entries().peekable();
        loop {
            match (a.peek().copied(), b.peek().copied()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((la, ca)), Some((lb, cb))) => match la.cmp(&lb) {
                    // a has a non-zero count at a level where b has zero
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                    Ordering::Equal => {
                        if ca != cb {
                            return ca.cmp(&cb);
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for SizeTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SizeTuple {
    /// `level=count` pairs from the highest level down, `-` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.entries().map(|(l, c)| format!("{l}={c}")).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn size(j: &Justification<'_>) -> SizeTuple {
    SizeTuple::of(j)
}

pub fn lex_compare(a: &SizeTuple, b: &SizeTuple) -> Ordering {
    a.cmp(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JustifyError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("direct justification does not win node {0} for either player")]
    NotWinning(NodeId),
    #[error("level {dj_level} of the new direct justification of {node} does not exceed its level {node_level}")]
    LevelTooLow {
        node: NodeId,
        node_level: Level,
        dj_level: Level,
    },
    #[error("node {0} is justified but its hypothesis would flip")]
    FlipOnJustified(NodeId),
    #[error("justification is not safe: {}", .0.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("; "))]
    Unsafe(SafetyReport),
}

/// The player who wins `v` by `dj` if the step `Justify(j, v, dj)` is
/// executable. Safety of `j` is assumed, not checked.
pub fn executable(j: &Justification<'_>, v: NodeId, dj: DirectJustification) -> Option<Player> {
    check_executable(j, v, dj).ok()
}

fn check_executable(
    j: &Justification<'_>,
    v: NodeId,
    dj: DirectJustification,
) -> Result<Player, JustifyError> {
    let winner = j.wins_for(v, dj)?.ok_or(JustifyError::NotWinning(v))?;
    let node_level = j.level(v);
    let dj_level = j.dj_level(v, dj);
    let ok = if j.is_justified(v) {
        dj_level > node_level
    } else {
        dj_level >= node_level
    };
    if !ok {
        return Err(JustifyError::LevelTooLow {
            node: v,
            node_level,
            dj_level,
        });
    }
    Ok(winner)
}

/// What a justification step changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub winner: Player,
    /// Whether the hypothesis of the node changed.
    pub flipped: bool,
    /// Nodes other than the justified one that were reset to unjustified
    /// parameters with their default winner, ascending.
    pub reset: Vec<NodeId>,
    /// Nodes whose level may have changed, ascending.
    pub touched: Vec<NodeId>,
}

/// Performs `Justify(j, v, dj)`.
///
/// When `dj` wins `v` for its current hypothesis, `dj` simply becomes the
/// direct justification of `v`. Otherwise the hypothesis of `v` flips and
/// the nodes selected by `policy` are reset first, in the same batch.
pub fn justify(
    j: &mut Justification<'_>,
    v: NodeId,
    dj: DirectJustification,
    policy: ResetPolicy,
) -> Result<StepOutcome, JustifyError> {
    let winner = check_executable(j, v, dj)?;
    let game = j.game();
    if j.hypothesis(v) == winner {
        let touched = j
            .apply(&[Update {
                node: v,
                direct: Some(dj),
                hypothesis: winner,
            }])
            .expect("update validated by the precondition check");
        return Ok(StepOutcome {
            winner,
            flipped: false,
            reset: Vec::new(),
            touched,
        });
    }

    if j.is_justified(v) {
        return Err(JustifyError::FlipOnJustified(v));
    }
    let reset: Vec<NodeId> = match policy {
        ResetPolicy::Minimal => j.reach_down(v),
        ResetPolicy::Aggressive => {
            let bound = j.dj_level(v, dj);
            game.nodes().filter(|&w| j.level(w) < bound).collect()
        }
    }
    .into_iter()
    .filter(|&w| w != v)
    .collect();
    let mut batch: Vec<Update> = reset
        .iter()
        .map(|&w| Update {
            node: w,
            direct: None,
            hypothesis: Player::of_priority(game.priority(w)),
        })
        .collect();
    batch.push(Update {
        node: v,
        direct: Some(dj),
        hypothesis: winner,
    });
    // Unjustified members of the reset set already hold their default winner
    // on a safe input; only report the nodes that lose a direct justification.
    let reset: Vec<NodeId> = reset.into_iter().filter(|&w| j.is_justified(w)).collect();
    let touched = j
        .apply(&batch)
        .expect("update validated by the precondition check");
    Ok(StepOutcome {
        winner,
        flipped: true,
        reset,
        touched,
    })
}

/// [`justify`] with the safety of the input and output checked.
pub fn justify_audited(
    j: &mut Justification<'_>,
    v: NodeId,
    dj: DirectJustification,
    policy: ResetPolicy,
) -> Result<StepOutcome, JustifyError> {
    let before = j.check_safe();
    if !before.safe {
        return Err(JustifyError::Unsafe(before));
    }
    let outcome = justify(j, v, dj, policy)?;
    let after = j.check_safe();
    if !after.safe {
        return Err(JustifyError::Unsafe(after));
    }
    Ok(outcome)
}

/// A direct justification of `v` that wins it under the current hypothesis:
/// the first successor agreeing with the owner if there is one, all
/// successors otherwise.
pub fn winning_direct_justification(j: &Justification<'_>, v: NodeId) -> DirectJustification {
    let game = j.game();
    let owner = game.owner(v);
    match game
        .successors(v)
        .iter()
        .find(|&&w| j.hypothesis(w) == owner)
    {
        Some(&w) => DirectJustification::Edge(w),
        None => DirectJustification::AllSuccessors,
    }
}

/// An executable step on a safe justification: the lowest unjustified node
/// of minimal priority with [`winning_direct_justification`]. `None` when
/// every node is justified.
pub fn find_justifiable(j: &Justification<'_>) -> Option<(NodeId, DirectJustification)> {
    let game = j.game();
    let v = j.unjustified().min_by_key(|&v| (game.priority(v), v))?;
    Some((v, winning_direct_justification(j, v)))
}

/// Every candidate direct justification of `v`: each single edge, then the
/// full edge set when it differs from a single edge.
pub fn candidate_direct_justifications(game: &ParityGame, v: NodeId) -> Vec<DirectJustification> {
    let succ = game.successors(v);
    let mut out: Vec<DirectJustification> =
        succ.iter().map(|&w| DirectJustification::Edge(w)).collect();
    if succ.len() > 1 {
        out.push(DirectJustification::AllSuccessors);
    }
    out
}

/// All executable steps `(v, dj, winner)` on `j`, in node order.
pub fn executable_moves(j: &Justification<'_>) -> Vec<(NodeId, DirectJustification, Player)> {
    let game = j.game();
    let mut moves = Vec::new();
    for v in game.nodes() {
        for dj in candidate_direct_justifications(game, v) {
            if let Some(p) = executable(j, v, dj) {
                moves.push((v, dj, p));
            }
        }
    }
    moves
}

/// One recorded justification step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub node: NodeId,
    pub targets: Vec<NodeId>,
    pub winner: Player,
    pub reset: Vec<NodeId>,
    pub size_before: SizeTuple,
    pub size_after: SizeTuple,
    /// Result of the safety audit after the step, when auditing.
    pub safe: Option<bool>,
}

/// The steps of a solver run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JustifyTrace {
    pub steps: Vec<TraceStep>,
}

pub const TRACE_HEADER: &str = "step\tnode\ttargets\twinner\treset_count\tsize\treset_nodes\tsafe";

impl JustifyTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether every step strictly increased the size tuple.
    pub fn is_strictly_increasing(&self) -> bool {
        self.steps.iter().all(|s| s.size_after > s.size_before)
    }

    /// Tab-separated rendering with one line per step. Nodes are written as
    /// their external ids; `size` is the size tuple after the step.
    pub fn to_tsv(&self, game: &ParityGame) -> String {
        let ids = |nodes: &[NodeId]| -> String {
            if nodes.is_empty() {
                "-".to_owned()
            } else {
                nodes
                    .iter()
                    .map(|&v| game.external_id(v).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
        };
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for s in &self.steps {
            let safe = match s.safe {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.step,
                game.external_id(s.node),
                ids(&s.targets),
                s.winner,
                s.reset.len(),
                s.size_after,
                ids(&s.reset),
                safe
            );
        }
        out
    }
}
