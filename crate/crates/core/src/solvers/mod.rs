//! Parity game solvers expressed as sequences of justification steps.
//!
//! Every solver starts from the empty justification and only changes it
//! through [`justify`](crate::justify::justify), so the safety and progress
//! guarantees of a single step carry over to whole runs. In audited mode each
//! step is checked for safety and the solver-specific loop invariants are
//! asserted as well.

mod fixpoint;
mod promotion;
mod zielonka;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::ParityGame;
use crate::game::{NodeId, Player, Priority, Solution};
use crate::justification::{DependencyEncoding, DirectJustification, Justification, Level};
use crate::justify::{
    candidate_direct_justifications, executable, justify, justify_audited, JustifyError,
    JustifyTrace, ResetPolicy, SizeTuple, StepOutcome, TraceStep,
};

pub use promotion::{closed, escape_level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Fixpoint,
    Zielonka,
    PriorityPromotion,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Fixpoint,
        Algorithm::Zielonka,
        Algorithm::PriorityPromotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fixpoint => "fixpoint",
            Algorithm::Zielonka => "zielonka",
            Algorithm::PriorityPromotion => "pp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}` (expected fixpoint, zielonka or pp)")]
pub struct UnknownAlgorithm(String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixpoint" => Ok(Algorithm::Fixpoint),
            "zielonka" => Ok(Algorithm::Zielonka),
            "pp" | "priority-promotion" => Ok(Algorithm::PriorityPromotion),
            other => Err(UnknownAlgorithm(other.to_owned())),
        }
    }
}

/// How a solver run is carried out and what it records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub reset: ResetPolicy,
    pub encoding: DependencyEncoding,
    /// Record every step. Implied by `audit`.
    pub trace: bool,
    /// Check safety around every step and the loop invariants of the solver.
    pub audit: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SolverConfig {
            algorithm,
            reset: ResetPolicy::default(),
            encoding: DependencyEncoding::default(),
            trace: false,
            audit: false,
        }
    }

    pub fn with_reset(mut self, reset: ResetPolicy) -> Self {
        self.reset = reset;
        self
    }

    pub fn with_encoding(mut self, encoding: DependencyEncoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn traced(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn audited(mut self) -> Self {
        self.audit = true;
        self.trace = true;
        self
    }

    fn records_trace(&self) -> bool {
        self.trace || self.audit
    }
}

/// A closed region found by priority promotion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// The priority `p` of the subgame the region was found in.
    pub level: Priority,
    /// Nodes of the subgame with justification level at least `p`, ascending.
    pub nodes: Vec<NodeId>,
    /// The lowest level of an enclosing region entered by a `D`-edge
    /// leaving the region, `+inf` when there is none.
    pub escape: Level,
}

#[derive(Debug)]
pub struct SolveResult<'g> {
    /// The final justification; every node is justified.
    pub justification: Justification<'g>,
    pub solution: Solution,
    pub steps: usize,
    pub trace: Option<JustifyTrace>,
    /// Closed regions in the order they were found (priority promotion only).
    pub regions: Vec<Region>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("step {step} at node {node}: {source}")]
    Step {
        step: usize,
        node: NodeId,
        source: JustifyError,
    },
    #[error("audit failed after {step} steps: {message}")]
    Audit { step: usize, message: String },
    #[error("solver stopped with {unjustified} unjustified nodes")]
    Incomplete { unjustified: usize },
}

/// Solves `game` as configured.
pub fn solve<'g>(
    game: &'g ParityGame,
    config: &SolverConfig,
) -> Result<SolveResult<'g>, SolveError> {
    let mut driver = Driver::new(game, config);
    match config.algorithm {
        Algorithm::Fixpoint => fixpoint::run(&mut driver)?,
        Algorithm::Zielonka => zielonka::run(&mut driver)?,
        Algorithm::PriorityPromotion => promotion::run(&mut driver)?,
    }
    driver.finish()
}

fn solve_traced(
    game: &ParityGame,
    algorithm: Algorithm,
) -> Result<(Solution, JustifyTrace), SolveError> {
    let result = solve(game, &SolverConfig::new(algorithm).traced())?;
    Ok((result.solution, result.trace.unwrap_or_default()))
}

pub fn solve_fixpoint(game: &ParityGame) -> Result<(Solution, JustifyTrace), SolveError> {
    solve_traced(game, Algorithm::Fixpoint)
}

pub fn solve_zielonka(game: &ParityGame) -> Result<(Solution, JustifyTrace), SolveError> {
    solve_traced(game, Algorithm::Zielonka)
}

pub fn solve_priority_promotion(game: &ParityGame) -> Result<(Solution, JustifyTrace), SolveError> {
    solve_traced(game, Algorithm::PriorityPromotion)
}

/// Which nodes an attraction loop may justify.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Eligible {
    Unjustified,
    /// Unjustified nodes and justified ones with a level below the priority.
    UnjustifiedOrBelow(Priority),
    Any,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Attraction {
    pub(crate) player: Option<Player>,
    pub(crate) min_level: Level,
    pub(crate) eligible: Eligible,
    /// Audit that no node is justified twice by this loop (minimal resets).
    pub(crate) once: bool,
}

/// Membership in the subgame of stack frame `frame`: a node belongs to the
/// subgames of frames `0..=depth[v]`.
pub(crate) struct Subgame<'a> {
    pub(crate) depth: &'a [usize],
    pub(crate) frame: usize,
}

pub(crate) const OUTSIDE: usize = usize::MAX;

impl Subgame<'_> {
    pub(crate) fn contains(&self, v: NodeId) -> bool {
        let d = self.depth[v.index()];
        d != OUTSIDE && d >= self.frame
    }
}

/// Owns the justification of a run and funnels every step through the
/// configured checks.
pub(crate) struct Driver<'g> {
    pub(crate) j: Justification<'g>,
    policy: ResetPolicy,
    pub(crate) audit: bool,
    trace: Option<JustifyTrace>,
    pub(crate) steps: usize,
    /// Nodes seen at level `+inf`, which must stay there (audited promotion).
    permanent: Option<Vec<bool>>,
    pub(crate) regions: Vec<Region>,
}

impl<'g> Driver<'g> {
    fn new(game: &'g ParityGame, config: &SolverConfig) -> Self {
        Driver {
            j: Justification::with_encoding(game, config.encoding),
            policy: config.reset,
            audit: config.audit,
            trace: config.records_trace().then(JustifyTrace::default),
            steps: 0,
            permanent: None,
            regions: Vec::new(),
        }
    }

    /// Whether resets are confined to nodes depending on the justified one,
    /// which the loop invariants of the recursive solvers rely on.
    pub(crate) fn minimal_resets(&self) -> bool {
        self.policy == ResetPolicy::Minimal
    }

    pub(crate) fn game(&self) -> &'g ParityGame {
        self.j.game()
    }

    pub(crate) fn track_permanent(&mut self) {
        if self.audit {
            self.permanent = Some(vec![false; self.game().node_count()]);
        }
    }

    pub(crate) fn step(
        &mut self,
        v: NodeId,
        dj: DirectJustification,
    ) -> Result<StepOutcome, SolveError> {
        let before = self.trace.as_ref().map(|_| SizeTuple::of(&self.j));
        let outcome = if self.audit {
            justify_audited(&mut self.j, v, dj, self.policy)
        } else {
            justify(&mut self.j, v, dj, self.policy)
        }
        .map_err(|source| SolveError::Step {
            step: self.steps + 1,
            node: v,
            source,
        })?;
        self.steps += 1;
        if let (Some(trace), Some(size_before)) = (self.trace.as_mut(), before) {
            trace.steps.push(TraceStep {
                step: self.steps,
                node: v,
                targets: dj.targets(self.j.game(), v).to_vec(),
                winner: outcome.winner,
                reset: outcome.reset.clone(),
                size_before,
                size_after: SizeTuple::of(&self.j),
                safe: self.audit.then_some(true),
            });
        }
        if let Some(permanent) = self.permanent.as_mut() {
            for w in self.j.game().nodes() {
                let infinite = self.j.level(w).is_infinite();
                if permanent[w.index()] && !infinite {
                    return Err(SolveError::Audit {
                        step: self.steps,
                        message: format!("node {w} left level +inf"),
                    });
                }
                permanent[w.index()] |= infinite;
            }
        }
        Ok(outcome)
    }

    pub(crate) fn check(
        &self,
        ok: bool,
        message: impl FnOnce() -> String,
    ) -> Result<(), SolveError> {
        if !self.audit || ok {
            Ok(())
        } else {
            Err(SolveError::Audit {
                step: self.steps,
                message: message(),
            })
        }
    }

    /// The first candidate direct justification that lets `rule` justify `v`.
    fn attractable(&self, v: NodeId, rule: &Attraction) -> Option<DirectJustification> {
        let j = &self.j;
        let ok = match rule.eligible {
            Eligible::Unjustified => !j.is_justified(v),
            Eligible::UnjustifiedOrBelow(p) => !j.is_justified(v) || j.level(v) < Level::Finite(p),
            Eligible::Any => true,
        };
        if !ok {
            return None;
        }
        candidate_direct_justifications(j.game(), v)
            .into_iter()
            .find(|&dj| match executable(j, v, dj) {
                Some(w) => {
                    rule.player.is_none_or(|p| p == w) && j.dj_level(v, dj) >= rule.min_level
                }
                None => false,
            })
    }

    /// Justifies nodes of `sg` by `rule` until none is left. The worklist
    /// starts with the whole subgame and afterwards only revisits nodes whose
    /// own level or whose successors changed.
    ///
    /// Returns the shallowest frame outside `sg` that lost a justified node
    /// to a reset, which only aggressive resets can cause.
    pub(crate) fn attract(
        &mut self,
        sg: &Subgame<'_>,
        nodes: &[NodeId],
        rule: Attraction,
    ) -> Result<Option<usize>, SolveError> {
        let game = self.game();
        let mut work: BTreeSet<NodeId> = nodes.iter().copied().collect();
        // Aggressive resets may undo nodes attracted earlier in the same
        // loop, so the at-most-once property is only audited for minimal ones.
        let once = rule.once && self.audit && self.minimal_resets();
        let mut justified = vec![false; if once { game.node_count() } else { 0 }];
        let mut escaped: Option<usize> = None;
        while let Some(v) = work.pop_first() {
            let Some(dj) = self.attractable(v, &rule) else {
                continue;
            };
            if !justified.is_empty() {
                self.check(!justified[v.index()], || {
                    format!("node {v} attracted twice in one loop")
                })?;
                justified[v.index()] = true;
            }
            let outcome = self.step(v, dj)?;
            for &w in &outcome.reset {
                if !sg.contains(w) {
                    let d = match sg.depth[w.index()] {
                        OUTSIDE => 0,
                        d => d,
                    };
                    escaped = Some(escaped.map_or(d, |e| e.min(d)));
                }
            }
            for &t in &outcome.touched {
                if sg.contains(t) {
                    work.insert(t);
                }
                for &u in game.predecessors(t) {
                    if sg.contains(u) {
                        work.insert(u);
                    }
                }
            }
        }
        if self.audit {
            if let Some(&v) = nodes
                .iter()
                .find(|&&v| self.attractable(v, &rule).is_some())
            {
                return Err(SolveError::Audit {
                    step: self.steps,
                    message: format!("attraction stopped while node {v} was still attractable"),
                });
            }
        }
        Ok(escaped)
    }

    fn finish(self) -> Result<SolveResult<'g>, SolveError> {
        let unjustified = self.j.unjustified_count();
        if unjustified > 0 {
            return Err(SolveError::Incomplete { unjustified });
        }
        Ok(SolveResult {
            solution: self.j.to_solution(),
            justification: self.j,
            steps: self.steps,
            trace: self.trace,
            regions: self.regions,
        })
    }
}

/// Pops frames until frame `keep` is on top, handing the nodes of each
/// popped frame back to its parent.
pub(crate) fn unwind<F>(
    stack: &mut Vec<F>,
    depth: &mut [usize],
    keep: usize,
    nodes: impl Fn(&F) -> &[NodeId],
) {
    while stack.len() > keep + 1 {
        let frame = stack.pop().expect("frame is on the stack");
        let parent = stack.len() - 1;
        for &v in nodes(&frame) {
            depth[v.index()] = parent;
        }
    }
}

pub(crate) fn max_priority(game: &ParityGame, nodes: &[NodeId]) -> Priority {
    nodes
        .iter()
        .map(|&v| game.priority(v))
        .max()
        .expect("subgames are never empty")
}
