//! Zielonka's recursive algorithm as attraction loops of justification
//! steps. The recursion runs on an explicit stack.

use crate::game::{NodeId, Player, Priority};
use crate::justification::Level;
use crate::justify::candidate_direct_justifications;

use super::{max_priority, unwind, Attraction, Driver, Eligible, SolveError, Subgame};

enum Phase {
    Attract,
    AfterChild,
}

struct Frame {
    nodes: Vec<NodeId>,
    p: Priority,
    alpha: Player,
    phase: Phase,
    /// Step count when the current child was pushed.
    child_steps: usize,
    /// The current child returned with unjustified nodes.
    child_unsolved: bool,
}

impl Frame {
    fn new(driver: &Driver<'_>, nodes: Vec<NodeId>) -> Frame {
        let p = max_priority(driver.game(), &nodes);
        Frame {
            nodes,
            p,
            alpha: Player::of_priority(p),
            phase: Phase::Attract,
            child_steps: 0,
            child_unsolved: false,
        }
    }
}

pub(crate) fn run(driver: &mut Driver<'_>) -> Result<(), SolveError> {
    let game = driver.game();
    if game.node_count() == 0 {
        return Ok(());
    }
    let mut depth = vec![0usize; game.node_count()];
    let mut stack = vec![Frame::new(driver, game.nodes().collect())];
    while !stack.is_empty() {
        let k = stack.len() - 1;
        let frame = &mut stack[k];
        let sg = Subgame {
            depth: &depth,
            frame: k,
        };
        match frame.phase {
            Phase::Attract => {
                // Abandoned frames can leave justified nodes below p behind,
                // so the invariants only hold with minimal resets.
                if driver.audit && driver.minimal_resets() {
                    check_invariants(driver, &sg, frame)?;
                }
                let rule = Attraction {
                    player: Some(frame.alpha),
                    min_level: Level::Finite(frame.p),
                    eligible: Eligible::Unjustified,
                    once: true,
                };
                if let Some(d) = driver.attract(&sg, &frame.nodes, rule)? {
                    resume(&mut stack, &mut depth, d);
                    continue;
                }
                let smaller: Vec<NodeId> = frame
                    .nodes
                    .iter()
                    .copied()
                    .filter(|&v| !driver.j.is_justified(v) && game.priority(v) < frame.p)
                    .collect();
                if smaller.is_empty() {
                    leave(driver, &mut stack, &mut depth)?;
                    continue;
                }
                for &v in &smaller {
                    depth[v.index()] = k + 1;
                }
                frame.phase = Phase::AfterChild;
                frame.child_steps = driver.steps;
                frame.child_unsolved = false;
                let child = Frame::new(driver, smaller);
                stack.push(child);
            }
            Phase::AfterChild => {
                let rule = Attraction {
                    player: Some(frame.alpha.opponent()),
                    min_level: Level::Finite(frame.p + 1),
                    eligible: Eligible::Unjustified,
                    once: true,
                };
                if let Some(d) = driver.attract(&sg, &frame.nodes, rule)? {
                    resume(&mut stack, &mut depth, d);
                    continue;
                }
                let frame = &mut stack[k];
                if frame.child_unsolved && driver.steps == frame.child_steps {
                    // Neither the child nor the opponent made progress.
                    leave(driver, &mut stack, &mut depth)?;
                    continue;
                }
                frame.phase = Phase::Attract;
            }
        }
    }
    Ok(())
}

/// Pops the top frame. A subgame left with unjustified nodes is only
/// possible after aggressive resets broke the invariants of an enclosing
/// frame; its parent then gets another opponent attraction.
fn leave(
    driver: &Driver<'_>,
    stack: &mut Vec<Frame>,
    depth: &mut [usize],
) -> Result<(), SolveError> {
    let k = stack.len() - 1;
    let left = stack[k]
        .nodes
        .iter()
        .filter(|&&v| !driver.j.is_justified(v))
        .count();
    if left > 0 && (k == 0 || driver.minimal_resets()) {
        return Err(SolveError::Incomplete { unjustified: left });
    }
    if k == 0 {
        stack.pop();
        return Ok(());
    }
    unwind(stack, depth, k - 1, |f| &f.nodes);
    stack[k - 1].child_unsolved |= left > 0;
    Ok(())
}

/// Continues at frame `d` after a reset reached into its subgame: the
/// deeper frames are abandoned and `d` proceeds as if its child returned.
fn resume(stack: &mut Vec<Frame>, depth: &mut [usize], d: usize) {
    unwind(stack, depth, d, |f| &f.nodes);
    stack[d].phase = Phase::AfterChild;
    stack[d].child_unsolved = false;
}

/// The loop invariants at the head of the main loop of a frame: justified
/// nodes sit at level `p` or above, and the opponent cannot win an
/// unjustified node of the subgame with a level above `p`. Safety is
/// checked by every audited step.
fn check_invariants(
    driver: &Driver<'_>,
    sg: &Subgame<'_>,
    frame: &Frame,
) -> Result<(), SolveError> {
    let j = &driver.j;
    let p = Level::Finite(frame.p);
    for &v in &frame.nodes {
        debug_assert!(sg.contains(v));
        if j.is_justified(v) {
            driver.check(j.level(v) >= p, || {
                format!(
                    "justified node {v} has level {} below {}",
                    j.level(v),
                    frame.p
                )
            })?;
            continue;
        }
        for dj in candidate_direct_justifications(j.game(), v) {
            let opponent_wins = j.wins_for(v, dj).ok().flatten() == Some(frame.alpha.opponent());
            driver.check(!opponent_wins || j.dj_level(v, dj) <= p, || {
                format!("opponent wins unjustified node {v} above level {}", frame.p)
            })?;
        }
    }
    Ok(())
}
