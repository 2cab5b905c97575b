//! Priority promotion as justification steps. Closed regions are promoted
//! to the lowest enclosing level they can escape to, keeping everything
//! justified below it.

use crate::game::{NodeId, Player, Priority};
use crate::justification::{Justification, Level};

use super::{
    max_priority, unwind, Attraction, Driver, Eligible, Region, SolveError, Subgame, OUTSIDE,
};

/// Whether the nodes attracted to level `p` form a closed region of the
/// subgame: every node of priority `p` in it is justified.
pub fn closed(j: &Justification<'_>, subgame: &[NodeId], p: Priority) -> bool {
    subgame
        .iter()
        .all(|&v| j.game().priority(v) != p || j.is_justified(v))
}

/// The lowest `region_level` over the `D`-targets that leave `region`,
/// `+inf` when no edge leaves it.
pub fn escape_level<F>(j: &Justification<'_>, region: &[NodeId], region_level: F) -> Level
where
    F: Fn(NodeId) -> Level,
{
    let mut inside = vec![false; j.game().node_count()];
    for &v in region {
        inside[v.index()] = true;
    }
    region
        .iter()
        .flat_map(|&v| j.targets(v).iter().copied())
        .filter(|&w| !inside[w.index()])
        .map(region_level)
        .min()
        .unwrap_or(Level::Infinite)
}

enum Phase {
    Attract,
    AfterChild,
}

struct Frame {
    nodes: Vec<NodeId>,
    p: Priority,
    alpha: Player,
    phase: Phase,
}

impl Frame {
    fn new(driver: &Driver<'_>, nodes: Vec<NodeId>) -> Frame {
        let p = max_priority(driver.game(), &nodes);
        Frame {
            nodes,
            p,
            alpha: Player::of_priority(p),
            phase: Phase::Attract,
        }
    }
}

pub(crate) fn run(driver: &mut Driver<'_>) -> Result<(), SolveError> {
    let game = driver.game();
    driver.track_permanent();
    while driver.j.unjustified_count() > 0 {
        let steps = driver.steps;
        let mut depth: Vec<usize> = game
            .nodes()
            .map(|v| {
                if driver.j.level(v).is_infinite() {
                    OUTSIDE
                } else {
                    0
                }
            })
            .collect();
        let top: Vec<NodeId> = game.nodes().filter(|&v| depth[v.index()] == 0).collect();
        promote(driver, &mut depth, top.clone())?;
        let sg = Subgame {
            depth: &depth,
            frame: 0,
        };
        let rule = Attraction {
            player: None,
            min_level: Level::Infinite,
            eligible: Eligible::Any,
            once: false,
        };
        driver.attract(&sg, &top, rule)?;
        if driver.steps == steps {
            return Err(SolveError::Incomplete {
                unjustified: driver.j.unjustified_count(),
            });
        }
    }
    Ok(())
}

/// Runs Promote on `nodes` (the frame-0 subgame in `depth`) until a region
/// is promoted out of it.
fn promote(
    driver: &mut Driver<'_>,
    depth: &mut [usize],
    nodes: Vec<NodeId>,
) -> Result<(), SolveError> {
    let mut stack = vec![Frame::new(driver, nodes)];
    let mut returned: Option<Level> = None;
    while !stack.is_empty() {
        let k = stack.len() - 1;
        let frame = &mut stack[k];
        match frame.phase {
            Phase::Attract => {
                let sg = Subgame { depth, frame: k };
                let rule = Attraction {
                    player: Some(frame.alpha),
                    min_level: Level::Finite(frame.p),
                    eligible: Eligible::UnjustifiedOrBelow(frame.p),
                    once: false,
                };
                if let Some(d) = driver.attract(&sg, &frame.nodes, rule)? {
                    // A reset reached an enclosing region; redo its attraction.
                    unwind(&mut stack, depth, d, |f| &f.nodes);
                    stack[d].phase = Phase::Attract;
                    continue;
                }
                let p = Level::Finite(frame.p);
                let (region, rest): (Vec<NodeId>, Vec<NodeId>) =
                    frame.nodes.iter().partition(|&&v| driver.j.level(v) >= p);
                if closed(&driver.j, &frame.nodes, frame.p) {
                    let levels: Vec<Priority> = stack.iter().map(|f| f.p).collect();
                    let escape = escape_level(&driver.j, &region, |w| match depth[w.index()] {
                        OUTSIDE => Level::Infinite,
                        d => Level::Finite(levels[d]),
                    });
                    let lowest = region.iter().map(|&v| driver.j.level(v)).min();
                    driver.check(escape > p, || {
                        format!("region at level {} escapes to level {escape}", levels[k])
                    })?;
                    driver.check(lowest.is_none_or(|l| escape <= l), || {
                        format!("escape level {escape} exceeds the level of its region")
                    })?;
                    driver.regions.push(Region {
                        level: levels[k],
                        nodes: region,
                        escape,
                    });
                    pop(&mut stack, depth);
                    returned = Some(escape);
                    continue;
                }
                if rest.is_empty() {
                    // Every node is at level p or above, yet an unjustified
                    // priority-p node is only won by the opponent, through a
                    // node that reached +inf during this call or one left
                    // behind by an aggressive reset. There is nothing to
                    // recurse on, so start over from the outer loop.
                    break;
                }
                for &v in &rest {
                    depth[v.index()] = k + 1;
                }
                frame.phase = Phase::AfterChild;
                let child = Frame::new(driver, rest);
                stack.push(child);
            }
            Phase::AfterChild => {
                let escape = returned.take().expect("a child frame returned");
                if escape > Level::Finite(frame.p) {
                    pop(&mut stack, depth);
                    returned = Some(escape);
                } else {
                    frame.phase = Phase::Attract;
                }
            }
        }
    }
    Ok(())
}

/// Leaves the top frame, handing its nodes back to the parent subgame.
fn pop(stack: &mut Vec<Frame>, depth: &mut [usize]) {
    let frame = stack.pop().expect("frame is on the stack");
    if let Some(parent) = stack.len().checked_sub(1) {
        for v in frame.nodes {
            depth[v.index()] = parent;
        }
    }
}
