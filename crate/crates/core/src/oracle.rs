//! Ground truth for small games.
//!
//! The oracle enumerates memoryless strategies and evaluates each one against
//! every counter-play with plain bitmask reachability. It shares nothing with
//! the justification machinery, so it can be used to check the solvers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{
    NodeId, NodeSpec, ParameterMap, ParityGame, Play, PlayEnd, Player, Priority, Solution, Strategy,
};

/// Default node bound for [`oracle_solve`].
pub const DEFAULT_BOUND: usize = 12;
/// Hard limit imposed by the bitmask representation.
pub const MAX_BOUND: usize = 32;
/// Default cap on the number of plays returned by [`enumerate_plays`].
pub const DEFAULT_PLAY_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("game has {nodes} nodes, oracle bound is {bound}")]
    TooLarge { nodes: usize, bound: usize },
    #[error("more than {0} plays")]
    TooManyPlays(usize),
    #[error("parameter map covers {got} nodes, game has {expected}")]
    ParameterLength { expected: usize, got: usize },
    #[error("strategy enumeration did not produce a partition of the nodes")]
    NotDetermined,
}

type Mask = u32;

struct Arena {
    n: usize,
    all: Mask,
    succ: Vec<Mask>,
    succ_list: Vec<Vec<usize>>,
    prio: Vec<Priority>,
    owner: Vec<Player>,
    param: Vec<Option<Player>>,
}

impl Arena {
    fn new(game: &ParityGame, params: &ParameterMap, bound: usize) -> Result<Arena, OracleError> {
        let n = game.node_count();
        let bound = bound.min(MAX_BOUND);
        if n > bound {
            return Err(OracleError::TooLarge { nodes: n, bound });
        }
        if params.len() != n {
            return Err(OracleError::ParameterLength {
                expected: n,
                got: params.len(),
            });
        }
        let succ_list: Vec<Vec<usize>> = game
            .nodes()
            .map(|v| game.successors(v).iter().map(|w| w.index()).collect())
            .collect();
        Ok(Arena {
            n,
            all: if n == 32 { Mask::MAX } else { (1 << n) - 1 },
            succ: succ_list
                .iter()
                .map(|s| s.iter().fold(0, |m, &w| m | (1 << w)))
                .collect(),
            succ_list,
            prio: game.nodes().map(|v| game.priority(v)).collect(),
            owner: game.nodes().map(|v| game.owner(v)).collect(),
            param: params.as_slice().to_vec(),
        })
    }

    /// Nodes from which `player` wins every play when the moves of each node
    /// are restricted to `moves[v]` (parameters have no moves).
    fn won_under(&self, player: Player, moves: &[Mask]) -> Mask {
        let opponent = player.opponent();
        let mut bad: Mask = 0;
        for v in 0..self.n {
            match self.param[v] {
                Some(p) if p == opponent => bad |= 1 << v,
                Some(_) => {}
                None => {
                    if Player::of_priority(self.prio[v]) == opponent
                        && self.on_cycle_below(v, moves)
                    {
                        bad |= 1 << v;
                    }
                }
            }
        }
        // Everything that can be steered into a bad node is lost.
        let mut lost = bad;
        loop {
            let before = lost;
            for (v, &m) in moves.iter().enumerate().take(self.n) {
                if lost & (1 << v) == 0 && m & lost != 0 {
                    lost |= 1 << v;
                }
            }
            if lost == before {
                break;
            }
        }
        self.all & !lost
    }

    /// Whether `v` can return to itself through non-parameter nodes of
    /// priority at most its own.
    fn on_cycle_below(&self, v: usize, moves: &[Mask]) -> bool {
        let top = self.prio[v];
        let allowed: Mask = (0..self.n)
            .filter(|&w| self.param[w].is_none() && self.prio[w] <= top)
            .fold(0, |m, w| m | (1 << w));
        let mut reach = moves[v] & allowed;
        loop {
            if reach & (1 << v) != 0 {
                return true;
            }
            let mut next = reach;
            let mut bits = reach;
            while bits != 0 {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= moves[w] & allowed;
            }
            if next == reach {
                return false;
            }
            reach = next;
        }
    }

    fn free_moves(&self) -> Vec<Mask> {
        (0..self.n)
            .map(|v| {
                if self.param[v].is_some() {
                    0
                } else {
                    self.succ[v]
                }
            })
            .collect()
    }
}

/// Strategy enumeration state for one player.
struct Search {
    player: Player,
    choice_nodes: Vec<usize>,
    digits: Vec<usize>,
    exhausted: bool,
    best: Mask,
    best_digits: Vec<usize>,
}

impl Search {
    fn new(arena: &Arena, player: Player) -> Search {
        let choice_nodes: Vec<usize> = (0..arena.n)
            .filter(|&v| arena.owner[v] == player && arena.param[v].is_none())
            .collect();
        let digits = vec![0; choice_nodes.len()];
        Search {
            player,
            best_digits: digits.clone(),
            choice_nodes,
            digits,
            exhausted: false,
            best: 0,
        }
    }

    /// Evaluates the current strategy and advances to the next one.
    fn step(&mut self, arena: &Arena, moves: &mut [Mask]) {
        moves.copy_from_slice(&arena.free_moves());
        for (i, &v) in self.choice_nodes.iter().enumerate() {
            moves[v] = 1 << arena.succ_list[v][self.digits[i]];
        }
        let won = arena.won_under(self.player, moves);
        if won.count_ones() > self.best.count_ones() {
            self.best = won;
            self.best_digits.clone_from(&self.digits);
        }
        // advance the odometer
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.exhausted = true;
                return;
            }
            let v = self.choice_nodes[i];
            self.digits[i] += 1;
            if self.digits[i] < arena.succ_list[v].len() {
                return;
            }
            self.digits[i] = 0;
            i += 1;
        }
    }

    fn strategy(&self, arena: &Arena, winner: &[Player]) -> Strategy {
        let mut s = Strategy::empty(arena.n);
        for (i, &v) in self.choice_nodes.iter().enumerate() {
            if winner[v] == self.player {
                s.set(
                    NodeId(v),
                    Some(NodeId(arena.succ_list[v][self.best_digits[i]])),
                );
            }
        }
        s
    }
}

/// Solves `(game, params)` by exhaustive memoryless strategy enumeration,
/// for games with at most [`DEFAULT_BOUND`] nodes.
pub fn oracle_solve(game: &ParityGame, params: &ParameterMap) -> Result<Solution, OracleError> {
    oracle_solve_bounded(game, params, DEFAULT_BOUND)
}

pub fn oracle_solve_bounded(
    game: &ParityGame,
    params: &ParameterMap,
    bound: usize,
) -> Result<Solution, OracleError> {
    let arena = Arena::new(game, params, bound)?;
    let mut searches = [
        Search::new(&arena, Player::Even),
        Search::new(&arena, Player::Odd),
    ];
    let mut moves = vec![0; arena.n];
    // Alternate between the players; once the best single strategies of both
    // cover every node, both regions are exact.
    loop {
        let covered = searches[0].best | searches[1].best;
        if covered == arena.all || searches.iter().all(|s| s.exhausted) {
            break;
        }
        for s in searches.iter_mut() {
            if !s.exhausted {
                s.step(&arena, &mut moves);
            }
        }
    }
    let (even, odd) = (searches[0].best, searches[1].best);
    if even & odd != 0 || even | odd != arena.all {
        return Err(OracleError::NotDetermined);
    }
    let winner: Vec<Player> = (0..arena.n)
        .map(|v| {
            if even & (1 << v) != 0 {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect();
    let strategies = [
        searches[0].strategy(&arena, &winner),
        searches[1].strategy(&arena, &winner),
    ];
    Ok(Solution { winner, strategies })
}

/// Nodes from which `player` wins every play consistent with `strategy`.
/// Nodes of `player` outside the domain of `strategy` may move anywhere.
pub fn region_won_by(
    game: &ParityGame,
    params: &ParameterMap,
    player: Player,
    strategy: &Strategy,
) -> Result<Vec<bool>, OracleError> {
    let arena = Arena::new(game, params, MAX_BOUND)?;
    let mut moves = arena.free_moves();
    for (v, m) in moves.iter_mut().enumerate() {
        if arena.owner[v] == player && arena.param[v].is_none() {
            if let Some(w) = strategy.get(NodeId(v)) {
                *m = 1 << w.index();
            }
        }
    }
    let won = arena.won_under(player, &moves);
    Ok((0..arena.n).map(|v| won & (1 << v) != 0).collect())
}

/// All maximal plays from `start` consistent with `strategy`, each cut at
/// its first repeated node or at the parameter where it halts.
pub fn enumerate_plays(
    game: &ParityGame,
    params: &ParameterMap,
    start: NodeId,
    strategy: &Strategy,
) -> Result<Vec<Play>, OracleError> {
    enumerate_plays_limited(game, params, start, strategy, DEFAULT_PLAY_LIMIT)
}

pub fn enumerate_plays_limited(
    game: &ParityGame,
    params: &ParameterMap,
    start: NodeId,
    strategy: &Strategy,
    limit: usize,
) -> Result<Vec<Play>, OracleError> {
    fn walk(
        game: &ParityGame,
        params: &ParameterMap,
        strategy: &Strategy,
        path: &mut Vec<NodeId>,
        out: &mut Vec<Play>,
        limit: usize,
    ) -> Result<(), OracleError> {
        let v = *path.last().expect("path is never empty");
        if params.is_parameter(v) {
            push(out, path.clone(), PlayEnd::Halted, limit)?;
            return Ok(());
        }
        let single;
        let next: &[NodeId] = match strategy.get(v) {
            Some(w) => {
                single = [w];
                &single
            }
            None => game.successors(v),
        };
        for &w in next {
            if let Some(pos) = path.iter().position(|&u| u == w) {
                push(out, path.clone(), PlayEnd::Cycle { start: pos }, limit)?;
            } else {
                path.push(w);
                walk(game, params, strategy, path, out, limit)?;
                path.pop();
            }
        }
        Ok(())
    }
    fn push(
        out: &mut Vec<Play>,
        nodes: Vec<NodeId>,
        end: PlayEnd,
        limit: usize,
    ) -> Result<(), OracleError> {
        if out.len() >= limit {
            return Err(OracleError::TooManyPlays(limit));
        }
        out.push(Play { nodes, end });
        Ok(())
    }

    let mut out = Vec::new();
    let mut path = vec![start];
    walk(game, params, strategy, &mut path, &mut out, limit)?;
    Ok(out)
}

/// A reproducible random game. Each possible edge is present with
/// probability `density`; nodes left without a move get one random
/// successor.
pub fn random_game(seed: u64, nodes: usize, max_priority: Priority, density: f64) -> ParityGame {
    assert!(nodes >= 1, "a game needs at least one node");
    let density = density.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs = (0..nodes)
        .map(|_| {
            let owner = if rng.random_bool(0.5) {
                Player::Odd
            } else {
                Player::Even
            };
            let priority = rng.random_range(0..=max_priority);
            let mut successors: Vec<NodeId> = (0..nodes)
                .filter(|_| rng.random_bool(density))
                .map(NodeId)
                .collect();
            if successors.is_empty() {
                successors.push(NodeId(rng.random_range(0..nodes)));
            }
            NodeSpec::new(owner, priority, successors)
        })
        .collect();
    ParityGame::new(specs).expect("generated games are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{check_solution, ppg_to_pg};

    fn game(nodes: &[(usize, Priority, &[usize])]) -> ParityGame {
        ParityGame::new(
            nodes
                .iter()
                .map(|&(o, p, s)| {
                    NodeSpec::new(
                        Player::from_index(o).unwrap(),
                        p,
                        s.iter().map(|&i| NodeId(i)).collect(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn odd_self_loop() {
        let g = game(&[(0, 1, &[0])]);
        let s = oracle_solve(&g, &ParameterMap::empty(1)).unwrap();
        assert_eq!(s.winner, vec![Player::Odd]);
        assert_eq!(s.strategy(Player::Odd).domain().count(), 0);
    }

    #[test]
    fn all_parameters() {
        let g = game(&[(0, 1, &[1]), (1, 2, &[0])]);
        let p = ParameterMap::from_vec(vec![Some(Player::Even), Some(Player::Odd)]);
        let s = oracle_solve(&g, &p).unwrap();
        assert_eq!(s.winner, vec![Player::Even, Player::Odd]);
        assert_eq!(s.strategies[0].domain().count(), 0);
        assert_eq!(s.strategies[1].domain().count(), 0);
        let reduced = ppg_to_pg(&g, &p);
        let r = oracle_solve(&reduced, &ParameterMap::empty(2)).unwrap();
        assert_eq!(r.winner, s.winner);
    }

    #[test]
    fn bound_is_enforced() {
        let g = random_game(1, 13, 3, 0.5);
        assert!(matches!(
            oracle_solve(&g, &ParameterMap::empty(13)),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(
            oracle_solve_bounded(&random_game(1, 4, 3, 0.5), &ParameterMap::empty(4), 3).is_err()
        );
    }

    #[test]
    fn oracle_solutions_check_out() {
        for seed in 0..200 {
            let g = random_game(seed, 6, 5, 0.4);
            let p = ParameterMap::empty(6);
            let s = oracle_solve(&g, &p).unwrap();
            assert_eq!(check_solution(&g, &p, &s), Ok(()), "seed {seed}");
        }
    }

    #[test]
    fn random_games() {
        assert_eq!(random_game(7, 5, 4, 0.3), random_game(7, 5, 4, 0.3));
        let full = random_game(3, 6, 4, 1.0);
        for v in full.nodes() {
            assert_eq!(full.successors(v).len(), 6);
        }
        let sparse = random_game(3, 6, 4, 0.0);
        for v in sparse.nodes() {
            assert_eq!(sparse.successors(v).len(), 1);
        }
    }

    #[test]
    fn plays_on_small_shapes() {
        // chain 0 -> 1 -> 2, 2 a parameter
        let g = game(&[(0, 0, &[1]), (0, 0, &[2]), (0, 0, &[2])]);
        let mut p = ParameterMap::empty(3);
        p.set(NodeId(2), Some(Player::Even));
        let plays = enumerate_plays(&g, &p, NodeId(0), &Strategy::empty(3)).unwrap();
        assert_eq!(plays.len(), 1);
        assert_eq!(plays[0].end, PlayEnd::Halted);

        // opponent node with two choices
        let g = game(&[(1, 0, &[1, 2]), (0, 0, &[1]), (0, 0, &[2])]);
        let plays =
            enumerate_plays(&g, &ParameterMap::empty(3), NodeId(0), &Strategy::empty(3)).unwrap();
        assert_eq!(plays.len(), 2);

        // a strategy pins the choice
        let mut s = Strategy::empty(3);
        s.set(NodeId(0), Some(NodeId(2)));
        let plays = enumerate_plays(&g, &ParameterMap::empty(3), NodeId(0), &s).unwrap();
        assert_eq!(plays.len(), 1);
        assert_eq!(plays[0].nodes, vec![NodeId(0), NodeId(2)]);
        assert_eq!(plays[0].end, PlayEnd::Cycle { start: 1 });

        let g = random_game(5, 8, 3, 1.0);
        assert!(matches!(
            enumerate_plays_limited(
                &g,
                &ParameterMap::empty(8),
                NodeId(0),
                &Strategy::empty(8),
                10
            ),
            Err(OracleError::TooManyPlays(10))
        ));
    }
}
