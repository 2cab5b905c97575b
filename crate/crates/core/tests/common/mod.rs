#![allow(dead_code)]

use parity_justify::io::parse_game;
use parity_justify::justification::Update;
use parity_justify::oracle::random_game;
use parity_justify::{DirectJustification, Justification, NodeId, ParityGame, Player};

pub const SIX_NODES: &str = include_str!("../data/six_nodes.pg");

/// The six-node worked example: nodes `a` to `f`.
pub fn six_nodes() -> ParityGame {
    parse_game(SIX_NODES).unwrap()
}

pub fn node(game: &ParityGame, name: &str) -> NodeId {
    game.node_by_name(name).unwrap()
}

/// The example justification with parameters `a` (won by 1) and `d` (won
/// by 0): `b` and `c` justified for 1, `e` and `f` for 0.
pub fn example_justification(game: &ParityGame) -> Justification<'_> {
    let n = |s| node(game, s);
    let mut j = Justification::new(game);
    let update = |v, direct, hypothesis| Update {
        node: v,
        direct: Some(direct),
        hypothesis,
    };
    j.apply(&[
        update(n("b"), DirectJustification::AllSuccessors, Player::Odd),
        update(n("c"), DirectJustification::Edge(n("c")), Player::Odd),
        update(n("e"), DirectJustification::Edge(n("d")), Player::Even),
        update(n("f"), DirectJustification::AllSuccessors, Player::Even),
    ])
    .unwrap();
    j
}

/// Seeded game of the oracle corpus: 3 to 8 nodes, highest priority 0 to
/// 6, edge density 0.2 to 1.0.
pub fn corpus_game(seed: u64) -> ParityGame {
    let nodes = 3 + (seed % 6) as usize;
    let max_priority = (seed / 6) % 7;
    let density = 0.2 + 0.8 * ((seed / 42) % 9) as f64 / 8.0;
    random_game(seed, nodes, max_priority, density)
}
