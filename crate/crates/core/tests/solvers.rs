use parity_justify::oracle::oracle_solve;
use parity_justify::solvers::{closed, Region};
use parity_justify::{
    check_solution, solve, Algorithm, DependencyEncoding, Level, NodeId, NodeSpec, ParameterMap,
    ParityGame, Player, ResetPolicy, SolverConfig,
};

mod common;

use common::corpus_game;

fn configs() -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for algorithm in Algorithm::ALL {
        for reset in [ResetPolicy::Minimal, ResetPolicy::Aggressive] {
            out.push(SolverConfig::new(algorithm).with_reset(reset).audited());
        }
    }
    out
}

#[test]
fn audited_solvers_match_the_oracle() {
    for seed in 0..1500 {
        let game = corpus_game(seed);
        let params = ParameterMap::empty(game.node_count());
        let expected = oracle_solve(&game, &params).unwrap();
        for config in configs() {
            let result =
                solve(&game, &config).unwrap_or_else(|e| panic!("seed {seed} {config:?}: {e}"));
            assert_eq!(
                result.solution.winner, expected.winner,
                "seed {seed} {config:?}"
            );
            assert_eq!(
                check_solution(&game, &params, &result.solution),
                Ok(()),
                "seed {seed}"
            );
            let trace = result.trace.unwrap();
            assert!(trace.is_strictly_increasing(), "seed {seed}");
            assert_eq!(trace.len(), result.steps);
        }
    }
}

#[test]
fn dependent_sets_encoding_gives_the_same_runs() {
    for seed in 0..300 {
        let game = corpus_game(seed);
        for algorithm in Algorithm::ALL {
            let a = solve(&game, &SolverConfig::new(algorithm).traced()).unwrap();
            let b = solve(
                &game,
                &SolverConfig::new(algorithm)
                    .traced()
                    .with_encoding(DependencyEncoding::DependentSets),
            )
            .unwrap();
            assert_eq!(a.trace, b.trace, "seed {seed} {algorithm}");
        }
    }
}

fn node(owner: usize, priority: u64, succ: &[usize]) -> NodeSpec {
    NodeSpec::new(
        Player::from_index(owner).unwrap(),
        priority,
        succ.iter().map(|&i| NodeId(i)).collect(),
    )
}

#[test]
fn single_priority_games() {
    // every node has priority 2
    let game = ParityGame::new(vec![
        node(0, 2, &[1]),
        node(1, 2, &[0, 2]),
        node(0, 2, &[2]),
    ])
    .unwrap();
    let z = solve(&game, &SolverConfig::new(Algorithm::Zielonka).audited()).unwrap();
    assert!(z.solution.winner.iter().all(|&p| p == Player::Even));
    let pp = solve(
        &game,
        &SolverConfig::new(Algorithm::PriorityPromotion).audited(),
    )
    .unwrap();
    assert_eq!(
        pp.regions,
        vec![Region {
            level: 2,
            nodes: vec![NodeId(0), NodeId(1), NodeId(2)],
            escape: Level::Infinite,
        }]
    );
    let f = solve(&game, &SolverConfig::new(Algorithm::Fixpoint)).unwrap();
    assert_eq!(f.steps, 3);
}

#[test]
fn self_loop_game_takes_one_step() {
    let game = ParityGame::new(vec![node(0, 0, &[0])]).unwrap();
    for algorithm in Algorithm::ALL {
        let r = solve(&game, &SolverConfig::new(algorithm).audited()).unwrap();
        assert_eq!(r.steps, 1);
        assert_eq!(r.solution.winner, vec![Player::Even]);
    }
}

#[test]
fn closed_needs_every_top_priority_node() {
    let game = ParityGame::new(vec![node(0, 2, &[0]), node(0, 2, &[1]), node(0, 1, &[2])]).unwrap();
    let mut j = parity_justify::Justification::new(&game);
    let all = [NodeId(0), NodeId(1), NodeId(2)];
    assert!(!closed(&j, &all, 2));
    parity_justify::justify(
        &mut j,
        NodeId(0),
        parity_justify::DirectJustification::Edge(NodeId(0)),
        ResetPolicy::Minimal,
    )
    .unwrap();
    assert!(!closed(&j, &all, 2));
    parity_justify::justify(
        &mut j,
        NodeId(1),
        parity_justify::DirectJustification::Edge(NodeId(1)),
        ResetPolicy::Minimal,
    )
    .unwrap();
    assert!(closed(&j, &all, 2));
}
