//! Parity games solved by safe justification steps.
//!
//! A [`Justification`] records, per node, a hypothetical winner and the
//! edges that witness it. The [`justify`] step refines a justification while
//! keeping it safe, and each solver in [`solvers`] is a particular order of
//! such steps. The [`oracle`] module provides a brute-force reference for
//! small games.

pub mod game;
mod graph;
pub mod io;
pub mod justification;
pub mod justify;
pub mod oracle;
pub mod solvers;

pub use game::{
    check_solution, default_hypothesis, play_winner, ppg_to_pg, validate_game, winner_of_priority,
    Hypothesis, NodeId, NodeSpec, ParameterMap, ParityGame, Play, PlayEnd, Player, Priority,
    Solution, Strategy,
};
pub use justification::{
    DependencyEncoding, DirectJustification, Justification, Level, SafetyReport,
};
pub use justify::{justify, JustifyTrace, ResetPolicy, SizeTuple};
pub use solvers::{solve, Algorithm, SolveError, SolveResult, SolverConfig};
