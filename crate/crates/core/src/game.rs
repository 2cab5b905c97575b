//! Parity games, parametrized parity games and their play/solution semantics.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph;

/// Node priority. Any non-negative integer is legal, including 0.
pub type Priority = u64;

/// One of the two players. Even wins even priorities, Odd wins odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Even, Player::Odd];

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The winner of a priority: `priority mod 2`.
    #[inline]
    pub fn of_priority(priority: Priority) -> Player {
        if priority.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Player> {
        match index {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Returns the player that wins plays whose dominant priority is `priority`.
pub fn winner_of_priority(priority: Priority) -> Player {
    Player::of_priority(priority)
}

/// Dense 0-based node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unvalidated description of a single node, used to build a [`ParityGame`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub owner: Player,
    pub priority: Priority,
    pub successors: Vec<NodeId>,
    pub name: Option<String>,
}

impl NodeSpec {
    pub fn new(owner: Player, priority: Priority, successors: Vec<NodeId>) -> Self {
        NodeSpec {
            owner,
            priority,
            successors,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
}

/// A structural problem that prevents a node list from forming a parity game.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("node {0} has no successor (every node needs at least one move)")]
    MissingSuccessor(NodeId),
    #[error("edge {from} -> {to} points outside the game")]
    OutOfRangeEdge { from: NodeId, to: NodeId },
    #[error("edge {from} -> {to} is listed twice")]
    DuplicateEdge { from: NodeId, to: NodeId },
}

/// Checks the structural requirements of a parity game. An empty result means
/// the nodes form a legal game.
pub fn validate_game(nodes: &[NodeSpec]) -> Vec<Violation> {
    let mut violations = Vec::new();
    for (index, node) in nodes.iter().enumerate() {
        let from = NodeId(index);
        if node.successors.is_empty() {
            violations.push(Violation::MissingSuccessor(from));
        }
        let mut seen = HashSet::with_capacity(node.successors.len());
        for &to in &node.successors {
            if to.index() >= nodes.len() {
                violations.push(Violation::OutOfRangeEdge { from, to });
            } else if !seen.insert(to) {
                violations.push(Violation::DuplicateEdge { from, to });
            }
        }
    }
    violations
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid game: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("expected {expected} external ids, got {got}")]
    IdCount { expected: usize, got: usize },
    #[error("external id {0} is used twice")]
    DuplicateId(u64),
}

/// An immutable parity game `(V, E, O, Pr)`.
///
/// Nodes are dense indices. Each node also carries the external id it had in
/// its source file (the index itself for games built in memory) and an
/// optional display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    owners: Vec<Player>,
    priorities: Vec<Priority>,
    successors: Vec<Vec<NodeId>>,
    predecessors: Vec<Vec<NodeId>>,
    ids: Vec<u64>,
    names: Vec<Option<String>>,
}

impl ParityGame {
    pub fn new(nodes: Vec<NodeSpec>) -> Result<Self, GameError> {
        let ids = (0..nodes.len() as u64).collect();
        Self::with_ids(nodes, ids)
    }

    /// Builds a game whose nodes keep the given external ids.
    pub fn with_ids(nodes: Vec<NodeSpec>, ids: Vec<u64>) -> Result<Self, GameError> {
        if ids.len() != nodes.len() {
            return Err(GameError::IdCount {
                expected: nodes.len(),
                got: ids.len(),
            });
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for &id in &ids {
            if !seen.insert(id) {
                return Err(GameError::DuplicateId(id));
            }
        }
        let violations = validate_game(&nodes);
        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }

        let n = nodes.len();
        let mut owners = Vec::with_capacity(n);
        let mut priorities = Vec::with_capacity(n);
        let mut successors = Vec::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        let mut predecessors = vec![Vec::new(); n];
        for (index, node) in nodes.into_iter().enumerate() {
            for &w in &node.successors {
                predecessors[w.index()].push(NodeId(index));
            }
            owners.push(node.owner);
            priorities.push(node.priority);
            successors.push(node.successors);
            names.push(node.name);
        }
        Ok(ParityGame {
            owners,
            priorities,
            successors,
            predecessors,
            ids,
            names,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.owners.len()
    }

    pub fn nodes(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.node_count()).map(NodeId)
    }

    #[inline]
    pub fn owner(&self, v: NodeId) -> Player {
        self.owners[v.index()]
    }

    #[inline]
    pub fn priority(&self, v: NodeId) -> Priority {
        self.priorities[v.index()]
    }

    #[inline]
    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.successors[v.index()]
    }

    /// E-predecessors of `v`, in ascending order.
    #[inline]
    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        &self.predecessors[v.index()]
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.successors(from).contains(&to)
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// External id of `v` (the id used in the file it was read from).
    #[inline]
    pub fn external_id(&self, v: NodeId) -> u64 {
        self.ids[v.index()]
    }

    pub fn node_by_external_id(&self, id: u64) -> Option<NodeId> {
        self.ids.iter().position(|&x| x == id).map(NodeId)
    }

    pub fn name(&self, v: NodeId) -> Option<&str> {
        self.names[v.index()].as_deref()
    }

    /// Display name of `v`: its name if present, its external id otherwise.
    pub fn label(&self, v: NodeId) -> String {
        match self.name(v) {
            Some(name) => name.to_owned(),
            None => self.external_id(v).to_string(),
        }
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names
            .iter()
            .position(|n| n.as_deref() == Some(name))
            .map(NodeId)
    }

    pub fn max_priority(&self) -> Option<Priority> {
        self.priorities.iter().copied().max()
    }

    pub fn min_priority(&self) -> Option<Priority> {
        self.priorities.iter().copied().min()
    }

    /// Converts the game back into node specs (dense ids).
    pub fn to_specs(&self) -> Vec<NodeSpec> {
        self.nodes()
            .map(|v| NodeSpec {
                owner: self.owner(v),
                priority: self.priority(v),
                successors: self.successors(v).to_vec(),
                name: self.names[v.index()].clone(),
            })
            .collect()
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.ids
    }
}

/// A total map from nodes to players.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypothesis(Vec<Player>);

impl Hypothesis {
    pub fn new(values: Vec<Player>) -> Self {
        Hypothesis(values)
    }

    pub fn constant(len: usize, player: Player) -> Self {
        Hypothesis(vec![player; len])
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Player {
        self.0[v.index()]
    }

    #[inline]
    pub fn set(&mut self, v: NodeId, player: Player) {
        self.0[v.index()] = player;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Player] {
        &self.0
    }
}

/// The default hypothesis: every node is won by the winner of its priority.
pub fn default_hypothesis(game: &ParityGame) -> Hypothesis {
    Hypothesis(
        game.nodes()
            .map(|v| Player::of_priority(game.priority(v)))
            .collect(),
    )
}

/// Partial map assigning a winner to each parameter node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParameterMap(Vec<Option<Player>>);

impl ParameterMap {
    pub fn empty(len: usize) -> Self {
        ParameterMap(vec![None; len])
    }

    pub fn from_vec(values: Vec<Option<Player>>) -> Self {
        ParameterMap(values)
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Option<Player> {
        self.0[v.index()]
    }

    pub fn set(&mut self, v: NodeId, player: Option<Player>) {
        self.0[v.index()] = player;
    }

    #[inline]
    pub fn is_parameter(&self, v: NodeId) -> bool {
        self.0[v.index()].is_some()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `dom(P)` in ascending order.
    pub fn domain(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_some())
            .map(|(i, _)| NodeId(i))
    }

    /// `P_alpha`: the parameters assigned to `player`.
    pub fn assigned_to(&self, player: Player) -> impl Iterator<Item = NodeId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, p)| **p == Some(player))
            .map(|(i, _)| NodeId(i))
    }

    pub fn as_slice(&self) -> &[Option<Player>] {
        &self.0
    }
}

/// How a finite play prefix ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlayEnd {
    /// The last node is a parameter; the play stops there.
    Halted,
    /// The last node moves back to `nodes[start]` and the suffix from
    /// `start` repeats forever.
    Cycle { start: usize },
}

/// A play represented by a finite prefix plus how it continues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Play {
    pub nodes: Vec<NodeId>,
    pub end: PlayEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("play is empty")]
    Empty,
    #[error("node {0} is not in the game")]
    UnknownNode(NodeId),
    #[error("no edge {from} -> {to}")]
    MissingEdge { from: NodeId, to: NodeId },
    #[error("play passes parameter {0} without halting")]
    PassesParameter(NodeId),
    #[error("play halts at {0}, which is not a parameter")]
    HaltsAtNonParameter(NodeId),
    #[error("cycle start {start} is outside a play of length {len}")]
    BadCycleStart { start: usize, len: usize },
}

/// Winner of a play in the parametrized game `(game, params)`.
pub fn play_winner(
    game: &ParityGame,
    params: &ParameterMap,
    play: &Play,
) -> Result<Player, PlayError> {
    let nodes = &play.nodes;
    let last = *nodes.last().ok_or(PlayError::Empty)?;
    for &v in nodes {
        if v.index() >= game.node_count() {
            return Err(PlayError::UnknownNode(v));
        }
    }
    for pair in nodes.windows(2) {
        if params.is_parameter(pair[0]) {
            return Err(PlayError::PassesParameter(pair[0]));
        }
        if !game.has_edge(pair[0], pair[1]) {
            return Err(PlayError::MissingEdge {
                from: pair[0],
                to: pair[1],
            });
        }
    }
    match play.end {
        PlayEnd::Halted => params.get(last).ok_or(PlayError::HaltsAtNonParameter(last)),
        PlayEnd::Cycle { start } => {
            if start >= nodes.len() {
                return Err(PlayError::BadCycleStart {
                    start,
                    len: nodes.len(),
                });
            }
            if params.is_parameter(last) {
                return Err(PlayError::PassesParameter(last));
            }
            if !game.has_edge(last, nodes[start]) {
                return Err(PlayError::MissingEdge {
                    from: last,
                    to: nodes[start],
                });
            }
            let top = nodes[start..]
                .iter()
                .map(|&v| game.priority(v))
                .max()
                .expect("cycle part is non-empty");
            Ok(Player::of_priority(top))
        }
    }
}

/// Reduces a parametrized game to an ordinary one: every parameter `v` gets a
/// self-loop as its only move and priority `P(v)`.
pub fn ppg_to_pg(game: &ParityGame, params: &ParameterMap) -> ParityGame {
    let mut reduced = game.clone();
    for v in params.domain() {
        let winner = params.get(v).expect("v is in the domain");
        reduced.priorities[v.index()] = winner.index() as Priority;
        reduced.successors[v.index()] = vec![v];
    }
    let mut predecessors = vec![Vec::new(); reduced.node_count()];
    for v in reduced.nodes() {
        for &w in reduced.successors(v) {
            predecessors[w.index()].push(v);
        }
    }
    reduced.predecessors = predecessors;
    reduced
}

/// A memoryless strategy: partial map from nodes to chosen successors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy(Vec<Option<NodeId>>);

impl Strategy {
    pub fn empty(len: usize) -> Self {
        Strategy(vec![None; len])
    }

    pub fn from_vec(values: Vec<Option<NodeId>>) -> Self {
        Strategy(values)
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.0[v.index()]
    }

    pub fn set(&mut self, v: NodeId, target: Option<NodeId>) {
        self.0[v.index()] = target;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(i, _)| NodeId(i))
    }

    pub fn as_slice(&self) -> &[Option<NodeId>] {
        &self.0
    }
}

/// Winner per node together with a memoryless strategy for each player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategies: [Strategy; 2],
}

impl Solution {
    #[inline]
    pub fn winner(&self, v: NodeId) -> Player {
        self.winner[v.index()]
    }

    #[inline]
    pub fn strategy(&self, player: Player) -> &Strategy {
        &self.strategies[player.index()]
    }

    pub fn strategy_mut(&mut self, player: Player) -> &mut Strategy {
        &mut self.strategies[player.index()]
    }

    /// The move prescribed at `v` by the strategy of its winner, if any.
    pub fn choice(&self, v: NodeId) -> Option<NodeId> {
        self.strategy(self.winner(v)).get(v)
    }

    pub fn won_by(&self, player: Player) -> impl Iterator<Item = NodeId> + '_ {
        self.winner
            .iter()
            .enumerate()
            .filter(move |(_, w)| **w == player)
            .map(|(i, _)| NodeId(i))
    }
}

/// Why a solution was refuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// A play from `start` consistent with the winner's strategy reaches a
    /// parameter assigned to the other player.
    ReachesParameter { start: NodeId, parameter: NodeId },
    /// A play from `start` can end up looping on `cycle`, whose highest
    /// priority belongs to the other player.
    LosingCycle { start: NodeId, cycle: Vec<NodeId> },
}

impl Refutation {
    pub fn start(&self) -> NodeId {
        match self {
            Refutation::ReachesParameter { start, .. } | Refutation::LosingCycle { start, .. } => {
                *start
            }
        }
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::ReachesParameter { start, parameter } => write!(
                f,
                "from node {start} the opponent can reach parameter {parameter}"
            ),
            Refutation::LosingCycle { start, cycle } => {
                let cycle: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
                write!(
                    f,
                    "from node {start} the opponent can force the losing cycle <{}>",
                    cycle.join(",")
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("solution covers {got} nodes, game has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("strategy of player {player} is missing a move at node {node}")]
    MissingMove { player: Player, node: NodeId },
    #[error("strategy of player {player} has a move at node {node} outside its domain")]
    UnexpectedMove { player: Player, node: NodeId },
    #[error("strategy of player {player} moves {node} -> {target}, which is not an edge")]
    NotAnEdge {
        player: Player,
        node: NodeId,
        target: NodeId,
    },
    #[error("{0}")]
    Refuted(Refutation),
}

impl SolutionError {
    /// Whether the solution is structurally broken (as opposed to refuted).
    pub fn is_malformed(&self) -> bool {
        !matches!(self, SolutionError::Refuted(_))
    }
}

/// Checks that `solution` solves the parametrized game `(game, params)`:
/// every play from a node consistent with its winner's strategy is won by
/// that winner.
pub fn check_solution(
    game: &ParityGame,
    params: &ParameterMap,
    solution: &Solution,
) -> Result<(), SolutionError> {
    let n = game.node_count();
    for len in [
        solution.winner.len(),
        solution.strategies[0].len(),
        solution.strategies[1].len(),
        params.len(),
    ] {
        if len != n {
            return Err(SolutionError::WrongLength {
                expected: n,
                got: len,
            });
        }
    }

    for player in Player::BOTH {
        let strategy = solution.strategy(player);
        for v in game.nodes() {
            let in_domain = solution.winner(v) == player
                && game.owner(v) == player
                && params.get(v) != Some(player);
            match (in_domain, strategy.get(v)) {
                (true, None) => return Err(SolutionError::MissingMove { player, node: v }),
                (false, Some(_)) => return Err(SolutionError::UnexpectedMove { player, node: v }),
                (true, Some(target)) if !game.has_edge(v, target) => {
                    return Err(SolutionError::NotAnEdge {
                        player,
                        node: v,
                        target,
                    })
                }
                _ => {}
            }
        }
    }

    for player in Player::BOTH {
        if let Some(refutation) = refute_region(game, params, solution, player) {
            return Err(SolutionError::Refuted(refutation));
        }
    }
    Ok(())
}

/// Looks for a play starting in the region of `player` that is consistent
/// with its strategy but not won by it.
fn refute_region(
    game: &ParityGame,
    params: &ParameterMap,
    solution: &Solution,
    player: Player,
) -> Option<Refutation> {
    let n = game.node_count();
    let strategy = solution.strategy(player);
    let moves = |v: NodeId| -> &[NodeId] {
        if params.is_parameter(v) {
            &[]
        } else if let Some(target) = strategy.get(v) {
            let pos = game
                .successors(v)
                .iter()
                .position(|&w| w == target)
                .expect("strategy targets were validated");
            &game.successors(v)[pos..=pos]
        } else {
            game.successors(v)
        }
    };

    // Multi-source search from the region, remembering which start reached
    // each node.
    let mut origin: Vec<Option<NodeId>> = vec![None; n];
    let mut queue = VecDeque::new();
    for v in solution.won_by(player) {
        origin[v.index()] = Some(v);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        if params.get(v) == Some(player.opponent()) {
            return Some(Refutation::ReachesParameter {
                start: origin[v.index()].expect("visited"),
                parameter: v,
            });
        }
        for &w in moves(v) {
            if origin[w.index()].is_none() {
                origin[w.index()] = origin[v.index()];
                queue.push_back(w);
            }
        }
    }

    // A losing cycle exists iff some opponent-parity node of priority q lies
    // on a cycle through nodes of priority <= q.
    let thresholds: BTreeSet<Priority> = game
        .nodes()
        .filter(|&v| origin[v.index()].is_some() && !params.is_parameter(v))
        .map(|v| game.priority(v))
        .filter(|&q| Player::of_priority(q) != player)
        .collect();
    for q in thresholds {
        let keep = |v: NodeId| {
            origin[v.index()].is_some() && !params.is_parameter(v) && game.priority(v) <= q
        };
        let sccs = graph::strongly_connected_components(n, keep, |v| moves(v).to_vec());
        for v in game.nodes() {
            if keep(v) && game.priority(v) == q {
                if let Some(cycle) = sccs.cycle_through(v, |u| moves(u).to_vec()) {
                    return Some(Refutation::LosingCycle {
                        start: origin[v.index()].expect("visited"),
                        cycle,
                    });
                }
            }
        }
    }
    None
}
