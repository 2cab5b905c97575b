//! Justification graphs `(V, D, H)`.
//!
//! A justification stores, per node, an optional direct justification (the
//! outgoing edges in `D`) and a hypothetical winner. Unjustified nodes act as
//! parameters of the induced parametrized game, assigned to their hypothesis.
//! Justification levels are kept up to date incrementally: a change at a node
//! can only affect the nodes that reach it in `D`.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::game::{
    default_hypothesis, Hypothesis, NodeId, ParameterMap, ParityGame, Player, Priority, Solution,
    Strategy,
};
use crate::graph;

/// A justification level: a priority, or `+inf` when no parameter is reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(Priority),
    Infinite,
}

impl Level {
    pub fn is_infinite(self) -> bool {
        matches!(self, Level::Infinite)
    }

    /// Whether this level is at least the given priority.
    pub fn at_least(self, priority: Priority) -> bool {
        self >= Level::Finite(priority)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(p) => write!(f, "{p}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

/// Compact direct justification: either the single chosen successor or all
/// successors of the node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectJustification {
    Edge(NodeId),
    AllSuccessors,
}

impl DirectJustification {
    /// The targets of this direct justification at node `v`.
    pub fn targets<'a>(&'a self, game: &'a ParityGame, v: NodeId) -> &'a [NodeId] {
        match self {
            DirectJustification::Edge(w) => std::slice::from_ref(w),
            DirectJustification::AllSuccessors => game.successors(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("{from} -> {to} is not an edge of the game")]
    NotAnEdge { from: NodeId, to: NodeId },
    #[error("node {0} is not in the game")]
    UnknownNode(NodeId),
}

/// Checks that `dj` only uses edges of `v`.
pub fn check_shape(
    game: &ParityGame,
    v: NodeId,
    dj: DirectJustification,
) -> Result<(), ShapeError> {
    if v.index() >= game.node_count() {
        return Err(ShapeError::UnknownNode(v));
    }
    if let DirectJustification::Edge(w) = dj {
        if !game.has_edge(v, w) {
            return Err(ShapeError::NotAnEdge { from: v, to: w });
        }
    }
    Ok(())
}

/// Reverse index used to find the nodes whose direct justification points at
/// a given node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DependencyEncoding {
    /// Scan the game predecessors of the node and test their justification.
    #[default]
    ScanPredecessors,
    /// Keep an explicit set of dependents per node.
    DependentSets,
}

#[derive(Debug, Clone)]
enum DependencyIndex {
    Scan,
    Sets(Vec<BTreeSet<NodeId>>),
}

/// One entry of a batch update `J[v : dj, player]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Update {
    pub node: NodeId,
    pub direct: Option<DirectJustification>,
    pub hypothesis: Player,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("node {0} is updated more than once in one batch")]
    DuplicateNode(NodeId),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// A reason why a justification is not weakly winning, winning or safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The direct justification of the node does not win it for its hypothesis.
    NotWinning(NodeId),
    /// A cycle in `D` whose highest priority is won by the other player.
    LosingCycle(Vec<NodeId>),
    /// An unjustified node whose hypothesis is not its default winner.
    NonDefaultParameter(NodeId),
    /// A node whose justification level is below its priority.
    LevelBelowPriority { node: NodeId, level: Level },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotWinning(v) => write!(f, "direct justification of {v} does not win it"),
            Witness::LosingCycle(c) => {
                let c: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "cycle <{}> is lost by its hypothesis", c.join(","))
            }
            Witness::NonDefaultParameter(v) => {
                write!(f, "parameter {v} is not assigned its default winner")
            }
            Witness::LevelBelowPriority { node, level } => {
                write!(
                    f,
                    "node {node} has justification level {level} below its priority"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyReport {
    pub weakly_winning: bool,
    pub winning: bool,
    pub safe: bool,
    pub witnesses: Vec<Witness>,
}

/// A justification `(V, D, H)` over a borrowed game.
#[derive(Debug, Clone)]
pub struct Justification<'g> {
    game: &'g ParityGame,
    direct: Vec<Option<DirectJustification>>,
    hyp: Hypothesis,
    index: DependencyIndex,
    levels: Vec<Level>,
}

impl<'g> Justification<'g> {
    /// The empty justification `(V, {}, H_d)`.
    pub fn new(game: &'g ParityGame) -> Self {
        Self::with_encoding(game, DependencyEncoding::default())
    }

    pub fn with_encoding(game: &'g ParityGame, encoding: DependencyEncoding) -> Self {
        let n = game.node_count();
        let index = match encoding {
            DependencyEncoding::ScanPredecessors => DependencyIndex::Scan,
            DependencyEncoding::DependentSets => DependencyIndex::Sets(vec![BTreeSet::new(); n]),
        };
        Justification {
            game,
            direct: vec![None; n],
            hyp: default_hypothesis(game),
            index,
            levels: game
                .nodes()
                .map(|v| Level::Finite(game.priority(v)))
                .collect(),
        }
    }

    #[inline]
    pub fn game(&self) -> &'g ParityGame {
        self.game
    }

    pub fn encoding(&self) -> DependencyEncoding {
        match self.index {
            DependencyIndex::Scan => DependencyEncoding::ScanPredecessors,
            DependencyIndex::Sets(_) => DependencyEncoding::DependentSets,
        }
    }

    #[inline]
    pub fn direct(&self, v: NodeId) -> Option<DirectJustification> {
        self.direct[v.index()]
    }

    #[inline]
    pub fn hypothesis(&self, v: NodeId) -> Player {
        self.hyp.get(v)
    }

    pub fn hypotheses(&self) -> &Hypothesis {
        &self.hyp
    }

    #[inline]
    pub fn is_justified(&self, v: NodeId) -> bool {
        self.direct[v.index()].is_some()
    }

    pub fn unjustified(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.game.nodes().filter(|&v| !self.is_justified(v))
    }

    pub fn unjustified_count(&self) -> usize {
        self.direct.iter().filter(|d| d.is_none()).count()
    }

    /// Outgoing `D`-edges of `v` (empty when unjustified).
    #[inline]
    pub fn targets(&self, v: NodeId) -> &[NodeId] {
        match &self.direct[v.index()] {
            Some(dj) => dj.targets(self.game, v),
            None => &[],
        }
    }

    /// Nodes `u` with a `D`-edge `u -> v`, ascending.
    pub fn dependents(&self, v: NodeId) -> Vec<NodeId> {
        match &self.index {
            DependencyIndex::Scan => self
                .game
                .predecessors(v)
                .iter()
                .copied()
                .filter(|&u| self.targets(u).contains(&v))
                .collect(),
            DependencyIndex::Sets(sets) => sets[v.index()].iter().copied().collect(),
        }
    }

    /// The player `dj` wins `v` for under the current hypothesis, if any.
    ///
    /// A direct justification for `alpha` is one edge when `alpha` owns `v`
    /// and all edges otherwise; it wins when every target is hypothetically
    /// won by `alpha`.
    pub fn wins_for(
        &self,
        v: NodeId,
        dj: DirectJustification,
    ) -> Result<Option<Player>, ShapeError> {
        check_shape(self.game, v, dj)?;
        let targets = dj.targets(self.game, v);
        let first = self.hypothesis(targets[0]);
        if targets.iter().any(|&w| self.hypothesis(w) != first) {
            return Ok(None);
        }
        let owner = self.game.owner(v);
        let single = targets.len() == 1;
        let all = targets.len() == self.game.successors(v).len();
        let fits = if first == owner { single } else { all };
        Ok(fits.then_some(first))
    }

    /// The parameter function of the induced game: `H` restricted to
    /// unjustified nodes.
    pub fn parameters(&self) -> ParameterMap {
        ParameterMap::from_vec(
            self.game
                .nodes()
                .map(|v| (!self.is_justified(v)).then(|| self.hypothesis(v)))
                .collect(),
        )
    }

    /// Nodes reaching `v` in `D`, including `v`, ascending.
    pub fn reach_down(&self, v: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.game.node_count()];
        self.collect_down(v, &mut seen);
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    fn collect_down(&self, v: NodeId, seen: &mut [bool]) {
        if seen[v.index()] {
            return;
        }
        seen[v.index()] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in self.dependents(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Nodes reachable from `v` in `D`, including `v`, ascending.
    pub fn reach_up(&self, v: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.game.node_count()];
        seen[v.index()] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in self.targets(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    /// Justification level of `v`: the lowest priority among the parameters
    /// reachable from `v`, `+inf` if there are none.
    #[inline]
    pub fn level(&self, v: NodeId) -> Level {
        self.levels[v.index()]
    }

    /// Justification level of `dj` at `v`: the minimum level of its targets.
    pub fn dj_level(&self, v: NodeId, dj: DirectJustification) -> Level {
        dj.targets(self.game, v)
            .iter()
            .map(|&w| self.level(w))
            .min()
            .unwrap_or(Level::Infinite)
    }

    /// Recomputes every level by explicit reachability, ignoring the cache.
    pub fn recompute_levels(&self) -> Vec<Level> {
        self.game
            .nodes()
            .map(|v| {
                self.reach_up(v)
                    .into_iter()
                    .filter(|&w| !self.is_justified(w))
                    .map(|w| Level::Finite(self.game.priority(w)))
                    .min()
                    .unwrap_or(Level::Infinite)
            })
            .collect()
    }

    /// Applies a batch of updates `J[v : dj, player | ...]`. Returns the nodes
    /// whose justification level may have changed, ascending.
    pub fn apply(&mut self, updates: &[Update]) -> Result<Vec<NodeId>, ApplyError> {
        let mut nodes = HashSet::with_capacity(updates.len());
        for u in updates {
            if !nodes.insert(u.node) {
                return Err(ApplyError::DuplicateNode(u.node));
            }
            if let Some(dj) = u.direct {
                check_shape(self.game, u.node, dj)?;
            } else if u.node.index() >= self.game.node_count() {
                return Err(ShapeError::UnknownNode(u.node).into());
            }
        }

        // Levels can only change for nodes reaching an updated node in the
        // old D; paths in the new D first meet an updated node along old edges.
        let mut affected = vec![false; self.game.node_count()];
        for u in updates {
            self.collect_down(u.node, &mut affected);
        }

        for u in updates {
            if let DependencyIndex::Sets(sets) = &mut self.index {
                if let Some(old) = self.direct[u.node.index()] {
                    for &w in old.targets(self.game, u.node) {
                        sets[w.index()].remove(&u.node);
                    }
                }
                if let Some(new) = u.direct {
                    for &w in new.targets(self.game, u.node) {
                        sets[w.index()].insert(u.node);
                    }
                }
            }
            self.direct[u.node.index()] = u.direct;
            self.hyp.set(u.node, u.hypothesis);
        }

        let touched: Vec<NodeId> = affected
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| NodeId(i))
            .collect();
        self.refresh_levels(&touched, &affected);
        Ok(touched)
    }

    /// Recomputes levels on `set`, which is closed under `D`-predecessors.
    /// Minimum levels propagate backwards, so settling nodes in ascending
    /// order of level finalises each node once.
    fn refresh_levels(&mut self, set: &[NodeId], member: &[bool]) {
        let mut heap = BinaryHeap::new();
        for &w in set {
            let level = if self.is_justified(w) {
                self.targets(w)
                    .iter()
                    .filter(|t| !member[t.index()])
                    .map(|&t| self.levels[t.index()])
                    .min()
                    .unwrap_or(Level::Infinite)
            } else {
                Level::Finite(self.game.priority(w))
            };
            self.levels[w.index()] = level;
            if level != Level::Infinite {
                heap.push(Reverse((level, w)));
            }
        }
        let mut done = vec![false; self.game.node_count()];
        while let Some(Reverse((level, w))) = heap.pop() {
            if done[w.index()] || level != self.levels[w.index()] {
                continue;
            }
            done[w.index()] = true;
            for u in self.dependents(w) {
                if member[u.index()] && level < self.levels[u.index()] {
                    self.levels[u.index()] = level;
                    heap.push(Reverse((level, u)));
                }
            }
        }
    }

    /// Justified nodes whose direct justification does not win them for their
    /// hypothesis.
    pub fn check_weakly_winning(&self) -> Vec<Witness> {
        self.game
            .nodes()
            .filter_map(|v| {
                let dj = self.direct(v)?;
                let wins = self.wins_for(v, dj).ok().flatten();
                (wins != Some(self.hypothesis(v))).then_some(Witness::NotWinning(v))
            })
            .collect()
    }

    /// Cycles in `D` lost by the hypothesis of their nodes, one per offending
    /// top node.
    fn losing_cycles(&self) -> Vec<Witness> {
        let n = self.game.node_count();
        let thresholds: BTreeSet<Priority> = self
            .game
            .nodes()
            .filter(|&v| {
                self.is_justified(v)
                    && Player::of_priority(self.game.priority(v)) != self.hypothesis(v)
            })
            .map(|v| self.game.priority(v))
            .collect();
        let succ = |v: NodeId| self.targets(v).to_vec();
        let mut witnesses = Vec::new();
        for q in thresholds {
            let keep = |v: NodeId| self.is_justified(v) && self.game.priority(v) <= q;
            let sccs = graph::strongly_connected_components(n, keep, succ);
            for v in self.game.nodes() {
                if keep(v)
                    && self.game.priority(v) == q
                    && Player::of_priority(q) != self.hypothesis(v)
                {
                    if let Some(cycle) = sccs.cycle_through(v, succ) {
                        witnesses.push(Witness::LosingCycle(cycle));
                    }
                }
            }
        }
        witnesses
    }

    /// Weak-winning witnesses followed by losing `D`-cycles. Every infinite
    /// `D`-path ends in a cycle, so the justification is winning iff this is
    /// empty.
    pub fn check_winning(&self) -> Vec<Witness> {
        let mut witnesses = self.check_weakly_winning();
        witnesses.extend(self.losing_cycles());
        witnesses
    }

    pub fn check_safe(&self) -> SafetyReport {
        let weak = self.check_weakly_winning();
        let cycles = self.losing_cycles();
        let weakly_winning = weak.is_empty();
        let winning = weakly_winning && cycles.is_empty();
        let mut witnesses = weak;
        witnesses.extend(cycles);
        let before = witnesses.len();
        let defaults = default_hypothesis(self.game);
        for v in self.game.nodes() {
            if !self.is_justified(v) && self.hypothesis(v) != defaults.get(v) {
                witnesses.push(Witness::NonDefaultParameter(v));
            }
        }
        for v in self.game.nodes() {
            let level = self.level(v);
            if !level.at_least(self.game.priority(v)) {
                witnesses.push(Witness::LevelBelowPriority { node: v, level });
            }
        }
        SafetyReport {
            weakly_winning,
            winning,
            safe: winning && witnesses.len() == before,
            witnesses,
        }
    }

    pub fn is_safe(&self) -> bool {
        self.check_safe().safe
    }

    /// `sigma_{J,player}`: the `D`-edges of nodes owned by and hypothetically
    /// won by `player`.
    pub fn extract_strategy(&self, player: Player) -> Strategy {
        Strategy::from_vec(
            self.game
                .nodes()
                .map(|v| {
                    if self.game.owner(v) == player && self.hypothesis(v) == player {
                        self.targets(v).first().copied()
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }

    /// The hypothesis and both extracted strategies as a solution of the
    /// induced parametrized game.
    pub fn to_solution(&self) -> Solution {
        Solution {
            winner: self.hyp.as_slice().to_vec(),
            strategies: [
                self.extract_strategy(Player::Even),
                self.extract_strategy(Player::Odd),
            ],
        }
    }

    /// Graphviz rendering: boxes are Even nodes, diamonds Odd nodes, fill
    /// colour is the hypothesis, parameters have a bold outline, bold edges
    /// are in `D` and dotted edges are the remaining moves.
    pub fn to_dot(&self) -> String {
        let g = self.game;
        let mut out = String::from("digraph justification {\n");
        for v in g.nodes() {
            let shape = match g.owner(v) {
                Player::Even => "box",
                Player::Odd => "diamond",
            };
            let color = match self.hypothesis(v) {
                Player::Even => "lightblue",
                Player::Odd => "lightpink",
            };
            let pen = if self.is_justified(v) { 1 } else { 3 };
            let label = format!("{}:{}", g.label(v), g.priority(v)).replace('"', "\\\"");
            let _ = writeln!(
                out,
                "  n{} [label=\"{label}\", shape={shape}, style=filled, fillcolor={color}, penwidth={pen}];",
                v.index()
            );
        }
        for v in g.nodes() {
            let d = self.targets(v);
            for &w in g.successors(v) {
                let style = if d.contains(&w) { "bold" } else { "dotted" };
                let _ = writeln!(out, "  n{} -> n{} [style={style}];", v.index(), w.index());
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::NodeSpec;

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

    fn upd(node: usize, direct: Option<DirectJustification>, h: Player) -> Update {
        Update {
            node: NodeId(node),
            direct,
            hypothesis: h,
        }
    }

    use DirectJustification::{AllSuccessors, Edge};
    use Player::{Even, Odd};

    #[test]
    fn empty_justification() {
        let g = game(&[(0, 2, &[1]), (1, 1, &[0, 1])]);
        let j = Justification::new(&g);
        assert_eq!(j.parameters().domain().count(), 2);
        assert_eq!(j.parameters().get(NodeId(1)), Some(Odd));
        assert!(j.check_weakly_winning().is_empty());
        assert!(j.check_safe().safe);
        assert_eq!(j.extract_strategy(Even).domain().count(), 0);
        assert_eq!(j.reach_down(NodeId(0)), vec![NodeId(0)]);
        assert_eq!(j.reach_up(NodeId(0)), vec![NodeId(0)]);
        assert_eq!(j.level(NodeId(0)), Level::Finite(2));
    }

    #[test]
    fn wins_for_shapes() {
        // 0: Even, -> 1 (odd pr) ; 1: Odd -> 0,1 ; 2: Odd -> 0 only
        let g = game(&[(0, 2, &[1, 0]), (1, 1, &[0, 1]), (1, 4, &[0])]);
        let j = Justification::new(&g);
        assert_eq!(j.wins_for(NodeId(0), Edge(NodeId(0))), Ok(Some(Even)));
        // one edge to an Odd node from an Even node fits neither player
        assert_eq!(j.wins_for(NodeId(0), Edge(NodeId(1))), Ok(None));
        // mixed hypotheses
        assert_eq!(j.wins_for(NodeId(1), AllSuccessors), Ok(None));
        assert_eq!(j.wins_for(NodeId(1), Edge(NodeId(1))), Ok(Some(Odd)));
        // single-successor node: the edge is also the full edge set
        assert_eq!(j.wins_for(NodeId(2), Edge(NodeId(0))), Ok(Some(Even)));
        assert_eq!(j.wins_for(NodeId(2), AllSuccessors), Ok(Some(Even)));
        assert!(matches!(
            j.wins_for(NodeId(2), Edge(NodeId(1))),
            Err(ShapeError::NotAnEdge { .. })
        ));
    }

    #[test]
    fn reach_sets_on_chain() {
        // x(0) -> y(1) -> v(2), v a parameter; p/q extra
        let g = game(&[(0, 0, &[1]), (0, 0, &[2]), (0, 2, &[2]), (1, 3, &[2, 3])]);
        let mut j = Justification::new(&g);
        j.apply(&[
            upd(0, Some(Edge(NodeId(1))), Even),
            upd(1, Some(Edge(NodeId(2))), Even),
        ])
        .unwrap();
        assert_eq!(
            j.reach_down(NodeId(2)),
            vec![NodeId(0), NodeId(1), NodeId(2)]
        );
        assert_eq!(j.reach_up(NodeId(0)), vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(j.level(NodeId(0)), Level::Finite(2));
        assert_eq!(j.recompute_levels(), j.levels);
    }

    #[test]
    fn duplicate_update_rejected() {
        let g = game(&[(0, 0, &[0])]);
        let mut j = Justification::new(&g);
        assert_eq!(
            j.apply(&[upd(0, None, Even), upd(0, None, Odd)]),
            Err(ApplyError::DuplicateNode(NodeId(0)))
        );
        assert!(matches!(
            j.apply(&[upd(0, Some(Edge(NodeId(3))), Even)]),
            Err(ApplyError::Shape(_))
        ));
    }

    #[test]
    fn reset_update() {
        let g = game(&[(0, 0, &[0])]);
        let mut j = Justification::new(&g);
        j.apply(&[upd(0, Some(Edge(NodeId(0))), Even)]).unwrap();
        assert!(j.is_justified(NodeId(0)));
        assert_eq!(j.level(NodeId(0)), Level::Infinite);
        j.apply(&[upd(0, None, Even)]).unwrap();
        assert!(!j.is_justified(NodeId(0)));
        assert_eq!(j.level(NodeId(0)), Level::Finite(0));
    }

    #[test]
    fn losing_cycle_detected() {
        // 0 (Even, pr 2) <-> 1 (Odd, pr 1), hypotheses Odd on both.
        let g = game(&[(0, 2, &[1]), (1, 1, &[0])]);
        let mut j = Justification::new(&g);
        j.apply(&[
            upd(0, Some(AllSuccessors), Odd),
            upd(1, Some(Edge(NodeId(0))), Odd),
        ])
        .unwrap();
        assert!(j.check_weakly_winning().is_empty());
        let w = j.check_winning();
        assert_eq!(w, vec![Witness::LosingCycle(vec![NodeId(0), NodeId(1)])]);
        let report = j.check_safe();
        assert!(report.weakly_winning && !report.winning && !report.safe);
    }

    #[test]
    fn winning_self_loop_and_acyclic() {
        let g = game(&[(1, 3, &[0]), (0, 2, &[0, 2]), (0, 2, &[2])]);
        let mut j = Justification::new(&g);
        j.apply(&[upd(0, Some(Edge(NodeId(0))), Odd)]).unwrap();
        assert!(j.check_winning().is_empty());
        j.apply(&[upd(1, Some(Edge(NodeId(2))), Even)]).unwrap();
        assert!(j.check_winning().is_empty());
    }

    #[test]
    fn mutated_hypothesis_breaks_weak_winning() {
        let g = game(&[(0, 2, &[1]), (0, 2, &[1])]);
        let mut j = Justification::new(&g);
        j.apply(&[
            upd(1, Some(Edge(NodeId(1))), Even),
            upd(0, Some(Edge(NodeId(1))), Even),
        ])
        .unwrap();
        assert!(j.check_weakly_winning().is_empty());
        j.apply(&[upd(1, Some(Edge(NodeId(1))), Odd)]).unwrap();
        let w = j.check_weakly_winning();
        assert!(w.contains(&Witness::NotWinning(NodeId(0))));
    }

    #[test]
    fn encodings_agree() {
        let g = game(&[(0, 1, &[1, 2]), (1, 2, &[2, 0]), (0, 3, &[0, 1])]);
        let mut a = Justification::with_encoding(&g, DependencyEncoding::ScanPredecessors);
        let mut b = Justification::with_encoding(&g, DependencyEncoding::DependentSets);
        let batch = [
            upd(0, Some(AllSuccessors), Even),
            upd(1, Some(AllSuccessors), Odd),
            upd(2, Some(Edge(NodeId(1))), Odd),
        ];
        a.apply(&batch).unwrap();
        b.apply(&batch).unwrap();
        for v in g.nodes() {
            assert_eq!(a.dependents(v), b.dependents(v));
            assert_eq!(a.level(v), b.level(v));
        }
        b.apply(&[upd(0, None, Odd)]).unwrap();
        assert_eq!(b.dependents(NodeId(1)), vec![NodeId(2)]);
        assert_eq!(b.recompute_levels(), b.levels);
    }

    #[test]
    fn dot_marks_justification_edges() {
        let g = game(&[(0, 1, &[0, 1]), (1, 2, &[1])]);
        let mut j = Justification::new(&g);
        j.apply(&[upd(1, Some(AllSuccessors), Even)]).unwrap();
        let dot = j.to_dot();
        assert!(dot.contains("n1 -> n1 [style=bold]"));
        assert!(dot.contains("n0 -> n1 [style=dotted]"));
        assert!(dot.contains("label=\"0:1\""));
        assert!(dot.contains("shape=diamond"));
    }
}
