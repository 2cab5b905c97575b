//! Strongly connected components over filtered node subsets.

use std::collections::VecDeque;

use crate::game::NodeId;

pub(crate) struct Sccs {
    component: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl Sccs {
    pub(crate) fn component(&self, v: NodeId) -> Option<usize> {
        self.component[v.index()]
    }

    /// A cycle through `v` inside its component, starting at `v`, if any.
    pub(crate) fn cycle_through<F>(&self, v: NodeId, succ: F) -> Option<Vec<NodeId>>
    where
        F: Fn(NodeId) -> Vec<NodeId>,
    {
        let c = self.component(v)?;
        let v_succ = succ(v);
        if v_succ.contains(&v) {
            return Some(vec![v]);
        }
        if self.sizes[c] < 2 {
            return None;
        }
        let mut parent: Vec<Option<NodeId>> = vec![None; self.component.len()];
        let mut queue = VecDeque::new();
        for w in v_succ {
            if self.component(w) == Some(c) && parent[w.index()].is_none() {
                parent[w.index()] = Some(v);
                queue.push_back(w);
            }
        }
        while let Some(u) = queue.pop_front() {
            for w in succ(u) {
                if w == v {
                    let mut path = vec![u];
                    let mut cur = u;
                    while let Some(p) = parent[cur.index()] {
                        if p == v {
                            break;
                        }
                        path.push(p);
                        cur = p;
                    }
                    path.push(v);
                    path.reverse();
                    return Some(path);
                }
                if self.component(w) == Some(c) && parent[w.index()].is_none() {
                    parent[w.index()] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Iterative Tarjan over the nodes accepted by `keep`; edges to rejected
/// nodes are ignored.
pub(crate) fn strongly_connected_components<K, F>(n: usize, keep: K, succ: F) -> Sccs
where
    K: Fn(NodeId) -> bool,
    F: Fn(NodeId) -> Vec<NodeId>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut component = vec![None; n];
    let mut sizes = Vec::new();
    let mut counter = 0usize;

    for root in (0..n).map(NodeId) {
        if !keep(root) || index[root.index()] != UNVISITED {
            continue;
        }
        // (node, its kept successors, next successor position)
        let mut call: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
        index[root.index()] = counter;
        low[root.index()] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root.index()] = true;
        call.push((
            root,
            succ(root).into_iter().filter(|&w| keep(w)).collect(),
            0,
        ));

        while let Some((v, succs, pos)) = call.last_mut() {
            let v = *v;
            if *pos < succs.len() {
                let w = succs[*pos];
                *pos += 1;
                if index[w.index()] == UNVISITED {
                    index[w.index()] = counter;
                    low[w.index()] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w.index()] = true;
                    let ws = succ(w).into_iter().filter(|&x| keep(x)).collect();
                    call.push((w, ws, 0));
                } else if on_stack[w.index()] {
                    low[v.index()] = low[v.index()].min(index[w.index()]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    let p = parent.index();
                    low[p] = low[p].min(low[v.index()]);
                }
                if low[v.index()] == index[v.index()] {
                    let id = sizes.len();
                    let mut size = 0;
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w.index()] = false;
                        component[w.index()] = Some(id);
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    sizes.push(size);
                }
            }
        }
    }
    Sccs { component, sizes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj<'a>(edges: &'a [&'a [usize]]) -> impl Fn(NodeId) -> Vec<NodeId> + 'a {
        move |v: NodeId| edges[v.index()].iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn components_and_cycles() {
        let edges: &[&[usize]] = &[&[1], &[2], &[0, 3], &[3], &[0]];
        let sccs = strongly_connected_components(5, |_| true, adj(edges));
        let c0 = sccs.component(NodeId(0));
        assert_eq!(sccs.component(NodeId(1)), c0);
        assert_eq!(sccs.component(NodeId(2)), c0);
        assert_ne!(sccs.component(NodeId(3)), c0);
        assert_eq!(
            sccs.cycle_through(NodeId(1), adj(edges)),
            Some(vec![NodeId(1), NodeId(2), NodeId(0)])
        );
        assert_eq!(
            sccs.cycle_through(NodeId(3), adj(edges)),
            Some(vec![NodeId(3)])
        );
        assert_eq!(sccs.cycle_through(NodeId(4), adj(edges)), None);
    }

    #[test]
    fn filtered_nodes_break_cycles() {
        let edges: &[&[usize]] = &[&[1], &[2], &[0]];
        let sccs = strongly_connected_components(3, |v| v != NodeId(2), adj(edges));
        assert_eq!(sccs.component(NodeId(2)), None);
        assert_eq!(sccs.cycle_through(NodeId(0), adj(edges)), None);
    }
}
