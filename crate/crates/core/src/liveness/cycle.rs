use std::collections::VecDeque;

use super::io::{IN, OUT};
use crate::lts::{Label, TimedLts};

/// One edge of a path: the label taken and the state reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub label: Label,
    pub state: usize,
}

/// A counterexample: a path from the initial state to `entry`, and a cycle
/// from `entry` back to itself with a time step and no `in`/`out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<Step>,
    pub entry: usize,
    pub cycle: Vec<Step>,
    /// Position of a time step within `cycle`.
    pub time_edge_index: usize,
}

impl Lasso {
    /// Checks every edge against `lts` and the cycle conditions.
    pub fn replays_in(&self, lts: &TimedLts) -> bool {
        let mut at = 0;
        for step in &self.prefix {
            if !lts.has_edge(at, &step.label, step.state) {
                return false;
            }
            at = step.state;
        }
        if at != self.entry || self.cycle.is_empty() {
            return false;
        }
        for step in &self.cycle {
            if !lts.has_edge(at, &step.label, step.state) || is_io(&step.label) {
                return false;
            }
            at = step.state;
        }
        at == self.entry && self.cycle.get(self.time_edge_index).is_some_and(|s| s.label.is_time())
    }

    pub fn cycle_labels(&self) -> Vec<Label> {
        self.cycle.iter().map(|s| s.label.clone()).collect()
    }
}

pub(crate) fn is_io(label: &Label) -> bool {
    matches!(label.action(), Some(a) if a.as_str() == IN || a.as_str() == OUT)
}

/// Successor lists without `in`/`out` edges, time edge first.
fn quiet_graph(lts: &TimedLts) -> Vec<Vec<(Label, usize)>> {
    (0..lts.num_states())
        .map(|s| lts.edges_from(s).filter(|(l, _)| !is_io(l)).collect())
        .collect()
}

/// Tarjan's algorithm, iterative. Returns the component of every node;
/// components are numbered in the order they are completed.
pub fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let (mut next_index, mut next_comp) = (0, 0);

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(v, edge)) = call.last() {
            if edge == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(edge) {
                call.last_mut().expect("frame").1 += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Finds a shortest cycle with at least one time step and no `in`/`out`
/// edge among the states reachable from state 0.
///
/// `in`/`out` edges are removed and strongly connected components computed;
/// such a cycle exists iff some time edge stays inside one component. For
/// every such edge `u -1-> v` a breadth-first search inside the component
/// finds the shortest way back from `v` to `u`, bounded by the best cycle so
/// far. Ties go to the edge with the smallest `(u, v)`. The prefix is a
/// shortest path from the initial state to `v`.
pub fn find_catastrophic_cycle(lts: &TimedLts) -> Option<Lasso> {
    let n = lts.num_states();
    if n == 0 {
        return None;
    }
    let graph = quiet_graph(lts);
    let succ: Vec<Vec<usize>> = graph.iter().map(|es| es.iter().map(|&(_, d)| d).collect()).collect();
    let comp = strongly_connected_components(&succ);

    let full: Vec<Vec<(Label, usize)>> = (0..n).map(|s| lts.edges_from(s).collect()).collect();
    let reachable = reachable_from_initial(&full);
    let mut candidates: Vec<_> =
        lts.time_edges.iter().filter(|e| reachable[e.src] && comp[e.src] == comp[e.dst]).collect();
    candidates.sort_by_key(|e| (e.src, e.dst));
    let mut best: Option<(usize, Vec<Step>)> = None;
    let mut search = Bfs::new(n);
    for edge in candidates {
        // a cycle through this edge has at least one more edge unless it is a self-loop
        let limit = best.as_ref().map_or(usize::MAX, |(_, c)| c.len());
        if limit == 1 {
            break;
        }
        let within = comp[edge.src];
        if let Some(mut cycle) = search.run(&graph, edge.dst, edge.src, limit - 1, |s| comp[s] == within) {
            cycle.push(Step { label: Label::Time, state: edge.dst });
            if cycle.len() < limit {
                best = Some((edge.dst, cycle));
            }
        }
    }
    let (entry, cycle) = best?;
    let time_edge_index = cycle.len() - 1;

    let prefix = search.run(&full, 0, entry, usize::MAX, |_| true).expect("every state is reachable");

    Some(Lasso { prefix, entry, cycle, time_edge_index })
}

fn reachable_from_initial(graph: &[Vec<(Label, usize)>]) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(s) = stack.pop() {
        for &(_, d) in &graph[s] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen
}

/// Reusable breadth-first search; `stamp` marks states seen in the current
/// run so buffers need no clearing.
struct Bfs {
    seen: Vec<u32>,
    parent: Vec<(usize, usize)>,
    depth: Vec<usize>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs { seen: vec![0; n], parent: vec![(0, 0); n], depth: vec![0; n], stamp: 0, queue: VecDeque::new() }
    }

    /// Shortest path from `from` to `to` over states satisfying `allowed`,
    /// with fewer than `limit` edges.
    fn run(
        &mut self,
        graph: &[Vec<(Label, usize)>],
        from: usize,
        to: usize,
        limit: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Vec<Step>> {
        if from == to {
            return Some(Vec::new());
        }
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        self.seen[from] = stamp;
        self.depth[from] = 0;
        self.queue.push_back(from);
        while let Some(s) = self.queue.pop_front() {
            if self.depth[s] + 1 >= limit {
                return None;
            }
            for (i, &(_, d)) in graph[s].iter().enumerate() {
                if self.seen[d] == stamp || !allowed(d) {
                    continue;
                }
                self.seen[d] = stamp;
                self.parent[d] = (s, i);
                self.depth[d] = self.depth[s] + 1;
                if d == to {
                    let mut path = Vec::new();
                    let mut at = to;
                    while at != from {
                        let (p, i) = self.parent[at];
                        path.push(Step { label: graph[p][i].0.clone(), state: at });
                        at = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                self.queue.push_back(d);
            }
        }
        None
    }
}
