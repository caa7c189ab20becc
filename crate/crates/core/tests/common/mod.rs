//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the compositional analyses under test; the
//! oracles derive transitions rule by rule and enumerate refusal sets and
//! cycles exhaustively.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use pafas_core::lts::{ActionEdge, TimeEdge, TimedLts};
use pafas_core::syntax::{Action, ActionSet, Equations, PrefixedAction, RelabelFn, Term, TermKind, Urgency};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const UNIVERSE: [&str; 3] = ["a", "b", "c"];

pub fn universe() -> BTreeSet<Action> {
    UNIVERSE.iter().map(|a| Action::from(*a)).collect()
}

/// Every subset of the visible universe.
pub fn refusal_sets() -> Vec<BTreeSet<Action>> {
    let all: Vec<Action> = universe().into_iter().collect();
    (0..1u32 << all.len())
        .map(|mask| all.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone()).collect())
        .collect()
}

/// `X = a.X + b.nil` and `Y = {a} |> b.Y`.
pub fn oracle_equations() -> Equations {
    let mut eqs = Equations::new();
    eqs.define("X", Term::choice(Term::act("a", Term::constant("X")), Term::act("b", Term::nil()))).unwrap();
    eqs.define("Y", Term::read_set([PrefixedAction::lazy(Action::from("a"))], Term::act("b", Term::constant("Y"))))
        .unwrap();
    eqs
}

// ---------------------------------------------------------------- terms

pub struct TermGen<'r> {
    pub rng: &'r mut StdRng,
    /// Allow urgent marks (general, not only initial, terms).
    pub urgent: bool,
    vars: Vec<String>,
}

impl<'r> TermGen<'r> {
    pub fn new(rng: &'r mut StdRng, urgent: bool) -> Self {
        TermGen { rng, urgent, vars: Vec::new() }
    }

    fn action(&mut self, with_tau: bool) -> Action {
        let k = self.rng.gen_range(0..if with_tau { 4 } else { 3 });
        if k == 3 {
            Action::Tau
        } else {
            Action::from(UNIVERSE[k])
        }
    }

    fn prefixed(&mut self, a: Action) -> PrefixedAction {
        if self.urgent && self.rng.gen_bool(0.4) {
            PrefixedAction::urgent(a)
        } else {
            PrefixedAction::lazy(a)
        }
    }

    fn visible_subset(&mut self) -> BTreeSet<Action> {
        UNIVERSE.iter().filter(|_| self.rng.gen_bool(0.5)).map(|a| Action::from(*a)).collect()
    }

    fn leaf(&mut self) -> Term {
        match self.rng.gen_range(0..4) {
            0 if !self.vars.is_empty() => {
                let v = self.vars.choose(self.rng).unwrap().clone();
                Term::var(&v)
            }
            1 => Term::constant(if self.rng.gen_bool(0.5) { "X" } else { "Y" }),
            _ => Term::nil(),
        }
    }

    /// A closed, guarded term of depth at most `depth`.
    pub fn term(&mut self, depth: usize) -> Term {
        if depth == 0 {
            return self.leaf();
        }
        match self.rng.gen_range(0..8) {
            0 => self.leaf(),
            1 | 2 => {
                let a = self.action(true);
                let pa = self.prefixed(a);
                Term::prefix(pa, self.term(depth - 1))
            }
            3 => {
                let n = self.rng.gen_range(1..=3);
                let mut pool: Vec<Action> = UNIVERSE.iter().map(|a| Action::from(*a)).collect();
                pool.push(Action::Tau);
                pool.shuffle(self.rng);
                let entries: Vec<PrefixedAction> = pool.into_iter().take(n).map(|a| self.prefixed(a)).collect();
                Term::read_set(entries, self.term(depth - 1))
            }
            4 => Term::choice(self.term(depth - 1), self.term(depth - 1)),
            5 => {
                let sync: ActionSet = self.visible_subset().into_iter().collect();
                Term::parallel(self.term(depth - 1), sync, self.term(depth - 1))
            }
            6 => {
                let mut pairs = Vec::new();
                for src in UNIVERSE {
                    if self.rng.gen_bool(0.5) {
                        pairs.push((Arc::from(src), self.action(true)));
                    }
                }
                Term::relabel(self.term(depth - 1), Arc::new(RelabelFn::from_pairs(pairs)))
            }
            _ => {
                let x = format!("x{}", self.vars.len());
                self.vars.push(x.clone());
                // guarded: the body starts with a prefix
                let a = self.action(true);
                let pa = self.prefixed(a);
                let body = Term::prefix(pa, self.term(depth - 1));
                self.vars.pop();
                Term::rec(&x, body)
            }
        }
    }
}

fn body<'e>(eqs: &'e Equations, name: &str) -> &'e Term {
    eqs.get(name).unwrap_or_else(|| panic!("undefined constant {name}"))
}

// ---------------------------------------------------------------- refusal oracle

/// `Q -X->r Q'` derived rule by rule; `None` when no rule applies.
pub fn refuse(t: &Term, x: &BTreeSet<Action>, eqs: &Equations) -> Option<Term> {
    match t.kind() {
        // Nil_t
        TermKind::Nil => Some(t.clone()),
        TermKind::Var(_) => panic!("oracle only handles closed terms"),
        TermKind::Constant(n) => refuse(body(eqs, n), x, eqs),
        TermKind::Prefix(pa, cont) => match pa.urgency {
            // Pref_t1
            Urgency::Lazy => Some(Term::prefix(PrefixedAction::urgent(pa.action.clone()), cont.clone())),
            // Pref_t2
            Urgency::Urgent => {
                (pa.action.is_visible() && !x.contains(&pa.action)).then(|| t.clone())
            }
        },
        // Read_t
        TermKind::ReadSet(entries, q) => {
            let q2 = refuse(q, x, eqs)?;
            let blocked = entries.iter().any(|e| e.is_urgent() && (e.action.is_tau() || x.contains(&e.action)));
            (!blocked).then(|| {
                Term::read_set(entries.iter().map(|e| PrefixedAction::urgent(e.action.clone())), q2)
            })
        }
        // Sum_t
        TermKind::Choice(l, r) => Some(Term::choice(refuse(l, x, eqs)?, refuse(r, x, eqs)?)),
        // Par_t: search all pairs of premises
        TermKind::Parallel(l, a, r) => {
            let sets = refusal_sets();
            let left: Vec<_> = sets.iter().map(|x1| (x1, refuse(l, x1, eqs))).collect();
            let right: Vec<_> = sets.iter().map(|x2| (x2, refuse(r, x2, eqs))).collect();
            for (x1, l2) in &left {
                let Some(l2) = l2 else { continue };
                for (x2, r2) in &right {
                    let Some(r2) = r2 else { continue };
                    let allowed: BTreeSet<Action> = x
                        .iter()
                        .filter(|b| {
                            let synced = a.contains(b);
                            (synced && (x1.contains(b) || x2.contains(b)))
                                || (!synced && x1.contains(b) && x2.contains(b))
                        })
                        .cloned()
                        .collect();
                    if allowed.len() == x.len() {
                        return Some(Term::parallel(l2.clone(), a.clone(), r2.clone()));
                    }
                }
            }
            None
        }
        // Rel_t: premise refuses phi^-1(X u {tau}) \ {tau}
        TermKind::Relabel(q, phi) => {
            let pre: BTreeSet<Action> = universe()
                .into_iter()
                .filter(|b| {
                    let img = phi.apply(b);
                    img.is_tau() || x.contains(&img)
                })
                .collect();
            refuse(q, &pre, eqs).map(|q2| Term::relabel(q2, phi.clone()))
        }
        // Rec_t
        TermKind::Rec(v, b) => refuse(&b.substitute(v, t), x, eqs),
    }
}

// ---------------------------------------------------------------- action oracle

/// All `(alpha, Q')` with `Q -alpha-> Q'`, derived from the action rules.
pub fn actions(t: &Term, eqs: &Equations) -> HashSet<(Action, Term)> {
    let mut out = HashSet::new();
    match t.kind() {
        TermKind::Nil | TermKind::Var(_) => {}
        TermKind::Constant(n) => out = actions(body(eqs, n), eqs),
        // Pref_s
        TermKind::Prefix(pa, cont) => {
            out.insert((pa.action.clone(), cont.clone()));
        }
        TermKind::ReadSet(entries, q) => {
            // Read_s1
            for e in entries.iter() {
                out.insert((e.action.clone(), t.clone()));
            }
            // Read_s2
            out.extend(actions(q, eqs));
        }
        // Sum_s
        TermKind::Choice(l, r) => {
            out.extend(actions(l, eqs));
            out.extend(actions(r, eqs));
        }
        TermKind::Parallel(l, a, r) => {
            let (al, ar) = (actions(l, eqs), actions(r, eqs));
            for (b, l2) in &al {
                if b.is_tau() || !a.contains(b) {
                    out.insert((b.clone(), Term::parallel(l2.clone(), a.clone(), r.clone())));
                }
            }
            for (b, r2) in &ar {
                if b.is_tau() || !a.contains(b) {
                    out.insert((b.clone(), Term::parallel(l.clone(), a.clone(), r2.clone())));
                }
            }
            for (b, l2) in &al {
                for (c, r2) in &ar {
                    if b == c && b.is_visible() && a.contains(b) {
                        out.insert((b.clone(), Term::parallel(l2.clone(), a.clone(), r2.clone())));
                    }
                }
            }
        }
        // Rel_s
        TermKind::Relabel(q, phi) => {
            for (b, q2) in actions(q, eqs) {
                out.insert((phi.apply(&b), Term::relabel(q2, phi.clone())));
            }
        }
        // Rec_s
        TermKind::Rec(v, b) => out = actions(&b.substitute(v, t), eqs),
    }
    out
}

// ---------------------------------------------------------------- graphs

pub const GRAPH_LABELS: [&str; 4] = ["tau", "a", "in", "out"];

/// A random LTS-shaped graph, every state reachable from state 0, with at
/// most one time edge per state.
pub fn random_graph(rng: &mut StdRng, max_nodes: usize) -> TimedLts {
    let n = rng.gen_range(1..=max_nodes);
    let density = rng.gen_range(0.2..1.5);
    let m = ((n as f64) * density) as usize;
    let mut actions = Vec::new();
    for dst in 1..n {
        let label = GRAPH_LABELS[rng.gen_range(0..GRAPH_LABELS.len())];
        actions.push(ActionEdge { src: rng.gen_range(0..dst), label: Action::from(label), dst });
    }
    for _ in 0..m {
        let label = GRAPH_LABELS[rng.gen_range(0..GRAPH_LABELS.len())];
        actions.push(ActionEdge { src: rng.gen_range(0..n), label: Action::from(label), dst: rng.gen_range(0..n) });
    }
    let time_p = rng.gen_range(0.05..0.6);
    let mut times = Vec::new();
    for src in 0..n {
        if rng.gen_bool(time_p) {
            times.push(TimeEdge { src, dst: rng.gen_range(0..n) });
        }
    }
    TimedLts::from_edges(n, actions, times)
}

#[derive(Clone, Copy)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub time: bool,
    pub io: bool,
}

pub fn edges(lts: &TimedLts) -> Vec<Edge> {
    let mut out: Vec<Edge> = lts
        .action_edges
        .iter()
        .map(|e| Edge { src: e.src, dst: e.dst, time: false, io: matches!(e.label.as_str(), "in" | "out") })
        .collect();
    out.extend(lts.time_edges.iter().map(|e| Edge { src: e.src, dst: e.dst, time: true, io: false }));
    out
}

/// Enumerates simple cycles (each rooted at its smallest node) until one
/// has a time edge and no io edge. A cycle with an io edge never counts, so
/// io edges are dropped up front; each root only explores nodes that can
/// reach it back.
pub fn simple_cycle_catastrophic(n: usize, edges: &[Edge]) -> bool {
    let quiet: Vec<Edge> = edges.iter().copied().filter(|e| !e.io).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in quiet.iter().enumerate() {
        out[e.src].push(i);
        into[e.dst].push(e.src);
    }
    struct Walk<'a> {
        start: usize,
        edges: &'a [Edge],
        out: &'a [Vec<usize>],
        useful: Vec<bool>,
        on_path: Vec<bool>,
    }
    impl Walk<'_> {
        fn dfs(&mut self, at: usize, has_time: bool) -> bool {
            for k in 0..self.out[at].len() {
                let e = self.edges[self.out[at][k]];
                let t = has_time || e.time;
                if e.dst == self.start {
                    if t {
                        return true;
                    }
                } else if e.dst > self.start && self.useful[e.dst] && !self.on_path[e.dst] {
                    self.on_path[e.dst] = true;
                    let found = self.dfs(e.dst, t);
                    self.on_path[e.dst] = false;
                    if found {
                        return true;
                    }
                }
            }
            false
        }
    }
    (0..n).any(|start| {
        // nodes >= start that reach start through nodes >= start
        let mut useful = vec![false; n];
        useful[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &into[v] {
                if u > start && !useful[u] {
                    useful[u] = true;
                    stack.push(u);
                }
            }
        }
        let mut walk = Walk { start, edges: &quiet, out: &out, useful, on_path: vec![false; n] };
        walk.on_path[start] = true;
        walk.dfs(start, false)
    })
}

/// Length of the shortest cycle with a time edge and no io edge, by plain
/// BFS from the target of every time edge back to its source.
pub fn shortest_catastrophic(n: usize, edges: &[Edge]) -> Option<usize> {
    let mut succ = vec![Vec::new(); n];
    for e in edges.iter().filter(|e| !e.io) {
        succ[e.src].push(e.dst);
    }
    let mut best: Option<usize> = None;
    for t in edges.iter().filter(|e| e.time) {
        let mut dist = vec![usize::MAX; n];
        dist[t.dst] = 0;
        let mut queue = std::collections::VecDeque::from([t.dst]);
        while let Some(s) = queue.pop_front() {
            for &d in &succ[s] {
                if dist[d] == usize::MAX {
                    dist[d] = dist[s] + 1;
                    queue.push_back(d);
                }
            }
        }
        if dist[t.src] != usize::MAX {
            let len = dist[t.src] + 1;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}
