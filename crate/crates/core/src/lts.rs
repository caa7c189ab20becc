//! Explicit timed transition systems.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write};

use crate::error::LtsError;
use crate::parser::print;
use crate::semantics::Semantics;
use crate::syntax::{Action, System, Term, TermKind};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// Edge label: an action or a full time step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Act(Action),
    Time,
}

impl Label {
    pub fn is_time(&self) -> bool {
        matches!(self, Label::Time)
    }

    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Act(a) => Some(a),
            Label::Time => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Act(a) => write!(f, "{a}"),
            Label::Time => f.write_str("1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionEdge {
    pub src: usize,
    pub label: Action,
    pub dst: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeEdge {
    pub src: usize,
    pub dst: usize,
}

/// Canonicalises terms so that structurally equal subterms share one
/// allocation. Equality between interned terms then succeeds on the pointer
/// comparison.
#[derive(Default)]
pub struct Interner {
    nodes: HashSet<Term>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intern(&mut self, t: &Term) -> Term {
        if let Some(existing) = self.nodes.get(t) {
            return existing.clone();
        }
        let rebuilt = match t.kind() {
            TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => t.clone(),
            TermKind::Prefix(pa, c) => {
                let c2 = self.intern(c);
                if c2.ptr_eq(c) { t.clone() } else { Term::prefix(pa.clone(), c2) }
            }
            TermKind::ReadSet(e, b) => {
                let b2 = self.intern(b);
                if b2.ptr_eq(b) { t.clone() } else { Term::from_kind(TermKind::ReadSet(e.clone(), b2)) }
            }
            TermKind::Relabel(b, phi) => {
                let b2 = self.intern(b);
                if b2.ptr_eq(b) { t.clone() } else { Term::relabel(b2, phi.clone()) }
            }
            TermKind::Rec(x, b) => {
                let b2 = self.intern(b);
                if b2.ptr_eq(b) { t.clone() } else { Term::from_kind(TermKind::Rec(x.clone(), b2)) }
            }
            TermKind::Choice(l, r) => {
                let (l2, r2) = (self.intern(l), self.intern(r));
                if l2.ptr_eq(l) && r2.ptr_eq(r) { t.clone() } else { Term::choice(l2, r2) }
            }
            TermKind::Parallel(l, a, r) => {
                let (l2, r2) = (self.intern(l), self.intern(r));
                if l2.ptr_eq(l) && r2.ptr_eq(r) { t.clone() } else { Term::parallel(l2, a.clone(), r2) }
            }
        };
        self.nodes.insert(rebuilt.clone());
        rebuilt
    }
}

/// The reachable timed transition system of a root term. State 0 is the root.
#[derive(Clone, Debug)]
pub struct TimedLts {
    pub states: Vec<Term>,
    /// Grouped by source, sources ascending.
    pub action_edges: Vec<ActionEdge>,
    pub time_edges: Vec<TimeEdge>,
    pub alphabet: BTreeSet<Action>,
    action_offsets: Vec<usize>,
    time_succ: Vec<Option<usize>>,
}

impl TimedLts {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn actions_from(&self, s: usize) -> &[ActionEdge] {
        &self.action_edges[self.action_offsets[s]..self.action_offsets[s + 1]]
    }

    pub fn time_successor(&self, s: usize) -> Option<usize> {
        self.time_succ[s]
    }

    /// All outgoing edges of `s`, time edge first.
    pub fn edges_from(&self, s: usize) -> impl Iterator<Item = (Label, usize)> + '_ {
        self.time_succ[s]
            .map(|d| (Label::Time, d))
            .into_iter()
            .chain(self.actions_from(s).iter().map(|e| (Label::Act(e.label.clone()), e.dst)))
    }

    pub fn has_edge(&self, src: usize, label: &Label, dst: usize) -> bool {
        match label {
            Label::Time => self.time_succ.get(src).copied().flatten() == Some(dst),
            Label::Act(a) => src < self.num_states() && self.actions_from(src).iter().any(|e| &e.label == a && e.dst == dst),
        }
    }

    /// Builds an LTS from explicit edge lists. Edges may come in any order.
    /// Meant for tests and tools working on abstract graphs; states are `nil`.
    pub fn from_edges(num_states: usize, mut action_edges: Vec<ActionEdge>, time_edges: Vec<TimeEdge>) -> Self {
        action_edges.sort_by_key(|e| e.src);
        let mut action_offsets = vec![0; num_states + 1];
        for e in &action_edges {
            action_offsets[e.src + 1] += 1;
        }
        for i in 0..num_states {
            action_offsets[i + 1] += action_offsets[i];
        }
        let mut time_succ = vec![None; num_states];
        for e in &time_edges {
            assert!(time_succ[e.src].is_none(), "at most one time edge per state");
            time_succ[e.src] = Some(e.dst);
        }
        let alphabet = action_edges.iter().map(|e| e.label.clone()).filter(Action::is_visible).collect();
        TimedLts {
            states: vec![Term::nil(); num_states],
            action_edges,
            time_edges,
            alphabet,
            action_offsets,
            time_succ,
        }
    }

    /// GraphViz rendering. Time edges are dashed and labelled `1`, tau edges
    /// grey, `in`/`out` edges highlighted.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("digraph lts {\n");
        s.push_str("  rankdir=LR;\n");
        s.push_str("  node [shape=circle, fontname=\"monospace\"];\n");
        for (i, t) in self.states.iter().enumerate() {
            let style = if i == 0 { ", style=bold" } else { "" };
            let _ = writeln!(s, "  s{i} [label=\"{i}\", tooltip=\"{}\"{style}];", dot_escape(&print(t)));
        }
        for e in &self.time_edges {
            let _ = writeln!(s, "  s{} -> s{} [label=\"1\", style=dashed];", e.src, e.dst);
        }
        for e in &self.action_edges {
            let attrs = match e.label.as_str() {
                "tau" => ", color=gray, fontcolor=gray",
                "in" | "out" => ", color=blue, fontcolor=blue, penwidth=2",
                _ => "",
            };
            let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"{attrs}];", e.src, e.dst, dot_escape(e.label.as_str()));
        }
        s.push_str("}\n");
        s
    }

    /// Flat edge list: `src<TAB>kind<TAB>label<TAB>dst`, kind `act` or `time`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for src in 0..self.num_states() {
            if let Some(dst) = self.time_succ[src] {
                let _ = writeln!(s, "{src}\ttime\t1\t{dst}");
            }
            for e in self.actions_from(src) {
                let _ = writeln!(s, "{src}\tact\t{}\t{}", e.label, e.dst);
            }
        }
        s
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Breadth-first construction of the reachable timed LTS.
///
/// Per state the time edge is explored first, then action edges ordered by
/// label and, within a label, by the printed successor. Two builds of the
/// same system therefore number states identically.
pub fn build(system: &System, max_states: usize) -> Result<TimedLts, LtsError> {
    let sem = Semantics::new(&system.equations);
    let mut interner = Interner::new();
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut states: Vec<Term> = Vec::new();
    let mut queue = VecDeque::new();

    let mut lookup = |t: &Term, states: &mut Vec<Term>, queue: &mut VecDeque<usize>| -> Result<usize, LtsError> {
        let t = interner.intern(t);
        if let Some(&i) = index.get(&t) {
            return Ok(i);
        }
        if states.len() >= max_states {
            return Err(LtsError::StateBudgetExceeded(max_states));
        }
        let i = states.len();
        index.insert(t.clone(), i);
        states.push(t);
        queue.push_back(i);
        Ok(i)
    };

    lookup(&system.root, &mut states, &mut queue)?;

    let mut action_edges = Vec::new();
    let mut action_offsets = vec![0];
    let mut time_succ = Vec::new();
    let mut time_edges = Vec::new();

    while let Some(s) = queue.pop_front() {
        debug_assert_eq!(s, action_offsets.len() - 1);
        let term = states[s].clone();

        let dst = match sem.one_step(&term) {
            Some(next) => Some(lookup(&next, &mut states, &mut queue)?),
            None => None,
        };
        time_succ.push(dst);
        if let Some(dst) = dst {
            time_edges.push(TimeEdge { src: s, dst });
        }

        let mut trans = sem.action_transitions(&term);
        sort_transitions(&mut trans);
        for (label, next) in trans {
            let dst = lookup(&next, &mut states, &mut queue)?;
            action_edges.push(ActionEdge { src: s, label, dst });
        }
        action_offsets.push(action_edges.len());
    }

    Ok(TimedLts { states, action_edges, time_edges, alphabet: system.alphabet.clone(), action_offsets, time_succ })
}

/// Orders by label, then by printed successor within equal labels.
fn sort_transitions(trans: &mut [(Action, Term)]) {
    trans.sort_by(|a, b| a.0.cmp(&b.0));
    let mut start = 0;
    while start < trans.len() {
        let mut end = start + 1;
        while end < trans.len() && trans[end].0 == trans[start].0 {
            end += 1;
        }
        if end - start > 1 {
            trans[start..end].sort_by_cached_key(|(_, t)| print(t));
        }
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn nil_has_one_state_and_a_time_loop() {
        let lts = build(&parse("root = nil").unwrap(), 10).unwrap();
        assert_eq!(lts.num_states(), 1);
        assert!(lts.action_edges.is_empty());
        assert_eq!(lts.time_edges, vec![TimeEdge { src: 0, dst: 0 }]);
    }

    #[test]
    fn single_prefix() {
        let lts = build(&parse("root = a.nil").unwrap(), 10).unwrap();
        // a.nil, _a.nil, nil
        assert_eq!(lts.num_states(), 3);
        assert_eq!(lts.time_edges, vec![TimeEdge { src: 0, dst: 1 }, TimeEdge { src: 2, dst: 2 }]);
        assert_eq!(lts.action_edges.len(), 2);
        assert!(lts.action_edges.iter().all(|e| e.dst == 2));
    }

    #[test]
    fn recursive_choice() {
        let sys = parse("X = a.X + b.nil\nroot = X").unwrap();
        let lts = build(&sys, 10).unwrap();
        let printed: Vec<String> = lts.states.iter().map(print).collect();
        assert_eq!(printed, ["X", "_a.X + _b.nil", "nil"]);
        assert!(lts.has_edge(0, &Label::Time, 1));
        assert!(lts.has_edge(0, &Label::Act(Action::from("a")), 0));
        assert!(lts.has_edge(1, &Label::Act(Action::from("a")), 0));
        assert!(lts.has_edge(1, &Label::Act(Action::from("b")), 2));
        assert!(lts.has_edge(2, &Label::Time, 2));
    }

    #[test]
    fn budget_is_enforced() {
        let sys = parse("X = a.(X |[]| X)\nroot = X").unwrap();
        assert_eq!(build(&sys, 50).unwrap_err(), LtsError::StateBudgetExceeded(50));
    }

    #[test]
    fn interner_shares_equal_subterms() {
        let mut i = Interner::new();
        let t1 = crate::parser::parse_term("a.nil |[]| a.nil").unwrap();
        let t2 = crate::parser::parse_term("a.nil |[]| a.nil").unwrap();
        let (c1, c2) = (i.intern(&t1), i.intern(&t2));
        assert!(c1.ptr_eq(&c2));
        match c1.kind() {
            TermKind::Parallel(l, _, r) => assert!(l.ptr_eq(r)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn dot_and_tsv_exports() {
        let lts = build(&parse("root = nil").unwrap(), 10).unwrap();
        let dot = lts.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert_eq!(lts.to_tsv(), "0\ttime\t1\t0\n");

        let lts = build(&parse("root = a.nil").unwrap(), 10).unwrap();
        let dot = lts.to_dot();
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert_eq!(dot.matches("label=\"a\"").count(), 2);
    }
}
