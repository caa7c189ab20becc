use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Action, Name, System, Term, TermKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A read-set holds both the lazy and the urgent copy of an action.
    DuplicateReadAction(Action),
    EmptyReadSet,
    /// A constant or variable reachable from itself without passing a prefix.
    UnguardedRecursion(Name),
    UndefinedConstant(Name),
    UnboundVariable(Name),
    /// An urgent mark inside a prefix continuation, a rec body or an equation body.
    UrgentInInitialPosition,
    TauInSyncSet,
}

/// One grammar violation: which rule, where, and the offending subterm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// `root` or the equation name.
    pub location: String,
    pub subterm: Term,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::DuplicateReadAction(a) => {
                write!(f, "read-set contains both lazy and urgent `{a}`")
            }
            ViolationKind::EmptyReadSet => f.write_str("empty read-set"),
            ViolationKind::UnguardedRecursion(n) => write!(f, "unguarded recursion through `{n}`"),
            ViolationKind::UndefinedConstant(n) => write!(f, "undefined constant `{n}`"),
            ViolationKind::UnboundVariable(n) => write!(f, "unbound variable `{n}`"),
            ViolationKind::UrgentInInitialPosition => {
                f.write_str("urgent action where only initial terms are allowed")
            }
            ViolationKind::TauInSyncSet => f.write_str("tau in synchronisation set"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} in `{}`", self.location, self.kind, self.subterm)
    }
}

/// Checks every equation body and the root against the term grammar.
/// Returns an empty list iff the system is well formed.
pub fn validate(system: &System) -> Vec<Violation> {
    let mut out = Vec::new();
    for eq in system.equations.iter() {
        let mut cx = Scan { system, location: eq.name.to_string(), out: &mut out };
        if !eq.body.is_initial() {
            cx.push(ViolationKind::UrgentInInitialPosition, &eq.body);
        }
        cx.term(&eq.body, &mut Vec::new());
    }
    let mut cx = Scan { system, location: "root".to_string(), out: &mut out };
    cx.term(&system.root, &mut Vec::new());

    check_constant_guardedness(system, &mut out);
    out
}

struct Scan<'a> {
    system: &'a System,
    location: String,
    out: &'a mut Vec<Violation>,
}

impl Scan<'_> {
    fn push(&mut self, kind: ViolationKind, subterm: &Term) {
        self.out.push(Violation { kind, location: self.location.clone(), subterm: subterm.clone() });
    }

    fn term(&mut self, t: &Term, bound: &mut Vec<Name>) {
        match t.kind() {
            TermKind::Nil => {}
            TermKind::Constant(n) => {
                if self.system.equations.get(n).is_none() {
                    self.push(ViolationKind::UndefinedConstant(n.clone()), t);
                }
            }
            TermKind::Var(v) => {
                if !bound.contains(v) {
                    self.push(ViolationKind::UnboundVariable(v.clone()), t);
                }
            }
            TermKind::Prefix(_, cont) => {
                if !cont.is_initial() {
                    self.push(ViolationKind::UrgentInInitialPosition, t);
                }
                self.term(cont, bound);
            }
            TermKind::ReadSet(entries, body) => {
                if entries.is_empty() {
                    self.push(ViolationKind::EmptyReadSet, t);
                }
                // entries are sorted, so both copies of an action are adjacent
                for w in entries.windows(2) {
                    if w[0].action == w[1].action {
                        self.push(ViolationKind::DuplicateReadAction(w[0].action.clone()), t);
                    }
                }
                self.term(body, bound);
            }
            TermKind::Choice(l, r) => {
                self.term(l, bound);
                self.term(r, bound);
            }
            TermKind::Parallel(l, sync, r) => {
                if sync.contains(&Action::Tau) {
                    self.push(ViolationKind::TauInSyncSet, t);
                }
                self.term(l, bound);
                self.term(r, bound);
            }
            TermKind::Relabel(b, _) => self.term(b, bound),
            TermKind::Rec(x, body) => {
                if !body.is_initial() {
                    self.push(ViolationKind::UrgentInInitialPosition, t);
                }
                if occurs_unguarded(body, x) {
                    self.push(ViolationKind::UnguardedRecursion(x.clone()), t);
                }
                bound.push(x.clone());
                self.term(body, bound);
                bound.pop();
            }
        }
    }
}

fn occurs_unguarded(t: &Term, var: &str) -> bool {
    match t.kind() {
        TermKind::Var(v) => &**v == var,
        TermKind::Nil | TermKind::Constant(_) | TermKind::Prefix(..) => false,
        TermKind::Rec(v, _) if &**v == var => false,
        TermKind::ReadSet(_, b) | TermKind::Relabel(b, _) | TermKind::Rec(_, b) => {
            occurs_unguarded(b, var)
        }
        TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => {
            occurs_unguarded(l, var) || occurs_unguarded(r, var)
        }
    }
}

fn unguarded_constants(t: &Term, out: &mut BTreeSet<Name>) {
    match t.kind() {
        TermKind::Constant(n) => {
            out.insert(n.clone());
        }
        TermKind::Nil | TermKind::Var(_) | TermKind::Prefix(..) => {}
        TermKind::ReadSet(_, b) | TermKind::Relabel(b, _) | TermKind::Rec(_, b) => {
            unguarded_constants(b, out)
        }
        TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => {
            unguarded_constants(l, out);
            unguarded_constants(r, out);
        }
    }
}

/// Reports every constant that can reach itself through unguarded references.
fn check_constant_guardedness(system: &System, out: &mut Vec<Violation>) {
    let mut graph: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for eq in system.equations.iter() {
        let mut refs = BTreeSet::new();
        unguarded_constants(&eq.body, &mut refs);
        graph.insert(eq.name.clone(), refs);
    }
    for eq in system.equations.iter() {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Name> = graph[&eq.name].iter().cloned().collect();
        let mut cyclic = false;
        while let Some(n) = stack.pop() {
            if n == eq.name {
                cyclic = true;
                break;
            }
            if seen.insert(n.clone()) {
                if let Some(next) = graph.get(&n) {
                    stack.extend(next.iter().cloned());
                }
            }
        }
        if cyclic {
            out.push(Violation {
                kind: ViolationKind::UnguardedRecursion(eq.name.clone()),
                location: eq.name.to_string(),
                subterm: eq.body.clone(),
            });
        }
    }
}
