//! Operational semantics: action transitions and refusal (time) steps.
//!
//! Refusal steps `Q -X-> Q'` are represented by their maximal form. For every
//! term the admissible refusal sets are exactly those disjoint from a finite
//! set of urgent visible actions, and the successor does not depend on `X`.
//! [`TimeStepInfo`] stores that set and the successor.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::syntax::{Action, Equations, PrefixedAction, Term, TermKind};

/// Result of the time analysis of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeStepInfo {
    /// False when an urgent `tau` forbids any time step.
    pub can_step: bool,
    /// Visible actions that cannot be refused; meaningful when `can_step`.
    pub urgent_visible: BTreeSet<Action>,
    /// The unique successor of every refusal step; `Some` iff `can_step`.
    pub successor: Option<Term>,
}

impl TimeStepInfo {
    fn blocked() -> Self {
        TimeStepInfo { can_step: false, urgent_visible: BTreeSet::new(), successor: None }
    }

    fn step(urgent_visible: BTreeSet<Action>, successor: Term) -> Self {
        TimeStepInfo { can_step: true, urgent_visible, successor: Some(successor) }
    }

    /// Whether `Q -X-> Q'` is derivable for the given refusal set.
    pub fn admits(&self, refused: &BTreeSet<Action>) -> bool {
        self.can_step && self.urgent_visible.is_disjoint(refused)
    }

    /// A 1-step refuses every visible action.
    pub fn one_step(&self) -> Option<&Term> {
        if self.urgent_visible.is_empty() {
            self.successor.as_ref()
        } else {
            None
        }
    }
}

/// Transitions of a term: `(label, successor)` pairs without duplicates.
pub type Transitions = Vec<(Action, Term)>;

/// The semantics of one equation system, with per-constant memo tables.
pub struct Semantics<'a> {
    eqs: &'a Equations,
    transitions_memo: Vec<OnceLock<Arc<Transitions>>>,
    time_memo: Vec<OnceLock<Arc<TimeStepInfo>>>,
}

impl<'a> Semantics<'a> {
    pub fn new(eqs: &'a Equations) -> Self {
        Semantics {
            eqs,
            transitions_memo: (0..eqs.len()).map(|_| OnceLock::new()).collect(),
            time_memo: (0..eqs.len()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn equations(&self) -> &Equations {
        self.eqs
    }

    fn body(&self, name: &str) -> (usize, &Term) {
        let i = self
            .eqs
            .position(name)
            .unwrap_or_else(|| panic!("unbound constant `{name}`; validate the system first"));
        (i, self.eqs.get(name).expect("indexed equation"))
    }

    /// All `(a, Q')` with `t -a-> Q'`.
    pub fn action_transitions(&self, t: &Term) -> Transitions {
        let mut out = Vec::new();
        self.transitions_into(t, &mut out);
        out
    }

    fn transitions_into(&self, t: &Term, out: &mut Transitions) {
        match t.kind() {
            TermKind::Nil | TermKind::Var(_) => {}
            TermKind::Constant(name) => {
                let (i, body) = self.body(name);
                let memo = self.transitions_memo[i].get_or_init(|| Arc::new(self.action_transitions(body)));
                for tr in memo.iter() {
                    push_unique(out, tr.clone());
                }
            }
            TermKind::Prefix(pa, cont) => push_unique(out, (pa.action.clone(), cont.clone())),
            TermKind::ReadSet(entries, body) => {
                // reading leaves the term unchanged, urgencies included
                for e in entries.iter() {
                    push_unique(out, (e.action.clone(), t.clone()));
                }
                self.transitions_into(body, out);
            }
            TermKind::Choice(l, r) => {
                self.transitions_into(l, out);
                self.transitions_into(r, out);
            }
            TermKind::Parallel(l, sync, r) => {
                let left = self.action_transitions(l);
                let right = self.action_transitions(r);
                for (a, l2) in &left {
                    if sync.contains(a) {
                        for (b, r2) in &right {
                            if a == b {
                                push_unique(out, (a.clone(), Term::parallel(l2.clone(), sync.clone(), r2.clone())));
                            }
                        }
                    } else {
                        push_unique(out, (a.clone(), Term::parallel(l2.clone(), sync.clone(), r.clone())));
                    }
                }
                for (b, r2) in &right {
                    if !sync.contains(b) {
                        push_unique(out, (b.clone(), Term::parallel(l.clone(), sync.clone(), r2.clone())));
                    }
                }
            }
            TermKind::Relabel(body, phi) => {
                for (a, b2) in self.action_transitions(body) {
                    push_unique(out, (phi.apply(&a), Term::relabel(b2, phi.clone())));
                }
            }
            TermKind::Rec(x, body) => {
                let unfolded = body.substitute(x, t);
                self.transitions_into(&unfolded, out);
            }
        }
    }

    /// The activated (enabled) actions of `t`.
    pub fn activated(&self, t: &Term) -> BTreeSet<Action> {
        self.action_transitions(t).into_iter().map(|(a, _)| a).collect()
    }

    /// Compositional refusal analysis.
    pub fn time_step(&self, t: &Term) -> TimeStepInfo {
        match t.kind() {
            TermKind::Nil | TermKind::Var(_) => TimeStepInfo::step(BTreeSet::new(), t.clone()),
            TermKind::Constant(name) => {
                let (i, body) = self.body(name);
                let memo = self.time_memo[i].get_or_init(|| Arc::new(self.time_step(body)));
                (**memo).clone()
            }
            TermKind::Prefix(pa, cont) => match (pa.is_urgent(), &pa.action) {
                (false, _) => TimeStepInfo::step(BTreeSet::new(), Term::prefix(pa.elapsed(), cont.clone())),
                (true, Action::Tau) => TimeStepInfo::blocked(),
                (true, a) => TimeStepInfo::step(BTreeSet::from([a.clone()]), t.clone()),
            },
            TermKind::ReadSet(entries, body) => {
                let inner = self.time_step(body);
                let Some(succ) = inner.successor else {
                    return TimeStepInfo::blocked();
                };
                let mut urgent = inner.urgent_visible;
                for e in entries.iter().filter(|e| e.is_urgent()) {
                    if e.action.is_tau() {
                        return TimeStepInfo::blocked();
                    }
                    urgent.insert(e.action.clone());
                }
                let successor = if entries.iter().all(PrefixedAction::is_urgent) && succ.ptr_eq(body) {
                    t.clone()
                } else {
                    Term::read_set(entries.iter().map(PrefixedAction::elapsed), succ)
                };
                TimeStepInfo::step(urgent, successor)
            }
            TermKind::Choice(l, r) => {
                let (tl, tr) = (self.time_step(l), self.time_step(r));
                let (Some(sl), Some(sr)) = (tl.successor, tr.successor) else {
                    return TimeStepInfo::blocked();
                };
                let mut urgent = tl.urgent_visible;
                urgent.extend(tr.urgent_visible);
                let successor = if sl.ptr_eq(l) && sr.ptr_eq(r) { t.clone() } else { Term::choice(sl, sr) };
                TimeStepInfo::step(urgent, successor)
            }
            TermKind::Parallel(l, sync, r) => {
                let (tl, tr) = (self.time_step(l), self.time_step(r));
                let (Some(sl), Some(sr)) = (tl.successor, tr.successor) else {
                    return TimeStepInfo::blocked();
                };
                // Non-synchronised actions are urgent in either component; a
                // synchronised one only when urgent on both sides.
                let (ul, ur) = (tl.urgent_visible, tr.urgent_visible);
                let mut urgent: BTreeSet<Action> =
                    ul.iter().filter(|a| !sync.contains(a) || ur.contains(*a)).cloned().collect();
                urgent.extend(ur.into_iter().filter(|a| !sync.contains(a)));
                let successor =
                    if sl.ptr_eq(l) && sr.ptr_eq(r) { t.clone() } else { Term::parallel(sl, sync.clone(), sr) };
                TimeStepInfo::step(urgent, successor)
            }
            TermKind::Relabel(body, phi) => {
                let inner = self.time_step(body);
                let Some(succ) = inner.successor else {
                    return TimeStepInfo::blocked();
                };
                // an urgent action renamed to tau cannot be refused by any context
                if inner.urgent_visible.iter().any(|a| phi.erases(a)) {
                    return TimeStepInfo::blocked();
                }
                let urgent = inner.urgent_visible.iter().map(|a| phi.apply(a)).collect();
                let successor = if succ.ptr_eq(body) { t.clone() } else { Term::relabel(succ, phi.clone()) };
                TimeStepInfo::step(urgent, successor)
            }
            TermKind::Rec(x, body) => self.time_step(&body.substitute(x, t)),
        }
    }

    /// The 1-step successor, if `t` can refuse every visible action.
    pub fn one_step(&self, t: &Term) -> Option<Term> {
        self.time_step(t).one_step().cloned()
    }
}

fn push_unique(out: &mut Transitions, tr: (Action, Term)) {
    if !out.contains(&tr) {
        out.push(tr);
    }
}

/// Free-function form of [`Semantics::action_transitions`].
pub fn action_transitions(t: &Term, eqs: &Equations) -> Transitions {
    Semantics::new(eqs).action_transitions(t)
}

pub fn activated(t: &Term, eqs: &Equations) -> BTreeSet<Action> {
    Semantics::new(eqs).activated(t)
}

pub fn time_step(t: &Term, eqs: &Equations) -> TimeStepInfo {
    Semantics::new(eqs).time_step(t)
}

pub fn one_step(t: &Term, eqs: &Equations) -> Option<Term> {
    Semantics::new(eqs).one_step(t)
}
