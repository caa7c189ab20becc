//! Process terms, actions and relabelling functions.
//!
//! Terms are immutable and reference counted. Every node caches its structural
//! hash, so hashing is O(1) and equality short-circuits on pointer identity.
//! Together with [`crate::lts::Interner`] this gives hash-consed states.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Identifier for actions, constants and recursion variables.
pub type Name = Arc<str>;

/// A visible action name or the internal action `tau`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Action {
    Tau,
    Visible(Name),
}

impl Action {
    pub fn visible(name: &str) -> Self {
        Action::Visible(Arc::from(name))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn is_visible(&self) -> bool {
        !self.is_tau()
    }

    pub fn as_str(&self) -> &str {
        match self {
            Action::Tau => "tau",
            Action::Visible(n) => n,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&str> for Action {
    fn from(s: &str) -> Self {
        if s == "tau" {
            Action::Tau
        } else {
            Action::visible(s)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Urgency {
    Lazy,
    Urgent,
}

/// An action together with its remaining delay: lazy actions may still wait
/// one time unit, urgent ones may not.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PrefixedAction {
    pub action: Action,
    pub urgency: Urgency,
}

impl PrefixedAction {
    pub fn lazy(action: Action) -> Self {
        PrefixedAction { action, urgency: Urgency::Lazy }
    }

    pub fn urgent(action: Action) -> Self {
        PrefixedAction { action, urgency: Urgency::Urgent }
    }

    pub fn is_urgent(&self) -> bool {
        self.urgency == Urgency::Urgent
    }

    /// The same action after one unit of time; urgent stays urgent.
    pub fn elapsed(&self) -> Self {
        PrefixedAction::urgent(self.action.clone())
    }
}

fn hash_of<T: Hash + ?Sized>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// A finite set of visible actions (synchronisation sets, hiding sets).
///
/// Shared behind an `Arc` with a cached hash: the same sync set appears in
/// every state of a parallel composition.
#[derive(Clone)]
pub struct ActionSet(Arc<SetInner>);

struct SetInner {
    actions: BTreeSet<Action>,
    hash: u64,
}

impl ActionSet {
    pub fn new<I: IntoIterator<Item = Action>>(actions: I) -> Self {
        let actions: BTreeSet<Action> = actions.into_iter().collect();
        let hash = hash_of(&actions);
        ActionSet(Arc::new(SetInner { actions, hash }))
    }

    pub fn empty() -> Self {
        Self::new(std::iter::empty())
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.0.actions.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Action> {
        self.0.actions.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Action> {
        &self.0.actions
    }

    pub fn len(&self) -> usize {
        self.0.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.actions.is_empty()
    }
}

impl PartialEq for ActionSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.actions == other.0.actions)
    }
}

impl Eq for ActionSet {}

impl Hash for ActionSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        ActionSet::new(iter)
    }
}

/// A general relabelling function. Only non-identity points are stored, so
/// `tau` is never in the domain and the function is finite by construction.
#[derive(Clone)]
pub struct RelabelFn {
    map: BTreeMap<Name, Action>,
    hash: u64,
}

impl RelabelFn {
    pub fn identity() -> Self {
        Self::from_pairs(std::iter::empty())
    }

    /// Builds a relabelling from `(source, target)` pairs. Identity points are
    /// dropped; for repeated sources the last pair wins.
    pub fn from_pairs<I: IntoIterator<Item = (Name, Action)>>(pairs: I) -> Self {
        let map: BTreeMap<Name, Action> = pairs
            .into_iter()
            .filter(|(src, dst)| dst.as_str() != &**src || dst.is_tau())
            .collect();
        let hash = hash_of(&map);
        RelabelFn { map, hash }
    }

    pub fn apply(&self, a: &Action) -> Action {
        match a {
            Action::Tau => Action::Tau,
            Action::Visible(n) => self.map.get(n).cloned().unwrap_or_else(|| a.clone()),
        }
    }

    pub fn erases(&self, a: &Action) -> bool {
        self.apply(a).is_tau()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// True when every non-identity point maps to `tau`.
    pub fn is_hiding(&self) -> bool {
        self.map.values().all(Action::is_tau)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Name, &Action)> {
        self.map.iter()
    }
}

impl PartialEq for RelabelFn {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.map == other.map
    }
}

impl Eq for RelabelFn {}

impl Hash for RelabelFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl fmt::Debug for RelabelFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

/// A process term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    hash: u64,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermKind {
    Nil,
    Constant(Name),
    Prefix(PrefixedAction, Term),
    /// Entries are kept sorted and free of exact duplicates.
    ReadSet(Arc<[PrefixedAction]>, Term),
    Choice(Term, Term),
    Parallel(Term, ActionSet, Term),
    Relabel(Term, Arc<RelabelFn>),
    Rec(Name, Term),
    Var(Name),
}

impl Term {
    pub fn from_kind(kind: TermKind) -> Self {
        let hash = hash_of(&kind);
        Term(Arc::new(Node { kind, hash }))
    }

    pub fn nil() -> Self {
        Self::from_kind(TermKind::Nil)
    }

    pub fn constant(name: &str) -> Self {
        Self::from_kind(TermKind::Constant(Arc::from(name)))
    }

    pub fn prefix(pa: PrefixedAction, cont: Term) -> Self {
        Self::from_kind(TermKind::Prefix(pa, cont))
    }

    /// Lazy prefix `a.cont`.
    pub fn act(action: impl Into<Action>, cont: Term) -> Self {
        Self::prefix(PrefixedAction::lazy(action.into()), cont)
    }

    pub fn read_set<I: IntoIterator<Item = PrefixedAction>>(entries: I, body: Term) -> Self {
        let mut v: Vec<PrefixedAction> = entries.into_iter().collect();
        v.sort();
        v.dedup();
        Self::from_kind(TermKind::ReadSet(v.into(), body))
    }

    pub fn choice(left: Term, right: Term) -> Self {
        Self::from_kind(TermKind::Choice(left, right))
    }

    /// Right-nested choice over all summands; `nil` when empty.
    pub fn sum<I: IntoIterator<Item = Term>>(summands: I) -> Self {
        let mut items: Vec<Term> = summands.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Term::nil();
        };
        while let Some(t) = items.pop() {
            acc = Term::choice(t, acc);
        }
        acc
    }

    pub fn parallel(left: Term, sync: ActionSet, right: Term) -> Self {
        Self::from_kind(TermKind::Parallel(left, sync, right))
    }

    pub fn relabel(body: Term, phi: Arc<RelabelFn>) -> Self {
        Self::from_kind(TermKind::Relabel(body, phi))
    }

    pub fn rec(var: &str, body: Term) -> Self {
        Self::from_kind(TermKind::Rec(Arc::from(var), body))
    }

    pub fn var(var: &str) -> Self {
        Self::from_kind(TermKind::Var(Arc::from(var)))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// True when no urgent mark occurs anywhere in the term.
    pub fn is_initial(&self) -> bool {
        match self.kind() {
            TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => true,
            TermKind::Prefix(pa, cont) => !pa.is_urgent() && cont.is_initial(),
            TermKind::ReadSet(entries, body) => {
                entries.iter().all(|e| !e.is_urgent()) && body.is_initial()
            }
            TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => {
                l.is_initial() && r.is_initial()
            }
            TermKind::Relabel(b, _) | TermKind::Rec(_, b) => b.is_initial(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self.kind() {
            TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => 0,
            TermKind::Prefix(_, c) => c.size(),
            TermKind::ReadSet(_, b) | TermKind::Relabel(b, _) | TermKind::Rec(_, b) => b.size(),
            TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => l.size() + r.size(),
        }
    }

    /// Visible action names occurring syntactically, including relabelling
    /// domains and images.
    pub fn collect_actions(&self, out: &mut BTreeSet<Action>) {
        match self.kind() {
            TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => {}
            TermKind::Prefix(pa, c) => {
                if pa.action.is_visible() {
                    out.insert(pa.action.clone());
                }
                c.collect_actions(out);
            }
            TermKind::ReadSet(entries, b) => {
                out.extend(entries.iter().map(|e| e.action.clone()).filter(Action::is_visible));
                b.collect_actions(out);
            }
            TermKind::Choice(l, r) => {
                l.collect_actions(out);
                r.collect_actions(out);
            }
            TermKind::Parallel(l, a, r) => {
                out.extend(a.iter().cloned());
                l.collect_actions(out);
                r.collect_actions(out);
            }
            TermKind::Relabel(b, phi) => {
                for (src, dst) in phi.pairs() {
                    out.insert(Action::Visible(src.clone()));
                    if dst.is_visible() {
                        out.insert(dst.clone());
                    }
                }
                b.collect_actions(out);
            }
            TermKind::Rec(_, b) => b.collect_actions(out),
        }
    }

    /// Capture-avoiding substitution is not needed: bodies substituted for
    /// variables are closed, so plain replacement of free occurrences is exact.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self.kind() {
            TermKind::Var(v) if &**v == var => replacement.clone(),
            TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => self.clone(),
            TermKind::Rec(v, _) if &**v == var => self.clone(),
            TermKind::Prefix(pa, c) => self.rebuild1(c, |c| TermKind::Prefix(pa.clone(), c), var, replacement),
            TermKind::ReadSet(e, b) => self.rebuild1(b, |b| TermKind::ReadSet(e.clone(), b), var, replacement),
            TermKind::Relabel(b, phi) => self.rebuild1(b, |b| TermKind::Relabel(b, phi.clone()), var, replacement),
            TermKind::Rec(v, b) => self.rebuild1(b, |b| TermKind::Rec(v.clone(), b), var, replacement),
            TermKind::Choice(l, r) => {
                let (l2, r2) = (l.substitute(var, replacement), r.substitute(var, replacement));
                if l2.ptr_eq(l) && r2.ptr_eq(r) {
                    self.clone()
                } else {
                    Term::choice(l2, r2)
                }
            }
            TermKind::Parallel(l, a, r) => {
                let (l2, r2) = (l.substitute(var, replacement), r.substitute(var, replacement));
                if l2.ptr_eq(l) && r2.ptr_eq(r) {
                    self.clone()
                } else {
                    Term::parallel(l2, a.clone(), r2)
                }
            }
        }
    }

    fn rebuild1(
        &self,
        child: &Term,
        wrap: impl FnOnce(Term) -> TermKind,
        var: &str,
        replacement: &Term,
    ) -> Term {
        let c2 = child.substitute(var, replacement);
        if c2.ptr_eq(child) {
            self.clone()
        } else {
            Term::from_kind(wrap(c2))
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", crate::parser::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}
