use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::IoError;
use crate::syntax::{Action, ActionSet, Name, PrefixedAction, RelabelFn, System, Term, TermKind};

pub const IN: &str = "in";
pub const OUT: &str = "out";

/// Which process is observed and how the others are silenced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoSpec {
    /// Request action of the focus process, renamed to `in`.
    pub req: Action,
    /// Critical-section action of the focus process, renamed to `out`.
    pub cs: Action,
    /// Other processes' request/critical-section actions, renamed to `tau`.
    pub demote: BTreeSet<Action>,
    /// Equation of the focus process holding the idle summand `tau.<idle>`.
    pub idle: Name,
}

impl IoSpec {
    pub fn new(req: &str, cs: &str, demote: &[&str], idle: &str) -> Self {
        IoSpec {
            req: Action::from(req),
            cs: Action::from(cs),
            demote: demote.iter().map(|d| Action::from(*d)).collect(),
            idle: Arc::from(idle),
        }
    }

    fn check(&self) -> Result<(), IoError> {
        if self.req.is_tau() || self.cs.is_tau() || self.demote.contains(&Action::Tau) {
            return Err(IoError::InvalidSpec("tau cannot be renamed".into()));
        }
        if self.req == self.cs {
            return Err(IoError::InvalidSpec("request and critical-section actions coincide".into()));
        }
        if self.demote.contains(&self.req) || self.demote.contains(&self.cs) {
            return Err(IoError::InvalidSpec("focus actions cannot be demoted".into()));
        }
        Ok(())
    }

    /// The renaming applied to every equation body and the root.
    pub fn renaming(&self) -> BTreeMap<Action, Action> {
        let mut map = BTreeMap::new();
        map.insert(self.req.clone(), Action::visible(IN));
        map.insert(self.cs.clone(), Action::visible(OUT));
        for d in &self.demote {
            map.insert(d.clone(), Action::Tau);
        }
        map
    }
}

/// Renames the focus actions to `in`/`out`, demotes the others to `tau` and
/// deletes the idle summand of the focus process.
pub fn io_transform(system: &System, spec: &IoSpec) -> Result<System, IoError> {
    spec.check()?;
    for a in std::iter::once(&spec.req).chain([&spec.cs]).chain(spec.demote.iter()) {
        if !system.alphabet.contains(a) {
            return Err(IoError::ActionNotFound(a.to_string()));
        }
    }
    for reserved in [IN, OUT] {
        let a = Action::visible(reserved);
        if system.alphabet.contains(&a) && a != spec.req && a != spec.cs {
            return Err(IoError::InvalidSpec(format!("`{reserved}` already occurs in the system")));
        }
    }
    transform_with(system, &spec.renaming(), &spec.idle)
}

pub(crate) fn transform_with(
    system: &System,
    renaming: &BTreeMap<Action, Action>,
    idle: &str,
) -> Result<System, IoError> {
    if system.equations.get(idle).is_none() {
        return Err(IoError::UnresolvedSummand(idle.to_string()));
    }
    let mut removed = false;
    let equations = system.equations.map_bodies(|eq| {
        let body = rename_term(&eq.body, renaming);
        if &*eq.name == idle {
            if let Some(b) = drop_idle_summand(&body, idle) {
                removed = true;
                return b;
            }
        }
        body
    });
    if !removed {
        return Err(IoError::UnresolvedSummand(idle.to_string()));
    }
    Ok(System::new(equations, rename_term(&system.root, renaming)))
}

fn is_idle_summand(t: &Term, idle: &str) -> bool {
    match t.kind() {
        TermKind::Prefix(pa, cont) => {
            pa.action.is_tau()
                && !pa.is_urgent()
                && matches!(cont.kind(), TermKind::Constant(n) if &**n == idle)
        }
        _ => false,
    }
}

/// Removes the first `tau.<idle>` branch of a choice tree, keeping the
/// shape of the remaining branches.
fn drop_idle_summand(t: &Term, idle: &str) -> Option<Term> {
    let TermKind::Choice(l, r) = t.kind() else {
        return None;
    };
    if is_idle_summand(l, idle) {
        return Some(r.clone());
    }
    if is_idle_summand(r, idle) {
        return Some(l.clone());
    }
    if let Some(l2) = drop_idle_summand(l, idle) {
        return Some(Term::choice(l2, r.clone()));
    }
    drop_idle_summand(r, idle).map(|r2| Term::choice(l.clone(), r2))
}

fn rename(a: &Action, map: &BTreeMap<Action, Action>) -> Action {
    map.get(a).cloned().unwrap_or_else(|| a.clone())
}

/// Applies an action renaming to every action occurrence in a term. Names
/// renamed to `tau` leave synchronisation sets and relabelling domains.
pub fn rename_term(t: &Term, map: &BTreeMap<Action, Action>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    match t.kind() {
        TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => t.clone(),
        TermKind::Prefix(pa, c) => Term::prefix(
            PrefixedAction { action: rename(&pa.action, map), urgency: pa.urgency },
            rename_term(c, map),
        ),
        TermKind::ReadSet(entries, b) => Term::read_set(
            entries.iter().map(|e| PrefixedAction { action: rename(&e.action, map), urgency: e.urgency }),
            rename_term(b, map),
        ),
        TermKind::Choice(l, r) => Term::choice(rename_term(l, map), rename_term(r, map)),
        TermKind::Parallel(l, sync, r) => {
            let sync2: ActionSet = sync.iter().map(|a| rename(a, map)).filter(Action::is_visible).collect();
            Term::parallel(rename_term(l, map), sync2, rename_term(r, map))
        }
        TermKind::Relabel(b, phi) => {
            let pairs = phi.pairs().filter_map(|(src, dst)| match rename(&Action::Visible(src.clone()), map) {
                Action::Tau => None,
                Action::Visible(n) => Some((n, rename(dst, map))),
            });
            Term::relabel(rename_term(b, map), Arc::new(RelabelFn::from_pairs(pairs)))
        }
        TermKind::Rec(x, b) => Term::rec(x, rename_term(b, map)),
    }
}
