//! Terms, equation systems and grammar-level well-formedness.

mod term;
mod validate;

pub use term::{Action, ActionSet, Name, PrefixedAction, RelabelFn, Term, TermKind, Urgency};
pub use validate::{validate, Violation, ViolationKind};

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::SyntaxError;

/// A named process definition `name = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: Name,
    pub body: Term,
}

/// Equations in definition order, indexed by name.
#[derive(Clone, Debug, Default)]
pub struct Equations {
    list: Vec<Equation>,
    index: HashMap<Name, usize>,
}

impl Equations {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an equation. Fails if the name is already defined.
    pub fn define(&mut self, name: &str, body: Term) -> Result<(), SyntaxError> {
        if self.index.contains_key(name) {
            return Err(SyntaxError::DuplicateEquation(name.to_string()));
        }
        let name: Name = Arc::from(name);
        self.index.insert(name.clone(), self.list.len());
        self.list.push(Equation { name, body });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.index.get(name).map(|&i| &self.list[i].body)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equation> {
        self.list.iter()
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// Applies `f` to every body, keeping names and order.
    pub fn map_bodies(&self, mut f: impl FnMut(&Equation) -> Term) -> Equations {
        let list: Vec<Equation> = self
            .list
            .iter()
            .map(|eq| Equation { name: eq.name.clone(), body: f(eq) })
            .collect();
        Equations { list, index: self.index.clone() }
    }
}

impl PartialEq for Equations {
    fn eq(&self, other: &Self) -> bool {
        self.list == other.list
    }
}

impl Eq for Equations {}

/// A model: equations, a root term and the visible alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub equations: Equations,
    pub root: Term,
    pub alphabet: BTreeSet<Action>,
}

impl System {
    pub fn new(equations: Equations, root: Term) -> Self {
        let mut alphabet = BTreeSet::new();
        for eq in equations.iter() {
            eq.body.collect_actions(&mut alphabet);
        }
        root.collect_actions(&mut alphabet);
        System { equations, root, alphabet }
    }

    /// Same equations, different root.
    pub fn with_root(&self, root: Term) -> Self {
        System::new(self.equations.clone(), root)
    }
}

/// Hiding as a relabelling: every member maps to `tau`.
pub fn make_hiding<'a, I>(actions: I) -> Result<RelabelFn, SyntaxError>
where
    I: IntoIterator<Item = &'a Action>,
{
    let mut pairs = Vec::new();
    for a in actions {
        match a {
            Action::Tau => return Err(SyntaxError::TauInActionSet),
            Action::Visible(n) => pairs.push((n.clone(), Action::Tau)),
        }
    }
    Ok(RelabelFn::from_pairs(pairs))
}
