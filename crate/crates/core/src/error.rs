use thiserror::Error;

use crate::syntax::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("duplicate equation `{0}`")]
    DuplicateEquation(String),
    #[error("tau cannot be hidden or synchronised on")]
    TauInActionSet,
}

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: undefined constant `{name}`")]
    UndefinedConstant { pos: Position, name: String },
    #[error("{pos}: duplicate equation `{name}`")]
    DuplicateEquation { pos: Position, name: String },
    #[error("{pos}: missing `root = ...` definition")]
    MissingRoot { pos: Position },
    #[error("ill-formed model:\n{}", render_violations(.0))]
    Invalid(Vec<Violation>),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtsError {
    #[error("state budget of {0} states exceeded")]
    StateBudgetExceeded(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("action `{0}` does not occur in the system")]
    ActionNotFound(String),
    #[error("equation `{0}` has no `tau.{0}` summand to delete")]
    UnresolvedSummand(String),
    #[error("invalid io specification: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Lts(#[from] LtsError),
}
