//! A model checker for a timed CCS-like process algebra with read-set
//! prefixes (non-blocking reads).
//!
//! Pipeline: [`parser`] or [`models`] produce a [`syntax::System`];
//! [`semantics`] gives its action transitions and time steps; [`lts`]
//! materialises the timed transition system; [`liveness`] applies the
//! io-transformation and searches for catastrophic cycles.

pub mod error;
pub mod liveness;
pub mod lts;
pub mod models;
pub mod parser;
pub mod semantics;
pub mod syntax;

pub use error::{CheckError, IoError, LtsError, ParseError, SyntaxError};
pub use liveness::{check_liveness, find_catastrophic_cycle, io_transform, IoSpec, Lasso, Verdict};
pub use lts::{build, TimedLts, DEFAULT_MAX_STATES};
pub use parser::{parse, print, print_system};
pub use semantics::{Semantics, TimeStepInfo};
pub use syntax::{Action, Term, System};
