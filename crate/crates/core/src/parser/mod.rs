//! The `.pafas` text format.
//!
//! ```text
//! model     ::= { statement [";"] }
//! statement ::= "root" "=" term
//!             | "hide" set
//!             | "let" IDENT "=" set
//!             | IDENT "=" term
//! term      ::= choice { "|[" names "]|" choice }
//! choice    ::= prefixed { "+" prefixed }
//! prefixed  ::= action "." prefixed
//!             | "{" names "}" "|>" prefixed
//!             | "rec" IDENT "." prefixed
//!             | postfix
//! postfix   ::= atom { "[" [ IDENT "->" action { "," IDENT "->" action } ] "]" | "/" set }
//! atom      ::= "nil" | IDENT | "(" term ")"
//! set       ::= "{" names "}" | IDENT
//! names     ::= [ IDENT { "," IDENT } ]
//! action    ::= IDENT | "tau"
//! ```
//!
//! Parallel composition and choice associate to the left. An identifier in
//! a set position that names a `let` alias expands to the aliased set.

mod lexer;
mod print;

pub use print::{print, print_system};

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{ParseError, Position};
use crate::syntax::{
    make_hiding, validate, Action, ActionSet, Equations, PrefixedAction, RelabelFn, System, Term,
};
use lexer::{tokenize, Spanned, Tok};

/// Parses a model and validates it.
pub fn parse(src: &str) -> Result<System, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, at: 0, aliases: HashMap::new(), bound: Vec::new(), constants: Vec::new() };
    p.model()
}

/// Parses a single term with no equations in scope; constants are left
/// unresolved.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, at: 0, aliases: HashMap::new(), bound: Vec::new(), constants: Vec::new() };
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    aliases: HashMap<String, BTreeSet<Action>>,
    bound: Vec<String>,
    constants: Vec<(String, Position)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Position {
        self.tokens[self.at].pos
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.at].tok.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn model(&mut self) -> Result<System, ParseError> {
        let mut equations = Equations::new();
        let mut root: Option<Term> = None;
        let mut hidden: BTreeSet<Action> = BTreeSet::new();

        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Semi => {
                    self.advance();
                }
                Tok::Root => {
                    self.advance();
                    self.expect(Tok::Eq)?;
                    if root.is_some() {
                        return Err(ParseError::DuplicateEquation { pos, name: "root".into() });
                    }
                    root = Some(self.term()?);
                }
                Tok::Hide => {
                    self.advance();
                    hidden.extend(self.set()?);
                }
                Tok::Let => {
                    self.advance();
                    let name = self.ident()?;
                    self.expect(Tok::Eq)?;
                    let set = self.set()?;
                    self.aliases.insert(name, set);
                }
                Tok::Ident(name) => {
                    self.advance();
                    self.expect(Tok::Eq)?;
                    let body = self.term()?;
                    if equations.define(&name, body).is_err() {
                        return Err(ParseError::DuplicateEquation { pos, name });
                    }
                }
                other => return self.error(format!("expected a definition, found {}", other.describe())),
            }
        }

        let Some(mut root) = root else {
            return Err(ParseError::MissingRoot { pos: self.pos() });
        };
        if !hidden.is_empty() {
            let phi = make_hiding(&hidden).expect("hide sets never contain tau");
            root = Term::relabel(root, Arc::new(phi));
        }
        for (name, pos) in &self.constants {
            if equations.get(name).is_none() {
                return Err(ParseError::UndefinedConstant { pos: *pos, name: name.clone() });
            }
        }
        let system = System::new(equations, root);
        let violations = validate(&system);
        if violations.is_empty() {
            Ok(system)
        } else {
            Err(ParseError::Invalid(violations))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut left = self.choice()?;
        while *self.peek() == Tok::SyncOpen {
            self.advance();
            let sync = self.names_until(Tok::RBracket, "synchronisation set")?;
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Bar)?;
            let right = self.choice()?;
            left = Term::parallel(left, ActionSet::new(sync), right);
        }
        Ok(left)
    }

    fn choice(&mut self) -> Result<Term, ParseError> {
        let mut left = self.prefixed()?;
        while *self.peek() == Tok::Plus {
            self.advance();
            let right = self.prefixed()?;
            left = Term::choice(left, right);
        }
        Ok(left)
    }

    fn prefixed(&mut self) -> Result<Term, ParseError> {
        match (self.peek().clone(), self.peek2().clone()) {
            (Tok::Tau, _) => {
                self.advance();
                self.expect(Tok::Dot)?;
                let cont = self.prefixed()?;
                Ok(Term::prefix(PrefixedAction::lazy(Action::Tau), cont))
            }
            (Tok::Ident(a), Tok::Dot) => {
                self.advance();
                self.advance();
                let cont = self.prefixed()?;
                Ok(Term::prefix(PrefixedAction::lazy(Action::visible(&a)), cont))
            }
            (Tok::LBrace, _) => {
                self.advance();
                let entries = self.names_until(Tok::RBrace, "read-set")?;
                self.expect(Tok::RBrace)?;
                if entries.is_empty() {
                    return self.error("read-sets must not be empty");
                }
                self.expect(Tok::ReadArrow)?;
                let body = self.prefixed()?;
                Ok(Term::read_set(entries.into_iter().map(PrefixedAction::lazy), body))
            }
            (Tok::Rec, _) => {
                self.advance();
                let var = self.ident()?;
                self.expect(Tok::Dot)?;
                self.bound.push(var.clone());
                let body = self.prefixed();
                self.bound.pop();
                Ok(Term::rec(&var, body?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Tok::LBracket => {
                    self.advance();
                    let phi = self.relabelling()?;
                    t = Term::relabel(t, Arc::new(phi));
                }
                Tok::Slash => {
                    self.advance();
                    let set = self.set()?;
                    let phi = make_hiding(&set).expect("sets never contain tau");
                    t = Term::relabel(t, Arc::new(phi));
                }
                _ => return Ok(t),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.advance() {
            Tok::Nil => Ok(Term::nil()),
            Tok::Ident(name) => {
                if self.bound.iter().rev().any(|b| *b == name) {
                    Ok(Term::var(&name))
                } else {
                    self.constants.push((name.clone(), pos));
                    Ok(Term::constant(&name))
                }
            }
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(ParseError::Syntax { pos, message: format!("expected a term, found {}", other.describe()) }),
        }
    }

    fn relabelling(&mut self) -> Result<RelabelFn, ParseError> {
        let mut pairs = Vec::new();
        while *self.peek() != Tok::RBracket {
            if !pairs.is_empty() {
                self.expect(Tok::Comma)?;
            }
            if *self.peek() == Tok::Tau {
                return self.error("tau cannot be relabelled");
            }
            let src = self.ident()?;
            self.expect(Tok::Arrow)?;
            let dst = match self.advance() {
                Tok::Tau => Action::Tau,
                Tok::Ident(s) => Action::visible(&s),
                other => {
                    self.at -= 1;
                    return self.error(format!("expected action, found {}", other.describe()));
                }
            };
            pairs.push((Arc::<str>::from(src.as_str()), dst));
        }
        self.expect(Tok::RBracket)?;
        Ok(RelabelFn::from_pairs(pairs))
    }

    fn set(&mut self) -> Result<BTreeSet<Action>, ParseError> {
        match self.peek().clone() {
            Tok::LBrace => {
                self.advance();
                let s = self.names_until(Tok::RBrace, "set")?;
                self.expect(Tok::RBrace)?;
                Ok(s)
            }
            Tok::Ident(name) => match self.aliases.get(&name) {
                Some(s) => {
                    let s = s.clone();
                    self.advance();
                    Ok(s)
                }
                None => self.error(format!("unknown set alias `{name}`")),
            },
            other => self.error(format!("expected a set, found {}", other.describe())),
        }
    }

    /// Comma-separated visible names; aliases expand in place.
    fn names_until(&mut self, close: Tok, what: &str) -> Result<BTreeSet<Action>, ParseError> {
        let mut out = BTreeSet::new();
        let mut first = true;
        while *self.peek() != close {
            if !first {
                self.expect(Tok::Comma)?;
            }
            first = false;
            match self.peek().clone() {
                Tok::Tau => return self.error(format!("tau is not allowed in a {what}")),
                Tok::Ident(name) => {
                    self.advance();
                    match self.aliases.get(&name) {
                        Some(s) => out.extend(s.iter().cloned()),
                        None => {
                            out.insert(Action::visible(&name));
                        }
                    }
                }
                other => return self.error(format!("expected action name, found {}", other.describe())),
            }
        }
        Ok(out)
    }
}
