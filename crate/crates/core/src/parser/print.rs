use std::fmt::Write;

use crate::syntax::{Action, ActionSet, PrefixedAction, RelabelFn, System, Term, TermKind};

// Binding strength, loosest first.
const PAR: u8 = 0;
const CHOICE: u8 = 1;
const PREFIXED: u8 = 2;
const ATOM: u8 = 3;

/// Renders a term in the input syntax. Urgent actions are written with a
/// leading `_`; such output is diagnostic only and does not parse.
pub fn print(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, PAR);
    s
}

/// Renders a whole system, one definition per line, `root` last.
pub fn print_system(system: &System) -> String {
    let mut s = String::new();
    for eq in system.equations.iter() {
        let _ = writeln!(s, "{} = {}", eq.name, print(&eq.body));
    }
    let _ = writeln!(s, "root = {}", print(&system.root));
    s
}

fn level(t: &Term) -> u8 {
    match t.kind() {
        TermKind::Parallel(..) => PAR,
        TermKind::Choice(..) => CHOICE,
        TermKind::Prefix(..) | TermKind::ReadSet(..) | TermKind::Rec(..) => PREFIXED,
        TermKind::Relabel(..) | TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => ATOM,
    }
}

fn write_term(s: &mut String, t: &Term, min: u8) {
    if level(t) < min {
        s.push('(');
        write_term(s, t, PAR);
        s.push(')');
        return;
    }
    match t.kind() {
        TermKind::Nil => s.push_str("nil"),
        TermKind::Constant(n) | TermKind::Var(n) => s.push_str(n),
        TermKind::Prefix(pa, cont) => {
            write_prefixed_action(s, pa);
            s.push('.');
            write_term(s, cont, PREFIXED);
        }
        TermKind::ReadSet(entries, body) => {
            s.push('{');
            for (i, e) in entries.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                write_prefixed_action(s, e);
            }
            s.push_str("} |> ");
            write_term(s, body, PREFIXED);
        }
        TermKind::Choice(l, r) => {
            write_term(s, l, CHOICE);
            s.push_str(" + ");
            write_term(s, r, PREFIXED);
        }
        TermKind::Parallel(l, sync, r) => {
            write_term(s, l, PAR);
            s.push_str(" |[");
            write_names(s, sync);
            s.push_str("]| ");
            write_term(s, r, CHOICE);
        }
        TermKind::Relabel(b, phi) => {
            write_term(s, b, ATOM);
            write_relabel(s, phi);
        }
        TermKind::Rec(x, body) => {
            let _ = write!(s, "rec {x}.");
            write_term(s, body, PREFIXED);
        }
    }
}

fn write_prefixed_action(s: &mut String, pa: &PrefixedAction) {
    if pa.is_urgent() {
        s.push('_');
    }
    s.push_str(pa.action.as_str());
}

fn write_names(s: &mut String, set: &ActionSet) {
    for (i, a) in set.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(a.as_str());
    }
}

fn write_relabel(s: &mut String, phi: &RelabelFn) {
    if phi.is_hiding() {
        s.push_str(" / {");
        for (i, (src, _)) in phi.pairs().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(src);
        }
        s.push('}');
    } else {
        s.push_str(" [");
        for (i, (src, dst)) in phi.pairs().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{src}->{}", Action::as_str(dst));
        }
        s.push(']');
    }
}
