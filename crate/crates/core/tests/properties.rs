mod common;

use std::sync::Arc;

use common::{oracle_equations, TermGen};
use pafas_core::error::ParseError;
use pafas_core::lts::build;
use pafas_core::parser::{parse, parse_term, print, print_system};
use pafas_core::semantics::Semantics;
use pafas_core::syntax::{validate, Action, ActionSet, PrefixedAction, RelabelFn, System, Term, TermKind};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("a"), Just("b"), Just("c")]
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![Just(Action::Tau), name().prop_map(Action::from)]
}

/// Initial terms over constants `X`, `Y` and a `rec`-bound `x`.
fn initial_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::nil()), Just(Term::constant("X")), Just(Term::constant("Y"))];
    leaf.prop_recursive(4, 40, 2, |inner| {
        prop_oneof![
            (action(), inner.clone()).prop_map(|(a, t)| Term::act(a, t)),
            (prop::collection::vec(name(), 1..3), inner.clone()).prop_map(|(ns, t)| {
                Term::read_set(ns.into_iter().map(|n| PrefixedAction::lazy(Action::from(n))), t)
            }),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::choice(l, r)),
            (prop::collection::vec(name(), 0..3), inner.clone(), inner.clone()).prop_map(|(ns, l, r)| {
                Term::parallel(l, ns.into_iter().map(Action::from).collect::<ActionSet>(), r)
            }),
            (prop::collection::vec((name(), action()), 0..3), inner.clone()).prop_map(|(ps, t)| {
                let pairs = ps.into_iter().map(|(s, d)| (Arc::<str>::from(s), d));
                Term::relabel(t, Arc::new(RelabelFn::from_pairs(pairs)))
            }),
            (action(), inner.clone())
                .prop_map(|(a, t)| Term::rec("x", Term::act(a, Term::choice(t, Term::var("x"))))),
        ]
    })
}

fn system_with(root: Term) -> System {
    System::new(oracle_equations(), root)
}

fn all_subterms(t: &Term, out: &mut Vec<Term>) {
    out.push(t.clone());
    match t.kind() {
        TermKind::Nil | TermKind::Constant(_) | TermKind::Var(_) => {}
        TermKind::Prefix(_, c) | TermKind::ReadSet(_, c) | TermKind::Relabel(c, _) | TermKind::Rec(_, c) => {
            all_subterms(c, out)
        }
        TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => {
            all_subterms(l, out);
            all_subterms(r, out);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(t in initial_term()) {
        let text = print(&t);
        let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, t, "{}", text);
    }

    #[test]
    fn system_round_trips(t in initial_term()) {
        let sys = system_with(t);
        let text = print_system(&sys);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back.root, &sys.root);
        prop_assert_eq!(print_system(&back), text);
    }

    #[test]
    fn initial_terms_have_initial_subterms(t in initial_term()) {
        let mut subs = Vec::new();
        all_subterms(&t, &mut subs);
        prop_assert!(subs.iter().all(Term::is_initial));
    }

    #[test]
    fn validate_is_idempotent(t in initial_term()) {
        let sys = system_with(t);
        prop_assert_eq!(validate(&sys), validate(&sys));
        prop_assert!(validate(&sys).is_empty());
    }

    #[test]
    fn time_passing_keeps_enabled_actions(seed in any::<u64>()) {
        let eqs = oracle_equations();
        let sem = Semantics::new(&eqs);
        let mut rng = StdRng::seed_from_u64(seed);
        let t = TermGen::new(&mut rng, true).term(4);
        let info = sem.time_step(&t);
        if let Some(succ) = &info.successor {
            prop_assert_eq!(sem.activated(&t), sem.activated(succ), "{}", t);
        }
        let visible: std::collections::BTreeSet<_> =
            sem.activated(&t).into_iter().filter(Action::is_visible).collect();
        prop_assert!(info.urgent_visible.is_subset(&visible), "{}", t);
    }

    #[test]
    fn read_set_actions_loop(seed in any::<u64>()) {
        let eqs = oracle_equations();
        let sem = Semantics::new(&eqs);
        let mut rng = StdRng::seed_from_u64(seed);
        let t = TermGen::new(&mut rng, true).term(4);
        let mut subs = Vec::new();
        all_subterms(&t, &mut subs);
        for s in subs.iter().filter(|s| !has_free_var(s)) {
            if let TermKind::ReadSet(entries, _) = s.kind() {
                let trans = sem.action_transitions(s);
                for e in entries.iter() {
                    prop_assert!(trans.contains(&(e.action.clone(), s.clone())), "{}", s);
                }
            }
        }
    }

    #[test]
    fn lts_states_are_distinct_and_time_deterministic(t in initial_term()) {
        let sys = system_with(t);
        let lts = build(&sys, 20_000).unwrap();
        let distinct: std::collections::HashSet<_> = lts.states.iter().collect();
        prop_assert_eq!(distinct.len(), lts.num_states());
        let mut sources: Vec<_> = lts.time_edges.iter().map(|e| e.src).collect();
        sources.sort_unstable();
        let before = sources.len();
        sources.dedup();
        prop_assert_eq!(before, sources.len());
        let again = build(&sys, 20_000).unwrap();
        prop_assert_eq!(&again.states, &lts.states);
        prop_assert_eq!(&again.action_edges, &lts.action_edges);
        prop_assert_eq!(&again.time_edges, &lts.time_edges);
    }

    #[test]
    fn removing_time_edges_removes_catastrophic_cycles(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let lts = common::random_graph(&mut rng, 60);
        let timeless = pafas_core::lts::TimedLts::from_edges(lts.num_states(), lts.action_edges.clone(), vec![]);
        prop_assert!(pafas_core::find_catastrophic_cycle(&timeless).is_none());
    }

    #[test]
    fn parse_errors_point_inside_the_source(t in initial_term(), cut in any::<prop::sample::Index>()) {
        let text = format!("root = {}", print(&t));
        let chars: Vec<char> = text.chars().collect();
        let i = cut.index(chars.len());
        let broken: String = chars[..i].iter().chain(chars[i + 1..].iter()).collect();
        if let Err(e) = parse(&broken) {
            let lines = broken.lines().count().max(1);
            match e {
                ParseError::Syntax { pos, .. }
                | ParseError::UndefinedConstant { pos, .. }
                | ParseError::DuplicateEquation { pos, .. }
                | ParseError::MissingRoot { pos } => {
                    prop_assert!(pos.line >= 1 && pos.line <= lines + 1 && pos.column >= 1, "{:?}", pos);
                }
                ParseError::Invalid(v) => prop_assert!(!v.is_empty()),
            }
        }
    }
}

fn has_free_var(t: &Term) -> bool {
    fn go(t: &Term, bound: &mut Vec<String>) -> bool {
        match t.kind() {
            TermKind::Var(x) => !bound.iter().any(|b| **b == **x),
            TermKind::Nil | TermKind::Constant(_) => false,
            TermKind::Prefix(_, c) | TermKind::ReadSet(_, c) | TermKind::Relabel(c, _) => go(c, bound),
            TermKind::Choice(l, r) | TermKind::Parallel(l, _, r) => go(l, bound) || go(r, bound),
            TermKind::Rec(x, c) => {
                bound.push(x.to_string());
                let r = go(c, bound);
                bound.pop();
                r
            }
        }
    }
    go(t, &mut Vec::new())
}
