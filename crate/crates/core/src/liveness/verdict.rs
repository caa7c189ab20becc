use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cycle::{find_catastrophic_cycle, Lasso};
use super::io::{io_transform, rename_term, transform_with, IoSpec, IN, OUT};
use crate::error::CheckError;
use crate::lts::{build, Label, TimedLts};
use crate::parser::{print, print_system};
use crate::semantics::Semantics;
use crate::syntax::{Action, System, Term, TermKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub states: usize,
    pub action_edges: usize,
    pub time_edges: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Live,
    NotLive(Lasso),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_live(&self) -> bool {
        matches!(self.outcome, Outcome::Live)
    }

    pub fn witness(&self) -> Option<&Lasso> {
        match &self.outcome {
            Outcome::Live => None,
            Outcome::NotLive(l) => Some(l),
        }
    }
}

/// Everything produced by a check: the transformed system, its LTS and the
/// verdict.
#[derive(Clone, Debug)]
pub struct LivenessCheck {
    pub transformed: System,
    pub lts: TimedLts,
    pub verdict: Verdict,
}

pub fn check_liveness(system: &System, spec: &IoSpec, max_states: usize) -> Result<Verdict, CheckError> {
    check_liveness_detailed(system, spec, max_states).map(|c| c.verdict)
}

pub fn check_liveness_detailed(
    system: &System,
    spec: &IoSpec,
    max_states: usize,
) -> Result<LivenessCheck, CheckError> {
    let start = Instant::now();
    let transformed = io_transform(system, spec)?;
    let lts = build(&transformed, max_states)?;
    let outcome = match find_catastrophic_cycle(&lts) {
        None => Outcome::Live,
        Some(lasso) => Outcome::NotLive(lasso),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let stats = Stats {
        states: lts.num_states(),
        action_edges: lts.action_edges.len(),
        time_edges: lts.time_edges.len(),
        elapsed_ms: (elapsed * 1000.0).round() / 1000.0,
    };
    Ok(LivenessCheck { transformed, lts, verdict: Verdict { outcome, stats } })
}

/// Serializable form of a verdict, with printed terms for every state on
/// the witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub model: String,
    pub live: bool,
    pub stats: Stats,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub initial: ReportStep,
    pub prefix: Vec<ReportStep>,
    pub cycle: Vec<ReportStep>,
    pub time_edge_index: usize,
}

/// A state reached by an edge; `kind` is `act`, `time`, or `start` for the
/// initial state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStep {
    pub kind: String,
    pub label: String,
    pub state: usize,
    pub term: String,
}

impl ReportStep {
    fn new(label: &Label, state: usize, lts: &TimedLts) -> Self {
        ReportStep {
            kind: if label.is_time() { "time" } else { "act" }.to_string(),
            label: label.to_string(),
            state,
            term: print(&lts.states[state]),
        }
    }
}

impl Report {
    pub fn new(model: impl Into<String>, check: &LivenessCheck) -> Self {
        let lts = &check.lts;
        let witness = check.verdict.witness().map(|lasso| WitnessReport {
            initial: ReportStep { kind: "start".into(), label: String::new(), state: 0, term: print(&lts.states[0]) },
            prefix: lasso.prefix.iter().map(|s| ReportStep::new(&s.label, s.state, lts)).collect(),
            cycle: lasso.cycle.iter().map(|s| ReportStep::new(&s.label, s.state, lts)).collect(),
            time_edge_index: lasso.time_edge_index,
        });
        Report { model: model.into(), live: check.verdict.is_live(), stats: check.verdict.stats.clone(), witness }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Human-readable rendering of a report as a timed computation.
pub fn render_report(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {}", report.model);
    let _ = writeln!(s, "verdict: {}", if report.live { "Live" } else { "NotLive" });
    let st = &report.stats;
    let _ = writeln!(
        s,
        "states: {}, action edges: {}, time edges: {}, elapsed: {:.3} ms",
        st.states, st.action_edges, st.time_edges, st.elapsed_ms
    );
    let Some(w) = &report.witness else {
        s.push_str("no catastrophic cycle\n");
        return s;
    };
    let _ = writeln!(s, "cycle labels: {}", summarize(w.cycle.iter().map(|c| c.label.as_str())));
    s.push_str("timed computation:\n");
    write_state(&mut s, &w.initial);
    for step in &w.prefix {
        write_edge(&mut s, step);
        write_state(&mut s, step);
    }
    s.push_str("catastrophic cycle (repeats forever):\n");
    let entry = w.prefix.last().unwrap_or(&w.initial);
    write_state(&mut s, entry);
    for step in &w.cycle {
        write_edge(&mut s, step);
        write_state(&mut s, step);
    }
    s
}

fn write_state(s: &mut String, step: &ReportStep) {
    let _ = writeln!(s, "  [{}] {}", step.state, step.term);
}

fn write_edge(s: &mut String, step: &ReportStep) {
    let _ = writeln!(s, "      --{}-->", step.label);
}

/// `tau^4 1` style multiset summary, labels in first-seen order.
fn summarize<'a>(labels: impl Iterator<Item = &'a str>) -> String {
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for l in labels {
        match counts.iter_mut().find(|(k, _)| *k == l) {
            Some((_, n)) => *n += 1,
            None => counts.push((l, 1)),
        }
    }
    counts
        .iter()
        .map(|(l, n)| if *n == 1 { l.to_string() } else { format!("{l}^{n}") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Labels of a witness replayed on the system before hiding and demotion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawReplay {
    pub prefix: Vec<Label>,
    pub cycle: Vec<Label>,
}

/// Replays a witness of `check` on the original system with the rival's
/// actions kept visible and the outermost hiding removed, recovering the
/// action behind every `tau` of the witness.
pub fn replay_raw(original: &System, spec: &IoSpec, check: &LivenessCheck) -> Result<RawReplay, String> {
    let lasso = check.verdict.witness().ok_or("no witness to replay")?;
    let focus_only: BTreeMap<Action, Action> =
        [(spec.req.clone(), Action::visible(IN)), (spec.cs.clone(), Action::visible(OUT))].into();
    let raw = transform_with(original, &focus_only, &spec.idle).map_err(|e| e.to_string())?;
    let demote: BTreeMap<Action, Action> = spec.demote.iter().map(|d| (d.clone(), Action::Tau)).collect();

    // strip the outer relabelling; it is re-applied when projecting
    let (raw_root, outer) = match raw.root.kind() {
        TermKind::Relabel(body, _) => {
            let TermKind::Relabel(_, phi) = check.transformed.root.kind() else {
                return Err("transformed root lost its relabelling".into());
            };
            (body.clone(), Some(phi.clone()))
        }
        _ => (raw.root.clone(), None),
    };
    let project = |t: &Term| -> Term {
        let renamed = rename_term(t, &demote);
        match &outer {
            Some(phi) => Term::relabel(renamed, Arc::clone(phi)),
            None => renamed,
        }
    };
    let label_of = |a: &Action| -> Action {
        let renamed = demote.get(a).cloned().unwrap_or_else(|| a.clone());
        match &outer {
            Some(phi) => phi.apply(&renamed),
            None => renamed,
        }
    };

    let sem = Semantics::new(&raw.equations);
    let lts = &check.lts;
    let mut at = raw_root;
    if project(&at) != lts.states[0] {
        return Err("raw root does not project onto the initial state".into());
    }
    let mut walk = |steps: &[super::cycle::Step]| -> Result<Vec<Label>, String> {
        let mut labels = Vec::new();
        for step in steps {
            let target = &lts.states[step.state];
            let next = match &step.label {
                Label::Time => {
                    let next = sem.one_step(&at).ok_or("raw system cannot take the time step")?;
                    labels.push(Label::Time);
                    next
                }
                Label::Act(a) => {
                    let mut candidates: Vec<(Action, Term)> = sem
                        .action_transitions(&at)
                        .into_iter()
                        .filter(|(b, next)| label_of(b) == *a && project(next) == *target)
                        .collect();
                    candidates.sort_by(|x, y| x.0.cmp(&y.0));
                    let (b, next) = candidates.into_iter().next().ok_or_else(|| {
                        format!("no raw transition matches `{a}` into state {}", step.state)
                    })?;
                    labels.push(Label::Act(b));
                    next
                }
            };
            if project(&next) != *target {
                return Err(format!("raw replay diverges at state {}", step.state));
            }
            at = next;
        }
        Ok(labels)
    };
    let prefix = walk(&lasso.prefix)?;
    let cycle = walk(&lasso.cycle)?;
    Ok(RawReplay { prefix, cycle })
}

/// The transformed system as text, for attaching to reports.
pub fn transformed_source(check: &LivenessCheck) -> String {
    print_system(&check.transformed)
}
