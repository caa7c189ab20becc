//! Built-in two-process mutual exclusion algorithms.
//!
//! Each builder emits `.pafas` source and parses it, so every handle's
//! system is exactly what the printer and parser agree on. Shared variables
//! are flattened into one constant per value (`B1f`, `B1t`, `K1`, `C10`, ...).

use std::collections::BTreeSet;
use std::fmt::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use crate::liveness::IoSpec;
use crate::parser::{parse, print_system};
use crate::syntax::{Action, Name, System};

/// How a shared variable offers its reads and writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VariableStyle {
    /// Reads and writes are ordinary prefixes.
    Blocking,
    /// Reads sit in a read-set.
    NonBlockingRead,
    /// Reads and writes of the current value sit in a read-set.
    NonBlockingReadRewrite,
}

impl VariableStyle {
    pub const ALL: [VariableStyle; 3] =
        [VariableStyle::Blocking, VariableStyle::NonBlockingRead, VariableStyle::NonBlockingReadRewrite];

    pub fn flag(self) -> &'static str {
        match self {
            VariableStyle::Blocking => "blocking",
            VariableStyle::NonBlockingRead => "nbread",
            VariableStyle::NonBlockingReadRewrite => "nbrw",
        }
    }
}

impl fmt::Display for VariableStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

impl FromStr for VariableStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        VariableStyle::ALL
            .into_iter()
            .find(|v| v.flag() == s)
            .ok_or_else(|| format!("unknown style `{s}` (expected blocking, nbread or nbrw)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelName {
    Peterson,
    Lamport,
    Dijkstra,
    Knuth,
}

impl ModelName {
    pub const ALL: [ModelName; 4] = [ModelName::Peterson, ModelName::Lamport, ModelName::Dijkstra, ModelName::Knuth];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Peterson => "peterson",
            ModelName::Lamport => "lamport",
            ModelName::Dijkstra => "dijkstra",
            ModelName::Knuth => "knuth",
        }
    }

    pub fn default_style(self) -> VariableStyle {
        match self {
            ModelName::Peterson => VariableStyle::NonBlockingRead,
            _ => VariableStyle::NonBlockingReadRewrite,
        }
    }

    /// Styles the builder accepts; Dijkstra and Knuth are fixed.
    pub fn styles(self) -> &'static [VariableStyle] {
        match self {
            ModelName::Peterson | ModelName::Lamport => &VariableStyle::ALL,
            _ => &[VariableStyle::NonBlockingReadRewrite],
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown model `{s}` (expected peterson, lamport, dijkstra or knuth)"))
    }
}

/// Request/critical-section actions and idle equation of one process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessInfo {
    pub req: Action,
    pub cs: Action,
    pub idle: Name,
}

#[derive(Clone, Debug)]
pub struct ModelHandle {
    pub name: ModelName,
    pub style: VariableStyle,
    /// Untransformed system: `req_i`/`cs_i` visible, everything else hidden.
    pub system: System,
    pub processes: [ProcessInfo; 2],
    /// Actions hidden at the root.
    pub hidden: BTreeSet<Action>,
}

impl ModelHandle {
    /// Observes process `focus` (1 or 2) and demotes the other's actions.
    pub fn io_spec(&self, focus: usize) -> Result<IoSpec, String> {
        if !(1..=2).contains(&focus) {
            return Err(format!("focus must be 1 or 2, got {focus}"));
        }
        let me = &self.processes[focus - 1];
        let other = &self.processes[2 - focus];
        Ok(IoSpec {
            req: me.req.clone(),
            cs: me.cs.clone(),
            demote: [other.req.clone(), other.cs.clone()].into(),
            idle: me.idle.clone(),
        })
    }

    pub fn source(&self) -> String {
        print_system(&self.system)
    }

    pub fn label(&self, focus: usize) -> String {
        format!("{} ({}), focus {focus}", self.name, self.style)
    }
}

pub fn build(name: ModelName, style: Option<VariableStyle>) -> Result<ModelHandle, String> {
    let style = style.unwrap_or(name.default_style());
    if !name.styles().contains(&style) {
        return Err(format!("{name} only supports style {}", name.default_style()));
    }
    Ok(match name {
        ModelName::Peterson => peterson(style),
        ModelName::Lamport => lamport(style),
        ModelName::Dijkstra => dijkstra(),
        ModelName::Knuth => knuth(),
    })
}

/// A shared variable over `values`, emitted as one equation per value.
struct Variable<'a> {
    constant: &'a dyn Fn(&str) -> String,
    read: &'a dyn Fn(&str) -> String,
    write: &'a dyn Fn(&str) -> String,
    values: &'a [&'a str],
    /// Write alternatives list the current value first.
    self_first: bool,
}

impl Variable<'_> {
    fn emit(&self, out: &mut String, style: VariableStyle) {
        for &v in self.values {
            let mut order: Vec<&str> = Vec::new();
            if self.self_first {
                order.push(v);
            }
            order.extend(self.values.iter().copied().filter(|&w| !self.self_first || w != v));
            let writes = |skip_self: bool| {
                order
                    .iter()
                    .filter(|&&w| !skip_self || w != v)
                    .map(|&w| format!("{}.{}", (self.write)(w), (self.constant)(w)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let body = match style {
                VariableStyle::Blocking => format!("{}.{} + {}", (self.read)(v), (self.constant)(v), writes(false)),
                VariableStyle::NonBlockingRead => format!("{{{}}} |> ({})", (self.read)(v), writes(false)),
                VariableStyle::NonBlockingReadRewrite => {
                    format!("{{{}, {}}} |> ({})", (self.read)(v), (self.write)(v), writes(true))
                }
            };
            let _ = writeln!(out, "{} = {}", (self.constant)(v), body);
        }
    }
}

fn boolean(out: &mut String, var: &str, i: usize, style: VariableStyle) {
    Variable {
        constant: &|v| format!("{}{i}{v}", var.to_uppercase()),
        read: &|v| format!("r{v}{var}{i}"),
        write: &|v| format!("w{v}{var}{i}"),
        values: &["f", "t"],
        self_first: true,
    }
    .emit(out, style);
}

fn turn(out: &mut String, style: VariableStyle) {
    Variable {
        constant: &|v| format!("K{v}"),
        read: &|v| format!("rk{v}"),
        write: &|v| format!("wk{v}"),
        values: &["1", "2"],
        self_first: false,
    }
    .emit(out, style);
}

fn ternary(out: &mut String, i: usize, style: VariableStyle) {
    Variable {
        constant: &|v| format!("C{i}{v}"),
        read: &|v| format!("rc{i}{v}"),
        write: &|v| format!("wc{i}{v}"),
        values: &["0", "1", "2"],
        self_first: false,
    }
    .emit(out, style);
}

/// Sync set and hide set over every variable action, in sorted order.
fn variable_actions(vars: &str) -> String {
    let sys = parse(&format!("{vars}root = nil\n")).expect("variable equations parse");
    let mut acts = BTreeSet::new();
    for eq in sys.equations.iter() {
        eq.body.collect_actions(&mut acts);
    }
    acts.iter().filter(|a| a.is_visible()).map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

fn finish(name: ModelName, style: VariableStyle, src: String) -> ModelHandle {
    let system = parse(&src).unwrap_or_else(|e| panic!("built-in model {name} is malformed: {e}"));
    let processes = [1, 2].map(|i| ProcessInfo {
        req: Action::visible(&format!("req{i}")),
        cs: Action::visible(&format!("cs{i}")),
        idle: Arc::from(format!("P{i}").as_str()),
    });
    let hidden = hidden_actions(&system);
    ModelHandle { name, style, system, processes, hidden }
}

fn hidden_actions(system: &System) -> BTreeSet<Action> {
    match system.root.kind() {
        crate::syntax::TermKind::Relabel(_, phi) => {
            phi.pairs().filter(|(_, dst)| dst.is_tau()).map(|(src, _)| Action::Visible(src.clone())).collect()
        }
        _ => BTreeSet::new(),
    }
}

pub fn peterson(style: VariableStyle) -> ModelHandle {
    let mut vars = String::new();
    boolean(&mut vars, "b", 1, style);
    boolean(&mut vars, "b", 2, style);
    turn(&mut vars, style);
    let b = variable_actions(&vars);
    let src = format!(
        "P1 = req1.wtb1.wk2.P11 + tau.P1
P11 = rfb2.P13 + rtb2.P12
P12 = rk2.P11 + rk1.P13
P13 = cs1.wfb1.P1
P2 = req2.wtb2.wk1.P21 + tau.P2
P21 = rfb1.P23 + rtb1.P22
P22 = rk1.P21 + rk2.P23
P23 = cs2.wfb2.P2
{vars}root = ((P1 |[]| P2) |[{b}]| ((B1f |[]| B2f) |[]| K1)) / {{{b}}}
"
    );
    finish(ModelName::Peterson, style, src)
}

pub fn lamport(style: VariableStyle) -> ModelHandle {
    let mut vars = String::new();
    boolean(&mut vars, "b", 1, style);
    boolean(&mut vars, "b", 2, style);
    let b = variable_actions(&vars);
    let src = format!(
        "P1 = req1.wtb1.P11 + tau.P1
P11 = rfb2.P12 + rtb2.P11
P12 = cs1.wfb1.P1
P2 = req2.wtb2.P21 + tau.P2
P21 = rfb1.P23 + rtb1.wfb2.P22
P22 = rfb1.wtb2.P21 + rtb1.P22
P23 = cs2.wfb2.P2
{vars}root = ((P1 |[]| P2) |[{b}]| (B1f |[]| B2f)) / {{{b}}}
"
    );
    finish(ModelName::Lamport, style, src)
}

pub fn dijkstra() -> ModelHandle {
    let style = VariableStyle::NonBlockingReadRewrite;
    let mut vars = String::new();
    boolean(&mut vars, "b", 1, style);
    boolean(&mut vars, "b", 2, style);
    boolean(&mut vars, "c", 1, style);
    boolean(&mut vars, "c", 2, style);
    turn(&mut vars, style);
    let b = variable_actions(&vars);
    let src = format!(
        "P1 = req1.wfb1.P11 + tau.P1
P11 = rk1.P15 + rk2.wtc1.P12
P12 = get.(rk1.P13 + rk2.P14)
P13 = rtb1.put.wk1.P11 + rfb1.put.P11
P14 = rtb2.put.wk1.P11 + rfb2.put.P11
P15 = wfc1.(rfc2.P11 + rtc2.P16)
P16 = cs1.wtc1.wtb1.P1
P2 = req2.wfb2.P21 + tau.P2
P21 = rk2.P25 + rk1.wtc2.P22
P22 = get.(rk2.P23 + rk1.P24)
P23 = rtb2.put.wk2.P21 + rfb2.put.P21
P24 = rtb1.put.wk2.P21 + rfb1.put.P21
P25 = wfc2.(rfc1.P21 + rtc1.P26)
P26 = cs2.wtc2.wtb2.P2
BK = get.put.BK
{vars}root = (((P1 |[]| P2) |[get, put]| BK) |[{b}]| ((((B1t |[]| B2t) |[]| C1t) |[]| C2t) |[]| K1)) / {{{b}, get, put}}
"
    );
    finish(ModelName::Dijkstra, style, src)
}

pub fn knuth() -> ModelHandle {
    let style = VariableStyle::NonBlockingReadRewrite;
    let mut vars = String::new();
    ternary(&mut vars, 1, style);
    ternary(&mut vars, 2, style);
    turn(&mut vars, style);
    let b = variable_actions(&vars);
    let src = format!(
        "P1 = req1.wc11.P11 + tau.P1
P11 = rk1.P13 + rk2.P12
P12 = rc20.P13 + rc21.P11 + rc22.P11
P13 = wc12.P14
P14 = rc20.P15 + rc21.P15 + rc22.P16
P15 = wk1.cs1.wk2.wc10.P1
P16 = wc11.P11
P2 = req2.wc21.P21 + tau.P2
P21 = rk2.P23 + rk1.P22
P22 = rc10.P23 + rc11.P21 + rc12.P21
P23 = wc22.P24
P24 = rc10.P25 + rc11.P25 + rc12.P26
P25 = wk2.cs2.wk1.wc20.P2
P26 = wc21.P21
{vars}root = ((P1 |[]| P2) |[{b}]| ((C10 |[]| C20) |[]| K1)) / {{{b}}}
"
    );
    finish(ModelName::Knuth, style, src)
}

/// One row of the model catalog.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: ModelName,
    pub styles: &'static [VariableStyle],
    pub default_style: VariableStyle,
    pub description: &'static str,
    /// Expected outcomes as `(style, focus, live)`.
    pub expected: &'static [(VariableStyle, usize, bool)],
}

pub fn catalog() -> Vec<CatalogEntry> {
    use VariableStyle::*;
    ModelName::ALL
        .into_iter()
        .map(|name| {
            let (description, expected): (&'static str, &'static [(VariableStyle, usize, bool)]) = match name {
                ModelName::Peterson => (
                    "flags b1, b2 and turn k; live with non-blocking reads, not live with blocking variables",
                    &[(NonBlockingRead, 1, true), (NonBlockingRead, 2, true), (Blocking, 2, false)],
                ),
                ModelName::Lamport => (
                    "flags b1, b2 only; asymmetric, process 2 can starve",
                    &[
                        (NonBlockingReadRewrite, 1, true),
                        (NonBlockingReadRewrite, 2, false),
                        (NonBlockingRead, 1, true),
                        (NonBlockingRead, 2, false),
                        (Blocking, 1, false),
                    ],
                ),
                ModelName::Dijkstra => (
                    "flags b, c and turn k, with a lock BK guarding the read of b[k]",
                    &[(NonBlockingReadRewrite, 2, false)],
                ),
                ModelName::Knuth => ("three-valued control c1, c2 and turn k", &[(NonBlockingReadRewrite, 2, false)]),
            };
            CatalogEntry { name, styles: name.styles(), default_style: name.default_style(), description, expected }
        })
        .collect()
}
