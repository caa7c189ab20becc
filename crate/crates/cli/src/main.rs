//! `pafas`: liveness checks for timed process-algebra models.
//!
//! Exit status: 0 live, 1 not live, 2 error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pafas_core::liveness::{check_liveness_detailed, render_report, IoSpec, Report};
use pafas_core::models::{self, ModelName, VariableStyle};
use pafas_core::{build, io_transform, parse, System, DEFAULT_MAX_STATES};

#[derive(Parser)]
#[command(name = "pafas", version, about = "Liveness checker for timed process algebra with read-sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide liveness for one process and print a counterexample if any.
    Check {
        #[command(flatten)]
        select: Selector,
        #[command(flatten)]
        budget: Budget,
        /// Write the transformed LTS as GraphViz.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Write the verdict and witness as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Print only the verdict.
        #[arg(long)]
        quiet: bool,
    },
    /// Emit the timed LTS of a model, raw or io-transformed.
    Lts {
        #[command(flatten)]
        select: Selector,
        #[command(flatten)]
        budget: Budget,
        /// Build the io-transformed system (needs --focus or the io flags).
        #[arg(long)]
        transformed: bool,
        /// Tab-separated edge list instead of GraphViz.
        #[arg(long)]
        tsv: bool,
        /// Write to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Pretty-print a witness saved by `check --json`.
    Trace {
        /// JSON report file.
        #[arg(long, value_name = "PATH")]
        json: PathBuf,
    },
    /// List the built-in models, or print one as source.
    Models {
        /// Print the `.pafas` source of this model.
        #[arg(long, value_name = "MODEL")]
        source: Option<ModelName>,
        #[arg(long, requires = "source")]
        style: Option<VariableStyle>,
    },
}

#[derive(Args)]
struct Selector {
    /// Built-in model.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    model: Option<ModelName>,
    /// Variable style of a built-in model: blocking, nbread or nbrw.
    #[arg(long, requires = "model")]
    style: Option<VariableStyle>,
    /// Model source file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Observed process of a built-in model.
    #[arg(long, conflicts_with = "file")]
    focus: Option<usize>,
    /// Request action of the observed process (with --file).
    #[arg(long, requires = "file")]
    req: Option<String>,
    /// Critical-section action of the observed process (with --file).
    #[arg(long, requires = "file")]
    cs: Option<String>,
    /// Comma-separated actions turned internal (with --file).
    #[arg(long, requires = "file", value_delimiter = ',', num_args = 0..)]
    demote: Option<Vec<String>>,
    /// Equation holding the observed process's idle `tau` summand (with --file).
    #[arg(long, requires = "file")]
    idle: Option<String>,
}

#[derive(Args)]
struct Budget {
    /// Abort once this many states are reached.
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
}

/// A resolved model: the system, a display label and an io specification if
/// one was given.
struct Loaded {
    system: System,
    label: String,
    spec: Option<IoSpec>,
}

impl Selector {
    fn load(&self) -> Result<Loaded> {
        if let Some(name) = self.model {
            let handle = models::build(name, self.style).map_err(anyhow::Error::msg)?;
            let spec = self.focus.map(|f| handle.io_spec(f)).transpose().map_err(anyhow::Error::msg)?;
            let label = match self.focus {
                Some(f) => handle.label(f),
                None => format!("{} ({})", handle.name, handle.style),
            };
            return Ok(Loaded { system: handle.system, label, spec });
        }
        let path = self.file.as_ref().expect("clap enforces a selector");
        let src = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let system = parse(&src).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let spec = match (&self.req, &self.cs, &self.demote, &self.idle) {
            (None, None, None, None) => None,
            (Some(req), Some(cs), Some(demote), Some(idle)) => {
                let demote: Vec<&str> = demote.iter().map(String::as_str).collect();
                Some(IoSpec::new(req, cs, &demote, idle))
            }
            _ => bail!("--file needs all of --req, --cs, --demote and --idle"),
        };
        Ok(Loaded { system, label: path.display().to_string(), spec })
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { select, budget, dot, json, quiet } => {
            let loaded = select.load()?;
            let Some(spec) = loaded.spec else {
                bail!("check needs --focus (built-in models) or --req/--cs/--demote/--idle (files)");
            };
            let check = check_liveness_detailed(&loaded.system, &spec, budget.max_states)?;
            let report = Report::new(loaded.label, &check);
            if let Some(path) = dot {
                write_file(&path, &check.lts.to_dot())?;
            }
            if let Some(path) = json {
                write_file(&path, &report.to_json())?;
            }
            if quiet {
                println!("{}", if report.live { "Live" } else { "NotLive" });
            } else {
                print!("{}", render_report(&report));
            }
            Ok(ExitCode::from(if report.live { 0 } else { 1 }))
        }
        Command::Lts { select, budget, transformed, tsv, dot } => {
            let loaded = select.load()?;
            let system = if transformed {
                let spec = loaded.spec.context("--transformed needs --focus or the io flags")?;
                io_transform(&loaded.system, &spec)?
            } else {
                loaded.system
            };
            let lts = build(&system, budget.max_states)?;
            let out = if tsv { lts.to_tsv() } else { lts.to_dot() };
            match dot {
                Some(path) => write_file(&path, &out)?,
                None => print!("{out}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace { json } => {
            let text = fs::read_to_string(&json).with_context(|| format!("cannot read {}", json.display()))?;
            let report = Report::from_json(&text).with_context(|| format!("{} is not a report", json.display()))?;
            print!("{}", render_report(&report));
            Ok(ExitCode::from(if report.live { 0 } else { 1 }))
        }
        Command::Models { source, style } => {
            if let Some(name) = source {
                let handle = models::build(name, style).map_err(anyhow::Error::msg)?;
                print!("{}", handle.source());
                return Ok(ExitCode::SUCCESS);
            }
            for entry in models::catalog() {
                let styles: Vec<&str> = entry.styles.iter().map(|s| s.flag()).collect();
                println!("{}  [styles: {}; default {}]", entry.name, styles.join(", "), entry.default_style);
                println!("    {}", entry.description);
                for (style, focus, live) in entry.expected {
                    println!("    {style}, focus {focus}: {}", if *live { "Live" } else { "NotLive" });
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
