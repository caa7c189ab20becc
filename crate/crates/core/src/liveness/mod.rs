//! MUTEX liveness via catastrophic cycles.
//!
//! A request/critical-section pair of one process (the focus) is renamed to
//! `in`/`out`, the rival's pair is made internal and the focus process loses
//! its idle `tau` summand. The algorithm is live for the focus process iff
//! the resulting timed LTS has no cycle with a time step and no `in`/`out`.

mod cycle;
mod io;
mod verdict;

pub use cycle::{find_catastrophic_cycle, strongly_connected_components, Lasso, Step};
pub use io::{io_transform, rename_term, IoSpec, IN, OUT};
pub use verdict::{
    check_liveness, check_liveness_detailed, render_report, replay_raw, transformed_source, LivenessCheck,
    Outcome, RawReplay, Report, ReportStep, Stats, Verdict, WitnessReport,
};
