//! Sweep the interference budget with every node budget tied at ten times it,
//! writing the CSV that the `sop sweep` subcommand would emit.
//!
//! With the budgets in lockstep the outage falls without bound instead of
//! saturating; compare `saturation.rs` for the pinned-budget behaviour.

use std::io::stdout;

use crn_sop::sweep::parse_values;
use crn_sop::{run_sweep, write_csv, Axis, Method, RunConfig};

fn main() {
    let mut cfg = RunConfig::reference();
    cfg.mc_samples = 200_000;

    let grid = parse_values("0:30:5").unwrap();
    let rows = run_sweep(
        &cfg,
        Axis::GbarIntfDb,
        &grid,
        &[Method::Exact, Method::Asymptotic, Method::MonteCarlo],
    )
    .unwrap();

    write_csv(&rows, &mut stdout().lock()).unwrap();
}
