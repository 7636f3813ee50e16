//! Pin the node transmit budgets and grow only the tolerated interference
//! level: once the interference constraint stops binding, every node sends at
//! its own cap and the outage freezes.

use crn_sop::config::db_to_linear;
use crn_sop::{sop_system, RunConfig, Scenario};

fn main() {
    for scenario in [Scenario::Jammer, Scenario::NoJammer] {
        println!("{}", scenario.label());
        for db in [0, 10, 20, 30, 40, 50, 60] {
            let mut cfg = RunConfig::reference();
            cfg.scenario = scenario;
            // break the lockstep ties, then pin the budgets at 20 dB
            cfg.lockstep.sigma = None;
            cfg.lockstep.delta = None;
            cfg.lockstep.rho_j = None;
            cfg.network.gbar_src = 100.0;
            cfg.network.gbar_relay = 100.0;
            cfg.network.gbar_jam = 100.0;
            cfg.network.gbar_intf = db_to_linear(db as f64);

            let sop = sop_system(&cfg.network, &cfg.fading, scenario, cfg.tol).unwrap();
            println!("  gbar_intf {db:>2} dB  sop {:.12}", sop.system);
        }
        println!();
    }
}
