//! High-SNR tail laws for the jammed first hop.
//!
//! With a jammer the first-hop outage keeps decaying as the budgets grow, and
//! the decay order is whichever diversity is smaller: the relay's receive
//! array or the jammer-to-eavesdropper array. (The full system value instead
//! levels off, because the unjammed second hop tends to a constant.) The three
//! regimes below print the per-decade log-log slope of the hop outage so the
//! law is visible, next to the exact and asymptotic system curves.

use crn_sop::config::db_to_linear;
use crn_sop::{
    derive_coefficients, sop_system, sop_system_asymptotic, LinkFading, RunConfig,
};

fn case(name: &str, l_relay: u32, m_sr: u32, l_eve: u32, m_je: u32) {
    let mut cfg = RunConfig::reference();
    cfg.network.n_eves = 1;
    cfg.network.l_relay = l_relay;
    cfg.network.l_eve = vec![l_eve];
    cfg.fading.source_relay = LinkFading { m: m_sr, ..cfg.fading.source_relay };
    cfg.fading.jammer_eve = LinkFading { m: m_je, ..cfg.fading.jammer_eve };

    println!(
        "{name}  (relay order {}, jammed-eve order {})",
        l_relay * m_sr,
        l_eve * m_je
    );
    let mut prev: Option<f64> = None;
    for db in [20.0, 30.0, 40.0, 50.0] {
        cfg.set_gbar_intf(db_to_linear(db));
        let d = derive_coefficients(&cfg.network, &cfg.fading, 0, 0, Some(1)).unwrap();
        let hop1 = crn_sop::analytic::sop1_jammer(&d, cfg.tol).unwrap();
        let exact = sop_system(&cfg.network, &cfg.fading, cfg.scenario, cfg.tol)
            .unwrap()
            .system;
        let asym = sop_system_asymptotic(&cfg.network, &cfg.fading, cfg.scenario, cfg.tol)
            .unwrap()
            .clamped;
        let slope = prev.map(|p| (hop1 / p).log10()).unwrap_or(f64::NAN);
        println!(
            "  {db:>2} dB  hop1 {hop1:.3e} (decade slope {slope:+.2})  system exact {exact:.4e}  asym {asym:.4e}"
        );
        prev = Some(hop1);
    }
    println!();
}

fn main() {
    // relay-side diversity below the jammer's: the relay array sets the tail
    case("relay-limited", 2, 1, 1, 3);
    // jammer-to-eve diversity below the relay's: jamming runs out first
    case("jammer-limited", 3, 1, 2, 1);
    // equal single orders: slope -1 steepened by a slowly growing logarithm
    case("balanced", 1, 1, 1, 1);
}
