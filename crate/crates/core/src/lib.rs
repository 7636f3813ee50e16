//! Secrecy outage analysis for a dual-hop underlay cognitive radio network
//! with multi-antenna terminals and an optional friendly jammer.
//!
//! Three independent evaluation routes are provided and cross-validated:
//! exact closed-form expressions built on Mellin-Barnes machinery, high-SNR
//! asymptotics, and a direct Monte Carlo simulator.

pub mod analytic;
pub mod asymptotic;
pub mod channel;
pub mod config;
pub mod error;
pub mod montecarlo;
pub mod selftest;
pub mod sweep;
pub mod specfun;

pub use analytic::{sop_system, sop_system_full, SopBreakdown};
pub use asymptotic::{sop_system_asymptotic, AsymptoticCase, AsymptoticSop, TailLaw};
pub use config::{reference_fading, reference_network, RunConfig};
pub use channel::{
    derive_coefficients, DerivedCoefficients, FadingSet, LinkClass, LinkFading, NetworkConfig,
    Scenario,
};
pub use error::{Error, Result};
pub use montecarlo::{estimate_sop, EveMode, McOptions, PairMode, SopEstimate};
pub use selftest::{run_all, run_criterion, CriterionResult, SelftestOptions};
pub use sweep::{reproduce_figure, run_point, run_sweep, write_csv, Axis, Method, ResultRow};
