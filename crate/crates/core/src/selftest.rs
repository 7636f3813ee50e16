//! Built-in acceptance checks: nine numbered criteria covering closed-form /
//! simulation agreement, asymptote convergence, high-SNR decay slopes,
//! interference-budget saturation, monotonic trends, jammer/antenna
//! orderings, transform-kernel identities, sampler distributions, and edge
//! cases with reproducibility.
//!
//! Each check returns a pass flag plus a one-line summary carrying the
//! measured numbers, so a failing run says what was off and by how much.
//! `run_all` never panics: a criterion that errors out is reported as failed
//! with the error text in its detail line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{sop1_jammer, sop_system};
use crate::asymptotic::sop_system_asymptotic;
use crate::channel::{derive_coefficients, LinkFading, Scenario, ALL_LINK_CLASSES};
use crate::config::{db_to_linear, reference_fading, Lockstep, RunConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{
    estimate_sop, instantaneous_snrs, sample_draw, sample_gamma, sample_gamma_mt, McOptions,
};
use crate::specfun::gamma::{gamma_lower, gamma_p, gamma_upper, ln_gamma};
use crate::specfun::mellin::{
    eval_contour, eval_residue_series, evaluate, EvalMethod, GammaFactor, MellinBarnesSpec,
};

pub const CRITERION_COUNT: usize = 9;

/// Knobs shared by every criterion. The defaults match the CLI defaults:
/// one million simulation samples, seed 1, kernel tolerance 1e-10.
#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub mc_samples: u64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            mc_samples: 1_000_000,
            seed: 1,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    /// The one-line report format used by the CLI and the acceptance test.
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} -- {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

type Check = fn(&SelftestOptions) -> Result<(bool, String)>;

fn checks() -> [(&'static str, Check); CRITERION_COUNT] {
    [
        ("closed form vs simulation on the reference grid", check_grid_agreement),
        ("asymptote converges to the exact curve", check_asymptote_convergence),
        ("high-snr decay slopes", check_decay_slopes),
        ("interference-budget saturation", check_saturation),
        ("monotonic trends", check_monotonic_trends),
        ("jammer and antenna ordering", check_ordering),
        ("transform-kernel identities", check_kernel_identities),
        ("sampler distributions", check_sampler_distributions),
        ("edge cases and reproducibility", check_edge_cases),
    ]
}

pub fn criterion_name(id: usize) -> Option<&'static str> {
    (1..=CRITERION_COUNT).contains(&id).then(|| checks()[id - 1].0)
}

pub fn run_criterion(id: usize, opts: &SelftestOptions) -> CriterionResult {
    if !(1..=CRITERION_COUNT).contains(&id) {
        return CriterionResult {
            id,
            name: "unknown",
            passed: false,
            detail: format!("no criterion numbered {id}; valid ids are 1..={CRITERION_COUNT}"),
        };
    }
    let (name, run) = checks()[id - 1];
    match run(opts) {
        Ok((passed, detail)) => CriterionResult {
            id,
            name,
            passed,
            detail,
        },
        Err(e) => CriterionResult {
            id,
            name,
            passed: false,
            detail: format!("did not complete: {e}"),
        },
    }
}

pub fn run_all(opts: &SelftestOptions) -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT)
        .map(|id| run_criterion(id, opts))
        .collect()
}

// ---------------------------------------------------------------------------
// criterion 1: exact curve against the simulator over the reference grid

fn grid_config(scenario: Scenario, l: u32, gbar_intf_db: f64, rate: f64) -> RunConfig {
    let mut cfg = RunConfig::reference();
    cfg.scenario = scenario;
    cfg.network.l_relay = l;
    cfg.network.l_dest = l;
    cfg.network.l_eve = vec![l; cfg.network.n_eves as usize];
    cfg.network.rate_s = rate;
    cfg.set_gbar_intf(db_to_linear(gbar_intf_db));
    cfg
}

fn check_grid_agreement(opts: &SelftestOptions) -> Result<(bool, String)> {
    let start = Instant::now();
    let mut cells = 0usize;
    let mut misses = 0usize;
    // worst cell by gap / allowance
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for scenario in [Scenario::Jammer, Scenario::NoJammer] {
        for l in [1u32, 2, 3] {
            for step in 0..7u32 {
                let db = 5.0 * f64::from(step);
                for rate in [0.5, 1.0] {
                    let cfg = grid_config(scenario, l, db, rate);
                    let exact =
                        sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system;
                    let mc = estimate_sop(
                        &cfg.network,
                        &cfg.fading,
                        scenario,
                        McOptions::new(opts.mc_samples, opts.seed),
                    )?;
                    let gap = (exact - mc.p_hat).abs();
                    let allowed = (4.0 * mc.std_err).max(0.01);
                    cells += 1;
                    if gap > allowed {
                        misses += 1;
                    }
                    if gap / allowed > worst {
                        worst = gap / allowed;
                        worst_at = format!(
                            "{} L={l} {db:.0} dB Rs={rate}: |{exact:.5} - {:.5}| = {gap:.1e} (allowed {allowed:.1e})",
                            scenario.label(),
                            mc.p_hat,
                        );
                    }
                }
            }
        }
    }
    // Side note, not a gate: the closed form composes the per-eavesdropper
    // outages as if independent, and the factorized simulator estimates that
    // same object. Replaying all eavesdroppers against one shared snapshot
    // (common relay/destination gains and adapted powers) gives a rarer
    // event; report both so the composition gap stays visible.
    let note_cfg = grid_config(Scenario::Jammer, 2, 5.0, 0.5);
    let n_note = opts.mc_samples.min(200_000);
    let fac = estimate_sop(
        &note_cfg.network,
        &note_cfg.fading,
        Scenario::Jammer,
        McOptions::new(n_note, opts.seed),
    )?;
    let coh = estimate_sop(
        &note_cfg.network,
        &note_cfg.fading,
        Scenario::Jammer,
        McOptions::new(n_note, opts.seed).coherent(),
    )?;
    let elapsed = start.elapsed().as_secs_f64();
    let passed = misses == 0 && elapsed < 600.0;
    let detail = format!(
        "{}/{} cells within max(0.01, 4*SE) in {elapsed:.0} s; largest gap at {worst_at}; \
         composition note at jammer L=2 5 dB Rs=0.5: factorized {:.4} vs shared-snapshot {:.4}",
        cells - misses,
        cells,
        fac.p_hat,
        coh.p_hat,
    );
    Ok((passed, detail))
}

// ---------------------------------------------------------------------------
// criterion 2: first-order asymptote against the exact curve

fn asym_cases() -> Vec<(&'static str, RunConfig)> {
    let mut base = RunConfig::reference();
    base.network.n_eves = 1;
    base.network.l_eve = vec![1];

    // relay shape product below the jammer-eavesdropper one
    let mut c1 = base.clone();
    c1.network.l_relay = 1;
    c1.fading.source_relay = LinkFading { m: 1, ..c1.fading.source_relay };
    c1.fading.jammer_eve = LinkFading { m: 2, ..c1.fading.jammer_eve };

    // jammer-eavesdropper shape product below the relay one
    let mut c2 = base.clone();
    c2.network.l_relay = 2;
    c2.fading.source_relay = LinkFading { m: 1, ..c2.fading.source_relay };
    c2.fading.jammer_eve = LinkFading { m: 1, ..c2.fading.jammer_eve };

    // both products equal to one: logarithmic first-hop decay
    let mut c3 = base.clone();
    c3.network.l_relay = 1;
    c3.fading.source_relay = LinkFading { m: 1, ..c3.fading.source_relay };
    c3.fading.jammer_eve = LinkFading { m: 1, ..c3.fading.jammer_eve };

    // products equal and above one: the jammed hop leaves the first order
    let mut c4 = base;
    c4.network.l_relay = 2;
    c4.network.l_eve = vec![2];
    c4.fading.source_relay = LinkFading { m: 1, ..c4.fading.source_relay };
    c4.fading.jammer_eve = LinkFading { m: 1, ..c4.fading.jammer_eve };

    let mut c5 = RunConfig::reference();
    c5.scenario = Scenario::NoJammer;

    vec![
        ("relay-limited", c1),
        ("jammer-limited", c2),
        ("balanced log", c3),
        ("balanced multi", c4),
        ("no jammer", c5),
    ]
}

fn check_asymptote_convergence(opts: &SelftestOptions) -> Result<(bool, String)> {
    let dbs = [20.0, 30.0, 40.0, 50.0];
    let mut passed = true;
    let mut lines = Vec::new();
    for (label, cfg0) in asym_cases() {
        let mut gaps = [0.0f64; 4];
        for (i, &db) in dbs.iter().enumerate() {
            let mut cfg = cfg0.clone();
            cfg.set_gbar_intf(db_to_linear(db));
            let exact = sop_system(&cfg.network, &cfg.fading, cfg.scenario, opts.tol)?.system;
            let asym =
                sop_system_asymptotic(&cfg.network, &cfg.fading, cfg.scenario, opts.tol)?;
            gaps[i] = (asym.clamped - exact).abs();
        }
        let close = gaps[2] <= 0.02;
        let shrinking = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-9);
        if !(close && shrinking) {
            passed = false;
        }
        lines.push(format!(
            "{label} gaps {:.1e}/{:.1e}/{:.1e}/{:.1e}{}",
            gaps[0],
            gaps[1],
            gaps[2],
            gaps[3],
            if close && shrinking { "" } else { " (!)" }
        ));
    }
    Ok((passed, format!("20/30/40/50 dB: {}", lines.join("; "))))
}

// ---------------------------------------------------------------------------
// criterion 3: high-snr slopes of the jammed first hop

fn tail_config(l_relay: u32, m_sr: u32, l_eve: u32, m_je: u32) -> RunConfig {
    let mut cfg = RunConfig::reference();
    cfg.network.n_eves = 1;
    cfg.network.l_relay = l_relay;
    cfg.network.l_eve = vec![l_eve];
    cfg.fading.source_relay = LinkFading { m: m_sr, ..cfg.fading.source_relay };
    cfg.fading.jammer_eve = LinkFading { m: m_je, ..cfg.fading.jammer_eve };
    cfg
}

fn check_decay_slopes(opts: &SelftestOptions) -> Result<(bool, String)> {
    // (label, l_relay, m_sr, l_eve, m_je, relay-side?)
    let straight = [
        ("relay-limited", 2u32, 1u32, 1u32, 3u32, true),
        ("jammer-limited", 3, 1, 2, 1, false),
    ];
    let (db1, db2) = (50.0, 55.0);
    let (g1, g2) = (db_to_linear(db1), db_to_linear(db2));
    let hop1_at = |cfg0: &RunConfig, g: f64| -> Result<f64> {
        let mut cfg = cfg0.clone();
        cfg.set_gbar_intf(g);
        let d = derive_coefficients(&cfg.network, &cfg.fading, 0, 0, Some(1))?;
        sop1_jammer(&d, opts.tol)
    };
    let mut passed = true;
    let mut lines = Vec::new();
    for (label, lr, msr, le, mje, relay_side) in straight {
        let cfg = tail_config(lr, msr, le, mje);
        let s1 = hop1_at(&cfg, g1)?;
        let s2 = hop1_at(&cfg, g2)?;
        let slope = (s2.ln() - s1.ln()) / (g2.ln() - g1.ln());
        let expected = if relay_side {
            -f64::from(lr * msr)
        } else {
            -f64::from(le * mje)
        };
        let ok = (slope - expected).abs() <= 0.1;
        if !ok {
            passed = false;
        }
        lines.push(format!(
            "{label} slope {slope:.3} vs {expected:.0}{}",
            if ok { "" } else { " (!)" }
        ));
    }
    // balanced case: ln(g)/g, so the log-log slope sits at -1 + 1/ln(g)
    let cfg = tail_config(1, 1, 1, 1);
    let s1 = hop1_at(&cfg, g1)?;
    let s2 = hop1_at(&cfg, g2)?;
    let slope = (s2.ln() - s1.ln()) / (g2.ln() - g1.ln());
    let expected = -1.0 + 1.0 / (g1 * g2).sqrt().ln();
    let ok = (slope - expected).abs() <= 0.1;
    if !ok {
        passed = false;
    }
    lines.push(format!(
        "balanced slope {slope:.3} vs {expected:.3} (log-corrected){}",
        if ok { "" } else { " (!)" }
    ));
    Ok((passed, format!("50->55 dB: {}", lines.join("; "))))
}

// ---------------------------------------------------------------------------
// criterion 4: the interference budget stops mattering once it is slack

fn check_saturation(opts: &SelftestOptions) -> Result<(bool, String)> {
    let mut passed = true;
    let mut lines = Vec::new();
    for scenario in [Scenario::Jammer, Scenario::NoJammer] {
        let mut cfg = RunConfig::reference();
        cfg.scenario = scenario;
        cfg.lockstep = Lockstep::default();
        cfg.network.gbar_src = 100.0;
        cfg.network.gbar_relay = 100.0;
        cfg.network.gbar_jam = 100.0;
        let mut vals = [0.0f64; 3];
        for (i, db) in [40.0, 50.0, 60.0].into_iter().enumerate() {
            cfg.network.gbar_intf = db_to_linear(db);
            vals[i] = sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system;
        }
        let d1 = (vals[1] - vals[0]).abs();
        let d2 = (vals[2] - vals[1]).abs();
        if !(d1 < 1e-3 && d2 < 1e-3) {
            passed = false;
        }
        lines.push(format!(
            "{}: 40->50 dB moves {d1:.1e}, 50->60 dB moves {d2:.1e}",
            scenario.label()
        ));
    }
    Ok((passed, format!("node budgets pinned at 20 dB; {}", lines.join("; "))))
}

// ---------------------------------------------------------------------------
// criterion 5: monotonic trends of the exact curve

fn pinned(scenario: Scenario) -> RunConfig {
    let mut cfg = RunConfig::reference();
    cfg.scenario = scenario;
    cfg.lockstep = Lockstep::default();
    cfg.network.gbar_src = 100.0;
    cfg.network.gbar_relay = 100.0;
    cfg.network.gbar_jam = 100.0;
    cfg.network.gbar_intf = 100.0;
    cfg
}

fn monotone(seq: &[f64], rising: bool) -> bool {
    let eps = 1e-12;
    seq.windows(2).all(|w| {
        if rising {
            w[1] >= w[0] - eps
        } else {
            w[1] <= w[0] + eps
        }
    })
}

fn check_monotonic_trends(opts: &SelftestOptions) -> Result<(bool, String)> {
    let mut passed = true;
    let mut lines = Vec::new();
    for scenario in [Scenario::Jammer, Scenario::NoJammer] {
        // more eavesdroppers never help
        let mut by_m = Vec::new();
        for m in 1..=8u32 {
            let mut cfg = pinned(scenario);
            cfg.network.n_eves = m;
            cfg.network.l_eve = vec![2; m as usize];
            by_m.push(sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system);
        }
        let ok_m = monotone(&by_m, true);

        // a higher secrecy target never helps
        let mut by_rs = Vec::new();
        for rs in [0.25, 0.5, 0.75, 1.0, 1.5, 2.0] {
            let mut cfg = pinned(scenario);
            cfg.network.rate_s = rs;
            by_rs.push(sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system);
        }
        let ok_rs = monotone(&by_rs, true);

        // destination antennas never hurt
        let mut by_ld = Vec::new();
        for ld in 1..=4u32 {
            let mut cfg = pinned(scenario);
            cfg.network.l_dest = ld;
            by_ld.push(sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system);
        }
        let ok_ld = monotone(&by_ld, false);

        if !(ok_m && ok_rs && ok_ld) {
            passed = false;
        }
        lines.push(format!(
            "{}: M 1..8 {:.3}->{:.3}{}, Rs 0.25..2 {:.3}->{:.3}{}, L_D 1..4 {:.3}->{:.3}{}",
            scenario.label(),
            by_m[0],
            by_m[7],
            if ok_m { "" } else { " (!)" },
            by_rs[0],
            by_rs[5],
            if ok_rs { "" } else { " (!)" },
            by_ld[0],
            by_ld[3],
            if ok_ld { "" } else { " (!)" },
        ));
    }
    Ok((passed, lines.join("; ")))
}

// ---------------------------------------------------------------------------
// criterion 6: jamming and extra antennas order the curves

fn check_ordering(opts: &SelftestOptions) -> Result<(bool, String)> {
    // L labels the legitimate side; the eavesdroppers hold the complementary
    // antenna count, so L=1 pits bare relay/destination against two-antenna
    // wiretappers and L=2 reverses the roles.
    let eval = |scenario: Scenario, l_legit: u32, l_eve: u32, m: u32| -> Result<f64> {
        let mut cfg = pinned(scenario);
        cfg.network.n_eves = m;
        cfg.network.l_relay = l_legit;
        cfg.network.l_dest = l_legit;
        cfg.network.l_eve = vec![l_eve; m as usize];
        Ok(sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system)
    };
    let mut passed = true;
    let mut last = (0.0, 0.0, 0.0);
    for m in 1..=8u32 {
        let j2 = eval(Scenario::Jammer, 2, 1, m)?;
        let n2 = eval(Scenario::NoJammer, 2, 1, m)?;
        let j1 = eval(Scenario::Jammer, 1, 2, m)?;
        if !(j2 <= n2 + 1e-12 && n2 < j1) {
            passed = false;
        }
        last = (j2, n2, j1);
    }
    Ok((
        passed,
        format!(
            "jam L=2 <= nojam L=2 < jam L=1 for every M in 1..8 at 20 dB; at M=8: {:.4} <= {:.4} < {:.4}",
            last.0, last.1, last.2
        ),
    ))
}

// ---------------------------------------------------------------------------
// criterion 7: kernel identities of the transform engine

fn check_kernel_identities(opts: &SelftestOptions) -> Result<(bool, String)> {
    let tol_eval = 1e-13;

    // (a) the alternating kernel sums to z / (1 + z)
    let spec_a = MellinBarnesSpec::new(vec![GammaFactor::plus(1.0), GammaFactor::minus(0.0)]);
    let mut worst_a = 0.0f64;
    for &z in &[0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.85] {
        let v = evaluate(&spec_a, z, tol_eval)?.value;
        worst_a = worst_a.max((v - z / (1.0 + z)).abs());
    }
    let ok_a = worst_a <= 1e-10;

    // (b) a truncated factor with the cut at zero equals the complete one
    let mut worst_b = 0.0f64;
    for &z in &[0.1, 0.3, 0.6, 0.85] {
        let inc = MellinBarnesSpec::new(vec![
            GammaFactor::plus(3.0),
            GammaFactor::plus(2.0),
            GammaFactor::minus(2.0),
            GammaFactor::minus(0.0),
            GammaFactor::minus_incomplete(3.0, 0.0),
            GammaFactor::minus_den(1.0),
        ]);
        let comp = MellinBarnesSpec::new(vec![
            GammaFactor::plus(3.0),
            GammaFactor::plus(2.0),
            GammaFactor::minus(2.0),
            GammaFactor::minus(0.0),
            GammaFactor::minus(3.0),
            GammaFactor::minus_den(1.0),
        ]);
        let a = evaluate(&inc, z, tol_eval)?.value;
        let b = evaluate(&comp, z, tol_eval)?.value;
        worst_b = worst_b.max((a - b).abs() / b.abs().max(1e-300));
    }
    for &z in &[0.1, 0.5, 0.8] {
        let inc = MellinBarnesSpec::with_pole_at_zero(vec![
            GammaFactor::plus(2.0),
            GammaFactor::minus_incomplete(3.0, 0.0),
        ]);
        let comp = MellinBarnesSpec::with_pole_at_zero(vec![
            GammaFactor::plus(2.0),
            GammaFactor::minus(3.0),
        ]);
        let a = evaluate(&inc, z, tol_eval)?.value;
        let b = evaluate(&comp, z, tol_eval)?.value;
        worst_b = worst_b.max((a - b).abs() / b.abs().max(1e-300));
    }
    let ok_b = worst_b <= 1e-10;

    // (c) residue series and contour quadrature agree on randomized kernels
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9e37_79b9).wrapping_add(7));
    let mut checked = 0usize;
    let mut attempts = 0usize;
    let mut worst_c = 0.0f64;
    while checked < 50 && attempts < 500 {
        attempts += 1;
        let (spec, z) = match attempts % 3 {
            0 => {
                let e = f64::from(rng.gen_range(1..=6u32));
                let l = f64::from(rng.gen_range(0..=3u32));
                let z = 0.05 + 0.75 * rng.gen::<f64>();
                (
                    MellinBarnesSpec::new(vec![
                        GammaFactor::plus(e),
                        GammaFactor::minus(1.0 + l),
                        GammaFactor::minus(0.0),
                        GammaFactor::minus_den(1.0),
                    ]),
                    z,
                )
            }
            1 => {
                let mu = f64::from(rng.gen_range(1..=5u32));
                let lej = f64::from(rng.gen_range(1..=5u32));
                let h = f64::from(rng.gen_range(0..=3u32));
                let z = 0.1 + 2.9 * rng.gen::<f64>();
                (
                    MellinBarnesSpec::new(vec![
                        GammaFactor::plus(mu),
                        GammaFactor::plus(lej),
                        GammaFactor::minus(1.0 + h),
                        GammaFactor::minus(0.0),
                        GammaFactor::minus_den(1.0),
                    ]),
                    z,
                )
            }
            _ => {
                let mu = f64::from(rng.gen_range(1..=4u32));
                let lej = f64::from(rng.gen_range(1..=4u32));
                let h = f64::from(rng.gen_range(0..=2u32));
                let mjp = f64::from(rng.gen_range(1..=4u32));
                let phi = 0.05 + 2.95 * rng.gen::<f64>();
                let z = 0.05 + 0.75 * rng.gen::<f64>();
                (
                    MellinBarnesSpec::new(vec![
                        GammaFactor::plus(mu),
                        GammaFactor::plus(lej),
                        GammaFactor::minus(1.0 + h),
                        GammaFactor::minus(0.0),
                        GammaFactor::minus_incomplete(mjp, phi),
                        GammaFactor::minus_den(1.0),
                    ]),
                    z,
                )
            }
        };
        let s = eval_residue_series(&spec, z, 1e-12)?;
        if s.method != EvalMethod::ResidueSeries {
            continue;
        }
        let q = eval_contour(&spec, z, 1e-11)?;
        let scale = s.value.abs().max(q.value.abs()).max(1e-12);
        worst_c = worst_c.max((s.value - q.value).abs() / scale);
        checked += 1;
    }
    let ok_c = checked == 50 && worst_c <= 1e-6;

    // (d) the lower and upper pieces recombine into the whole
    let mut worst_d = 0.0f64;
    for &a in &[0.5, 1.0, 1.7, 2.0, 3.3, 5.0, 8.0] {
        let whole = ln_gamma(a).exp();
        for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
            let sum = gamma_lower(a, x)? + gamma_upper(a, x)?;
            worst_d = worst_d.max((sum - whole).abs() / whole);
        }
    }
    let ok_d = worst_d <= 1e-10;

    let passed = ok_a && ok_b && ok_c && ok_d;
    Ok((
        passed,
        format!(
            "alternating kernel max err {worst_a:.1e}{}; truncated-factor reduction max rel {worst_b:.1e}{}; \
             {checked}/50 dual-route kernels max rel {worst_c:.1e}{}; recombination max rel {worst_d:.1e}{}",
            if ok_a { "" } else { " (!)" },
            if ok_b { "" } else { " (!)" },
            if ok_c { "" } else { " (!)" },
            if ok_d { "" } else { " (!)" },
        ),
    ))
}

// ---------------------------------------------------------------------------
// criterion 8: sampled branch sums follow the intended distributions

fn ks_against_gamma(xs: &mut [f64], a: f64, lam: f64) -> Result<f64> {
    xs.sort_by(|p, q| p.partial_cmp(q).expect("no NaN in gamma samples"));
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = gamma_p(a, lam * x)?;
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    Ok(d)
}

fn check_sampler_distributions(opts: &SelftestOptions) -> Result<(bool, String)> {
    let n = 100_000usize;
    // asymptotic Kolmogorov-Smirnov critical value at significance 1e-3
    let crit = 1.9495 / (n as f64).sqrt();
    let fading = reference_fading();
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    let mut runs = 0usize;
    let mut passed = true;
    for (ci, class) in ALL_LINK_CLASSES.iter().enumerate() {
        let link = *fading.get(*class);
        for l in 1..=4u32 {
            let mut rng =
                ChaCha8Rng::seed_from_u64(opts.seed ^ (((ci as u64 + 1) << 8) | u64::from(l)));
            let mut xs: Vec<f64> = (0..n)
                .map(|_| {
                    (0..l)
                        .map(|_| sample_gamma(&mut rng, link.m, link.lambda))
                        .sum()
                })
                .collect();
            let d = ks_against_gamma(&mut xs, f64::from(l * link.m), link.lambda)?;
            runs += 1;
            if d > crit {
                passed = false;
            }
            if d > worst {
                worst = d;
                worst_label = format!("{class:?} L={l}");
            }
        }
    }
    // ninth distribution: the continuous-shape sampler at a fractional order
    let (a, lam) = (2.5, 0.7);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x00f4_ac00);
    let mut xs: Vec<f64> = (0..n).map(|_| sample_gamma_mt(&mut rng, a, lam)).collect();
    let d9 = ks_against_gamma(&mut xs, a, lam)?;
    runs += 1;
    if d9 > crit {
        passed = false;
    }
    if d9 > worst {
        worst = d9;
        worst_label = format!("fractional shape {a}");
    }
    Ok((
        passed,
        format!(
            "{runs} checks ({} classes x L=1..4 + fractional shape), n={n}: \
             max D = {worst:.2e} at {worst_label}, critical {crit:.2e}",
            ALL_LINK_CLASSES.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// criterion 9: edge cases and bit-level reproducibility

fn check_edge_cases(opts: &SelftestOptions) -> Result<(bool, String)> {
    // nobody listening: zero by all three routes, both scenarios
    let mut ok_zero = true;
    for scenario in [Scenario::Jammer, Scenario::NoJammer] {
        let mut cfg = RunConfig::reference();
        cfg.scenario = scenario;
        cfg.network.n_eves = 0;
        cfg.network.l_eve = vec![];
        let exact = sop_system(&cfg.network, &cfg.fading, scenario, opts.tol)?.system;
        let asym = sop_system_asymptotic(&cfg.network, &cfg.fading, scenario, opts.tol)?;
        let mc = estimate_sop(
            &cfg.network,
            &cfg.fading,
            scenario,
            McOptions::new(10_000, opts.seed),
        )?;
        if exact != 0.0 || asym.raw != 0.0 || mc.p_hat != 0.0 {
            ok_zero = false;
        }
    }

    // jamming never raises a first-hop eavesdropper SNR, sample by sample
    let cfg = RunConfig::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(41));
    let n_paths = 100_000usize;
    let mut ok_path = true;
    for _ in 0..n_paths {
        let draw = sample_draw(&cfg.network, &cfg.fading, &mut rng);
        let s = instantaneous_snrs(&cfg.network, &draw);
        for k in 0..s.eve1_jam.len() {
            if s.eve1_jam[k] > s.eve1_nojam[k] {
                ok_path = false;
            }
        }
    }

    // a fixed seed reproduces bit for bit, whatever the thread count
    let n_rep = opts.mc_samples.min(200_000).max(1);
    let mc_opts = McOptions::new(n_rep, opts.seed);
    let a = estimate_sop(&cfg.network, &cfg.fading, Scenario::Jammer, mc_opts)?;
    let b = estimate_sop(&cfg.network, &cfg.fading, Scenario::Jammer, mc_opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Parameter(format!("could not build a 1-thread pool: {e}")))?;
    let c = pool.install(|| estimate_sop(&cfg.network, &cfg.fading, Scenario::Jammer, mc_opts))?;
    let ok_rep =
        a.p_hat.to_bits() == b.p_hat.to_bits() && a.p_hat.to_bits() == c.p_hat.to_bits();

    let passed = ok_zero && ok_path && ok_rep;
    Ok((
        passed,
        format!(
            "no-eavesdropper point exactly zero by all three routes: {ok_zero}; \
             jamming never raised a first-hop SNR across {n_paths} draws: {ok_path}; \
             p-hat bits stable across reruns and a 1-thread pool: {ok_rep} ({:.6e})",
            a.p_hat
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_opts() -> SelftestOptions {
        SelftestOptions {
            mc_samples: 10_000,
            seed: 1,
            tol: 1e-10,
        }
    }

    fn assert_pass(id: usize, opts: &SelftestOptions) {
        let r = run_criterion(id, opts);
        assert!(r.passed, "{}", r.line());
    }

    #[test]
    fn reduced_grid_agreement_passes() {
        assert_pass(1, &fast_opts());
    }

    #[test]
    fn asymptote_convergence_passes() {
        assert_pass(2, &fast_opts());
    }

    #[test]
    fn decay_slopes_pass() {
        assert_pass(3, &fast_opts());
    }

    #[test]
    fn saturation_passes() {
        assert_pass(4, &fast_opts());
    }

    #[test]
    fn monotonic_trends_pass() {
        assert_pass(5, &fast_opts());
    }

    #[test]
    fn ordering_passes() {
        assert_pass(6, &fast_opts());
    }

    #[test]
    fn kernel_identities_pass() {
        assert_pass(7, &fast_opts());
    }

    #[test]
    fn sampler_distributions_pass() {
        assert_pass(8, &fast_opts());
    }

    #[test]
    fn edge_cases_pass() {
        assert_pass(9, &fast_opts());
    }

    #[test]
    fn unknown_criterion_is_reported_not_panicked() {
        let r = run_criterion(12, &fast_opts());
        assert!(!r.passed);
        assert!(r.detail.contains("valid ids"));
        assert!(criterion_name(12).is_none());
        assert_eq!(criterion_name(1), Some(checks()[0].0));
    }

    #[test]
    fn report_lines_carry_the_verdict() {
        let r = CriterionResult {
            id: 3,
            name: "x",
            passed: false,
            detail: "d".into(),
        };
        assert_eq!(r.line(), "[FAIL] criterion 3: x -- d");
    }
}
