//! Monte Carlo secrecy outage estimation, independent of the closed forms.
//!
//! The sampler works directly on the system definition: draw every channel
//! power gain, apply the underlay power caps, build the per-hop SNRs, and
//! test the secrecy event. Nothing here shares code with the analytic
//! evaluators beyond the model structs, so agreement between the two routes
//! is meaningful evidence.
//!
//! Two eavesdropper-draw modes exist because the closed-form system value
//! multiplies per-eavesdropper survival probabilities, which treats the
//! eavesdroppers' outage events as independent even though they share the
//! relay and destination SNRs and the adapted transmit powers. `Factorized`
//! redraws the legitimate side per eavesdropper and therefore estimates
//! exactly the product-form quantity (use it to cross-validate the analytic
//! route); `Coherent` evaluates every eavesdropper against one shared
//! snapshot, which is the physical outage event. With several eavesdroppers
//! the coherent probability sits measurably below the factorized one; the
//! toolkit reports that gap rather than hiding either number.
//!
//! Reproducibility: the estimator consumes one ChaCha stream per fixed-size
//! block (stream id = block index + 1 under the run seed), and blocks reduce
//! to integer outage counts, so results are bit-identical for a given
//! (seed, block_size, n_samples) regardless of thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{FadingSet, LinkFading, NetworkConfig, Scenario};
use crate::error::{Error, Result};

/// Gamma(m, lambda) for integer shape via a single logarithm of a product of
/// uniforms. An MRC combination of `l` branches is Gamma(l m, lambda), so
/// combined gains take one call with shape l * m.
pub fn sample_gamma<R: Rng>(rng: &mut R, shape: u32, lambda: f64) -> f64 {
    debug_assert!(shape >= 1);
    let mut prod = 1.0f64;
    for _ in 0..shape {
        // (0, 1]: avoid ln(0)
        prod *= 1.0 - rng.gen::<f64>();
    }
    -prod.ln() / lambda
}

/// Marsaglia-Tsang gamma sampler for arbitrary shape, used as an independent
/// cross-check of `sample_gamma` in distribution tests.
pub fn sample_gamma_mt<R: Rng>(rng: &mut R, shape: f64, lambda: f64) -> f64 {
    assert!(shape > 0.0 && lambda > 0.0);
    if shape < 1.0 {
        // boost: G(a) = G(a+1) U^{1/a}
        let u: f64 = 1.0 - rng.gen::<f64>();
        return sample_gamma_mt(rng, shape + 1.0, lambda) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        // Box-Muller normal
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let x = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        let v = (1.0 + c * x).powi(3);
        if v <= 0.0 {
            continue;
        }
        let u: f64 = 1.0 - rng.gen::<f64>();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v / lambda;
        }
    }
}

/// MRC-combined channel power gains for one network realization. The jammer
/// links are always drawn so that the jammer and no-jammer scenarios can be
/// evaluated on the same realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    pub g_sp: f64,
    pub g_jp: f64,
    pub g_rp: f64,
    pub g_sr: f64,
    pub g_rd: f64,
    pub g_se: Vec<f64>,
    pub g_je: Vec<f64>,
    pub g_re: Vec<f64>,
}

fn combined(rng: &mut ChaCha8Rng, link: &LinkFading, l: u32) -> f64 {
    sample_gamma(rng, l * link.m, link.lambda)
}

/// Draws one realization of every link the selected source, the jammer role,
/// and the relay need. Consumption order is fixed: primary links, main
/// links, then per-eavesdropper links.
pub fn sample_draw(cfg: &NetworkConfig, fading: &FadingSet, rng: &mut ChaCha8Rng) -> ChannelDraw {
    let m = cfg.n_eves as usize;
    let mut draw = ChannelDraw {
        g_sp: sample_gamma(rng, fading.source_primary.m, fading.source_primary.lambda),
        g_jp: sample_gamma(rng, fading.jammer_primary.m, fading.jammer_primary.lambda),
        g_rp: sample_gamma(rng, fading.relay_primary.m, fading.relay_primary.lambda),
        g_sr: combined(rng, &fading.source_relay, cfg.l_relay),
        g_rd: combined(rng, &fading.relay_dest, cfg.l_dest),
        g_se: Vec::with_capacity(m),
        g_je: Vec::with_capacity(m),
        g_re: Vec::with_capacity(m),
    };
    for k in 0..m {
        let le = cfg.l_eve[k];
        draw.g_se.push(combined(rng, &fading.source_eve, le));
        draw.g_je.push(combined(rng, &fading.jammer_eve, le));
        draw.g_re.push(combined(rng, &fading.relay_eve, le));
    }
    draw
}

/// Instantaneous SNRs computed from one draw, for both scenarios at once.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrSample {
    /// Source to relay, after the source's power cap.
    pub relay: f64,
    /// Relay to destination, after the relay's power cap.
    pub dest: f64,
    /// First-hop SINR at each eavesdropper with the jammer active.
    pub eve1_jam: Vec<f64>,
    /// First-hop SNR at each eavesdropper without the jammer.
    pub eve1_nojam: Vec<f64>,
    /// Second-hop SNR at each eavesdropper.
    pub eve2: Vec<f64>,
}

pub fn instantaneous_snrs(cfg: &NetworkConfig, draw: &ChannelDraw) -> SnrSample {
    let p_s = cfg.gbar_src.min(cfg.gbar_intf / draw.g_sp);
    let p_j = cfg.gbar_jam.min(cfg.gbar_intf / draw.g_jp);
    let p_r = cfg.gbar_relay.min(cfg.gbar_intf / draw.g_rp);
    let m = cfg.n_eves as usize;
    let mut s = SnrSample {
        relay: p_s * draw.g_sr,
        dest: p_r * draw.g_rd,
        eve1_jam: Vec::with_capacity(m),
        eve1_nojam: Vec::with_capacity(m),
        eve2: Vec::with_capacity(m),
    };
    for k in 0..m {
        let clear = p_s * draw.g_se[k];
        let jammed = clear / (p_j * draw.g_je[k] + 1.0);
        debug_assert!(jammed <= clear, "jamming cannot raise an eavesdropper SNR");
        s.eve1_jam.push(jammed);
        s.eve1_nojam.push(clear);
        s.eve2.push(p_r * draw.g_re[k]);
    }
    s
}

/// The secrecy outage event, evaluated in the SNR domain: the transmission
/// fails if any eavesdropper leaves either hop with
/// gamma_main < gamma_thr * gamma_eve + (gamma_thr - 1), i.e. if the hop's
/// secrecy capacity falls below the rate target (strictly below the positive
/// target, or non-positive capacity when the target is zero).
pub fn secrecy_event(snrs: &SnrSample, scenario: Scenario, gamma_thr: f64) -> bool {
    let g = gamma_thr;
    for k in 0..snrs.eve2.len() {
        let eve1 = match scenario {
            Scenario::Jammer => snrs.eve1_jam[k],
            Scenario::NoJammer => snrs.eve1_nojam[k],
        };
        if snrs.relay < g * eve1 + (g - 1.0) {
            return true;
        }
        if snrs.dest < g * snrs.eve2[k] + (g - 1.0) {
            return true;
        }
    }
    false
}

/// How source / jammer selection enters each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// One realization per sample for one selected pair. Link classes are
    /// population-wide, so the selection indices carry no statistical weight
    /// and a single draw estimates the population average directly.
    Sampled,
    /// Draw per-source realizations and average the outage indicator over
    /// every ordered (source, jammer) pair (or every source without a
    /// jammer), demonstrating that the averages collapse.
    Exhaustive,
}

/// How eavesdropper events share randomness within one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveMode {
    /// Each eavesdropper is tested against its own fresh legitimate-side
    /// realization, so the per-eavesdropper events are independent. This is
    /// the quantity the closed-form product computes and the default for
    /// cross-validation.
    Factorized,
    /// All eavesdroppers see one shared snapshot (common relay and
    /// destination SNRs, common adapted powers): the physical outage event.
    Coherent,
}

#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub n_samples: u64,
    pub seed: u64,
    pub block_size: u64,
    pub pair_mode: PairMode,
    pub eve_mode: EveMode,
}

impl McOptions {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        McOptions {
            n_samples,
            seed,
            block_size: 65_536,
            pair_mode: PairMode::Sampled,
            eve_mode: EveMode::Factorized,
        }
    }

    pub fn coherent(mut self) -> Self {
        self.eve_mode = EveMode::Coherent;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub n_samples: u64,
    /// Outage count numerator; in exhaustive mode, counted over pairs.
    pub n_outages: u64,
    pub seed: u64,
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block + 1);
    rng
}

/// Estimates the system secrecy outage probability by simulation.
pub fn estimate_sop(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    opts: McOptions,
) -> Result<SopEstimate> {
    cfg.validate(scenario)?;
    fading.validate()?;
    if opts.n_samples == 0 {
        return Err(Error::Parameter("n_samples must be positive".into()));
    }
    if opts.block_size == 0 {
        return Err(Error::Parameter("block_size must be positive".into()));
    }
    let gamma_thr = (2.0f64).powf(cfg.rate_s);
    let n = opts.n_samples;
    let bs = opts.block_size;
    let n_blocks = n.div_ceil(bs);

    match opts.pair_mode {
        PairMode::Sampled => {
            let outages: u64 = (0..n_blocks)
                .into_par_iter()
                .map(|b| {
                    let mut rng = block_rng(opts.seed, b);
                    let lo = b * bs;
                    let hi = n.min(lo + bs);
                    let mut count = 0u64;
                    for _ in lo..hi {
                        let outage = match opts.eve_mode {
                            EveMode::Coherent => {
                                let draw = sample_draw(cfg, fading, &mut rng);
                                let snrs = instantaneous_snrs(cfg, &draw);
                                secrecy_event(&snrs, scenario, gamma_thr)
                            }
                            EveMode::Factorized => {
                                factorized_sample(cfg, fading, scenario, gamma_thr, &mut rng)
                            }
                        };
                        if outage {
                            count += 1;
                        }
                    }
                    count
                })
                .sum();
            let p = outages as f64 / n as f64;
            Ok(SopEstimate {
                p_hat: p,
                std_err: (p * (1.0 - p) / n as f64).sqrt(),
                n_samples: n,
                n_outages: outages,
                seed: opts.seed,
            })
        }
        PairMode::Exhaustive => {
            let n_src = cfg.n_sources as usize;
            let pairs = match scenario {
                Scenario::Jammer => (n_src * (n_src - 1)) as u64,
                Scenario::NoJammer => n_src as u64,
            };
            // Per-sample pair-outage counts c_s; the estimator is
            // mean(c_s / pairs) with its empirical standard error.
            let (num, sumsq): (u64, u64) = (0..n_blocks)
                .into_par_iter()
                .map(|b| {
                    let mut rng = block_rng(opts.seed, b);
                    let lo = b * bs;
                    let hi = n.min(lo + bs);
                    let mut num = 0u64;
                    let mut sumsq = 0u64;
                    for _ in lo..hi {
                        let c = match opts.eve_mode {
                            EveMode::Coherent => {
                                exhaustive_sample(cfg, fading, scenario, gamma_thr, &mut rng)
                            }
                            EveMode::Factorized => exhaustive_factorized_sample(
                                cfg, fading, scenario, gamma_thr, &mut rng,
                            ),
                        };
                        num += c;
                        sumsq += c * c;
                    }
                    (num, sumsq)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            let nf = n as f64;
            let pf = pairs as f64;
            let p = num as f64 / (nf * pf);
            let var_sample = (sumsq as f64 / (pf * pf) - nf * p * p) / (nf - 1.0).max(1.0);
            Ok(SopEstimate {
                p_hat: p,
                std_err: (var_sample.max(0.0) / nf).sqrt(),
                n_samples: n,
                n_outages: num,
                seed: opts.seed,
            })
        }
    }
}

// One factorized sample: every eavesdropper gets its own legitimate-side
// realization of both hops, so the per-eavesdropper events are independent.
// Jammer links are drawn in both scenarios to keep consumption order fixed.
fn factorized_sample(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    gamma_thr: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let g = gamma_thr;
    let mut outage = false;
    for k in 0..cfg.n_eves as usize {
        let le = cfg.l_eve[k];
        let g_sp = sample_gamma(rng, fading.source_primary.m, fading.source_primary.lambda);
        let g_jp = sample_gamma(rng, fading.jammer_primary.m, fading.jammer_primary.lambda);
        let g_sr = combined(rng, &fading.source_relay, cfg.l_relay);
        let g_se = combined(rng, &fading.source_eve, le);
        let g_je = combined(rng, &fading.jammer_eve, le);
        let p_s = cfg.gbar_src.min(cfg.gbar_intf / g_sp);
        let relay = p_s * g_sr;
        let clear = p_s * g_se;
        let eve1 = match scenario {
            Scenario::Jammer => {
                let p_j = cfg.gbar_jam.min(cfg.gbar_intf / g_jp);
                let jammed = clear / (p_j * g_je + 1.0);
                debug_assert!(jammed <= clear, "jamming cannot raise an eavesdropper SNR");
                jammed
            }
            Scenario::NoJammer => clear,
        };
        let g_rp = sample_gamma(rng, fading.relay_primary.m, fading.relay_primary.lambda);
        let g_rd = combined(rng, &fading.relay_dest, cfg.l_dest);
        let g_re = combined(rng, &fading.relay_eve, le);
        let p_r = cfg.gbar_relay.min(cfg.gbar_intf / g_rp);
        outage |= relay < g * eve1 + (g - 1.0);
        outage |= p_r * g_rd < g * (p_r * g_re) + (g - 1.0);
    }
    outage
}

// One exhaustive-mode sample: per-source link draws, shared relay links,
// outage indicator summed over ordered pairs. Returns the pair-outage count.
fn exhaustive_sample(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    gamma_thr: f64,
    rng: &mut ChaCha8Rng,
) -> u64 {
    let n_src = cfg.n_sources as usize;
    let m = cfg.n_eves as usize;

    // per-source draws, fixed order: sp, jp, sr, per-k (se, je)
    let mut sp = Vec::with_capacity(n_src);
    let mut jp = Vec::with_capacity(n_src);
    let mut sr = Vec::with_capacity(n_src);
    let mut se = Vec::with_capacity(n_src);
    let mut je = Vec::with_capacity(n_src);
    for _ in 0..n_src {
        sp.push(sample_gamma(rng, fading.source_primary.m, fading.source_primary.lambda));
        jp.push(sample_gamma(rng, fading.jammer_primary.m, fading.jammer_primary.lambda));
        sr.push(combined(rng, &fading.source_relay, cfg.l_relay));
        let mut se_k = Vec::with_capacity(m);
        let mut je_k = Vec::with_capacity(m);
        for k in 0..m {
            se_k.push(combined(rng, &fading.source_eve, cfg.l_eve[k]));
            je_k.push(combined(rng, &fading.jammer_eve, cfg.l_eve[k]));
        }
        se.push(se_k);
        je.push(je_k);
    }
    let rp = sample_gamma(rng, fading.relay_primary.m, fading.relay_primary.lambda);
    let rd = combined(rng, &fading.relay_dest, cfg.l_dest);
    let re: Vec<f64> = (0..m)
        .map(|k| combined(rng, &fading.relay_eve, cfg.l_eve[k]))
        .collect();

    let p_r = cfg.gbar_relay.min(cfg.gbar_intf / rp);
    let dest = p_r * rd;
    let g = gamma_thr;

    // second hop does not depend on the pair; test it once
    let hop2_outage = (0..m).any(|k| dest < g * (p_r * re[k]) + (g - 1.0));

    let mut count = 0u64;
    for i in 0..n_src {
        let p_s = cfg.gbar_src.min(cfg.gbar_intf / sp[i]);
        let relay = p_s * sr[i];
        match scenario {
            Scenario::NoJammer => {
                let outage = hop2_outage
                    || (0..m).any(|k| relay < g * (p_s * se[i][k]) + (g - 1.0));
                if outage {
                    count += 1;
                }
            }
            Scenario::Jammer => {
                for j in 0..n_src {
                    if j == i {
                        continue;
                    }
                    let p_j = cfg.gbar_jam.min(cfg.gbar_intf / jp[j]);
                    let outage = hop2_outage
                        || (0..m).any(|k| {
                            let eve = p_s * se[i][k] / (p_j * je[j][k] + 1.0);
                            relay < g * eve + (g - 1.0)
                        });
                    if outage {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

// Exhaustive pairs in factorized form: the legitimate-side draws carry an
// extra eavesdropper index so each pair's per-eavesdropper events are
// independent, while draws stay shared across pairs for variance reduction.
fn exhaustive_factorized_sample(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    gamma_thr: f64,
    rng: &mut ChaCha8Rng,
) -> u64 {
    let n_src = cfg.n_sources as usize;
    let m = cfg.n_eves as usize;
    let g = gamma_thr;

    // per (source, eavesdropper) draws, fixed order: sp, jp, sr, se, je
    let mut sp = vec![vec![0.0; m]; n_src];
    let mut jp = vec![vec![0.0; m]; n_src];
    let mut sr = vec![vec![0.0; m]; n_src];
    let mut se = vec![vec![0.0; m]; n_src];
    let mut je = vec![vec![0.0; m]; n_src];
    for i in 0..n_src {
        for k in 0..m {
            sp[i][k] = sample_gamma(rng, fading.source_primary.m, fading.source_primary.lambda);
            jp[i][k] = sample_gamma(rng, fading.jammer_primary.m, fading.jammer_primary.lambda);
            sr[i][k] = combined(rng, &fading.source_relay, cfg.l_relay);
            se[i][k] = combined(rng, &fading.source_eve, cfg.l_eve[k]);
            je[i][k] = combined(rng, &fading.jammer_eve, cfg.l_eve[k]);
        }
    }
    // per-eavesdropper relay-side realizations, shared across pairs
    let hop2_out: Vec<bool> = (0..m)
        .map(|k| {
            let rp = sample_gamma(rng, fading.relay_primary.m, fading.relay_primary.lambda);
            let rd = combined(rng, &fading.relay_dest, cfg.l_dest);
            let re = combined(rng, &fading.relay_eve, cfg.l_eve[k]);
            let p_r = cfg.gbar_relay.min(cfg.gbar_intf / rp);
            p_r * rd < g * (p_r * re) + (g - 1.0)
        })
        .collect();

    let hop1_out = |i: usize, j: Option<usize>, k: usize| -> bool {
        let p_s = cfg.gbar_src.min(cfg.gbar_intf / sp[i][k]);
        let relay = p_s * sr[i][k];
        let clear = p_s * se[i][k];
        let eve = match j {
            Some(j) => {
                let p_j = cfg.gbar_jam.min(cfg.gbar_intf / jp[j][k]);
                clear / (p_j * je[j][k] + 1.0)
            }
            None => clear,
        };
        relay < g * eve + (g - 1.0)
    };

    let mut count = 0u64;
    for i in 0..n_src {
        match scenario {
            Scenario::NoJammer => {
                let outage = (0..m).any(|k| hop2_out[k] || hop1_out(i, None, k));
                if outage {
                    count += 1;
                }
            }
            Scenario::Jammer => {
                for j in 0..n_src {
                    if j == i {
                        continue;
                    }
                    let outage = (0..m).any(|k| hop2_out[k] || hop1_out(i, Some(j), k));
                    if outage {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}
