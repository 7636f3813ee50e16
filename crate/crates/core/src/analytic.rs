//! Exact closed-form secrecy outage probabilities.
//!
//! Each hop's outage is an average of incomplete-gamma CDFs over the
//! transmitter's power cap and the eavesdropper combining gain. The averages
//! reduce to finite binomial sums whose kernels are the Mellin-Barnes
//! transforms in `specfun::meijer`; everything here is assembly.

use crate::channel::{derive_coefficients, DerivedCoefficients, FadingSet, NetworkConfig, Scenario};
use crate::error::{Error, Result};
use crate::specfun::gamma::{binomial, gamma_lower, gamma_upper, ln_gamma, ln_gamma_upper};
use crate::specfun::meijer::{hop_transform, meijer_m1, meijer_m2, meijer_m3};
use crate::specfun::Neumaier;

/// One hop of the no-jammer closed form in the parameterization shared by
/// both hops: a legitimate MRC link, an eavesdropper MRC link, and the
/// transmitter's interference-limited power cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopChannel {
    /// Eavesdropper shape product (antennas times fading shape).
    pub e_shape: u32,
    /// Legitimate-link shape product.
    pub c_shape: u32,
    /// Legitimate branch rate.
    pub lam_c: f64,
    /// Eavesdropper branch rate.
    pub lam_e: f64,
    /// Transmitter-to-primary fading shape.
    pub m_p: u32,
    /// Transmitter-to-primary rate.
    pub lam_p: f64,
    /// Interference budget over the transmitter's own power budget.
    pub rho: f64,
    /// Interference budget, linear.
    pub gbar_i: f64,
    /// Secrecy SNR ratio 2^Rs.
    pub gamma_thr: f64,
}

pub(crate) fn hop1_channel(d: &DerivedCoefficients) -> HopChannel {
    HopChannel {
        e_shape: d.le_i,
        c_shape: d.lr,
        lam_c: d.lam_sr,
        lam_e: d.lam_se,
        m_p: d.m_sp,
        lam_p: d.lam_sp,
        rho: d.sigma,
        gbar_i: d.gbar_intf,
        gamma_thr: d.gamma_thr,
    }
}

pub(crate) fn hop2_channel(d: &DerivedCoefficients) -> HopChannel {
    HopChannel {
        e_shape: d.le_r,
        c_shape: d.ld,
        lam_c: d.lam_rd,
        lam_e: d.lam_re,
        m_p: d.m_rp,
        lam_p: d.lam_rp,
        rho: d.delta,
        gbar_i: d.gbar_intf,
        gamma_thr: d.gamma_thr,
    }
}

fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if !(x > -1e-9) || !(x < 1.0 + 1e-9) {
        return Err(Error::Range {
            what: what.into(),
            value: x,
        });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// The power-cap average attached to the binomial term of index `l`:
/// the capped region contributes a lower-gamma weight at the fixed budget,
/// the interference-limited tail an upper incomplete gamma shifted by the
/// rate penalty xi / gbar_I.
fn lambda2_bracket(
    c_shape: u32,
    l: u32,
    xi: f64,
    phi: f64,
    lam_p: f64,
    m_p: u32,
    rho: f64,
    gbar_i: f64,
) -> Result<f64> {
    let k = (c_shape - 1 - l) as i32;
    let t1 = gamma_lower(m_p as f64, phi)? * (-rho * xi / gbar_i).exp() * rho.powi(k);
    let a2 = m_p as f64 + k as f64;
    let x2 = phi + rho * xi / gbar_i;
    let t2 =
        (m_p as f64 * lam_p.ln() + ln_gamma_upper(a2, x2)? - a2 * (lam_p + xi / gbar_i).ln()).exp();
    Ok(t1 + t2)
}

/// Exact per-hop secrecy outage without a jammer. Used directly for the
/// second hop and, with first-hop parameters, for the jammerless scenario.
pub fn sop_hop_nojam(hp: &HopChannel, tol: f64) -> Result<f64> {
    let g = hp.gamma_thr;
    let c = hp.c_shape;
    let e = hp.e_shape;
    let xi = hp.lam_c * (g - 1.0);
    let phi = hp.lam_p * hp.rho;
    let z = hp.lam_e / (g * hp.lam_c);
    let mut sum = Neumaier::default();
    for l in 0..c {
        let coef = binomial(c - 1, l)
            * (g - 1.0).powi((c - 1 - l) as i32)
            * (hp.lam_c / hp.gbar_i).powi((c - 1 - l) as i32);
        if coef == 0.0 {
            continue;
        }
        let gh = hop_transform(l, e, z, tol)?.value;
        let lam2 = lambda2_bracket(c, l, xi, phi, hp.lam_p, hp.m_p, hp.rho, hp.gbar_i)?;
        sum.add(coef * gh * lam2);
    }
    let norm = (-ln_gamma(e as f64) - ln_gamma(c as f64) - ln_gamma(hp.m_p as f64)).exp();
    clamp_unit(1.0 - sum.value() * norm, "per-hop outage (no jammer)")
}

/// First-hop secrecy outage with the friendly jammer active.
pub fn sop1_jammer(d: &DerivedCoefficients, tol: f64) -> Result<f64> {
    let g = d.gamma_thr;
    let xi = d.xi_sr;
    let lr_f = d.lr as f64;
    let m_sp_f = d.m_sp as f64;

    // eavesdropper-blind part: outage of the legitimate link alone
    let z3 = xi / (d.lam_sp * d.gbar_intf);
    let m3 = if z3 > 0.0 {
        meijer_m3(d.lr, d.m_sp, d.phi_src, z3, tol)?.value
    } else {
        // xi = 0 collapses the transform to its complete-gamma product
        gamma_upper(m_sp_f, d.phi_src)? * ln_gamma(lr_f).exp()
    };
    let lead = (gamma_lower(m_sp_f, d.phi_src)? * gamma_upper(lr_f, d.sigma * xi / d.gbar_intf)?
        + m3)
        * (-ln_gamma(lr_f) - ln_gamma(m_sp_f)).exp();

    // eavesdropper-driven part: binomial double sum over the combining
    // expansions, each term carrying the jammed-SINR transforms
    let gl_jp = gamma_lower(d.m_jp as f64, d.phi_jam)?;
    let mut sum = Neumaier::default();
    for h in 0..d.le_i {
        if d.omega[h as usize] == 0.0 {
            continue;
        }
        for l in 0..d.lr {
            if d.upsilon[l as usize] == 0.0 {
                continue;
            }
            let m1 = meijer_m1(h, l, d.le_i, d.le_j, d.varpi * d.theta, tol)?.value;
            let m2 = meijer_m2(
                h,
                l,
                d.le_i,
                d.le_j,
                d.m_jp,
                d.phi_jam,
                d.varsigma * d.varpi / d.gbar_intf,
                tol,
            )?
            .value;
            let lam2 =
                lambda2_bracket(d.lr, l, xi, d.phi_src, d.lam_sp, d.m_sp, d.sigma, d.gbar_intf)?;
            let mu = d.mu(h, l) as f64;
            let term = d.omega[h as usize]
                * d.upsilon[l as usize]
                * d.gbar_intf.powi(-((d.lr - 1 - l) as i32))
                * d.varpi.powf(-mu)
                * lam2
                * (gl_jp * m1 + m2);
            sum.add(term);
        }
    }
    let eve_part = g * d.alpha * (-ln_gamma(m_sp_f)).exp() * sum.value();
    clamp_unit(1.0 - lead + eve_part, "first-hop outage (jammer)")
}

/// First-hop secrecy outage without a jammer.
pub fn sop1_nojammer(d: &DerivedCoefficients, tol: f64) -> Result<f64> {
    sop_hop_nojam(&hop1_channel(d), tol)
}

/// Second-hop secrecy outage (a jammer never covers the relay's
/// transmission).
pub fn sop2(d: &DerivedCoefficients, tol: f64) -> Result<f64> {
    sop_hop_nojam(&hop2_channel(d), tol)
}

/// Per-eavesdropper hop outages and the composed system value.
#[derive(Debug, Clone, PartialEq)]
pub struct SopBreakdown {
    pub scenario: Scenario,
    /// First-hop outage toward each eavesdropper.
    pub sop1: Vec<f64>,
    /// Second-hop outage toward each eavesdropper.
    pub sop2: Vec<f64>,
    /// System secrecy outage probability.
    pub system: f64,
}

fn compose(sop1: &[f64], sop2: &[f64]) -> f64 {
    // 1 - prod_k (1 - sop1_k)(1 - sop2_k), assembled in the log domain
    let mut ln_secure = 0.0f64;
    for (&a, &b) in sop1.iter().zip(sop2) {
        ln_secure += (-a).ln_1p() + (-b).ln_1p();
    }
    -ln_secure.exp_m1()
}

/// System secrecy outage for one representative (source, jammer) selection.
/// Link statistics are class-level, so every selection produces the same
/// value and this is also the selection-averaged system outage.
pub fn sop_system(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    tol: f64,
) -> Result<SopBreakdown> {
    cfg.validate(scenario)?;
    fading.validate()?;
    let jammer = match scenario {
        Scenario::Jammer => Some(1),
        Scenario::NoJammer => None,
    };
    let mut s1 = Vec::with_capacity(cfg.n_eves as usize);
    let mut s2 = Vec::with_capacity(cfg.n_eves as usize);
    for k in 0..cfg.n_eves as usize {
        let d = derive_coefficients(cfg, fading, 0, k, jammer)?;
        s1.push(match scenario {
            Scenario::Jammer => sop1_jammer(&d, tol)?,
            Scenario::NoJammer => sop1_nojammer(&d, tol)?,
        });
        s2.push(sop2(&d, tol)?);
    }
    let system = compose(&s1, &s2);
    Ok(SopBreakdown {
        scenario,
        sop1: s1,
        sop2: s2,
        system,
    })
}

/// System secrecy outage averaged over every (source, jammer) selection by
/// explicit enumeration. Kept as an independent check of the shortcut in
/// `sop_system`; the per-pair values are memoized per eavesdropper because
/// the derived coefficients depend on the pair only through link classes.
pub fn sop_system_full(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    tol: f64,
) -> Result<f64> {
    cfg.validate(scenario)?;
    fading.validate()?;
    let n = cfg.n_sources as usize;
    let m = cfg.n_eves as usize;
    let mut memo: Vec<Option<(f64, f64)>> = vec![None; m];
    let mut hop_pair = |i: usize, j: Option<usize>, k: usize| -> Result<(f64, f64)> {
        if let Some(v) = memo[k] {
            return Ok(v);
        }
        let d = derive_coefficients(cfg, fading, i, k, j)?;
        let a = match j {
            Some(_) => sop1_jammer(&d, tol)?,
            None => sop1_nojammer(&d, tol)?,
        };
        let b = sop2(&d, tol)?;
        memo[k] = Some((a, b));
        Ok((a, b))
    };
    let mut acc = Neumaier::default();
    let mut count = 0u64;
    for i in 0..n {
        match scenario {
            Scenario::NoJammer => {
                let mut s1 = Vec::with_capacity(m);
                let mut s2 = Vec::with_capacity(m);
                for k in 0..m {
                    let (a, b) = hop_pair(i, None, k)?;
                    s1.push(a);
                    s2.push(b);
                }
                acc.add(compose(&s1, &s2));
                count += 1;
            }
            Scenario::Jammer => {
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let mut s1 = Vec::with_capacity(m);
                    let mut s2 = Vec::with_capacity(m);
                    for k in 0..m {
                        let (a, b) = hop_pair(i, Some(j), k)?;
                        s1.push(a);
                        s2.push(b);
                    }
                    acc.add(compose(&s1, &s2));
                    count += 1;
                }
            }
        }
    }
    Ok(acc.value() / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LinkFading;
    use crate::specfun::gamma::gamma_p;
    use crate::specfun::quad::integrate_decaying;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn gamma_pdf(shape: f64, rate: f64, x: f64) -> f64 {
        if x <= 0.0 {
            return if shape == 1.0 { rate } else { 0.0 };
        }
        ((shape - 1.0) * x.ln() - rate * x + shape * rate.ln() - ln_gamma(shape)).exp()
    }

    // Direct two-level quadrature for the no-jammer hop: condition on the
    // transmit power (cap mass + interference-limited tail), then average
    // the legitimate CDF over the eavesdropper gain.
    fn oracle_nojam(hp: &HopChannel) -> f64 {
        let g = hp.gamma_thr;
        let inner = |p: f64| {
            integrate_decaying(
                &|y: f64| {
                    gamma_pdf(hp.e_shape as f64, hp.lam_e, y)
                        * gamma_p(hp.c_shape as f64, hp.lam_c * (g * y + (g - 1.0) / p)).unwrap()
                },
                0.0,
                1e-9,
            )
        };
        let pcap = gamma_p(hp.m_p as f64, hp.lam_p * hp.rho).unwrap();
        let tail = integrate_decaying(
            &|u: f64| gamma_pdf(hp.m_p as f64, hp.lam_p, u) * inner(hp.gbar_i / u),
            hp.rho,
            1e-8,
        );
        pcap * inner(hp.gbar_i / hp.rho) + tail
    }

    #[test]
    fn nojam_hop_matches_quadrature_oracle() {
        let cases = [
            HopChannel {
                e_shape: 5,
                c_shape: 8,
                lam_c: 0.1,
                lam_e: 0.6,
                m_p: 3,
                lam_p: 0.3,
                rho: 0.1,
                gbar_i: 100.0,
                gamma_thr: 2.0,
            },
            HopChannel {
                e_shape: 4,
                c_shape: 2,
                lam_c: 0.1,
                lam_e: 0.6,
                m_p: 3,
                lam_p: 0.2,
                rho: 0.1,
                gbar_i: 10.0,
                gamma_thr: (2.0f64).powf(0.5),
            },
            HopChannel {
                e_shape: 2,
                c_shape: 3,
                lam_c: 0.2,
                lam_e: 0.4,
                m_p: 2,
                lam_p: 0.5,
                rho: 0.25,
                gbar_i: 31.6227766,
                gamma_thr: 1.0,
            },
        ];
        for hp in &cases {
            let got = sop_hop_nojam(hp, 1e-11).unwrap();
            let want = oracle_nojam(hp);
            assert!(
                rel(got, want) < 1e-5,
                "hop {hp:?}: closed form {got} vs quadrature {want}"
            );
        }
    }

    fn fading() -> FadingSet {
        FadingSet {
            source_relay: LinkFading { m: 2, lambda: 0.1 },
            source_eve: LinkFading { m: 5, lambda: 0.6 },
            source_primary: LinkFading { m: 3, lambda: 0.3 },
            jammer_eve: LinkFading { m: 5, lambda: 0.6 },
            jammer_primary: LinkFading { m: 3, lambda: 0.3 },
            relay_dest: LinkFading { m: 2, lambda: 0.1 },
            relay_eve: LinkFading { m: 4, lambda: 0.6 },
            relay_primary: LinkFading { m: 3, lambda: 0.2 },
        }
    }

    fn config() -> NetworkConfig {
        NetworkConfig {
            n_sources: 4,
            n_eves: 2,
            l_relay: 2,
            l_dest: 2,
            l_eve: vec![1, 1],
            gbar_src: 100.0,
            gbar_jam: 100.0,
            gbar_relay: 100.0,
            gbar_intf: 10.0,
            rate_s: 0.5,
        }
    }

    #[test]
    fn overwhelming_jammer_removes_the_eavesdropper() {
        // lam_JE huge in the rate sense means a vanishing jammer gain; the
        // opposite limit (lam_JE -> 0) drives every eavesdropper SINR to zero
        // and the outage must collapse to the legitimate-link-only form
        let cfg = config();
        let mut f = fading();
        f.jammer_eve = LinkFading { m: 5, lambda: 1e-9 };
        let d = derive_coefficients(&cfg, &f, 0, 0, Some(1)).unwrap();
        let got = sop1_jammer(&d, 1e-11).unwrap();
        // eavesdropper-blind oracle: average the legitimate outage over the
        // power cap alone
        let pcap = gamma_p(d.m_sp as f64, d.phi_src).unwrap();
        let want = pcap * gamma_p(d.lr as f64, d.xi_sr * d.sigma / d.gbar_intf).unwrap()
            + integrate_decaying(
                &|u: f64| {
                    gamma_pdf(d.m_sp as f64, d.lam_sp, u)
                        * gamma_p(d.lr as f64, d.xi_sr * u / d.gbar_intf).unwrap()
                },
                d.sigma,
                1e-9,
            );
        assert!(
            (got - want).abs() < 1e-7,
            "jammer-dominant limit {got} vs eavesdropper-blind {want}"
        );
    }

    #[test]
    fn inert_jammer_approaches_the_nojammer_form() {
        let cfg = config();
        let mut f = fading();
        // two decades weaker than the data links
        f.jammer_eve = LinkFading { m: 5, lambda: 60.0 };
        let d = derive_coefficients(&cfg, &f, 0, 0, Some(1)).unwrap();
        let jam = sop1_jammer(&d, 1e-10).unwrap();
        let clear = sop1_nojammer(&d, 1e-10).unwrap();
        assert!(jam <= clear + 1e-9, "jamming must not raise the outage");
        assert!(
            (jam - clear).abs() < 0.05,
            "inert jammer: {jam} vs {clear}"
        );
    }

    #[test]
    fn jammer_form_matches_simulation() {
        use crate::montecarlo::{instantaneous_snrs, sample_draw};
        use rand::SeedableRng;
        let mut cfg = config();
        cfg.n_eves = 1;
        cfg.l_eve = vec![1];
        let f = fading();
        for rate in [0.0, 0.5, 1.0] {
            cfg.rate_s = rate;
            let d = derive_coefficients(&cfg, &f, 0, 0, Some(1)).unwrap();
            let exact = sop1_jammer(&d, 1e-10).unwrap();
            let g = d.gamma_thr;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
            let n = 300_000u64;
            let mut hits = 0u64;
            for _ in 0..n {
                let draw = sample_draw(&cfg, &f, &mut rng);
                let s = instantaneous_snrs(&cfg, &draw);
                if s.relay < g * s.eve1_jam[0] + (g - 1.0) {
                    hits += 1;
                }
            }
            let p = hits as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (exact - p).abs() < 4.5 * se + 1e-3,
                "rate {rate}: exact {exact} vs simulated {p} (se {se})"
            );
            // the same draws exercise the jammerless and second-hop forms
            let exact_nj = sop1_nojammer(&d, 1e-10).unwrap();
            let exact_2 = sop2(&d, 1e-10).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(987);
            let (mut h1, mut h2) = (0u64, 0u64);
            for _ in 0..n {
                let draw = sample_draw(&cfg, &f, &mut rng);
                let s = instantaneous_snrs(&cfg, &draw);
                if s.relay < g * s.eve1_nojam[0] + (g - 1.0) {
                    h1 += 1;
                }
                if s.dest < g * s.eve2[0] + (g - 1.0) {
                    h2 += 1;
                }
            }
            let (p1, p2) = (h1 as f64 / n as f64, h2 as f64 / n as f64);
            let se1 = (p1 * (1.0 - p1) / n as f64).sqrt();
            let se2 = (p2 * (1.0 - p2) / n as f64).sqrt();
            assert!(
                (exact_nj - p1).abs() < 4.5 * se1 + 1e-3,
                "rate {rate}: no-jammer {exact_nj} vs {p1}"
            );
            assert!(
                (exact_2 - p2).abs() < 4.5 * se2 + 1e-3,
                "rate {rate}: second hop {exact_2} vs {p2}"
            );
            // strict dominance: jamming reduces the first-hop outage
            assert!(exact <= exact_nj + 1e-12);
        }
    }

    #[test]
    fn system_composition_is_consistent() {
        let cfg = config();
        let f = fading();
        for scenario in [Scenario::Jammer, Scenario::NoJammer] {
            let b = sop_system(&cfg, &f, scenario, 1e-10).unwrap();
            assert_eq!(b.sop1.len(), 2);
            let mut check = 1.0;
            for k in 0..2 {
                assert!(b.sop1[k] >= 0.0 && b.sop1[k] <= 1.0);
                assert!(b.sop2[k] >= 0.0 && b.sop2[k] <= 1.0);
                check *= (1.0 - b.sop1[k]) * (1.0 - b.sop2[k]);
            }
            assert!(rel(b.system, 1.0 - check) < 1e-12);
            // the system fails at least as often as its weakest link
            let worst = b
                .sop1
                .iter()
                .chain(&b.sop2)
                .cloned()
                .fold(0.0f64, f64::max);
            assert!(b.system >= worst - 1e-12);
            let full = sop_system_full(&cfg, &f, scenario, 1e-10).unwrap();
            assert_eq!(full, b.system, "{scenario:?}");
        }
    }

    #[test]
    fn unequal_eavesdropper_antennas_break_symmetry() {
        let mut cfg = config();
        cfg.n_eves = 2;
        cfg.l_eve = vec![1, 3];
        // unjammed links: a larger eavesdropper array is stochastically
        // stronger, so both the jammerless first hop and the second hop must
        // see more outage
        let nj = sop_system(&cfg, &fading(), Scenario::NoJammer, 1e-10).unwrap();
        assert!(
            nj.sop1[1] > nj.sop1[0],
            "more eavesdropper antennas must raise the unjammed hop outage: {:?}",
            nj.sop1
        );
        assert!(nj.sop2[1] > nj.sop2[0]);
        // under jamming the eavesdropper SINR is a ratio of two combined
        // gains, so extra antennas also concentrate it and the direction
        // depends on the operating point; only the asymmetry is guaranteed
        let b = sop_system(&cfg, &fading(), Scenario::Jammer, 1e-10).unwrap();
        assert!((b.sop1[1] - b.sop1[0]).abs() > 1e-9, "jammer hop: {:?}", b.sop1);
        assert!(b.sop2[1] > b.sop2[0]);
    }

    #[test]
    fn gbar_monotonicity_of_eve_blind_part() {
        // raising every budget in lockstep (fixed rho) lowers the outage
        let f = fading();
        let mut prev = 1.0f64;
        for db in [0.0f64, 10.0, 20.0, 30.0] {
            let gbar = 10f64.powf(db / 10.0);
            let mut cfg = config();
            cfg.gbar_intf = gbar;
            cfg.gbar_src = gbar * 10.0;
            cfg.gbar_jam = gbar * 10.0;
            cfg.gbar_relay = gbar * 10.0;
            let b = sop_system(&cfg, &f, Scenario::Jammer, 1e-10).unwrap();
            assert!(
                b.system <= prev + 1e-9,
                "system outage rose from {prev} to {} at {db} dB",
                b.system
            );
            prev = b.system;
        }
    }

    #[test]
    fn rejects_out_of_range_probability_inputs() {
        assert!(clamp_unit(0.5, "x").is_ok());
        assert!(clamp_unit(1.0 + 1e-12, "x").unwrap() == 1.0);
        assert!(clamp_unit(-1e-12, "x").unwrap() == 0.0);
        assert!(clamp_unit(1.1, "x").is_err());
        assert!(clamp_unit(f64::NAN, "x").is_err());
    }
}
