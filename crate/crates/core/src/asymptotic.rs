//! High-SNR behavior in the proportional regime: every node budget rises in
//! lockstep with the interference budget (fixed rho ratios).
//!
//! In that regime an unjammed hop saturates at a floor 1 - A(1) and
//! approaches it like A4 / gbar_I, while the jammed first hop genuinely
//! decays, with an exponent set by the relay and jammer-eavesdropper shape
//! products and a logarithmic factor when they collide at one.

use crate::analytic::{hop1_channel, hop2_channel, HopChannel};
use crate::channel::{derive_coefficients, DerivedCoefficients, FadingSet, NetworkConfig, Scenario};
use crate::error::{Error, Result};
use crate::specfun::gamma::{gamma_lower, gamma_upper, ln_gamma, ln_gamma_upper};
use crate::specfun::meijer::hop_transform;

/// Which shape product controls the jammed first hop's decay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticCase {
    /// Relay shape smaller: exponent L_R m_SR.
    RelayDiversity,
    /// Jammer-eavesdropper shape smaller: exponent L_E m_JE.
    JammerDiversity,
    /// Both equal one: ln(gbar) / gbar.
    BalancedSingle,
    /// Equal and above one: the leading term collides into a higher-order
    /// logarithmic one and no first-order law is reported.
    BalancedMulti,
}

pub fn classify(lr: u32, le_j: u32) -> AsymptoticCase {
    use AsymptoticCase::*;
    match lr.cmp(&le_j) {
        std::cmp::Ordering::Less => RelayDiversity,
        std::cmp::Ordering::Greater => JammerDiversity,
        std::cmp::Ordering::Equal => {
            if lr == 1 {
                BalancedSingle
            } else {
                BalancedMulti
            }
        }
    }
}

/// First-hop tail law under jamming:
/// SOP1 ~ coefficient * ln(gbar_I)^{0|1} / gbar_I^{exponent}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailLaw {
    pub case_kind: AsymptoticCase,
    pub coefficient: f64,
    pub exponent: u32,
    pub logarithmic: bool,
}

impl TailLaw {
    pub fn value(&self, gbar_i: f64) -> f64 {
        let log = if self.logarithmic { gbar_i.ln() } else { 1.0 };
        self.coefficient * log / gbar_i.powi(self.exponent as i32)
    }
}

/// The jammer-side average with the eavesdropper gain raised to `t`:
/// the capped-power region and the interference-limited tail.
fn jam_bracket(d: &DerivedCoefficients, t: u32) -> Result<f64> {
    let m = d.m_jp as f64;
    let ratio = d.rho_j * d.lam_je / d.lam_se;
    Ok(gamma_lower(m, d.phi_jam)? * ratio.powi(t as i32)
        + gamma_upper(m + t as f64, d.phi_jam)? * d.varsigma.powi(t as i32))
}

/// The source power-cap average attached to binomial index `l`, in its
/// high-budget limit.
fn cap_bracket_inf(d: &DerivedCoefficients, k: i32) -> Result<f64> {
    let m = d.m_sp as f64;
    Ok(gamma_lower(m, d.phi_src)? * d.sigma.powi(k)
        + (ln_gamma_upper(m + k as f64, d.phi_src)? - k as f64 * d.lam_sp.ln()).exp())
}

/// Leading tail coefficient of the jammed first hop.
pub fn sop1_jammer_tail(d: &DerivedCoefficients) -> Result<TailLaw> {
    let case_kind = classify(d.lr, d.le_j);
    let g = d.gamma_thr;
    let lr = d.lr;
    let le_j = d.le_j;
    let le_i = d.le_i;
    match case_kind {
        AsymptoticCase::RelayDiversity => {
            // eavesdropper-blind piece and the h = LE_i - 1 pole ladder decay
            // together at gbar^{-LR}
            let blind = d.xi_sr.powi(lr as i32) * cap_bracket_inf(d, lr as i32)?
                / (lr as f64 * ln_gamma(lr as f64).exp());
            let mut sum = 0.0;
            for l in 0..lr {
                let ups = d.upsilon[l as usize];
                if ups == 0.0 {
                    continue;
                }
                sum += ups
                    * cap_bracket_inf(d, (lr - 1 - l) as i32)?
                    * (ln_gamma((le_j - l - 1) as f64) + ln_gamma((le_i + l + 1) as f64)).exp()
                    / (l + 1) as f64
                    * jam_bracket(d, l + 1)?;
            }
            let coefficient = (blind + g * d.alpha * sum) * (-ln_gamma(d.m_sp as f64)).exp();
            Ok(TailLaw {
                case_kind,
                coefficient,
                exponent: lr,
                logarithmic: false,
            })
        }
        AsymptoticCase::JammerDiversity => {
            // only the top binomial index survives; its cap average cancels
            // the 1/Gamma(m_SP) normalizer exactly
            let mut sum = 0.0;
            for h in 0..le_i {
                let om = d.omega[h as usize];
                if om == 0.0 {
                    continue;
                }
                let t = (le_i + lr - le_j - h - 1) as f64;
                sum += om
                    * (ln_gamma(t) + ln_gamma((le_j + h + 1) as f64) - t * d.varpi.ln()).exp();
            }
            let coefficient =
                g.powi(lr as i32) * d.alpha / le_j as f64 * jam_bracket(d, le_j)? * sum;
            Ok(TailLaw {
                case_kind,
                coefficient,
                exponent: le_j,
                logarithmic: false,
            })
        }
        AsymptoticCase::BalancedSingle => {
            let coefficient =
                g * d.alpha * jam_bracket(d, 1)? * ln_gamma((le_i + le_j) as f64).exp();
            Ok(TailLaw {
                case_kind,
                coefficient,
                exponent: 1,
                logarithmic: true,
            })
        }
        AsymptoticCase::BalancedMulti => Err(Error::CaseMismatch {
            expected: "distinct shape products or both equal to one".into(),
            got: format!("L_R m_SR = L_E m_JE = {lr}"),
        }),
    }
}

/// Hop survival floor ingredient: the binomial kernel at index c - y over its
/// normalizers. y = 1 gives the floor itself, y = 2 the next kernel down.
pub fn a_term(hp: &HopChannel, y: u32, tol: f64) -> Result<f64> {
    if hp.c_shape < y {
        return Err(Error::Parameter(format!(
            "kernel order {y} exceeds shape product {}",
            hp.c_shape
        )));
    }
    let l = hp.c_shape - y;
    let z = hp.lam_e / (hp.gamma_thr * hp.lam_c);
    let g = hop_transform(l, hp.e_shape, z, tol)?.value;
    Ok(g * (-ln_gamma(hp.e_shape as f64) - ln_gamma(hp.c_shape as f64)).exp())
}

/// First-order correction: hop survival = A(1) + A4 / gbar_I + O(gbar^{-2}).
pub fn a4_term(hp: &HopChannel, tol: f64) -> Result<f64> {
    let m = hp.m_p as f64;
    let xi = hp.lam_c * (hp.gamma_thr - 1.0);
    let phi = hp.lam_p * hp.rho;
    let gm = ln_gamma(m).exp();
    let mut a4 = 0.0;
    if hp.c_shape >= 2 {
        let down = (hp.c_shape - 1) as f64 * xi * a_term(hp, 2, tol)?;
        a4 += down * (hp.rho * gamma_lower(m, phi)? + gamma_upper(m + 1.0, phi)? / hp.lam_p) / gm;
    }
    let drift = hp.rho * (gamma_lower(m, phi)? + ((m - 1.0) * phi.ln() - phi).exp())
        + m * gamma_upper(m, phi)? / hp.lam_p;
    a4 -= xi * a_term(hp, 1, tol)? * drift / gm;
    Ok(a4)
}

/// A first-order asymptotic evaluation. `raw` is the series value, which can
/// leave [0, 1] far from the asymptotic regime; `clamped` never does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSop {
    pub raw: f64,
    pub clamped: f64,
    pub low_snr_warning: bool,
}

fn finish(raw: f64) -> AsymptoticSop {
    AsymptoticSop {
        raw,
        clamped: raw.clamp(0.0, 1.0),
        low_snr_warning: !(-1e-6..=1.0 + 1e-6).contains(&raw),
    }
}

/// System-level first-order asymptote in the proportional regime.
///
/// Without a jammer both hops saturate; with one, the first hop's decaying
/// term enters only when its exponent is exactly one (with or without the
/// logarithm), higher-order tails being invisible at this order.
pub fn sop_system_asymptotic(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    scenario: Scenario,
    tol: f64,
) -> Result<AsymptoticSop> {
    cfg.validate(scenario)?;
    fading.validate()?;
    let jammer = match scenario {
        Scenario::Jammer => Some(1),
        Scenario::NoJammer => None,
    };
    let gbar = cfg.gbar_intf;
    let m = cfg.n_eves as usize;

    match scenario {
        Scenario::NoJammer => {
            let mut a1 = Vec::with_capacity(m);
            let mut a2 = Vec::with_capacity(m);
            let mut c1 = Vec::with_capacity(m);
            let mut c2 = Vec::with_capacity(m);
            for k in 0..m {
                let d = derive_coefficients(cfg, fading, 0, k, jammer)?;
                let h1 = hop1_channel(&d);
                let h2 = hop2_channel(&d);
                a1.push(a_term(&h1, 1, tol)?);
                a2.push(a_term(&h2, 1, tol)?);
                c1.push(a4_term(&h1, tol)?);
                c2.push(a4_term(&h2, tol)?);
            }
            let prod: f64 = (0..m).map(|k| a1[k] * a2[k]).product();
            let mut corr = 0.0;
            for k in 0..m {
                let others: f64 = (0..m).filter(|&j| j != k).map(|j| a1[j] * a2[j]).product();
                corr += others * (a2[k] * c1[k] + a1[k] * c2[k]);
            }
            Ok(finish(1.0 - prod - corr / gbar))
        }
        Scenario::Jammer => {
            let mut a2 = Vec::with_capacity(m);
            let mut c2 = Vec::with_capacity(m);
            let mut hop1 = 0.0;
            for k in 0..m {
                let d = derive_coefficients(cfg, fading, 0, k, jammer)?;
                let h2 = hop2_channel(&d);
                a2.push(a_term(&h2, 1, tol)?);
                c2.push(a4_term(&h2, tol)?);
                match sop1_jammer_tail(&d) {
                    Ok(law) if law.exponent == 1 => hop1 += law.value(gbar),
                    // steeper than first order: invisible at this order
                    Ok(_) => {}
                    Err(Error::CaseMismatch { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            let prod: f64 = a2.iter().product();
            let mut corr = 0.0;
            for k in 0..m {
                let others: f64 = (0..m).filter(|&j| j != k).map(|j| a2[j]).product();
                corr += others * c2[k];
            }
            Ok(finish(1.0 - prod - corr / gbar + prod * hop1))
        }
    }
}
