//! Network model: node populations, antenna counts, Nakagami-m link classes,
//! and the derived coefficient bundle shared by the analytic and asymptotic
//! evaluators.
//!
//! The topology is a dual-hop decode-and-forward underlay network: N sources
//! with a single antenna each, one relay with L_R receive antennas, one
//! destination with L_D antennas, M eavesdroppers with L_E(k) antennas each,
//! and one primary receiver that caps every secondary transmit power at
//! min(peak, interference budget / primary-link gain). One source carries
//! data; optionally a second source acts as a friendly jammer whose signal
//! degrades only the eavesdroppers (the relay and destination are assumed to
//! cancel it). All diversity combining is MRC, so combined channel power
//! gains are sums of i.i.d. Gamma(m, lambda) branch gains.

use crate::error::{Error, Result};
use crate::specfun::gamma::{binomial, gamma_p, ln_gamma};

/// Whether a friendly jammer transmits alongside the selected source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Jammer,
    NoJammer,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::Jammer => "jammer",
            Scenario::NoJammer => "nojammer",
        }
    }
}

/// The eight statistical link classes of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    SourceRelay,
    SourceEve,
    SourcePrimary,
    JammerEve,
    JammerPrimary,
    RelayDest,
    RelayEve,
    RelayPrimary,
}

pub const ALL_LINK_CLASSES: [LinkClass; 8] = [
    LinkClass::SourceRelay,
    LinkClass::SourceEve,
    LinkClass::SourcePrimary,
    LinkClass::JammerEve,
    LinkClass::JammerPrimary,
    LinkClass::RelayDest,
    LinkClass::RelayEve,
    LinkClass::RelayPrimary,
];

/// Nakagami-m marginal of one link class. A single branch's channel power
/// gain is Gamma(m, lambda): density lambda^m x^{m-1} e^{-lambda x} / (m-1)!.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkFading {
    pub m: u32,
    pub lambda: f64,
}

impl LinkFading {
    pub fn new(m: u32, lambda: f64) -> Result<Self> {
        let f = LinkFading { m, lambda };
        f.validate("link")?;
        Ok(f)
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Parameter(format!(
                "{what}: Nakagami shape must be a positive integer, got {}",
                self.m
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::Parameter(format!(
                "{what}: rate parameter must be positive and finite, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Fading parameters for all eight link classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSet {
    pub source_relay: LinkFading,
    pub source_eve: LinkFading,
    pub source_primary: LinkFading,
    pub jammer_eve: LinkFading,
    pub jammer_primary: LinkFading,
    pub relay_dest: LinkFading,
    pub relay_eve: LinkFading,
    pub relay_primary: LinkFading,
}

impl FadingSet {
    pub fn get(&self, class: LinkClass) -> &LinkFading {
        match class {
            LinkClass::SourceRelay => &self.source_relay,
            LinkClass::SourceEve => &self.source_eve,
            LinkClass::SourcePrimary => &self.source_primary,
            LinkClass::JammerEve => &self.jammer_eve,
            LinkClass::JammerPrimary => &self.jammer_primary,
            LinkClass::RelayDest => &self.relay_dest,
            LinkClass::RelayEve => &self.relay_eve,
            LinkClass::RelayPrimary => &self.relay_primary,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.source_relay.validate("source-relay")?;
        self.source_eve.validate("source-eavesdropper")?;
        self.source_primary.validate("source-primary")?;
        self.jammer_eve.validate("jammer-eavesdropper")?;
        self.jammer_primary.validate("jammer-primary")?;
        self.relay_dest.validate("relay-destination")?;
        self.relay_eve.validate("relay-eavesdropper")?;
        self.relay_primary.validate("relay-primary")?;
        Ok(())
    }
}

/// Populations, antennas, power budgets, and the secrecy rate target.
/// All power quantities are linear average SNRs (not dB).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub n_sources: u32,
    pub n_eves: u32,
    /// Receive antennas at the relay.
    pub l_relay: u32,
    /// Receive antennas at the destination.
    pub l_dest: u32,
    /// Receive antennas per eavesdropper; length must equal `n_eves`.
    pub l_eve: Vec<u32>,
    /// Peak transmit SNR budget of every source.
    pub gbar_src: f64,
    /// Peak transmit SNR budget of the jammer role.
    pub gbar_jam: f64,
    /// Peak transmit SNR budget of the relay.
    pub gbar_relay: f64,
    /// Interference temperature at the primary receiver.
    pub gbar_intf: f64,
    /// Secrecy rate threshold in bit/s/Hz; zero means any positive secrecy
    /// capacity counts as secure.
    pub rate_s: f64,
}

impl NetworkConfig {
    pub fn validate(&self, scenario: Scenario) -> Result<()> {
        if self.n_sources < 1 {
            return Err(Error::Parameter("need at least one source".into()));
        }
        if scenario == Scenario::Jammer && self.n_sources < 2 {
            return Err(Error::Parameter(
                "the jammer scenario draws the jammer from the non-selected sources, so N >= 2"
                    .into(),
            ));
        }
        // n_eves = 0 is legal: with nobody listening the outage probability
        // is zero by the empty product
        if self.l_eve.len() != self.n_eves as usize {
            return Err(Error::Parameter(format!(
                "l_eve has {} entries for {} eavesdroppers",
                self.l_eve.len(),
                self.n_eves
            )));
        }
        for (k, &le) in self.l_eve.iter().enumerate() {
            if le < 1 {
                return Err(Error::Parameter(format!(
                    "eavesdropper {k} has {le} antennas"
                )));
            }
        }
        if self.l_relay < 1 || self.l_dest < 1 {
            return Err(Error::Parameter("relay and destination need antennas".into()));
        }
        for (name, v) in [
            ("gbar_src", self.gbar_src),
            ("gbar_jam", self.gbar_jam),
            ("gbar_relay", self.gbar_relay),
            ("gbar_intf", self.gbar_intf),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Parameter(format!(
                    "{name} must be a positive finite linear SNR, got {v}"
                )));
            }
        }
        if !(self.rate_s >= 0.0) || !self.rate_s.is_finite() {
            return Err(Error::Parameter(format!(
                "rate_s must be non-negative, got {}",
                self.rate_s
            )));
        }
        Ok(())
    }
}

/// CDF of the MRC-combined power gain of `l` i.i.d. branches of one class:
/// Gamma(l m, lambda), evaluated through the regularized lower incomplete
/// gamma.
pub fn gain_cdf(link: &LinkFading, l: u32, x: f64) -> Result<f64> {
    if l < 1 {
        return Err(Error::Parameter(format!("need at least one branch, got {l}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    gamma_p((l * link.m) as f64, link.lambda * x)
}

/// Instantaneous transmit SNR of an underlay node: the peak budget capped by
/// the interference constraint through the node-to-primary gain.
pub fn effective_snr_scale(gbar_node: f64, gbar_intf: f64, g_node_primary: f64) -> f64 {
    gbar_node.min(gbar_intf / g_node_primary)
}

/// Everything the closed forms need for one (source, eavesdropper, jammer)
/// selection, precomputed. Link classes are shared across sources, so the
/// bundle varies only with the eavesdropper index through its antenna count.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedCoefficients {
    /// 2^{Rs}
    pub gamma_thr: f64,
    // diversity shape products
    pub lr: u32,
    pub ld: u32,
    pub le_i: u32,
    pub le_j: u32,
    pub le_r: u32,
    // class rate parameters
    pub lam_sr: f64,
    pub lam_se: f64,
    pub lam_sp: f64,
    pub lam_je: f64,
    pub lam_jp: f64,
    pub lam_rd: f64,
    pub lam_re: f64,
    pub lam_rp: f64,
    // primary-link shapes
    pub m_sp: u32,
    pub m_jp: u32,
    pub m_rp: u32,
    // power budgets and ratios
    pub gbar_src: f64,
    pub gbar_jam: f64,
    pub gbar_relay: f64,
    pub gbar_intf: f64,
    /// gbar_intf / gbar_src
    pub sigma: f64,
    /// gbar_intf / gbar_relay
    pub delta: f64,
    /// gbar_intf / gbar_jam
    pub rho_j: f64,
    // composite symbols
    /// gamma_thr * lam_sr + lam_se
    pub varpi: f64,
    /// lam_je / (gbar_jam * lam_se)
    pub theta: f64,
    /// lam_je / (lam_jp * lam_se)
    pub varsigma: f64,
    /// lam_je / (lam_jp * gbar_intf)
    pub kappa: f64,
    /// lam_sp * gbar_intf / gbar_src
    pub phi_src: f64,
    /// lam_jp * gbar_intf / gbar_jam
    pub phi_jam: f64,
    /// lam_rp * gbar_intf / gbar_relay
    pub phi_relay: f64,
    /// lam_sr * (gamma_thr - 1)
    pub xi_sr: f64,
    /// lam_rd * (gamma_thr - 1)
    pub xi_rd: f64,
    /// 1 / (Gamma(LE_J) Gamma(m_JP))
    pub beta: f64,
    /// beta * lam_sr^{LR} / (Gamma(LE_i) Gamma(LR))
    pub alpha: f64,
    /// Omega_h = C(LE_i - 1, h) lam_se^{LE_i - 1 - h}, h = 0..LE_i-1
    pub omega: Vec<f64>,
    /// Upsilon_l = C(LR - 1, l) gamma^l (gamma - 1)^{LR - 1 - l}, l = 0..LR-1
    pub upsilon: Vec<f64>,
    /// B_j = C(LD - 1, j) (gamma - 1)^{LD - 1 - j}, j = 0..LD-1
    pub b_coef: Vec<f64>,
}

impl DerivedCoefficients {
    /// mu(h, l) = LE_i - h + l, the shape of the source-power mixing factor.
    pub fn mu(&self, h: u32, l: u32) -> i64 {
        self.le_i as i64 - h as i64 + l as i64
    }
}

// (gamma - 1)^p with the 0^0 = 1 convention so the rate_s = 0 boundary keeps
// the single surviving binomial term.
fn pow00(base: f64, exp: u32) -> f64 {
    if exp == 0 {
        1.0
    } else {
        base.powi(exp as i32)
    }
}

/// Builds the coefficient bundle for source `i`, eavesdropper `k`, and the
/// given jammer selection (`None` for the no-jammer scenario). The indices
/// select population members and are validated; the fading classes are
/// population-wide.
pub fn derive_coefficients(
    cfg: &NetworkConfig,
    fading: &FadingSet,
    i: usize,
    k: usize,
    jammer: Option<usize>,
) -> Result<DerivedCoefficients> {
    cfg.validate(if jammer.is_some() {
        Scenario::Jammer
    } else {
        Scenario::NoJammer
    })?;
    fading.validate()?;
    if i >= cfg.n_sources as usize {
        return Err(Error::Parameter(format!(
            "source index {i} out of range for N = {}",
            cfg.n_sources
        )));
    }
    if k >= cfg.n_eves as usize {
        return Err(Error::Parameter(format!(
            "eavesdropper index {k} out of range for M = {}",
            cfg.n_eves
        )));
    }
    if let Some(j) = jammer {
        if j >= cfg.n_sources as usize {
            return Err(Error::Parameter(format!(
                "jammer index {j} out of range for N = {}",
                cfg.n_sources
            )));
        }
        if j == i {
            return Err(Error::Parameter(
                "the selected source cannot jam its own transmission".into(),
            ));
        }
    }

    let l_ek = cfg.l_eve[k];
    let lr = cfg.l_relay * fading.source_relay.m;
    let ld = cfg.l_dest * fading.relay_dest.m;
    let le_i = l_ek * fading.source_eve.m;
    let le_j = l_ek * fading.jammer_eve.m;
    let le_r = l_ek * fading.relay_eve.m;

    let gamma_thr = (2.0f64).powf(cfg.rate_s);
    let gm1 = gamma_thr - 1.0;

    let lam_sr = fading.source_relay.lambda;
    let lam_se = fading.source_eve.lambda;
    let lam_sp = fading.source_primary.lambda;
    let lam_je = fading.jammer_eve.lambda;
    let lam_jp = fading.jammer_primary.lambda;
    let lam_rd = fading.relay_dest.lambda;
    let lam_re = fading.relay_eve.lambda;
    let lam_rp = fading.relay_primary.lambda;

    let beta = (-ln_gamma(le_j as f64) - ln_gamma(fading.jammer_primary.m as f64)).exp();
    let alpha = beta * lam_sr.powi(lr as i32)
        * (-ln_gamma(le_i as f64) - ln_gamma(lr as f64)).exp();

    let omega = (0..le_i)
        .map(|h| binomial(le_i - 1, h) * pow00(lam_se, le_i - 1 - h))
        .collect();
    let upsilon = (0..lr)
        .map(|l| binomial(lr - 1, l) * gamma_thr.powi(l as i32) * pow00(gm1, lr - 1 - l))
        .collect();
    let b_coef = (0..ld)
        .map(|j| binomial(ld - 1, j) * pow00(gm1, ld - 1 - j))
        .collect();

    Ok(DerivedCoefficients {
        gamma_thr,
        lr,
        ld,
        le_i,
        le_j,
        le_r,
        lam_sr,
        lam_se,
        lam_sp,
        lam_je,
        lam_jp,
        lam_rd,
        lam_re,
        lam_rp,
        m_sp: fading.source_primary.m,
        m_jp: fading.jammer_primary.m,
        m_rp: fading.relay_primary.m,
        gbar_src: cfg.gbar_src,
        gbar_jam: cfg.gbar_jam,
        gbar_relay: cfg.gbar_relay,
        gbar_intf: cfg.gbar_intf,
        sigma: cfg.gbar_intf / cfg.gbar_src,
        delta: cfg.gbar_intf / cfg.gbar_relay,
        rho_j: cfg.gbar_intf / cfg.gbar_jam,
        varpi: gamma_thr * lam_sr + lam_se,
        theta: lam_je / (cfg.gbar_jam * lam_se),
        varsigma: lam_je / (lam_jp * lam_se),
        kappa: lam_je / (lam_jp * cfg.gbar_intf),
        phi_src: lam_sp * cfg.gbar_intf / cfg.gbar_src,
        phi_jam: lam_jp * cfg.gbar_intf / cfg.gbar_jam,
        phi_relay: lam_rp * cfg.gbar_intf / cfg.gbar_relay,
        xi_sr: lam_sr * gm1,
        xi_rd: lam_rd * gm1,
        beta,
        alpha,
        omega,
        upsilon,
        b_coef,
    })
}
