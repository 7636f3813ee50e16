//! Flat key = value run configuration.
//!
//! One assignment per line, `#` starts a comment. Power budgets are written
//! in dB (`*_db` keys) and converted at this boundary; everything internal is
//! linear. A node budget may instead be tied to the interference budget with
//! a ratio key (`sigma`, `delta`, `rho_j` for source, relay, jammer), in
//! which case sweeps over the interference budget move that node budget in
//! lockstep.
//!
//! Physical keys are required; jammer fading classes default to the matching
//! source classes, and control keys (`scenario`, `mc_samples`, `seed`,
//! `tol`) have defaults.

use std::collections::BTreeMap;
use std::path::Path;

use crate::channel::{FadingSet, LinkFading, NetworkConfig, Scenario};
use crate::error::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Which node budgets track the interference budget, and at what ratio
/// (ratio = gbar_I / gbar_node).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Lockstep {
    pub sigma: Option<f64>,
    pub delta: Option<f64>,
    pub rho_j: Option<f64>,
}

/// A complete, validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub fading: FadingSet,
    pub scenario: Scenario,
    pub lockstep: Lockstep,
    pub mc_samples: u64,
    pub seed: u64,
    pub tol: f64,
}

impl RunConfig {
    /// The reference operating point used throughout the examples and the
    /// self-test: four sources, three eavesdroppers, two antennas per
    /// receiving array, all node budgets ten times the interference budget.
    pub fn reference() -> Self {
        RunConfig {
            network: reference_network(),
            fading: reference_fading(),
            scenario: Scenario::Jammer,
            lockstep: Lockstep {
                sigma: Some(0.1),
                delta: Some(0.1),
                rho_j: Some(0.1),
            },
            mc_samples: 1_000_000,
            seed: 1,
            tol: 1e-10,
        }
    }

    /// Moves the interference budget, dragging along every ratio-tied node
    /// budget.
    pub fn set_gbar_intf(&mut self, gbar_intf: f64) {
        self.network.gbar_intf = gbar_intf;
        if let Some(s) = self.lockstep.sigma {
            self.network.gbar_src = gbar_intf / s;
        }
        if let Some(d) = self.lockstep.delta {
            self.network.gbar_relay = gbar_intf / d;
        }
        if let Some(r) = self.lockstep.rho_j {
            self.network.gbar_jam = gbar_intf / r;
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut f = Fields::new(parse_pairs(text)?);

        let scenario = match f.opt_str("scenario")?.as_deref() {
            None | Some("jammer") => Scenario::Jammer,
            Some("nojammer") => Scenario::NoJammer,
            Some(other) => {
                return Err(Error::Config(format!(
                    "scenario must be `jammer` or `nojammer`, got `{other}`"
                )))
            }
        };

        let n_sources = f.req_u32("n_sources")?;
        let n_eves = f.req_u32("n_eves")?;
        let l_relay = f.req_u32("l_relay")?;
        let l_dest = f.req_u32("l_dest")?;
        let l_eve = parse_l_eve(&f.req_str("l_eve")?, n_eves)?;
        let rate_s = f.req_f64("rate_s")?;

        let link = |m, lambda| LinkFading { m, lambda };
        let source_relay = link(f.req_u32("m_sr")?, f.req_f64("lam_sr")?);
        let source_eve = link(f.req_u32("m_se")?, f.req_f64("lam_se")?);
        let source_primary = link(f.req_u32("m_sp")?, f.req_f64("lam_sp")?);
        let relay_dest = link(f.req_u32("m_rd")?, f.req_f64("lam_rd")?);
        let relay_eve = link(f.req_u32("m_re")?, f.req_f64("lam_re")?);
        let relay_primary = link(f.req_u32("m_rp")?, f.req_f64("lam_rp")?);
        // a jammer is a source that happens to be jamming
        let jammer_eve = link(
            f.opt_u32("m_je")?.unwrap_or(source_eve.m),
            f.opt_f64("lam_je")?.unwrap_or(source_eve.lambda),
        );
        let jammer_primary = link(
            f.opt_u32("m_jp")?.unwrap_or(source_primary.m),
            f.opt_f64("lam_jp")?.unwrap_or(source_primary.lambda),
        );

        let gbar_intf = db_to_linear(f.req_f64("gbar_intf_db")?);
        let (gbar_src, sigma) = budget(&mut f, "gbar_src_db", "sigma", gbar_intf)?;
        let (gbar_relay, delta) = budget(&mut f, "gbar_relay_db", "delta", gbar_intf)?;
        let (gbar_jam, rho_j) = match budget(&mut f, "gbar_jam_db", "rho_j", gbar_intf) {
            Ok(pair) => pair,
            // without a jammer the key pair may be absent entirely
            Err(Error::Config(msg)) if scenario == Scenario::NoJammer && msg.contains("missing") => {
                (gbar_src, None)
            }
            Err(e) => return Err(e),
        };

        let mc_samples = f.opt_u64("mc_samples")?.unwrap_or(1_000_000);
        let seed = f.opt_u64("seed")?.unwrap_or(1);
        let tol = f.opt_f64("tol")?.unwrap_or(1e-10);
        f.finish()?;

        let cfg = RunConfig {
            network: NetworkConfig {
                n_sources,
                n_eves,
                l_relay,
                l_dest,
                l_eve,
                gbar_src,
                gbar_jam,
                gbar_relay,
                gbar_intf,
                rate_s,
            },
            fading: FadingSet {
                source_relay,
                source_eve,
                source_primary,
                jammer_eve,
                jammer_primary,
                relay_dest,
                relay_eve,
                relay_primary,
            },
            scenario,
            lockstep: Lockstep { sigma, delta, rho_j },
            mc_samples,
            seed,
            tol,
        };
        cfg.network.validate(cfg.scenario)?;
        cfg.fading.validate()?;
        if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", cfg.tol)));
        }
        if cfg.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    /// Serializes so that `parse_str` reproduces this configuration (budgets
    /// pass through a dB round trip and match to floating-point accuracy).
    pub fn dump(&self) -> String {
        let n = &self.network;
        let fd = &self.fading;
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!(
            "scenario = {}",
            match self.scenario {
                Scenario::Jammer => "jammer",
                Scenario::NoJammer => "nojammer",
            }
        ));
        line(format!("n_sources = {}", n.n_sources));
        line(format!("n_eves = {}", n.n_eves));
        line(format!("l_relay = {}", n.l_relay));
        line(format!("l_dest = {}", n.l_dest));
        line(format!(
            "l_eve = {}",
            n.l_eve.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        ));
        line(format!("rate_s = {}", n.rate_s));
        line(format!("gbar_intf_db = {}", linear_to_db(n.gbar_intf)));
        match self.lockstep.sigma {
            Some(s) => line(format!("sigma = {s}")),
            None => line(format!("gbar_src_db = {}", linear_to_db(n.gbar_src))),
        }
        match self.lockstep.delta {
            Some(d) => line(format!("delta = {d}")),
            None => line(format!("gbar_relay_db = {}", linear_to_db(n.gbar_relay))),
        }
        match self.lockstep.rho_j {
            Some(r) => line(format!("rho_j = {r}")),
            None => line(format!("gbar_jam_db = {}", linear_to_db(n.gbar_jam))),
        }
        for (name, l) in [
            ("sr", &fd.source_relay),
            ("se", &fd.source_eve),
            ("sp", &fd.source_primary),
            ("je", &fd.jammer_eve),
            ("jp", &fd.jammer_primary),
            ("rd", &fd.relay_dest),
            ("re", &fd.relay_eve),
            ("rp", &fd.relay_primary),
        ] {
            line(format!("m_{name} = {}", l.m));
            line(format!("lam_{name} = {}", l.lambda));
        }
        line(format!("mc_samples = {}", self.mc_samples));
        line(format!("seed = {}", self.seed));
        line(format!("tol = {}", self.tol));
        out
    }
}

/// Reference network geometry.
pub fn reference_network() -> NetworkConfig {
    NetworkConfig {
        n_sources: 4,
        n_eves: 3,
        l_relay: 2,
        l_dest: 2,
        l_eve: vec![2, 2, 2],
        gbar_src: 100.0,
        gbar_jam: 100.0,
        gbar_relay: 100.0,
        gbar_intf: 10.0,
        rate_s: 0.5,
    }
}

/// Reference fading classes.
pub fn reference_fading() -> FadingSet {
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

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                idx + 1
            )));
        };
        let key = k.trim().to_ascii_lowercase();
        let val = v.trim().to_string();
        if key.is_empty() || val.is_empty() {
            return Err(Error::Config(format!(
                "line {}: empty key or value in `{line}`",
                idx + 1
            )));
        }
        if map.insert(key.clone(), val).is_some() {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
    }
    Ok(map)
}

struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    fn new(map: BTreeMap<String, String>) -> Self {
        Fields { map }
    }

    fn opt_str(&mut self, key: &str) -> Result<Option<String>> {
        Ok(self.map.remove(key))
    }

    fn req_str(&mut self, key: &str) -> Result<String> {
        self.map
            .remove(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn req_f64(&mut self, key: &str) -> Result<f64> {
        parse_num(key, &self.req_str(key)?)
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.map.remove(key).map(|v| parse_num(key, &v)).transpose()
    }

    fn req_u32(&mut self, key: &str) -> Result<u32> {
        let v = self.req_str(key)?;
        v.parse::<u32>()
            .map_err(|_| Error::Config(format!("key `{key}`: expected a non-negative integer, got `{v}`")))
    }

    fn opt_u32(&mut self, key: &str) -> Result<Option<u32>> {
        self.map
            .remove(key)
            .map(|v| {
                v.parse::<u32>().map_err(|_| {
                    Error::Config(format!("key `{key}`: expected a non-negative integer, got `{v}`"))
                })
            })
            .transpose()
    }

    fn opt_u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.map
            .remove(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Error::Config(format!("key `{key}`: expected a non-negative integer, got `{v}`"))
                })
            })
            .transpose()
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.map.keys().next() {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        Ok(())
    }
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::Config(format!("key `{key}`: expected a number, got `{v}`")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("key `{key}`: value must be finite")));
    }
    Ok(x)
}

fn parse_l_eve(raw: &str, n_eves: u32) -> Result<Vec<u32>> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let mut vals = Vec::with_capacity(parts.len());
    for p in &parts {
        vals.push(p.parse::<u32>().map_err(|_| {
            Error::Config(format!("key `l_eve`: expected integers, got `{p}`"))
        })?);
    }
    match vals.len() {
        1 => Ok(vec![vals[0]; n_eves as usize]),
        n if n == n_eves as usize => Ok(vals),
        n => Err(Error::Config(format!(
            "key `l_eve`: {n} entries for {n_eves} eavesdroppers"
        ))),
    }
}

/// Resolves one node budget from either its explicit dB key or its ratio key.
fn budget(f: &mut Fields, db_key: &str, ratio_key: &str, gbar_intf: f64) -> Result<(f64, Option<f64>)> {
    let db = f.opt_f64(db_key)?;
    let ratio = f.opt_f64(ratio_key)?;
    match (db, ratio) {
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "give `{db_key}` or `{ratio_key}`, not both"
        ))),
        (Some(db), None) => Ok((db_to_linear(db), None)),
        (None, Some(r)) if r > 0.0 => Ok((gbar_intf / r, Some(r))),
        (None, Some(r)) => Err(Error::Config(format!(
            "key `{ratio_key}` must be positive, got {r}"
        ))),
        (None, None) => Err(Error::Config(format!(
            "missing required key `{db_key}` (or ratio `{ratio_key}`)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
        n_sources = 4
        n_eves = 2
        l_relay = 2
        l_dest = 1
        l_eve = 1,2
        rate_s = 0.5
        gbar_intf_db = 10
        sigma = 0.1
        delta = 0.1
        rho_j = 0.2
        m_sr = 2
        lam_sr = 0.1
        m_se = 5
        lam_se = 0.6
        m_sp = 3
        lam_sp = 0.3
        m_rd = 2
        lam_rd = 0.1
        m_re = 4
        lam_re = 0.6
        m_rp = 3
        lam_rp = 0.2
    ";

    #[test]
    fn minimal_file_parses_with_defaults() {
        let cfg = RunConfig::parse_str(MINIMAL).unwrap();
        assert_eq!(cfg.scenario, Scenario::Jammer);
        assert_eq!(cfg.network.l_eve, vec![1, 2]);
        assert!((cfg.network.gbar_intf - 10.0).abs() < 1e-12);
        assert!((cfg.network.gbar_src - 100.0).abs() < 1e-9);
        assert!((cfg.network.gbar_jam - 50.0).abs() < 1e-9);
        // jammer classes default to the source classes
        assert_eq!(cfg.fading.jammer_eve, cfg.fading.source_eve);
        assert_eq!(cfg.fading.jammer_primary, cfg.fading.source_primary);
        assert_eq!(cfg.mc_samples, 1_000_000);
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.tol, 1e-10);
    }

    #[test]
    fn comments_broadcast_and_overrides() {
        let text = format!(
            "{MINIMAL}\n# trailing comment line\nscenario = nojammer # inline\nmc_samples = 5000\nseed = 9\ntol = 1e-8\nm_je = 2\nlam_je = 0.4\n"
        );
        let text = text.replace("l_eve = 1,2", "l_eve = 3");
        let cfg = RunConfig::parse_str(&text).unwrap();
        assert_eq!(cfg.scenario, Scenario::NoJammer);
        assert_eq!(cfg.network.l_eve, vec![3, 3]);
        assert_eq!(cfg.mc_samples, 5000);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.fading.jammer_eve, LinkFading { m: 2, lambda: 0.4 });
    }

    #[test]
    fn errors_name_the_offending_key() {
        let missing = MINIMAL.replace("lam_rd = 0.1", "");
        match RunConfig::parse_str(&missing) {
            Err(Error::Config(msg)) => assert!(msg.contains("`lam_rd`"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
        let unknown = format!("{MINIMAL}\nlam_xy = 1.0\n");
        match RunConfig::parse_str(&unknown) {
            Err(Error::Config(msg)) => assert!(msg.contains("`lam_xy`"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
        let dup = format!("{MINIMAL}\nn_eves = 3\n");
        match RunConfig::parse_str(&dup) {
            Err(Error::Config(msg)) => assert!(msg.contains("`n_eves`"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
        let both = format!("{MINIMAL}\ngbar_src_db = 20\n");
        match RunConfig::parse_str(&both) {
            Err(Error::Config(msg)) => {
                assert!(msg.contains("gbar_src_db") && msg.contains("sigma"), "{msg}")
            }
            other => panic!("expected a config error, got {other:?}"),
        }
        let bad = MINIMAL.replace("rate_s = 0.5", "rate_s = fast");
        match RunConfig::parse_str(&bad) {
            Err(Error::Config(msg)) => assert!(msg.contains("`rate_s`"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn nojammer_files_may_omit_the_jammer_budget() {
        let text = MINIMAL.replace("rho_j = 0.2", "scenario = nojammer");
        let cfg = RunConfig::parse_str(&text).unwrap();
        assert_eq!(cfg.scenario, Scenario::NoJammer);
        assert_eq!(cfg.lockstep.rho_j, None);
        // but a jammer run does require it
        let text = MINIMAL.replace("rho_j = 0.2", "");
        match RunConfig::parse_str(&text) {
            Err(Error::Config(msg)) => assert!(msg.contains("gbar_jam_db"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn dump_round_trips() {
        let mut cfg = RunConfig::reference();
        cfg.network.l_eve = vec![1, 2, 3];
        cfg.network.rate_s = 0.75;
        cfg.lockstep.delta = None;
        cfg.network.gbar_relay = 37.5;
        cfg.mc_samples = 123_456;
        cfg.seed = 42;
        let back = RunConfig::parse_str(&cfg.dump()).unwrap();
        assert_eq!(back.scenario, cfg.scenario);
        assert_eq!(back.network.l_eve, cfg.network.l_eve);
        assert_eq!(back.fading, cfg.fading);
        assert_eq!(back.lockstep, cfg.lockstep);
        assert_eq!(back.mc_samples, cfg.mc_samples);
        assert_eq!(back.seed, cfg.seed);
        assert_eq!(back.tol, cfg.tol);
        for (a, b) in [
            (back.network.gbar_src, cfg.network.gbar_src),
            (back.network.gbar_jam, cfg.network.gbar_jam),
            (back.network.gbar_relay, cfg.network.gbar_relay),
            (back.network.gbar_intf, cfg.network.gbar_intf),
        ] {
            assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} vs {b}");
        }
        assert_eq!(back.network.rate_s, cfg.network.rate_s);
    }

    #[test]
    fn lockstep_moves_tied_budgets_only() {
        let mut cfg = RunConfig::reference();
        cfg.lockstep.delta = None;
        cfg.network.gbar_relay = 55.0;
        cfg.set_gbar_intf(20.0);
        assert_eq!(cfg.network.gbar_intf, 20.0);
        assert!((cfg.network.gbar_src - 200.0).abs() < 1e-9);
        assert!((cfg.network.gbar_jam - 200.0).abs() < 1e-9);
        assert_eq!(cfg.network.gbar_relay, 55.0);
    }

    #[test]
    fn reference_config_is_valid() {
        let cfg = RunConfig::reference();
        cfg.network.validate(cfg.scenario).unwrap();
        cfg.fading.validate().unwrap();
        let dumped = RunConfig::parse_str(&cfg.dump()).unwrap();
        assert_eq!(dumped.network.n_sources, 4);
        assert_eq!(dumped.network.n_eves, 3);
    }
}
