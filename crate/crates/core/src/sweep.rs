//! Parameter sweeps, CSV output, and the stock figure grids.
//!
//! Monte Carlo rows share the run seed across sweep points (common random
//! numbers), so curves are smooth and every row is reproducible on its own.

use rayon::prelude::*;
use std::io::Write;

use crate::analytic::sop_system;
use crate::asymptotic::sop_system_asymptotic;
use crate::channel::Scenario;
use crate::config::{db_to_linear, linear_to_db, RunConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_sop, McOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asym",
            Method::MonteCarlo => "mc",
        }
    }

    /// Parses a comma list such as `exact,asym,mc`, preserving order and
    /// rejecting duplicates.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let m = match part.trim() {
                "exact" => Method::Exact,
                "asym" => Method::Asymptotic,
                "mc" => Method::MonteCarlo,
                other => {
                    return Err(Error::Config(format!(
                        "unknown method `{other}` (expected exact, asym, mc)"
                    )))
                }
            };
            if out.contains(&m) {
                return Err(Error::Config(format!("method `{}` listed twice", m.as_str())));
            }
            out.push(m);
        }
        if out.is_empty() {
            return Err(Error::Config("empty method list".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    GbarIntfDb,
    GbarJamDb,
    NEves,
    LAll,
    LDest,
    RateS,
}

impl Axis {
    pub fn key(self) -> &'static str {
        match self {
            Axis::GbarIntfDb => "gbar_intf_db",
            Axis::GbarJamDb => "gbar_jam_db",
            Axis::NEves => "n_eves",
            Axis::LAll => "l_all",
            Axis::LDest => "l_dest",
            Axis::RateS => "rate_s",
        }
    }

    pub fn parse(s: &str) -> Result<Axis> {
        Ok(match s {
            "gbar_intf_db" => Axis::GbarIntfDb,
            "gbar_jam_db" => Axis::GbarJamDb,
            "n_eves" => Axis::NEves,
            "l_all" => Axis::LAll,
            "l_dest" => Axis::LDest,
            "rate_s" => Axis::RateS,
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep axis `{other}` (expected gbar_intf_db, gbar_jam_db, n_eves, l_all, l_dest, rate_s)"
                )))
            }
        })
    }

    fn apply(self, cfg: &mut RunConfig, v: f64) -> Result<()> {
        match self {
            Axis::GbarIntfDb => cfg.set_gbar_intf(db_to_linear(v)),
            Axis::GbarJamDb => {
                // an explicit jammer budget overrides any lockstep tie
                cfg.lockstep.rho_j = None;
                cfg.network.gbar_jam = db_to_linear(v);
            }
            Axis::NEves => {
                let m = count(self, v)?;
                let l = *cfg.network.l_eve.first().ok_or_else(|| {
                    Error::Config("cannot resize an empty eavesdropper list".into())
                })?;
                cfg.network.n_eves = m;
                cfg.network.l_eve = vec![l; m as usize];
            }
            Axis::LAll => {
                let l = count(self, v)?;
                cfg.network.l_relay = l;
                cfg.network.l_dest = l;
                cfg.network.l_eve = vec![l; cfg.network.n_eves as usize];
            }
            Axis::LDest => cfg.network.l_dest = count(self, v)?,
            Axis::RateS => {
                if v < 0.0 {
                    return Err(Error::Config(format!("rate_s must be >= 0, got {v}")));
                }
                cfg.network.rate_s = v;
            }
        }
        Ok(())
    }
}

fn count(axis: Axis, v: f64) -> Result<u32> {
    if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
        return Err(Error::Config(format!(
            "axis {} needs a positive integer, got {v}",
            axis.key()
        )));
    }
    Ok(v as u32)
}

/// Parses sweep grid values: either a comma list `0,5,10` or an inclusive
/// range `start:stop:step`.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = if parts.len() == 3 {
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad range bound `{p}`")))
            })
            .collect::<Result<_>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || stop < start {
            return Err(Error::Config(format!(
                "range must satisfy start <= stop with positive step, got `{s}`"
            )));
        }
        let n = ((stop - start) / step).round() as usize;
        (0..=n)
            .map(|i| start + step * i as f64)
            .filter(|&v| v <= stop + 1e-9 * step)
            .collect()
    } else {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad sweep value `{p}`")))
            })
            .collect::<Result<Vec<f64>>>()?
    };
    if values.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: Scenario,
    /// Curve label within a figure; empty for plain sweeps.
    pub label: String,
    pub axis: &'static str,
    pub x: f64,
    pub method: Method,
    pub value: f64,
    /// Monte Carlo standard error; absent for the analytic routes.
    pub std_err: Option<f64>,
}

fn eval_one(cfg: &RunConfig, method: Method) -> Result<(f64, Option<f64>)> {
    match method {
        Method::Exact => Ok((
            sop_system(&cfg.network, &cfg.fading, cfg.scenario, cfg.tol)?.system,
            None,
        )),
        Method::Asymptotic => Ok((
            sop_system_asymptotic(&cfg.network, &cfg.fading, cfg.scenario, cfg.tol)?.clamped,
            None,
        )),
        Method::MonteCarlo => {
            let est = estimate_sop(
                &cfg.network,
                &cfg.fading,
                cfg.scenario,
                McOptions::new(cfg.mc_samples, cfg.seed),
            )?;
            Ok((est.p_hat, Some(est.std_err)))
        }
    }
}

/// Evaluates one configuration under every requested method.
pub fn run_point(cfg: &RunConfig, methods: &[Method]) -> Result<Vec<ResultRow>> {
    run_labeled_sweep(
        cfg,
        "",
        Axis::GbarIntfDb,
        &[linear_to_db(cfg.network.gbar_intf)],
        methods,
    )
}

/// Evaluates a grid of axis values under every requested method. Row order
/// is the cartesian order (value-major, then method), independent of how the
/// work is scheduled.
pub fn run_sweep(
    cfg: &RunConfig,
    axis: Axis,
    values: &[f64],
    methods: &[Method],
) -> Result<Vec<ResultRow>> {
    run_labeled_sweep(cfg, "", axis, values, methods)
}

fn run_labeled_sweep(
    cfg: &RunConfig,
    label: &str,
    axis: Axis,
    values: &[f64],
    methods: &[Method],
) -> Result<Vec<ResultRow>> {
    let mut tasks = Vec::with_capacity(values.len() * methods.len());
    for &x in values {
        let mut point = cfg.clone();
        axis.apply(&mut point, x)?;
        point.network.validate(point.scenario)?;
        for &method in methods {
            tasks.push((x, method, point.clone()));
        }
    }
    tasks
        .par_iter()
        .map(|(x, method, point)| {
            let (value, std_err) = eval_one(point, *method)?;
            Ok(ResultRow {
                scenario: point.scenario,
                label: label.to_string(),
                axis: axis.key(),
                x: *x,
                method: *method,
                value,
                std_err,
            })
        })
        .collect()
}

/// Writes rows as CSV with values at ten significant digits.
pub fn write_csv<W: Write>(rows: &[ResultRow], w: &mut W) -> Result<()> {
    writeln!(w, "scenario,label,axis,x,method,value,std_err")?;
    for r in rows {
        let se = match r.std_err {
            Some(s) => format!("{s:.9e}"),
            None => String::new(),
        };
        writeln!(
            w,
            "{},{},{},{},{},{:.9e},{}",
            r.scenario.label(),
            r.label,
            r.axis,
            r.x,
            r.method.as_str(),
            r.value,
            se
        )?;
    }
    Ok(())
}

fn figure_base(cfg: &RunConfig) -> RunConfig {
    let mut base = RunConfig::reference();
    base.mc_samples = cfg.mc_samples;
    base.seed = cfg.seed;
    base.tol = cfg.tol;
    base
}

// all node budgets pinned to 20 dB, no lockstep ties
fn pin_budgets(cfg: &mut RunConfig) {
    cfg.lockstep.sigma = None;
    cfg.lockstep.delta = None;
    cfg.lockstep.rho_j = None;
    cfg.network.gbar_intf = 100.0;
    cfg.network.gbar_src = 100.0;
    cfg.network.gbar_relay = 100.0;
    cfg.network.gbar_jam = 100.0;
}

/// Produces the rows for one of the stock figures (2 through 7).
///
/// 2: outage vs interference budget with a jammer, arrays of 1..3 antennas,
///    all node budgets tied at ten times the interference budget.
/// 3: the same grid without the jammer.
/// 4: outage vs jammer budget, everything else pinned at 20 dB.
/// 5: outage vs eavesdropper count for jammer budgets 10/20/30 dB and the
///    no-jammer baseline, with a four-antenna destination.
/// 6: as 5 at the reference two-antenna destination.
/// 7: outage vs eavesdropper count, scenario crossed with the antenna
///    split: L=2 puts two antennas on the relay and destination against
///    single-antenna eavesdroppers, L=1 puts a single antenna on the
///    legitimate nodes against two-antenna eavesdroppers.
pub fn reproduce_figure(fig: u8, cfg: &RunConfig, methods: &[Method]) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    match fig {
        2 | 3 => {
            let grid = parse_values("0:30:2")?;
            for l in 1..=3u32 {
                let mut base = figure_base(cfg);
                base.scenario = if fig == 2 { Scenario::Jammer } else { Scenario::NoJammer };
                Axis::LAll.apply(&mut base, l as f64)?;
                rows.extend(run_labeled_sweep(&base, &format!("L={l}"), Axis::GbarIntfDb, &grid, methods)?);
            }
        }
        4 => {
            let grid = parse_values("0:30:2")?;
            for l in 1..=3u32 {
                let mut base = figure_base(cfg);
                base.scenario = Scenario::Jammer;
                pin_budgets(&mut base);
                Axis::LAll.apply(&mut base, l as f64)?;
                rows.extend(run_labeled_sweep(&base, &format!("L={l}"), Axis::GbarJamDb, &grid, methods)?);
            }
        }
        5 | 6 => {
            let grid = parse_values("1:8:1")?;
            for sj_db in [10.0, 20.0, 30.0] {
                let mut base = figure_base(cfg);
                base.scenario = Scenario::Jammer;
                pin_budgets(&mut base);
                if fig == 5 {
                    base.network.l_dest = 4;
                }
                base.network.gbar_jam = db_to_linear(sj_db);
                let label = format!("jam {sj_db} dB");
                rows.extend(run_labeled_sweep(&base, &label, Axis::NEves, &grid, methods)?);
            }
            let mut base = figure_base(cfg);
            base.scenario = Scenario::NoJammer;
            pin_budgets(&mut base);
            if fig == 5 {
                base.network.l_dest = 4;
            }
            rows.extend(run_labeled_sweep(&base, "no jammer", Axis::NEves, &grid, methods)?);
        }
        7 => {
            let grid = parse_values("1:8:1")?;
            for scenario in [Scenario::Jammer, Scenario::NoJammer] {
                for l in [1u32, 2] {
                    let mut base = figure_base(cfg);
                    base.scenario = scenario;
                    pin_budgets(&mut base);
                    base.network.l_relay = l;
                    base.network.l_dest = l;
                    // antennas move between camps: whoever has one of the two
                    // diversity budgets, the other side gets the remaining one
                    base.network.l_eve = vec![3 - l; base.network.n_eves as usize];
                    let label = format!("{} L={l}", scenario.label());
                    rows.extend(run_labeled_sweep(&base, &label, Axis::NEves, &grid, methods)?);
                }
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown figure {other} (expected 2 through 7)"
            )))
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_and_axis_parsing() {
        assert_eq!(
            Method::parse_list("exact,asym,mc").unwrap(),
            vec![Method::Exact, Method::Asymptotic, Method::MonteCarlo]
        );
        assert!(Method::parse_list("exact,exact").is_err());
        assert!(Method::parse_list("guess").is_err());
        assert_eq!(Axis::parse("rate_s").unwrap(), Axis::RateS);
        assert!(Axis::parse("bogus").is_err());
    }

    #[test]
    fn value_grids() {
        assert_eq!(parse_values("0:30:10").unwrap(), vec![0.0, 10.0, 20.0, 30.0]);
        assert_eq!(parse_values("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert_eq!(parse_values("7").unwrap(), vec![7.0]);
        assert!(parse_values("3:1:1").is_err());
        assert!(parse_values("0:10:0").is_err());
        assert!(parse_values("a,b").is_err());
    }

    #[test]
    fn axis_application_respects_lockstep_ties() {
        let mut cfg = RunConfig::reference();
        Axis::GbarIntfDb.apply(&mut cfg, 20.0).unwrap();
        assert!((cfg.network.gbar_intf - 100.0).abs() < 1e-9);
        assert!((cfg.network.gbar_src - 1000.0).abs() < 1e-6);
        Axis::GbarJamDb.apply(&mut cfg, 5.0).unwrap();
        assert_eq!(cfg.lockstep.rho_j, None);
        Axis::GbarIntfDb.apply(&mut cfg, 10.0).unwrap();
        assert!((cfg.network.gbar_jam - db_to_linear(5.0)).abs() < 1e-9);
        Axis::NEves.apply(&mut cfg, 5.0).unwrap();
        assert_eq!(cfg.network.l_eve, vec![2; 5]);
        assert!(Axis::NEves.apply(&mut cfg, 2.5).is_err());
        assert!(Axis::LAll.apply(&mut cfg, 0.0).is_err());
    }

    #[test]
    fn csv_output_is_stable() {
        let rows = vec![
            ResultRow {
                scenario: Scenario::Jammer,
                label: "L=2".into(),
                axis: "gbar_intf_db",
                x: 10.0,
                method: Method::Exact,
                value: 0.123456789012345,
                std_err: None,
            },
            ResultRow {
                scenario: Scenario::NoJammer,
                label: String::new(),
                axis: "rate_s",
                x: 0.5,
                method: Method::MonteCarlo,
                value: 3.25e-4,
                std_err: Some(1.8e-5),
            },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scenario,label,axis,x,method,value,std_err\n\
             jammer,L=2,gbar_intf_db,10,exact,1.234567890e-1,\n\
             nojammer,,rate_s,0.5,mc,3.250000000e-4,1.800000000e-5\n"
        );
    }

    #[test]
    fn sweeps_preserve_cartesian_order_and_are_reproducible() {
        let mut cfg = RunConfig::reference();
        cfg.mc_samples = 20_000;
        cfg.network.n_eves = 2;
        cfg.network.l_eve = vec![2, 2];
        let methods = [Method::Exact, Method::MonteCarlo];
        let values = [5.0, 15.0];
        let a = run_sweep(&cfg, Axis::GbarIntfDb, &values, &methods).unwrap();
        let b = run_sweep(&cfg, Axis::GbarIntfDb, &values, &methods).unwrap();
        assert_eq!(a, b);
        let keys: Vec<(f64, Method)> = a.iter().map(|r| (r.x, r.method)).collect();
        assert_eq!(
            keys,
            vec![
                (5.0, Method::Exact),
                (5.0, Method::MonteCarlo),
                (15.0, Method::Exact),
                (15.0, Method::MonteCarlo),
            ]
        );
        for r in &a {
            assert!(r.value >= 0.0 && r.value <= 1.0);
            assert_eq!(r.std_err.is_some(), r.method == Method::MonteCarlo);
        }
        // exact and simulation should already be close at modest sample count
        assert!((a[0].value - a[1].value).abs() < 6.0 * a[1].std_err.unwrap() + 1e-3);
    }

    #[test]
    fn figure_grids_have_the_documented_shape() {
        let cfg = RunConfig::reference();
        let rows = reproduce_figure(2, &cfg, &[Method::Exact]).unwrap();
        assert_eq!(rows.len(), 3 * 16);
        assert!(rows.iter().all(|r| r.scenario == Scenario::Jammer));
        assert_eq!(rows[0].label, "L=1");
        assert_eq!(rows.last().unwrap().label, "L=3");
        assert_eq!(rows[0].x, 0.0);
        assert_eq!(rows.last().unwrap().x, 30.0);

        let rows = reproduce_figure(7, &cfg, &[Method::Exact]).unwrap();
        assert_eq!(rows.len(), 4 * 8);
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert!(labels.contains(&"jammer L=1"));
        assert!(labels.contains(&"nojammer L=2"));
        assert!(reproduce_figure(9, &cfg, &[Method::Exact]).is_err());
    }
}
