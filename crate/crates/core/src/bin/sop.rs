//! Batch front end: single-point evaluation, axis sweeps, the stock figure
//! grids, and the acceptance self-test.
//!
//! Output is CSV on stdout (or `--output FILE`); progress and timing notes go
//! to stderr. Exit codes: 0 on success, 1 when an evaluation fails or a
//! self-test criterion is red, 2 for usage and configuration errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crn_sop::sweep::parse_values;
use crn_sop::{
    reproduce_figure, run_criterion, run_point, run_sweep, write_csv, Axis, Error, Method,
    ResultRow, RunConfig, Scenario, SelftestOptions,
};

#[derive(Parser)]
#[command(
    name = "sop",
    version,
    about = "Secrecy outage probability of a dual-hop underlay cognitive radio network",
    long_about = "Secrecy outage probability of a dual-hop underlay cognitive radio network \
                  with multi-antenna terminals, Nakagami-m fading, and an optional friendly \
                  jammer.\n\nWithout a config file, commands use the built-in reference \
                  operating point: four sources, three eavesdroppers, two antennas per \
                  receiving array, a 10 dB interference budget with every node budget tied at \
                  ten times that, secrecy rate 0.5, and the stock fading classes (see \
                  `sop point --dump-config`). Config files are flat `key = value` text with \
                  `#` comments; budgets are given in dB via `_db` keys."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point under the requested methods
    Point(PointArgs),
    /// Sweep one axis over a value grid
    Sweep(SweepArgs),
    /// Emit the data grid behind one of the stock figures (2-7)
    Figure(FigureArgs),
    /// Run the acceptance suite: nine numbered cross-validation criteria
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Shared {
    /// Monte Carlo sample count (overrides the config file)
    #[arg(long, value_name = "N")]
    mc_samples: Option<u64>,
    /// Base RNG seed (overrides the config file)
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Relative tolerance for the analytic evaluators (overrides the config file)
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Write CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

impl Shared {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(n) = self.mc_samples {
            cfg.mc_samples = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
    }
}

#[derive(Args)]
struct PointArgs {
    /// Configuration file; defaults to the built-in reference point
    config: Option<PathBuf>,
    /// Comma list drawn from exact, asym, mc
    #[arg(long, value_name = "LIST", default_value = "exact,mc")]
    methods: String,
    /// Print the effective configuration and exit (round-trips through the parser)
    #[arg(long)]
    dump_config: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct SweepArgs {
    /// Configuration file; defaults to the built-in reference point
    config: Option<PathBuf>,
    /// Swept quantity: gbar_intf_db, gbar_jam_db, n_eves, l_all, l_dest, rate_s
    #[arg(long, value_name = "AXIS")]
    axis: String,
    /// Grid as `start:stop:step` or a comma list
    #[arg(long, value_name = "GRID")]
    values: String,
    /// Override the config scenario: jammer, nojammer, or both
    #[arg(long, value_name = "WHICH")]
    scenario: Option<String>,
    /// Comma list drawn from exact, asym, mc
    #[arg(long, value_name = "LIST", default_value = "exact,asym,mc")]
    methods: String,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number, 2 through 7
    id: u8,
    /// Directory for figN.csv and figN.gp-data
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Optional config file; only mc_samples, seed, and tol carry over,
    /// the figure grids pin everything else
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Comma list drawn from exact, asym, mc
    #[arg(long, value_name = "LIST", default_value = "exact,asym,mc")]
    methods: String,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run a single criterion (1-9) instead of the full suite
    #[arg(long, value_name = "ID")]
    criterion: Option<usize>,
    /// Monte Carlo samples per validation cell
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    mc_samples: u64,
    /// Base RNG seed
    #[arg(long, value_name = "S", default_value_t = 1)]
    seed: u64,
    /// Relative tolerance for the analytic evaluators
    #[arg(long, value_name = "T", default_value_t = 1e-10)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Point(args) => cmd_point(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match code {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sop: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

// usage and configuration problems are the caller's to fix; everything else
// is a failure of the run itself
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parameter(_) => 2,
        _ => 1,
    }
}

fn load_config(path: &Option<PathBuf>, shared: &Shared) -> Result<RunConfig, Error> {
    let mut cfg = match path {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::reference(),
    };
    shared.apply(&mut cfg);
    Ok(cfg)
}

fn emit(rows: &[ResultRow], output: &Option<PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            write_csv(rows, &mut file)?;
            eprintln!("sop: wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(rows, &mut stdout.lock())?;
        }
    }
    Ok(())
}

fn cmd_point(args: PointArgs) -> Result<ExitCode, Error> {
    let cfg = load_config(&args.config, &args.shared)?;
    if args.dump_config {
        print!("{}", cfg.dump());
        return Ok(ExitCode::SUCCESS);
    }
    let methods = Method::parse_list(&args.methods)?;
    let start = Instant::now();
    let rows = run_point(&cfg, &methods)?;
    emit(&rows, &args.shared.output)?;
    eprintln!("sop: point done in {:.2?}", start.elapsed());
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let cfg = load_config(&args.config, &args.shared)?;
    let axis = Axis::parse(&args.axis)?;
    let values = parse_values(&args.values)?;
    let methods = Method::parse_list(&args.methods)?;
    let scenarios: Vec<Scenario> = match args.scenario.as_deref() {
        None => vec![cfg.scenario],
        Some("jammer") => vec![Scenario::Jammer],
        Some("nojammer") => vec![Scenario::NoJammer],
        Some("both") => vec![Scenario::Jammer, Scenario::NoJammer],
        Some(other) => {
            return Err(Error::Config(format!(
                "scenario must be jammer, nojammer, or both, got `{other}`"
            )))
        }
    };

    let start = Instant::now();
    let mut rows = Vec::new();
    for scenario in scenarios {
        let mut run = cfg.clone();
        run.scenario = scenario;
        rows.extend(run_sweep(&run, axis, &values, &methods)?);
    }
    // one curve per (scenario, method) block, each ordered along the axis
    rows.sort_by(|a, b| {
        (a.scenario.label(), method_rank(a.method))
            .cmp(&(b.scenario.label(), method_rank(b.method)))
            .then(a.x.total_cmp(&b.x))
    });
    emit(&rows, &args.shared.output)?;
    eprintln!("sop: sweep of {} points done in {:.2?}", rows.len(), start.elapsed());
    Ok(ExitCode::SUCCESS)
}

fn method_rank(m: Method) -> u8 {
    match m {
        Method::Exact => 0,
        Method::Asymptotic => 1,
        Method::MonteCarlo => 2,
    }
}

fn cmd_figure(args: FigureArgs) -> Result<ExitCode, Error> {
    let cfg = load_config(&args.config, &args.shared)?;
    let methods = Method::parse_list(&args.methods)?;
    let start = Instant::now();
    let rows = reproduce_figure(args.id, &cfg, &methods)?;

    fs::create_dir_all(&args.out)
        .map_err(|e| Error::Io(format!("{}: {e}", args.out.display())))?;
    let csv_path = args.out.join(format!("fig{}.csv", args.id));
    let mut csv = fs::File::create(&csv_path)
        .map_err(|e| Error::Io(format!("{}: {e}", csv_path.display())))?;
    write_csv(&rows, &mut csv)?;

    let gp_path = args.out.join(format!("fig{}.gp-data", args.id));
    let mut gp = fs::File::create(&gp_path)
        .map_err(|e| Error::Io(format!("{}: {e}", gp_path.display())))?;
    write_gp_data(&rows, &mut gp)?;

    eprintln!(
        "sop: figure {} ({} rows) done in {:.2?}",
        args.id,
        rows.len(),
        start.elapsed()
    );
    println!("{}", csv_path.display());
    println!("{}", gp_path.display());
    Ok(ExitCode::SUCCESS)
}

/// Plain x/y blocks, one per curve, separated by two blank lines so plotting
/// tools can address them by index.
fn write_gp_data<W: Write>(rows: &[ResultRow], w: &mut W) -> Result<(), Error> {
    let mut curves: Vec<((String, String, Method), Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let key = (r.scenario.label().to_string(), r.label.clone(), r.method);
        match curves.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((r.x, r.value)),
            None => curves.push((key, vec![(r.x, r.value)])),
        }
    }
    for (i, ((scenario, label, method), pts)) in curves.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
            writeln!(w)?;
        }
        writeln!(w, "# {scenario} {label} {}", method.as_str())?;
        for (x, y) in pts {
            writeln!(w, "{x} {y:.9e}")?;
        }
    }
    Ok(())
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode, Error> {
    let opts = SelftestOptions {
        mc_samples: args.mc_samples,
        seed: args.seed,
        tol: args.tol,
    };
    let ids: Vec<usize> = match args.criterion {
        Some(id) => vec![id],
        None => (1..=crn_sop::selftest::CRITERION_COUNT).collect(),
    };
    let mut all_passed = true;
    for id in ids {
        // criteria are streamed as they finish; the grid check alone runs
        // minutes at the full sample budget
        let r = run_criterion(id, &opts);
        println!("{}", r.line());
        std::io::stdout().flush().ok();
        all_passed &= r.passed;
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
