use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use ddm_cli::csv::{self, RecordWriter};
use ddm_cli::{compute_scaling, default_thread_sweep, rss, run_suite, SuiteConfig, SuiteError};
use ddm_core::{
    generate_workload, io as extent_io, match_dd, Algorithm, Extent, MatchParams, ReportMode,
    WorkloadConfig, DEFAULT_GRID_CELLS, DEFAULT_SPACE_LENGTH,
};

#[derive(Parser)]
#[command(
    name = "ddm",
    version,
    about = "Extent-matching workloads, matchers and benchmarks for data distribution management"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded workload file plus its .meta.json sidecar
    Gen(GenArgs),
    /// Run one matcher and print the match count and wall-clock time
    Match(MatchArgs),
    /// Run a benchmark suite, writing raw records and aggregates as CSV
    Bench(BenchArgs),
    /// Compute speedup and scaling efficiencies from a records CSV
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Total extent count N (half subscriptions, half updates)
    #[arg(long)]
    n: usize,
    /// Overlapping degree alpha = N*l/L
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    #[arg(long = "space-length", default_value_t = DEFAULT_SPACE_LENGTH)]
    space_length: f64,
    /// Output path for the extent file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MatchArgs {
    /// Algorithm: bf, grid, itm, sbm or sbm-par
    #[arg(long)]
    algo: String,
    /// Load the workload from an extent file instead of generating one
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Total extent count N (generated workloads)
    #[arg(long)]
    n: Option<usize>,
    /// Overlapping degree alpha (generated workloads)
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long = "grid-cells", default_value_t = DEFAULT_GRID_CELLS)]
    grid_cells: usize,
    /// count or list
    #[arg(long, default_value = "count")]
    mode: String,
    #[arg(long = "space-length", default_value_t = DEFAULT_SPACE_LENGTH)]
    space_length: f64,
    /// Exit with code 3 when the run exceeds this budget
    #[arg(long = "time-budget-secs", default_value_t = ddm_cli::DEFAULT_TIME_BUDGET_SECS)]
    time_budget_secs: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated algorithms (bf,grid,itm,sbm,sbm-par)
    #[arg(long = "algo", value_delimiter = ',', required = true)]
    algos: Vec<String>,
    /// Comma-separated extent counts
    #[arg(long = "n", value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Comma-separated overlapping degrees
    #[arg(long = "alpha", value_delimiter = ',', default_values_t = [0.01, 1.0, 100.0])]
    alphas: Vec<f64>,
    /// Comma-separated worker counts; default: powers of two up to twice the
    /// physical cores
    #[arg(long = "threads", value_delimiter = ',')]
    threads: Option<Vec<usize>>,
    #[arg(long, default_value_t = 30)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// count or list
    #[arg(long, default_value = "count")]
    mode: String,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    #[arg(long = "grid-cells", default_value_t = DEFAULT_GRID_CELLS)]
    grid_cells: usize,
    #[arg(long = "space-length", default_value_t = DEFAULT_SPACE_LENGTH)]
    space_length: f64,
    /// Combinations whose warmup exceeds this budget are skipped
    #[arg(long = "time-budget-secs", default_value_t = ddm_cli::DEFAULT_TIME_BUDGET_SECS)]
    time_budget_secs: u64,
    /// Records CSV path; aggregates go to `<out>.agg.csv`
    #[arg(long)]
    out: PathBuf,
    /// Regenerate the workload with seed+rep for each repetition
    #[arg(long = "fresh-seeds")]
    fresh_seeds: bool,
}

#[derive(Args)]
struct ScalingArgs {
    /// Records CSV produced by `ddm bench`
    #[arg(long = "in")]
    input: PathBuf,
    /// Output CSV; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Process failure with its exit code: 1 config, 2 runtime, 3 budget.
enum Failure {
    Config(String),
    Runtime(String),
    Budget { wct_seconds: f64, budget_secs: u64 },
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
            Failure::Budget { .. } => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) => format!("configuration error: {m}"),
            Failure::Runtime(m) => format!("runtime error: {m}"),
            Failure::Budget {
                wct_seconds,
                budget_secs,
            } => format!("time budget exceeded: run took {wct_seconds}s, budget {budget_secs}s"),
        }
    }
}

fn config<E: std::fmt::Display>(err: E) -> Failure {
    Failure::Config(err.to_string())
}

fn runtime<E: std::fmt::Display>(err: E) -> Failure {
    Failure::Runtime(err.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Match(args) => cmd_match(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Scaling(args) => cmd_scaling(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("ddm: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let cfg = WorkloadConfig {
        total_extents: args.n,
        alpha: args.alpha,
        space_length: args.space_length,
        seed: args.seed,
        dims: args.dims,
    };
    let (subs, upds) = generate_workload(&cfg).map_err(config)?;
    extent_io::save_workload(&cfg, &subs, &upds, &args.out).map_err(runtime)?;
    println!(
        "wrote {} subscriptions and {} updates to {} (l = {})",
        subs.len(),
        upds.len(),
        args.out.display(),
        cfg.extent_length()
    );
    Ok(())
}

fn load_or_generate(args: &MatchArgs) -> Result<(Vec<Extent>, Vec<Extent>, u64), Failure> {
    if let Some(path) = &args.input {
        let (subs, upds) = extent_io::load_extents(path).map_err(runtime)?;
        return Ok((subs, upds, args.seed));
    }
    let (Some(n), Some(alpha)) = (args.n, args.alpha) else {
        return Err(Failure::Config(
            "either --in or both --n and --alpha are required".into(),
        ));
    };
    let cfg = WorkloadConfig {
        total_extents: n,
        alpha,
        space_length: args.space_length,
        seed: args.seed,
        dims: args.dims,
    };
    let (subs, upds) = generate_workload(&cfg).map_err(config)?;
    Ok((subs, upds, args.seed))
}

fn cmd_match(args: MatchArgs) -> Result<(), Failure> {
    let algo: Algorithm = args.algo.parse().map_err(config)?;
    let mode: ReportMode = args.mode.parse().map_err(config)?;
    if args.threads == 0 {
        return Err(Failure::Config("--threads must be at least 1".into()));
    }
    let (subs, upds, seed) = load_or_generate(&args)?;
    let params = MatchParams {
        mode,
        workers: args.threads,
        grid_cells: args.grid_cells,
        space_length: args.space_length,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(runtime)?;
    let started = Instant::now();
    let report = pool
        .install(|| match_dd(algo, &subs, &upds, &params))
        .map_err(runtime)?;
    let wct_seconds = started.elapsed().as_secs_f64();

    println!(
        "algorithm={} n={} m={} P={} mode={} seed={}",
        algo,
        subs.len(),
        upds.len(),
        args.threads,
        mode,
        seed
    );
    println!("K={}", report.count());
    println!("wct_seconds={wct_seconds}");
    if wct_seconds > args.time_budget_secs as f64 {
        return Err(Failure::Budget {
            wct_seconds,
            budget_secs: args.time_budget_secs,
        });
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let algorithms = args
        .algos
        .iter()
        .map(|s| s.parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(config)?;
    let mode: ReportMode = args.mode.parse().map_err(config)?;
    let thread_counts = args.threads.clone().unwrap_or_else(default_thread_sweep);

    let mut cfg = SuiteConfig::new(
        algorithms,
        args.ns.clone(),
        args.alphas.clone(),
        thread_counts,
        args.reps,
        args.seed,
    );
    cfg.mode = mode;
    cfg.dims = args.dims;
    cfg.grid_cells = args.grid_cells;
    cfg.space_length = args.space_length;
    cfg.time_budget = Duration::from_secs(args.time_budget_secs);
    cfg.fresh_seeds = args.fresh_seeds;

    let out = File::create(&args.out).map_err(runtime)?;
    let mut writer = RecordWriter::new(BufWriter::new(out), rss::supported()).map_err(runtime)?;
    let outcome = run_suite(&cfg, |record| {
        writer.write(record)?;
        Ok(())
    });
    let report = outcome.map_err(|e| match e {
        SuiteError::Config(msg) => Failure::Config(msg),
        other => runtime(other),
    })?;
    writer.finish().map_err(runtime)?;

    let agg_path = aggregate_path(&args.out);
    let agg_file = File::create(&agg_path).map_err(runtime)?;
    csv::write_aggregates(BufWriter::new(agg_file), &report.aggregates).map_err(runtime)?;

    for skip in &report.skipped {
        eprintln!(
            "skipped {} N={} alpha={} P={}: {}",
            skip.algorithm, skip.n, skip.alpha, skip.p, skip.reason
        );
    }
    println!(
        "wrote {} records to {} and {} aggregates to {}",
        report.records.len(),
        args.out.display(),
        report.aggregates.len(),
        agg_path.display()
    );
    Ok(())
}

fn aggregate_path(records_path: &std::path::Path) -> PathBuf {
    let mut name = records_path.as_os_str().to_os_string();
    name.push(".agg.csv");
    PathBuf::from(name)
}

fn cmd_scaling(args: ScalingArgs) -> Result<(), Failure> {
    let file = File::open(&args.input).map_err(runtime)?;
    let records = csv::read_records(BufReader::new(file)).map_err(runtime)?;
    let summary = compute_scaling(&records);
    for note in &summary.missing_baselines {
        eprintln!("missing baseline: {note}");
    }
    match &args.out {
        Some(path) => {
            let out = File::create(path).map_err(runtime)?;
            csv::write_scaling(BufWriter::new(out), &summary).map_err(runtime)?;
        }
        None => {
            let stdout = std::io::stdout();
            csv::write_scaling(stdout.lock(), &summary).map_err(runtime)?;
        }
    }
    Ok(())
}
