//! The benchmark suite runner: generates workloads, times matcher runs and
//! aggregates the measurements.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use ddm_core::{
    generate_workload, match_dd, Algorithm, Extent, MatchParams, ReportMode, WorkloadConfig,
    DEFAULT_GRID_CELLS, DEFAULT_SPACE_LENGTH,
};
use thiserror::Error;

use crate::rss::PeakRss;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("suite config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ddm_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("thread pool: {0}")]
    Pool(String),

    #[error(
        "match count diverged: {algorithm} at N={n} alpha={alpha} P={p} seed={seed} \
         reported K={got} but an earlier run of the same workload reported K={expected}"
    )]
    CountMismatch {
        algorithm: Algorithm,
        n: usize,
        alpha: f64,
        p: usize,
        seed: u64,
        got: u64,
        expected: u64,
    },
}

/// One benchmark suite: the cross product of algorithms, extent counts,
/// overlapping degrees and worker counts, each measured `reps` times after
/// one discarded warmup run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub algorithms: Vec<Algorithm>,
    pub extent_counts: Vec<usize>,
    pub alphas: Vec<f64>,
    pub thread_counts: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub mode: ReportMode,
    pub dims: usize,
    pub grid_cells: usize,
    pub space_length: f64,
    /// Combinations whose warmup run exceeds this budget are skipped.
    pub time_budget: Duration,
    /// Regenerate the workload with seed + rep for every repetition instead
    /// of timing the same workload `reps` times.
    pub fresh_seeds: bool,
}

impl SuiteConfig {
    pub fn new(
        algorithms: Vec<Algorithm>,
        extent_counts: Vec<usize>,
        alphas: Vec<f64>,
        thread_counts: Vec<usize>,
        reps: usize,
        seed: u64,
    ) -> Self {
        Self {
            algorithms,
            extent_counts,
            alphas,
            thread_counts,
            reps,
            seed,
            mode: ReportMode::Count,
            dims: 1,
            grid_cells: DEFAULT_GRID_CELLS,
            space_length: DEFAULT_SPACE_LENGTH,
            time_budget: Duration::from_secs(DEFAULT_TIME_BUDGET_SECS),
            fresh_seeds: false,
        }
    }

    fn validate(&self) -> Result<(), SuiteError> {
        if self.algorithms.is_empty() {
            return Err(SuiteError::Config("no algorithms selected".into()));
        }
        if self.extent_counts.is_empty() || self.alphas.is_empty() {
            return Err(SuiteError::Config("empty extent count or alpha list".into()));
        }
        if self.thread_counts.is_empty() || self.thread_counts.contains(&0) {
            return Err(SuiteError::Config(
                "thread counts must be a non-empty list of positive values".into(),
            ));
        }
        if self.reps == 0 {
            return Err(SuiteError::Config("reps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Default per-run time budget in seconds.
pub const DEFAULT_TIME_BUDGET_SECS: u64 = 300;

/// One timed matcher run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub alpha: f64,
    pub p: usize,
    pub rep: usize,
    pub seed: u64,
    pub mode: ReportMode,
    pub wct_seconds: f64,
    pub matches: u64,
    pub peak_rss_bytes: Option<u64>,
}

/// Per-combination mean and standard deviation over the timed repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub n: usize,
    pub alpha: f64,
    pub p: usize,
    pub mode: ReportMode,
    pub reps: usize,
    pub mean_wct_seconds: f64,
    pub std_wct_seconds: f64,
    pub matches: u64,
}

#[derive(Debug, Clone)]
pub struct SkippedCombo {
    pub algorithm: Algorithm,
    pub n: usize,
    pub alpha: f64,
    pub p: usize,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<BenchRecord>,
    pub aggregates: Vec<Aggregate>,
    pub skipped: Vec<SkippedCombo>,
}

/// Runs the whole suite, streaming each record to `on_record` as it is
/// measured.
///
/// Workloads are generated once per `(N, alpha, seed)` and shared across
/// algorithms and worker counts; only the matcher call is timed. Every run of
/// the same workload must report the same match count, whatever the
/// algorithm or worker count; a divergence aborts the suite. Exactly one
/// timed matcher runs at a time, inside a dedicated pool of `P` threads.
pub fn run_suite(
    cfg: &SuiteConfig,
    mut on_record: impl FnMut(&BenchRecord) -> Result<(), SuiteError>,
) -> Result<SuiteReport, SuiteError> {
    cfg.validate()?;
    let mut report = SuiteReport::default();
    let mut expected_counts: HashMap<(usize, u64, u64), u64> = HashMap::new();

    for &n in &cfg.extent_counts {
        for &alpha in &cfg.alphas {
            let base = Workload::generate(cfg, n, alpha, cfg.seed)?;
            for &algorithm in &cfg.algorithms {
                let thread_counts: &[usize] = if algorithm.is_parallel() {
                    &cfg.thread_counts
                } else {
                    // Single-threaded matchers run once per combination.
                    &[1]
                };
                for &p in thread_counts {
                    run_combination(
                        cfg,
                        algorithm,
                        n,
                        alpha,
                        p,
                        &base,
                        &mut expected_counts,
                        &mut report,
                        &mut on_record,
                    )?;
                }
            }
        }
    }
    Ok(report)
}

struct Workload {
    seed: u64,
    subs: Vec<Extent>,
    upds: Vec<Extent>,
}

impl Workload {
    fn generate(cfg: &SuiteConfig, n: usize, alpha: f64, seed: u64) -> Result<Self, SuiteError> {
        let wcfg = WorkloadConfig {
            total_extents: n,
            alpha,
            space_length: cfg.space_length,
            seed,
            dims: cfg.dims,
        };
        let (subs, upds) = generate_workload(&wcfg)?;
        Ok(Self { seed, subs, upds })
    }
}

#[allow(clippy::too_many_arguments)]
fn run_combination(
    cfg: &SuiteConfig,
    algorithm: Algorithm,
    n: usize,
    alpha: f64,
    p: usize,
    base: &Workload,
    expected_counts: &mut HashMap<(usize, u64, u64), u64>,
    report: &mut SuiteReport,
    on_record: &mut impl FnMut(&BenchRecord) -> Result<(), SuiteError>,
) -> Result<(), SuiteError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p)
        .build()
        .map_err(|e| SuiteError::Pool(e.to_string()))?;
    let params = MatchParams {
        mode: cfg.mode,
        workers: p,
        grid_cells: cfg.grid_cells,
        space_length: cfg.space_length,
    };

    // Holds the per-rep workload in fresh-seeds mode.
    let mut fresh: Option<Workload> = None;
    let rep_workload = |rep: usize, fresh: &mut Option<Workload>| -> Result<(), SuiteError> {
        if cfg.fresh_seeds {
            *fresh = Some(Workload::generate(
                cfg,
                n,
                alpha,
                cfg.seed.wrapping_add(rep as u64),
            )?);
        }
        Ok(())
    };

    // Warmup: one untimed run, which doubles as the budget gate.
    rep_workload(0, &mut fresh)?;
    let warm = fresh.as_ref().unwrap_or(base);
    let started = Instant::now();
    let warm_report = pool.install(|| match_dd(algorithm, &warm.subs, &warm.upds, &params))?;
    let warm_wct = started.elapsed();
    check_count(
        expected_counts,
        algorithm,
        n,
        alpha,
        p,
        warm.seed,
        warm_report.count(),
    )?;
    if warm_wct > cfg.time_budget {
        report.skipped.push(SkippedCombo {
            algorithm,
            n,
            alpha,
            p,
            reason: format!(
                "warmup run took {:.3}s, over the {:.3}s budget",
                warm_wct.as_secs_f64(),
                cfg.time_budget.as_secs_f64()
            ),
        });
        return Ok(());
    }

    let mut wcts = Vec::with_capacity(cfg.reps);
    let mut matches = warm_report.count();
    for rep in 0..cfg.reps {
        rep_workload(rep, &mut fresh)?;
        let workload = fresh.as_ref().unwrap_or(base);
        let probe = PeakRss::begin();
        let (wct_seconds, run) = pool.install(|| {
            let started = Instant::now();
            let run = match_dd(algorithm, &workload.subs, &workload.upds, &params);
            (started.elapsed().as_secs_f64(), run)
        });
        let run = run?;
        let peak_rss_bytes = probe.and_then(PeakRss::end);
        check_count(
            expected_counts,
            algorithm,
            n,
            alpha,
            p,
            workload.seed,
            run.count(),
        )?;
        matches = run.count();
        wcts.push(wct_seconds);
        let record = BenchRecord {
            algorithm,
            n,
            alpha,
            p,
            rep,
            seed: workload.seed,
            mode: cfg.mode,
            wct_seconds,
            matches,
            peak_rss_bytes,
        };
        on_record(&record)?;
        report.records.push(record);
    }

    let mean = wcts.iter().sum::<f64>() / wcts.len() as f64;
    let std = if wcts.len() > 1 {
        let var = wcts.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>()
            / (wcts.len() - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    report.aggregates.push(Aggregate {
        algorithm,
        n,
        alpha,
        p,
        mode: cfg.mode,
        reps: cfg.reps,
        mean_wct_seconds: mean,
        std_wct_seconds: std,
        matches,
    });
    Ok(())
}

fn check_count(
    expected_counts: &mut HashMap<(usize, u64, u64), u64>,
    algorithm: Algorithm,
    n: usize,
    alpha: f64,
    p: usize,
    seed: u64,
    got: u64,
) -> Result<(), SuiteError> {
    match expected_counts.insert((n, alpha.to_bits(), seed), got) {
        Some(expected) if expected != got => Err(SuiteError::CountMismatch {
            algorithm,
            n,
            alpha,
            p,
            seed,
            got,
            expected,
        }),
        _ => Ok(()),
    }
}

/// Physical core count: unique (physical id, core id) pairs from
/// /proc/cpuinfo, falling back to the logical count.
pub fn physical_cores() -> usize {
    let logical = std::thread::available_parallelism().map_or(1, |c| c.get());
    let Ok(info) = std::fs::read_to_string("/proc/cpuinfo") else {
        return logical;
    };
    let mut cores = BTreeSet::new();
    let (mut phys, mut core) = (None, None);
    for line in info.lines() {
        let mut split = line.splitn(2, ':');
        let key = split.next().unwrap_or("").trim();
        let value = split.next().unwrap_or("").trim().to_string();
        match key {
            "physical id" => phys = Some(value),
            "core id" => core = Some(value),
            "" => {
                if let (Some(p), Some(c)) = (phys.take(), core.take()) {
                    cores.insert((p, c));
                }
            }
            _ => {}
        }
    }
    if let (Some(p), Some(c)) = (phys, core) {
        cores.insert((p, c));
    }
    if cores.is_empty() {
        logical
    } else {
        cores.len().min(logical)
    }
}

/// Default worker-count sweep: powers of two up to twice the physical cores.
pub fn default_thread_sweep() -> Vec<usize> {
    let limit = 2 * physical_cores();
    let mut sweep = Vec::new();
    let mut p = 1;
    while p <= limit {
        sweep.push(p);
        p *= 2;
    }
    if let Some(&last) = sweep.last() {
        if last != limit {
            sweep.push(limit);
        }
    }
    sweep
}
