//! The matching algorithms and the d-dimensional dispatch wrapper.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::extent::{consistent_dims, intersect_1d, Extent};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

mod brute_force;
mod grid;
mod interval_tree;
mod sbm;

pub use brute_force::match_brute_force;
pub use grid::{match_grid, GridIndex};
pub use interval_tree::{match_interval_tree, IntervalTree, TreeView};
pub use sbm::match_sbm_seq;

pub(crate) use sbm::{sweep_count as sbm_sweep_count, sweep_list as sbm_sweep_list};

/// Default routing-space length L.
pub const DEFAULT_SPACE_LENGTH: f64 = 1e6;

/// Default grid cell count for the grid-based matcher.
pub const DEFAULT_GRID_CELLS: usize = 64;

/// The matching algorithms selectable through the CLI and the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BruteForce,
    Grid,
    IntervalTree,
    SbmSeq,
    SbmPar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::BruteForce,
        Algorithm::Grid,
        Algorithm::IntervalTree,
        Algorithm::SbmSeq,
        Algorithm::SbmPar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::BruteForce => "bf",
            Algorithm::Grid => "grid",
            Algorithm::IntervalTree => "itm",
            Algorithm::SbmSeq => "sbm",
            Algorithm::SbmPar => "sbm-par",
        }
    }

    /// Whether the algorithm makes use of more than one worker.
    pub fn is_parallel(&self) -> bool {
        matches!(
            self,
            Algorithm::BruteForce | Algorithm::IntervalTree | Algorithm::SbmPar
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bf" => Ok(Algorithm::BruteForce),
            "grid" => Ok(Algorithm::Grid),
            "itm" => Ok(Algorithm::IntervalTree),
            "sbm" => Ok(Algorithm::SbmSeq),
            "sbm-par" => Ok(Algorithm::SbmPar),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// Knobs shared by all matchers. `workers` is honored by the parallel
/// algorithms only; `grid_cells` and `space_length` only by the grid matcher.
#[derive(Debug, Clone)]
pub struct MatchParams {
    pub mode: ReportMode,
    pub workers: usize,
    pub grid_cells: usize,
    pub space_length: f64,
}

impl Default for MatchParams {
    fn default() -> Self {
        Self {
            mode: ReportMode::Count,
            workers: 1,
            grid_cells: DEFAULT_GRID_CELLS,
            space_length: DEFAULT_SPACE_LENGTH,
        }
    }
}

fn match_1d(
    algo: Algorithm,
    subs: &[Extent],
    upds: &[Extent],
    params: &MatchParams,
    mode: ReportMode,
) -> Result<PairReport, Error> {
    match algo {
        Algorithm::BruteForce => match_brute_force(subs, upds, mode, params.workers),
        Algorithm::Grid => match_grid(subs, upds, params.grid_cells, params.space_length, mode),
        Algorithm::IntervalTree => match_interval_tree(subs, upds, mode, params.workers),
        Algorithm::SbmSeq => match_sbm_seq(subs, upds, mode),
        Algorithm::SbmPar => crate::parallel::match_sbm_parallel(subs, upds, params.workers, mode),
    }
}

/// Runs the chosen matcher over d-dimensional extents.
///
/// Brute force tests all dimensions directly. Every other algorithm matches
/// on dimension 0 and filters the candidate pairs with the 1-D overlap test
/// on the remaining dimensions, so the result equals the set of pairs whose
/// projections overlap on every dimension.
pub fn match_dd(
    algo: Algorithm,
    subs: &[Extent],
    upds: &[Extent],
    params: &MatchParams,
) -> Result<PairReport, Error> {
    let dims = consistent_dims(subs, upds)?;
    if algo == Algorithm::BruteForce || dims == 1 {
        return match_1d(algo, subs, upds, params, params.mode);
    }

    let candidates = match_1d(algo, subs, upds, params, ReportMode::List)?;
    let sub_by_id: HashMap<u32, &Extent> = subs.iter().map(|e| (e.id(), e)).collect();
    let upd_by_id: HashMap<u32, &Extent> = upds.iter().map(|e| (e.id(), e)).collect();

    let mut out = ReportBuilder::new(params.mode);
    for &(s, u) in candidates.pairs().expect("list mode") {
        let se = sub_by_id[&s];
        let ue = upd_by_id[&u];
        let survives = (1..dims).all(|d| intersect_1d(se.interval(d), ue.interval(d)));
        if survives {
            out.emit(s, u);
        }
    }
    Ok(out.finish())
}
