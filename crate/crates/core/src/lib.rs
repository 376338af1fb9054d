//! Extent matching for data distribution management on shared-memory
//! machines.
//!
//! Given a set of subscription extents and a set of update extents
//! (axis-parallel d-dimensional rectangles), the matching problem asks for
//! all subscription-update pairs with a nonempty intersection. This crate
//! provides:
//!
//! - the domain types ([`Extent`], [`Interval`], [`PairReport`]) and the 1-D
//!   and d-dimensional overlap predicates;
//! - four baseline matchers: brute force, grid-based, interval-tree and
//!   sequential sort-based matching;
//! - a parallel sort-based matching pipeline built on a set-valued prefix
//!   computation, plus the reusable [`two_level_exclusive_scan`];
//! - a seeded workload generator and a text format for extent sets.
//!
//! All matchers return the same pair set; brute force doubles as the
//! correctness oracle in the test suites. Parallel algorithms run on the
//! current rayon pool and produce identical output for every worker count.

mod endpoints;
mod error;
mod extent;
pub mod io;
mod matchers;
mod parallel;
mod report;
pub mod workload;

pub use endpoints::{build_endpoint_list, build_endpoint_list_parallel, EndpointRecord};
pub use error::Error;
pub use extent::{intersect_1d, intersect_dd, Extent, ExtentKind, Interval};
pub use matchers::{
    match_brute_force, match_dd, match_grid, match_interval_tree, match_sbm_seq, Algorithm,
    GridIndex, IntervalTree, MatchParams, TreeView, DEFAULT_GRID_CELLS, DEFAULT_SPACE_LENGTH,
};
pub use parallel::{
    combine_deltas, final_scan, local_delta_scan, match_sbm_parallel, plan_segments,
    two_level_exclusive_scan, DeltaSets, SegmentPlan, SegmentScan, SweepState,
};
pub use report::{PairReport, ReportMode};
pub use workload::{generate_workload, WorkloadConfig};
