//! Parallel sort-based matching.
//!
//! The sequential sweep carries two loop-dependent sets, so splitting the
//! endpoint list across workers requires knowing the active sets at every
//! segment boundary. The pipeline runs in three phases over a fork-join pool:
//!
//! 1. build and sort the endpoint list (parallel sort);
//! 2. each worker scans its segment into add/del delta sets, then a single
//!    coordinator folds the deltas into the per-segment start states
//!    (a set-valued exclusive prefix computation);
//! 3. each worker sweeps its segment from its start state into a private
//!    buffer, and the buffers are merged in segment order.
//!
//! Workers share the immutable endpoint list and own their deltas, states and
//! buffers exclusively; the two `collect` calls are the only synchronization
//! points. The result is identical for every worker count.

use std::collections::BTreeSet;
use std::ops::Range;

use rayon::prelude::*;

use crate::endpoints::{build_endpoint_list_parallel, EndpointRecord};
use crate::extent::{Extent, ExtentKind};
use crate::matchers::{sbm_sweep_count, sbm_sweep_list};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

mod scan;

pub use scan::two_level_exclusive_scan;

/// A partition of the sorted endpoint list into contiguous segments whose
/// sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPlan {
    boundaries: Vec<usize>,
}

/// Splits `record_count` records into `segments` segments: the first
/// `record_count % segments` take the ceiling size, the rest the floor.
/// Segments may be empty when there are more workers than records.
pub fn plan_segments(record_count: usize, segments: usize) -> Result<SegmentPlan, Error> {
    if segments == 0 {
        return Err(Error::ZeroWorkers);
    }
    let base = record_count / segments;
    let remainder = record_count % segments;
    let mut boundaries = Vec::with_capacity(segments + 1);
    let mut pos = 0;
    boundaries.push(pos);
    for i in 0..segments {
        pos += base + usize::from(i < remainder);
        boundaries.push(pos);
    }
    Ok(SegmentPlan { boundaries })
}

impl SegmentPlan {
    pub fn segment_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn range(&self, segment: usize) -> Range<usize> {
        self.boundaries[segment]..self.boundaries[segment + 1]
    }

    /// Borrows the planned segments out of a slice of records.
    pub fn slices<'a, T>(&self, items: &'a [T]) -> Vec<&'a [T]> {
        (0..self.segment_count())
            .map(|p| &items[self.range(p)])
            .collect()
    }
}

/// Per-segment summary of how the segment's endpoints mutate the active
/// sets: extents becoming active in the segment and still active at its end
/// land in the add sets; extents departing in the segment without having
/// entered in it land in the del sets. An extent whose both endpoints fall in
/// the segment cancels out and appears in neither.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaSets {
    pub sub_add: BTreeSet<u32>,
    pub sub_del: BTreeSet<u32>,
    pub upd_add: BTreeSet<u32>,
    pub upd_del: BTreeSet<u32>,
}

impl DeltaSets {
    /// Add and del sets never share an extent.
    pub fn is_disjoint(&self) -> bool {
        self.sub_add.is_disjoint(&self.sub_del) && self.upd_add.is_disjoint(&self.upd_del)
    }

    /// Total number of ids across the four sets.
    pub fn len(&self) -> usize {
        self.sub_add.len() + self.sub_del.len() + self.upd_add.len() + self.upd_del.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Scans one segment of sweep-ordered records into its delta sets.
///
/// A lower endpoint inserts into the add set; an upper endpoint removes from
/// the add set when its lower bound was seen in this segment, and inserts
/// into the del set otherwise.
pub fn local_delta_scan(records: &[EndpointRecord]) -> DeltaSets {
    let mut delta = DeltaSets::default();
    for r in records {
        match (r.owner_kind, r.is_lower) {
            (ExtentKind::Subscription, true) => {
                delta.sub_add.insert(r.owner_id);
            }
            (ExtentKind::Subscription, false) => {
                if !delta.sub_add.remove(&r.owner_id) {
                    delta.sub_del.insert(r.owner_id);
                }
            }
            (ExtentKind::Update, true) => {
                delta.upd_add.insert(r.owner_id);
            }
            (ExtentKind::Update, false) => {
                if !delta.upd_add.remove(&r.owner_id) {
                    delta.upd_del.insert(r.owner_id);
                }
            }
        }
    }
    delta
}

/// The active subscription and update sets at one segment boundary: exactly
/// the sets the sequential sweep holds right before the segment's first
/// record.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepState {
    pub sub_set: BTreeSet<u32>,
    pub upd_set: BTreeSet<u32>,
}

impl SweepState {
    /// Advances the state across one segment: `(state ∪ add) \ del`, per
    /// kind. Returns the number of delta elements applied.
    ///
    /// Because add and del are disjoint and every del element entered the
    /// sweep in an earlier segment, `(state ∪ add) \ del` and
    /// `(state \ del) ∪ add` agree; the containment is asserted in debug
    /// builds.
    pub fn apply(&mut self, delta: &DeltaSets) -> usize {
        debug_assert!(
            delta.sub_del.iter().all(|id| self.sub_set.contains(id))
                && delta.upd_del.iter().all(|id| self.upd_set.contains(id)),
            "del sets must be contained in the incoming state"
        );
        for &id in &delta.sub_add {
            self.sub_set.insert(id);
        }
        for &id in &delta.sub_del {
            self.sub_set.remove(&id);
        }
        for &id in &delta.upd_add {
            self.upd_set.insert(id);
        }
        for &id in &delta.upd_del {
            self.upd_set.remove(&id);
        }
        delta.len()
    }
}

/// Folds the per-segment deltas into the per-segment start states: the
/// exclusive prefix of the delta sequence under set application, computed by
/// a single coordinator. State 0 is empty; state p applies delta p-1 to
/// state p-1. The last delta is never applied, so the coordinator touches
/// each needed delta element exactly once.
pub fn combine_deltas(deltas: &[DeltaSets]) -> Result<Vec<SweepState>, Error> {
    for (segment, delta) in deltas.iter().enumerate() {
        if !delta.is_disjoint() {
            return Err(Error::DeltaNotDisjoint { segment });
        }
    }
    let mut states = Vec::with_capacity(deltas.len());
    if deltas.is_empty() {
        return Ok(states);
    }
    let mut current = SweepState::default();
    states.push(current.clone());
    for delta in &deltas[..deltas.len() - 1] {
        current.apply(delta);
        states.push(current.clone());
    }
    Ok(states)
}

/// One segment's final sweep output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentScan {
    pub report: PairReport,
    /// Endpoint records this sweep touched; always the segment length.
    pub records_processed: usize,
}

/// Runs the sweep over one segment starting from its boundary state,
/// emitting into a private buffer. In count mode the boundary sets enter
/// through their cardinalities only.
pub fn final_scan(records: &[EndpointRecord], init: SweepState, mode: ReportMode) -> SegmentScan {
    match mode {
        ReportMode::Count => {
            let mut active_subs = init.sub_set.len() as u64;
            let mut active_upds = init.upd_set.len() as u64;
            let mut matches = 0;
            let records_processed =
                sbm_sweep_count(records, &mut active_subs, &mut active_upds, &mut matches);
            SegmentScan {
                report: PairReport::Count(matches),
                records_processed,
            }
        }
        ReportMode::List => {
            let SweepState {
                mut sub_set,
                mut upd_set,
            } = init;
            let mut out = ReportBuilder::new(mode);
            let records_processed = sbm_sweep_list(records, &mut sub_set, &mut upd_set, &mut out);
            SegmentScan {
                report: out.finish(),
                records_processed,
            }
        }
    }
}

/// Parallel sort-based matching on dimension 0 with `workers` segments.
///
/// Runs on the current rayon pool; the segment count equals `workers`, so
/// the partials merge into the same report no matter how many OS threads
/// back the pool. With `workers == 1` this degenerates to the sequential
/// sweep.
pub fn match_sbm_parallel(
    subs: &[Extent],
    upds: &[Extent],
    workers: usize,
    mode: ReportMode,
) -> Result<PairReport, Error> {
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    let records = build_endpoint_list_parallel(subs, upds, 0)?;
    let plan = plan_segments(records.len(), workers)?;
    let segments = plan.slices(&records);

    let deltas: Vec<DeltaSets> = segments.par_iter().map(|seg| local_delta_scan(seg)).collect();
    let states = combine_deltas(&deltas)?;

    let partials: Vec<SegmentScan> = segments
        .par_iter()
        .zip(states.into_par_iter())
        .map(|(seg, init)| final_scan(seg, init, mode))
        .collect();

    debug_assert!(partials
        .iter()
        .zip(0..plan.segment_count())
        .all(|(scan, p)| scan.records_processed == plan.range(p).len()));

    Ok(merge_partials(mode, partials))
}

fn merge_partials(mode: ReportMode, partials: Vec<SegmentScan>) -> PairReport {
    match mode {
        ReportMode::Count => PairReport::Count(partials.iter().map(|s| s.report.count()).sum()),
        ReportMode::List => {
            let mut pairs = Vec::with_capacity(
                partials.iter().map(|s| s.report.count() as usize).sum(),
            );
            for scan in partials {
                if let PairReport::List(part) = scan.report {
                    pairs.extend(part);
                }
            }
            PairReport::List(pairs)
        }
    }
}
