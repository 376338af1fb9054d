//! Sequential sort-based matching: sort all interval endpoints, then sweep
//! them once while tracking the active subscription and update sets.

use std::collections::BTreeSet;

use crate::endpoints::{build_endpoint_list, EndpointRecord};
use crate::extent::{Extent, ExtentKind};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

/// Sweeps one run of endpoint records in list mode, mutating the active sets
/// in place and emitting pairs when an extent departs. Returns the number of
/// records processed.
///
/// An extent is active between its lower and its upper endpoint. On a
/// subscription's upper endpoint the subscription leaves the active set and is
/// paired with every active update; updates are handled symmetrically. Each
/// intersecting pair is thus emitted exactly once, at the earlier of the two
/// upper endpoints.
pub(crate) fn sweep_list(
    records: &[EndpointRecord],
    sub_set: &mut BTreeSet<u32>,
    upd_set: &mut BTreeSet<u32>,
    out: &mut ReportBuilder,
) -> usize {
    let mut processed = 0;
    for r in records {
        processed += 1;
        match (r.owner_kind, r.is_lower) {
            (ExtentKind::Subscription, true) => {
                sub_set.insert(r.owner_id);
            }
            (ExtentKind::Subscription, false) => {
                sub_set.remove(&r.owner_id);
                out.emit_sub_against(r.owner_id, upd_set);
            }
            (ExtentKind::Update, true) => {
                upd_set.insert(r.owner_id);
            }
            (ExtentKind::Update, false) => {
                upd_set.remove(&r.owner_id);
                out.emit_upd_against(r.owner_id, sub_set);
            }
        }
    }
    processed
}

/// Count-mode sweep. Emission never iterates a set, only reads its
/// cardinality, and every removal targets a present extent (each upper
/// endpoint follows its lower in sweep order), so the active sets reduce to
/// their cardinalities. This keeps the per-event cost constant, independent
/// of both the intersection count and the overlapping degree.
pub(crate) fn sweep_count(
    records: &[EndpointRecord],
    active_subs: &mut u64,
    active_upds: &mut u64,
    matches: &mut u64,
) -> usize {
    let mut processed = 0;
    for r in records {
        processed += 1;
        match (r.owner_kind, r.is_lower) {
            (ExtentKind::Subscription, true) => *active_subs += 1,
            (ExtentKind::Subscription, false) => {
                *active_subs -= 1;
                *matches += *active_upds;
            }
            (ExtentKind::Update, true) => *active_upds += 1,
            (ExtentKind::Update, false) => {
                *active_upds -= 1;
                *matches += *active_subs;
            }
        }
    }
    processed
}

/// Sequential sort-based matching on dimension 0. Single-threaded.
pub fn match_sbm_seq(
    subs: &[Extent],
    upds: &[Extent],
    mode: ReportMode,
) -> Result<PairReport, Error> {
    let records = build_endpoint_list(subs, upds, 0)?;
    match mode {
        ReportMode::Count => {
            let (mut active_subs, mut active_upds, mut matches) = (0, 0, 0);
            sweep_count(&records, &mut active_subs, &mut active_upds, &mut matches);
            debug_assert!(active_subs == 0 && active_upds == 0);
            Ok(PairReport::Count(matches))
        }
        ReportMode::List => {
            let mut sub_set = BTreeSet::new();
            let mut upd_set = BTreeSet::new();
            let mut out = ReportBuilder::new(mode);
            sweep_list(&records, &mut sub_set, &mut upd_set, &mut out);
            debug_assert!(sub_set.is_empty() && upd_set.is_empty());
            Ok(out.finish())
        }
    }
}
