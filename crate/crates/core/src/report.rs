//! Match results: either a full pair list or just the intersection count.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::extent::{Extent, ExtentKind};
use crate::Error;

/// Whether a matcher materializes the pair list or only counts intersections.
///
/// Count mode keeps the per-event cost of the sweep matchers independent of
/// the output size and is the benchmark default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportMode {
    Count,
    List,
}

impl ReportMode {
    pub fn name(&self) -> &'static str {
        match self {
            ReportMode::Count => "count",
            ReportMode::List => "list",
        }
    }
}

impl fmt::Display for ReportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReportMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "count" => Ok(ReportMode::Count),
            "list" => Ok(ReportMode::List),
            other => Err(Error::UnknownReportMode(other.to_string())),
        }
    }
}

/// The result of one matching run.
///
/// In `List` mode the pairs are `(subscription_id, update_id)` tuples in the
/// emission order of the producing matcher; the order is deterministic for a
/// fixed matcher but differs between matchers, so cross-matcher comparisons
/// should go through [`PairReport::sorted_pairs`] or
/// [`PairReport::same_matches`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairReport {
    Count(u64),
    List(Vec<(u32, u32)>),
}

impl PairReport {
    pub fn empty(mode: ReportMode) -> Self {
        match mode {
            ReportMode::Count => PairReport::Count(0),
            ReportMode::List => PairReport::List(Vec::new()),
        }
    }

    pub fn mode(&self) -> ReportMode {
        match self {
            PairReport::Count(_) => ReportMode::Count,
            PairReport::List(_) => ReportMode::List,
        }
    }

    /// The number of intersections K.
    pub fn count(&self) -> u64 {
        match self {
            PairReport::Count(k) => *k,
            PairReport::List(pairs) => pairs.len() as u64,
        }
    }

    /// The pair list in emission order; `None` in count mode.
    pub fn pairs(&self) -> Option<&[(u32, u32)]> {
        match self {
            PairReport::Count(_) => None,
            PairReport::List(pairs) => Some(pairs),
        }
    }

    /// The pair list sorted lexicographically; `None` in count mode.
    pub fn sorted_pairs(&self) -> Option<Vec<(u32, u32)>> {
        self.pairs().map(|p| {
            let mut sorted = p.to_vec();
            sorted.sort_unstable();
            sorted
        })
    }

    /// Set-semantics comparison: equal counts, and equal pair sets when both
    /// reports carry lists.
    pub fn same_matches(&self, other: &PairReport) -> bool {
        if self.count() != other.count() {
            return false;
        }
        match (self.sorted_pairs(), other.sorted_pairs()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Checks the report invariants against the extents it was computed from:
    /// no duplicate pairs, every id references an existing extent of the
    /// right kind, and `K <= n * m`.
    pub fn validate(&self, subs: &[Extent], upds: &[Extent]) -> Result<(), Error> {
        let max = subs.len() as u64 * upds.len() as u64;
        if self.count() > max {
            return Err(Error::InvalidReport(format!(
                "count {} exceeds n*m = {}",
                self.count(),
                max
            )));
        }
        let PairReport::List(pairs) = self else {
            return Ok(());
        };
        let sub_ids: BTreeSet<u32> = ids_of(subs, ExtentKind::Subscription)?;
        let upd_ids: BTreeSet<u32> = ids_of(upds, ExtentKind::Update)?;
        let mut seen = BTreeSet::new();
        for &(s, u) in pairs {
            if !sub_ids.contains(&s) {
                return Err(Error::InvalidReport(format!("unknown subscription id {s}")));
            }
            if !upd_ids.contains(&u) {
                return Err(Error::InvalidReport(format!("unknown update id {u}")));
            }
            if !seen.insert((s, u)) {
                return Err(Error::InvalidReport(format!("duplicate pair ({s}, {u})")));
            }
        }
        Ok(())
    }
}

fn ids_of(extents: &[Extent], kind: ExtentKind) -> Result<BTreeSet<u32>, Error> {
    let mut ids = BTreeSet::new();
    for e in extents {
        if e.kind() != kind {
            return Err(Error::InvalidReport(format!(
                "extent {} has kind {}, expected {}",
                e.id(),
                e.kind(),
                kind
            )));
        }
        ids.insert(e.id());
    }
    Ok(ids)
}

/// Incremental pair collector used by the matchers.
#[derive(Debug)]
pub(crate) struct ReportBuilder {
    mode: ReportMode,
    count: u64,
    pairs: Vec<(u32, u32)>,
}

impl ReportBuilder {
    pub(crate) fn new(mode: ReportMode) -> Self {
        Self {
            mode,
            count: 0,
            pairs: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn emit(&mut self, sub: u32, upd: u32) {
        self.count += 1;
        if self.mode == ReportMode::List {
            self.pairs.push((sub, upd));
        }
    }

    /// Pairs a departing subscription with every active update. In count mode
    /// this adds the set cardinality without iterating.
    #[inline]
    pub(crate) fn emit_sub_against(&mut self, sub: u32, upds: &BTreeSet<u32>) {
        self.count += upds.len() as u64;
        if self.mode == ReportMode::List {
            self.pairs.extend(upds.iter().map(|&u| (sub, u)));
        }
    }

    /// Pairs a departing update with every active subscription.
    #[inline]
    pub(crate) fn emit_upd_against(&mut self, upd: u32, subs: &BTreeSet<u32>) {
        self.count += subs.len() as u64;
        if self.mode == ReportMode::List {
            self.pairs.extend(subs.iter().map(|&s| (s, upd)));
        }
    }

    pub(crate) fn merge(&mut self, other: ReportBuilder) {
        debug_assert_eq!(self.mode, other.mode);
        self.count += other.count;
        self.pairs.extend(other.pairs);
    }

    pub(crate) fn finish(self) -> PairReport {
        match self.mode {
            ReportMode::Count => PairReport::Count(self.count),
            ReportMode::List => PairReport::List(self.pairs),
        }
    }
}
