//! The sorted endpoint list driving the sort-based matchers.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::extent::{Extent, ExtentKind};
use crate::Error;

/// One interval bound on the matching dimension, tagged with its owner.
///
/// Every extent contributes exactly two records: its lower and its upper
/// bound. Records are totally ordered by `(coord, lower-before-upper,
/// owner kind, owner id)`; processing lower bounds before upper bounds at
/// equal coordinates makes touching extents match, consistent with the
/// closed-interval overlap predicate.
#[derive(Debug, Clone, Copy)]
pub struct EndpointRecord {
    pub(crate) coord: f64,
    pub(crate) is_lower: bool,
    pub(crate) owner_kind: ExtentKind,
    pub(crate) owner_id: u32,
}

impl EndpointRecord {
    pub fn new(coord: f64, is_lower: bool, owner_kind: ExtentKind, owner_id: u32) -> Result<Self, Error> {
        if !coord.is_finite() {
            return Err(Error::NonFiniteCoordinate { value: coord });
        }
        Ok(Self {
            coord,
            is_lower,
            owner_kind,
            owner_id,
        })
    }

    #[inline]
    pub fn coord(&self) -> f64 {
        self.coord
    }

    #[inline]
    pub fn is_lower(&self) -> bool {
        self.is_lower
    }

    #[inline]
    pub fn owner_kind(&self) -> ExtentKind {
        self.owner_kind
    }

    #[inline]
    pub fn owner_id(&self) -> u32 {
        self.owner_id
    }
}

// Coordinates are finite by construction, so total_cmp agrees with the usual
// numeric order and the composite key is a strict total order.
impl Ord for EndpointRecord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coord
            .total_cmp(&other.coord)
            .then_with(|| (!self.is_lower).cmp(&!other.is_lower))
            .then_with(|| self.owner_kind.cmp(&other.owner_kind))
            .then_with(|| self.owner_id.cmp(&other.owner_id))
    }
}

impl PartialOrd for EndpointRecord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for EndpointRecord {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EndpointRecord {}

fn collect_records(
    subs: &[Extent],
    upds: &[Extent],
    dim: usize,
) -> Result<Vec<EndpointRecord>, Error> {
    let mut records = Vec::with_capacity(2 * (subs.len() + upds.len()));
    for e in subs.iter().chain(upds.iter()) {
        if dim >= e.dims() {
            return Err(Error::DimensionOutOfRange {
                dim,
                dims: e.dims(),
            });
        }
        let iv = e.interval(dim);
        records.push(EndpointRecord {
            coord: iv.low(),
            is_lower: true,
            owner_kind: e.kind(),
            owner_id: e.id(),
        });
        records.push(EndpointRecord {
            coord: iv.high(),
            is_lower: false,
            owner_kind: e.kind(),
            owner_id: e.id(),
        });
    }
    Ok(records)
}

/// Builds the sorted endpoint list for dimension `dim`: `2 * (n + m)` records
/// in non-decreasing coordinate order with lower bounds before upper bounds
/// at equal coordinates.
pub fn build_endpoint_list(
    subs: &[Extent],
    upds: &[Extent],
    dim: usize,
) -> Result<Vec<EndpointRecord>, Error> {
    let mut records = collect_records(subs, upds, dim)?;
    records.sort_unstable();
    Ok(records)
}

/// Like [`build_endpoint_list`] but sorts on the current rayon pool. The key
/// is a strict total order, so the result is identical to the sequential
/// build.
pub fn build_endpoint_list_parallel(
    subs: &[Extent],
    upds: &[Extent],
    dim: usize,
) -> Result<Vec<EndpointRecord>, Error> {
    let mut records = collect_records(subs, upds, dim)?;
    records.par_sort_unstable();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extent::ExtentKind::{Subscription, Update};

    fn sub(id: u32, low: f64, high: f64) -> Extent {
        Extent::one_dim(id, Subscription, low, high).unwrap()
    }

    fn upd(id: u32, low: f64, high: f64) -> Extent {
        Extent::one_dim(id, Update, low, high).unwrap()
    }

    #[test]
    fn strictly_increasing_coordinates() {
        let records = build_endpoint_list(&[sub(0, 1.0, 3.0)], &[upd(0, 2.0, 4.0)], 0).unwrap();
        let flat: Vec<(f64, bool, ExtentKind, u32)> = records
            .iter()
            .map(|r| (r.coord(), r.is_lower(), r.owner_kind(), r.owner_id()))
            .collect();
        assert_eq!(
            flat,
            vec![
                (1.0, true, Subscription, 0),
                (2.0, true, Update, 0),
                (3.0, false, Subscription, 0),
                (4.0, false, Update, 0),
            ]
        );
    }

    #[test]
    fn lowers_precede_uppers_at_equal_coordinates() {
        let records = build_endpoint_list(&[sub(0, 5.0, 5.0)], &[upd(0, 5.0, 9.0)], 0).unwrap();
        assert_eq!(records.len(), 4);
        // At coord 5: lower(S0), lower(U0), upper(S0).
        assert!(records[0].is_lower() && records[0].owner_kind() == Subscription);
        assert!(records[1].is_lower() && records[1].owner_kind() == Update);
        assert!(!records[2].is_lower() && records[2].owner_kind() == Subscription);
        assert_eq!(records[3].coord(), 9.0);
    }

    #[test]
    fn dimension_out_of_range_is_rejected() {
        let err = build_endpoint_list(&[sub(0, 0.0, 1.0)], &[], 1).unwrap_err();
        assert_eq!(err, Error::DimensionOutOfRange { dim: 1, dims: 1 });
    }

    #[test]
    fn parallel_build_matches_sequential() {
        let subs: Vec<Extent> = (0..40).map(|i| sub(i, (i % 7) as f64, (i % 7 + 3) as f64)).collect();
        let upds: Vec<Extent> = (0..40).map(|i| upd(i, (i % 5) as f64, (i % 5 + 2) as f64)).collect();
        let a = build_endpoint_list(&subs, &upds, 0).unwrap();
        let b = build_endpoint_list_parallel(&subs, &upds, 0).unwrap();
        assert_eq!(a, b);
    }
}
