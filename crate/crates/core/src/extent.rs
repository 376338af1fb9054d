//! Extents, intervals and the overlap predicates shared by every matcher.

use std::fmt;

use smallvec::SmallVec;

use crate::Error;

/// A closed interval `[low, high]` on one axis of the routing space.
///
/// Both bounds are finite and `low <= high`; degenerate point intervals
/// (`low == high`) are legal. Construction through [`Interval::new`] enforces
/// the invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    low: f64,
    high: f64,
}

impl Interval {
    pub fn new(low: f64, high: f64) -> Result<Self, Error> {
        if !low.is_finite() {
            return Err(Error::NonFiniteCoordinate { value: low });
        }
        if !high.is_finite() {
            return Err(Error::NonFiniteCoordinate { value: high });
        }
        if low > high {
            return Err(Error::InvertedInterval { low, high });
        }
        Ok(Self { low, high })
    }

    #[inline]
    pub fn low(&self) -> f64 {
        self.low
    }

    #[inline]
    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn length(&self) -> f64 {
        self.high - self.low
    }

    /// Closed-interval overlap test; touching endpoints intersect.
    #[inline]
    pub fn intersects(&self, other: &Interval) -> bool {
        self.low <= other.high && other.low <= self.high
    }

    /// True iff `point` lies inside the closed interval.
    #[inline]
    pub fn contains(&self, point: f64) -> bool {
        self.low <= point && point <= self.high
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.high)
    }
}

/// Overlap test for two closed 1-D intervals.
#[inline]
pub fn intersect_1d(x: Interval, y: Interval) -> bool {
    x.intersects(&y)
}

/// Whether an extent subscribes to events or produces them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtentKind {
    Subscription,
    Update,
}

impl ExtentKind {
    /// Single-letter tag used by the extent text file format.
    pub fn tag(&self) -> char {
        match self {
            ExtentKind::Subscription => 'S',
            ExtentKind::Update => 'U',
        }
    }

    pub fn from_tag(tag: &str) -> Option<ExtentKind> {
        match tag {
            "S" => Some(ExtentKind::Subscription),
            "U" => Some(ExtentKind::Update),
            _ => None,
        }
    }
}

impl fmt::Display for ExtentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtentKind::Subscription => write!(f, "subscription"),
            ExtentKind::Update => write!(f, "update"),
        }
    }
}

/// A d-dimensional axis-parallel rectangle with an identity and a kind.
///
/// Ids are unique within a kind and, for generated workloads, dense starting
/// at zero. All extents taking part in one matching problem share the same
/// dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct Extent {
    id: u32,
    kind: ExtentKind,
    bounds: SmallVec<[Interval; 1]>,
}

impl Extent {
    pub fn new(
        id: u32,
        kind: ExtentKind,
        bounds: impl IntoIterator<Item = Interval>,
    ) -> Result<Self, Error> {
        let bounds: SmallVec<[Interval; 1]> = bounds.into_iter().collect();
        if bounds.is_empty() {
            return Err(Error::EmptyBounds);
        }
        Ok(Self { id, kind, bounds })
    }

    /// Convenience constructor for the common one-dimensional case.
    pub fn one_dim(id: u32, kind: ExtentKind, low: f64, high: f64) -> Result<Self, Error> {
        Ok(Self {
            id,
            kind,
            bounds: SmallVec::from_elem(Interval::new(low, high)?, 1),
        })
    }

    /// Builds an extent from `(low, high)` pairs, one per dimension.
    pub fn from_pairs(id: u32, kind: ExtentKind, pairs: &[(f64, f64)]) -> Result<Self, Error> {
        let bounds = pairs
            .iter()
            .map(|&(low, high)| Interval::new(low, high))
            .collect::<Result<SmallVec<[Interval; 1]>, Error>>()?;
        if bounds.is_empty() {
            return Err(Error::EmptyBounds);
        }
        Ok(Self { id, kind, bounds })
    }

    #[inline]
    pub fn id(&self) -> u32 {
        self.id
    }

    #[inline]
    pub fn kind(&self) -> ExtentKind {
        self.kind
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    /// The extent's projection on dimension `dim`. Panics if out of range.
    #[inline]
    pub fn interval(&self, dim: usize) -> Interval {
        self.bounds[dim]
    }

    #[inline]
    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    /// Overlap test against another extent of the same dimensionality.
    pub fn intersects(&self, other: &Extent) -> Result<bool, Error> {
        intersect_dd(self, other)
    }

    /// Overlap test without the dimensionality check; callers must have
    /// validated that both extents share the same number of dimensions.
    #[inline]
    pub(crate) fn overlaps_unchecked(&self, other: &Extent) -> bool {
        self.bounds
            .iter()
            .zip(other.bounds.iter())
            .all(|(a, b)| a.intersects(b))
    }
}

/// d-dimensional overlap test: true iff the projections overlap on every axis.
pub fn intersect_dd(a: &Extent, b: &Extent) -> Result<bool, Error> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            left: a.dims(),
            right: b.dims(),
        });
    }
    Ok(a.overlaps_unchecked(b))
}

/// Checks that every extent in both sets shares one dimensionality and
/// returns it. Empty problem instances report dimensionality 1.
pub(crate) fn consistent_dims(subs: &[Extent], upds: &[Extent]) -> Result<usize, Error> {
    let mut iter = subs.iter().chain(upds.iter());
    let Some(first) = iter.next() else {
        return Ok(1);
    };
    let dims = first.dims();
    for e in iter {
        if e.dims() != dims {
            return Err(Error::DimensionMismatch {
                left: dims,
                right: e.dims(),
            });
        }
    }
    Ok(dims)
}
