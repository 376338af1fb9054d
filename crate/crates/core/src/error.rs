use thiserror::Error;

/// Errors surfaced by extent construction, matchers and the workload generator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval has low {low} greater than high {high}")]
    InvertedInterval { low: f64, high: f64 },

    #[error("coordinate {value} is not finite")]
    NonFiniteCoordinate { value: f64 },

    #[error("extent must have at least one dimension")]
    EmptyBounds,

    #[error("dimensionality mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension index {dim} out of range for {dims}-dimensional extents")]
    DimensionOutOfRange { dim: usize, dims: usize },

    #[error("grid cell count must be at least 1")]
    ZeroGridCells,

    #[error("worker count must be at least 1")]
    ZeroWorkers,

    #[error("routing space length must be positive and finite, got {0}")]
    InvalidSpaceLength(f64),

    #[error("unknown algorithm `{0}` (expected one of: bf, grid, itm, sbm, sbm-par)")]
    UnknownAlgorithm(String),

    #[error("unknown report mode `{0}` (expected count or list)")]
    UnknownReportMode(String),

    #[error("delta sets of segment {segment} are not disjoint")]
    DeltaNotDisjoint { segment: usize },

    #[error("segment states do not match delta count: {states} states for {deltas} deltas")]
    StateCountMismatch { states: usize, deltas: usize },

    #[error("total extent count must be even and at least 2, got {0}")]
    OddExtentCount(usize),

    #[error("overlapping degree must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("extent length {length} exceeds routing space length {space}")]
    ExtentLongerThanSpace { length: f64, space: f64 },

    #[error("extent length {0} is not positive")]
    DegenerateExtentLength(f64),

    #[error("extent count {0} exceeds the id space")]
    TooManyExtents(usize),

    #[error("pair report invalid: {0}")]
    InvalidReport(String),
}
