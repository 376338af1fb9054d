//! Seeded synthetic workload generation.
//!
//! Workloads follow the standard extent-matching benchmark model: `N` extents
//! (half subscriptions, half updates), all of the same length `l = α·L/N`,
//! placed uniformly at random on a routing space of length `L`. The
//! overlapping degree `α` is an indirect measure of the expected number of
//! intersections. Lower bounds are drawn from `[0, L - l]` so every extent
//! lies fully inside the routing space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::extent::{Extent, ExtentKind, Interval};
use crate::matchers::DEFAULT_SPACE_LENGTH;
use crate::Error;

/// Name of the pinned generator algorithm, recorded in workload metadata so
/// runs stay reproducible across machines.
pub const RNG_ALGORITHM: &str = "chacha12 (rand_chacha 0.9)";

/// Parameters of one synthetic workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadConfig {
    /// Total number of extents N; half subscriptions, half updates.
    pub total_extents: usize,
    /// Overlapping degree α = N·l/L.
    pub alpha: f64,
    /// Routing space length L.
    pub space_length: f64,
    /// RNG seed; a fixed seed reproduces the workload bit for bit.
    pub seed: u64,
    /// Dimensionality; every dimension is drawn independently with the same
    /// extent length.
    pub dims: usize,
}

impl WorkloadConfig {
    pub fn new(total_extents: usize, alpha: f64, seed: u64) -> Self {
        Self {
            total_extents,
            alpha,
            space_length: DEFAULT_SPACE_LENGTH,
            seed,
            dims: 1,
        }
    }

    /// Extent length `l = α·L/N`.
    pub fn extent_length(&self) -> f64 {
        self.alpha * self.space_length / self.total_extents as f64
    }

    /// Subscription count n = N/2 (equals the update count).
    pub fn subscription_count(&self) -> usize {
        self.total_extents / 2
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.total_extents < 2 || self.total_extents % 2 != 0 {
            return Err(Error::OddExtentCount(self.total_extents));
        }
        if self.subscription_count() > u32::MAX as usize {
            return Err(Error::TooManyExtents(self.total_extents));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        if !(self.space_length.is_finite() && self.space_length > 0.0) {
            return Err(Error::InvalidSpaceLength(self.space_length));
        }
        if self.dims == 0 {
            return Err(Error::EmptyBounds);
        }
        let length = self.extent_length();
        if length > self.space_length {
            return Err(Error::ExtentLongerThanSpace {
                length,
                space: self.space_length,
            });
        }
        if length <= 0.0 {
            return Err(Error::DegenerateExtentLength(length));
        }
        Ok(())
    }
}

/// Generates the subscription and update sets described by `cfg`.
///
/// Deterministic for a fixed config: subscriptions are drawn first, then
/// updates, each with ids dense from zero. Generation is single-threaded.
pub fn generate_workload(cfg: &WorkloadConfig) -> Result<(Vec<Extent>, Vec<Extent>), Error> {
    cfg.validate()?;
    let length = cfg.extent_length();
    let max_low = cfg.space_length - length;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let count = cfg.subscription_count();

    let draw = |id: u32, kind: ExtentKind, rng: &mut ChaCha12Rng| -> Extent {
        if cfg.dims == 1 {
            let low = rng.random_range(0.0..=max_low);
            Extent::one_dim(id, kind, low, low + length).expect("generated bounds are valid")
        } else {
            let bounds: Vec<Interval> = (0..cfg.dims)
                .map(|_| {
                    let low = rng.random_range(0.0..=max_low);
                    Interval::new(low, low + length).expect("generated bounds are valid")
                })
                .collect();
            Extent::new(id, kind, bounds).expect("generated bounds are valid")
        }
    };

    let subs: Vec<Extent> = (0..count)
        .map(|i| draw(i as u32, ExtentKind::Subscription, &mut rng))
        .collect();
    let upds: Vec<Extent> = (0..count)
        .map(|i| draw(i as u32, ExtentKind::Update, &mut rng))
        .collect();
    Ok((subs, upds))
}
