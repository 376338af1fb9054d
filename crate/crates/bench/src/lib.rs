//! Shared setup for the matcher benchmarks.

use ddm_core::{generate_workload, Extent, WorkloadConfig};

/// Generates the standard benchmark workload: `n` extents of overlapping
/// degree `alpha` on the default routing space.
pub fn workload(n: usize, alpha: f64, seed: u64) -> (Vec<Extent>, Vec<Extent>) {
    generate_workload(&WorkloadConfig::new(n, alpha, seed)).expect("benchmark workload is valid")
}

/// A dedicated rayon pool with exactly `threads` workers.
pub fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("pool builds")
}
