//! Generic two-level exclusive prefix scan.

use rayon::prelude::*;

use super::plan_segments;
use crate::Error;

/// Exclusive prefix scan over an associative operator with the given
/// identity: output k holds `items[0] ⊕ … ⊕ items[k-1]`, output 0 the
/// identity.
///
/// The input is split into `workers` chunks. Each worker computes the
/// exclusive prefixes of its chunk together with the chunk total; a single
/// coordinator then scans the chunk totals into per-chunk offsets, and each
/// worker folds its offset into its local prefixes. Chunks run on the
/// current rayon pool. The operator need not be commutative; operands are
/// always combined left to right.
pub fn two_level_exclusive_scan<T, F>(
    items: &[T],
    workers: usize,
    identity: T,
    op: F,
) -> Result<Vec<T>, Error>
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> T + Send + Sync,
{
    let plan = plan_segments(items.len(), workers)?;
    let chunks = plan.slices(items);

    // Step 1: local exclusive prefixes plus the running chunk total.
    let locals: Vec<(Vec<T>, T)> = chunks
        .par_iter()
        .map(|chunk| {
            let mut prefixes = Vec::with_capacity(chunk.len());
            let mut acc = identity.clone();
            for item in *chunk {
                prefixes.push(acc.clone());
                acc = op(&acc, item);
            }
            (prefixes, acc)
        })
        .collect();

    // Step 2: the coordinator scans the chunk totals into offsets.
    let mut offsets = Vec::with_capacity(locals.len());
    let mut acc = identity;
    for (_, total) in &locals {
        offsets.push(acc.clone());
        acc = op(&acc, total);
    }

    // Step 3: each worker applies its offset to its local prefixes.
    let pieces: Vec<Vec<T>> = locals
        .into_par_iter()
        .zip(offsets.into_par_iter())
        .map(|((prefixes, _), offset)| {
            prefixes.iter().map(|p| op(&offset, p)).collect()
        })
        .collect();

    let mut out = Vec::with_capacity(items.len());
    for piece in pieces {
        out.extend(piece);
    }
    Ok(out)
}
