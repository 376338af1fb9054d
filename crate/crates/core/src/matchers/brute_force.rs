//! Brute-force matching: test every subscription-update pair.
//!
//! Quadratic, but embarrassingly parallel and free of data structures; it is
//! the correctness oracle for every other matcher.

use rayon::prelude::*;

use crate::extent::{consistent_dims, Extent};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

/// Tests all `n * m` pairs with the d-dimensional overlap predicate.
///
/// With `workers > 1` the subscription rows are split into contiguous chunks
/// processed on the current rayon pool; each chunk fills a private buffer and
/// the buffers are merged in row order, so the output is identical for every
/// worker count.
pub fn match_brute_force(
    subs: &[Extent],
    upds: &[Extent],
    mode: ReportMode,
    workers: usize,
) -> Result<PairReport, Error> {
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    consistent_dims(subs, upds)?;

    if workers == 1 || subs.len() < 2 {
        let mut out = ReportBuilder::new(mode);
        scan_rows(subs, upds, &mut out);
        return Ok(out.finish());
    }

    let chunk = subs.len().div_ceil(workers);
    let partials: Vec<ReportBuilder> = subs
        .par_chunks(chunk)
        .map(|rows| {
            let mut out = ReportBuilder::new(mode);
            scan_rows(rows, upds, &mut out);
            out
        })
        .collect();
    let mut merged = ReportBuilder::new(mode);
    for part in partials {
        merged.merge(part);
    }
    Ok(merged.finish())
}

fn scan_rows(rows: &[Extent], upds: &[Extent], out: &mut ReportBuilder) {
    for s in rows {
        for u in upds {
            if s.overlaps_unchecked(u) {
                out.emit(s.id(), u.id());
            }
        }
    }
}
