//! Grid-based matching: bucket extents into a regular mesh of cells on the
//! matching dimension and brute-force each cell.

use crate::extent::{Extent, Interval};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

/// A regular partition of the routing space `[0, L)` into equal cells, each
/// holding the ids and projections of the extents overlapping it. Extents
/// reaching outside the routing space are clamped to the boundary cells.
#[derive(Debug)]
pub struct GridIndex {
    cell_width: f64,
    subs: Vec<Vec<(u32, Interval)>>,
    upds: Vec<Vec<(u32, Interval)>>,
}

impl GridIndex {
    pub fn build(
        subs: &[Extent],
        upds: &[Extent],
        cell_count: usize,
        space_length: f64,
    ) -> Result<Self, Error> {
        if cell_count == 0 {
            return Err(Error::ZeroGridCells);
        }
        if !(space_length.is_finite() && space_length > 0.0) {
            return Err(Error::InvalidSpaceLength(space_length));
        }
        let cell_width = space_length / cell_count as f64;
        let mut index = Self {
            cell_width,
            subs: vec![Vec::new(); cell_count],
            upds: vec![Vec::new(); cell_count],
        };
        for e in subs {
            index.place(e, true);
        }
        for e in upds {
            index.place(e, false);
        }
        Ok(index)
    }

    fn place(&mut self, extent: &Extent, is_sub: bool) {
        let iv = extent.interval(0);
        let first = self.cell_of(iv.low());
        let last = self.cell_of(iv.high());
        let cells = if is_sub { &mut self.subs } else { &mut self.upds };
        for c in first..=last {
            cells[c].push((extent.id(), iv));
        }
    }

    /// The cell holding `coord`, clamped into `[0, cell_count - 1]`.
    #[inline]
    pub fn cell_of(&self, coord: f64) -> usize {
        let raw = (coord / self.cell_width).floor();
        if raw <= 0.0 {
            0
        } else {
            (raw as usize).min(self.cell_count() - 1)
        }
    }

    pub fn cell_count(&self) -> usize {
        self.subs.len()
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn cell_subs(&self, cell: usize) -> &[(u32, Interval)] {
        &self.subs[cell]
    }

    pub fn cell_upds(&self, cell: usize) -> &[(u32, Interval)] {
        &self.upds[cell]
    }
}

/// Grid-based matching on dimension 0 over the routing space `[0, L)`.
///
/// Candidates sharing a cell are filtered with the exact interval test, so
/// extents that merely share cells without overlapping are never reported.
/// A pair is tested only in the cell containing the leftmost point of its
/// potential intersection, `max(s.low, u.low)`, which yields exactly-once
/// reporting without a deduplication set.
pub fn match_grid(
    subs: &[Extent],
    upds: &[Extent],
    cell_count: usize,
    space_length: f64,
    mode: ReportMode,
) -> Result<PairReport, Error> {
    let index = GridIndex::build(subs, upds, cell_count, space_length)?;
    let mut out = ReportBuilder::new(mode);
    for cell in 0..index.cell_count() {
        for &(sid, siv) in index.cell_subs(cell) {
            for &(uid, uiv) in index.cell_upds(cell) {
                let owner = index.cell_of(siv.low().max(uiv.low()));
                if owner == cell && siv.intersects(&uiv) {
                    out.emit(sid, uid);
                }
            }
        }
    }
    Ok(out.finish())
}
