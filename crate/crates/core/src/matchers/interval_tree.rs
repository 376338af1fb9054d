//! Interval-tree matching: a height-balanced search tree over the
//! subscription intervals, queried once per update interval.

use rayon::prelude::*;

use crate::extent::{Extent, Interval};
use crate::report::{PairReport, ReportBuilder, ReportMode};
use crate::Error;

#[derive(Debug)]
struct Node {
    low: f64,
    high: f64,
    owner: u32,
    /// Minimum lower bound over the subtree rooted here.
    minlower: f64,
    /// Maximum upper bound over the subtree rooted here.
    maxupper: f64,
    height: u32,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

impl Node {
    fn leaf(low: f64, high: f64, owner: u32) -> Self {
        Self {
            low,
            high,
            owner,
            minlower: low,
            maxupper: high,
            height: 1,
            left: None,
            right: None,
        }
    }

    /// Recomputes height and the min/max augmentation from the children.
    fn refresh(&mut self) {
        self.height = 1 + height(&self.left).max(height(&self.right));
        self.minlower = self.low;
        self.maxupper = self.high;
        if let Some(l) = &self.left {
            self.minlower = self.minlower.min(l.minlower);
            self.maxupper = self.maxupper.max(l.maxupper);
        }
        if let Some(r) = &self.right {
            self.minlower = self.minlower.min(r.minlower);
            self.maxupper = self.maxupper.max(r.maxupper);
        }
    }

    fn balance_factor(&self) -> i32 {
        height(&self.left) as i32 - height(&self.right) as i32
    }
}

fn height(node: &Option<Box<Node>>) -> u32 {
    node.as_ref().map_or(0, |n| n.height)
}

fn rotate_right(mut n: Box<Node>) -> Box<Node> {
    let mut l = n.left.take().expect("rotate_right needs a left child");
    n.left = l.right.take();
    n.refresh();
    l.right = Some(n);
    l.refresh();
    l
}

fn rotate_left(mut n: Box<Node>) -> Box<Node> {
    let mut r = n.right.take().expect("rotate_left needs a right child");
    n.right = r.left.take();
    n.refresh();
    r.left = Some(n);
    r.refresh();
    r
}

fn rebalance(mut n: Box<Node>) -> Box<Node> {
    n.refresh();
    let bf = n.balance_factor();
    if bf > 1 {
        if n.left.as_ref().expect("bf > 1").balance_factor() < 0 {
            n.left = Some(rotate_left(n.left.take().unwrap()));
        }
        rotate_right(n)
    } else if bf < -1 {
        if n.right.as_ref().expect("bf < -1").balance_factor() > 0 {
            n.right = Some(rotate_right(n.right.take().unwrap()));
        }
        rotate_left(n)
    } else {
        n
    }
}

fn insert_rec(slot: Option<Box<Node>>, low: f64, high: f64, owner: u32) -> Box<Node> {
    let Some(mut node) = slot else {
        return Box::new(Node::leaf(low, high, owner));
    };
    let goes_left = match low.total_cmp(&node.low) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => owner < node.owner,
    };
    if goes_left {
        node.left = Some(insert_rec(node.left.take(), low, high, owner));
    } else {
        node.right = Some(insert_rec(node.right.take(), low, high, owner));
    }
    rebalance(node)
}

/// An AVL tree of intervals keyed by lower bound, augmented with subtree
/// minimum-lower and maximum-upper bounds so that queries can prune whole
/// subtrees.
#[derive(Debug, Default)]
pub struct IntervalTree {
    root: Option<Box<Node>>,
    len: usize,
}

impl IntervalTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a tree over the projections of `subs` on dimension `dim`.
    pub fn build(subs: &[Extent], dim: usize) -> Result<Self, Error> {
        let mut tree = Self::new();
        for e in subs {
            if dim >= e.dims() {
                return Err(Error::DimensionOutOfRange {
                    dim,
                    dims: e.dims(),
                });
            }
            tree.insert(e.interval(dim), e.id());
        }
        Ok(tree)
    }

    pub fn insert(&mut self, interval: Interval, owner: u32) {
        self.root = Some(insert_rec(
            self.root.take(),
            interval.low(),
            interval.high(),
            owner,
        ));
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Longest root-to-leaf path in nodes; 0 for the empty tree.
    pub fn height(&self) -> u32 {
        height(&self.root)
    }

    /// Appends the owners of all stored intervals intersecting `q` to `out`
    /// and returns the number of nodes visited. A query disjoint from the
    /// whole tree span costs a single visit.
    pub fn query_into(&self, q: Interval, out: &mut Vec<u32>) -> usize {
        let mut visits = 0;
        if let Some(root) = &self.root {
            query_rec(root, &q, out, &mut visits);
        }
        visits
    }

    pub fn query(&self, q: Interval) -> Vec<u32> {
        let mut out = Vec::new();
        self.query_into(q, &mut out);
        out
    }

    /// Read-only cursor over the tree structure, for audits and diagnostics.
    pub fn root_view(&self) -> Option<TreeView<'_>> {
        self.root.as_deref().map(TreeView)
    }
}

fn query_rec(node: &Node, q: &Interval, out: &mut Vec<u32>, visits: &mut usize) {
    *visits += 1;
    if node.maxupper < q.low() || node.minlower > q.high() {
        return;
    }
    if let Some(l) = &node.left {
        query_rec(l, q, out, visits);
    }
    if node.low <= q.high() && q.low() <= node.high {
        out.push(node.owner);
    }
    if q.high() >= node.low {
        if let Some(r) = &node.right {
            query_rec(r, q, out, visits);
        }
    }
}

/// A borrowed view of one tree node.
#[derive(Clone, Copy)]
pub struct TreeView<'a>(&'a Node);

impl<'a> TreeView<'a> {
    pub fn interval(&self) -> Interval {
        Interval::new(self.0.low, self.0.high).expect("stored intervals are valid")
    }

    pub fn owner(&self) -> u32 {
        self.0.owner
    }

    pub fn minlower(&self) -> f64 {
        self.0.minlower
    }

    pub fn maxupper(&self) -> f64 {
        self.0.maxupper
    }

    pub fn height(&self) -> u32 {
        self.0.height
    }

    pub fn left(&self) -> Option<TreeView<'a>> {
        self.0.left.as_deref().map(TreeView)
    }

    pub fn right(&self) -> Option<TreeView<'a>> {
        self.0.right.as_deref().map(TreeView)
    }
}

/// Interval-tree matching on dimension 0.
///
/// The tree over the subscriptions is built serially; the update queries are
/// split into contiguous chunks across `workers`, each filling a private
/// buffer, and the buffers are merged in query order. The output is therefore
/// identical for every worker count.
pub fn match_interval_tree(
    subs: &[Extent],
    upds: &[Extent],
    mode: ReportMode,
    workers: usize,
) -> Result<PairReport, Error> {
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    let tree = IntervalTree::build(subs, 0)?;
    if workers == 1 || upds.len() < 2 {
        let mut out = ReportBuilder::new(mode);
        query_chunk(&tree, upds, &mut out);
        return Ok(out.finish());
    }

    let chunk = upds.len().div_ceil(workers);
    let partials: Vec<ReportBuilder> = upds
        .par_chunks(chunk)
        .map(|queries| {
            let mut out = ReportBuilder::new(mode);
            query_chunk(&tree, queries, &mut out);
            out
        })
        .collect();
    let mut merged = ReportBuilder::new(mode);
    for part in partials {
        merged.merge(part);
    }
    Ok(merged.finish())
}

fn query_chunk(tree: &IntervalTree, upds: &[Extent], out: &mut ReportBuilder) {
    let mut hits = Vec::new();
    for u in upds {
        hits.clear();
        tree.query_into(u.interval(0), &mut hits);
        for &s in &hits {
            out.emit(s, u.id());
        }
    }
}
