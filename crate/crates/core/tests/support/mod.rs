//! Shared oracles for the integration and acceptance suites. Everything here
//! is deliberately independent of the library's implementation paths: plain
//! re-derivations that the real algorithms are checked against.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::Instant;

use ddm_core::{EndpointRecord, Extent, ExtentKind};

/// Reference comparison sort: insertion sort by the composite sweep key.
pub fn insertion_sorted(records: &[EndpointRecord]) -> Vec<EndpointRecord> {
    let mut out: Vec<EndpointRecord> = Vec::with_capacity(records.len());
    for &r in records {
        let pos = out.partition_point(|x| *x <= r);
        out.insert(pos, r);
    }
    out
}

/// Instrumented sequential sweep: returns the active subscription and update
/// sets right before each cut index. Maintains the sets directly from the
/// endpoint semantics, independent of the delta-scan pipeline it checks.
pub fn sweep_snapshots(
    records: &[EndpointRecord],
    cut_points: &[usize],
) -> Vec<(BTreeSet<u32>, BTreeSet<u32>)> {
    let mut out = Vec::with_capacity(cut_points.len());
    let mut subs = BTreeSet::new();
    let mut upds = BTreeSet::new();
    let mut next = 0;
    for (i, r) in records.iter().enumerate() {
        while next < cut_points.len() && cut_points[next] == i {
            out.push((subs.clone(), upds.clone()));
            next += 1;
        }
        let set = match r.owner_kind() {
            ExtentKind::Subscription => &mut subs,
            ExtentKind::Update => &mut upds,
        };
        if r.is_lower() {
            set.insert(r.owner_id());
        } else {
            set.remove(&r.owner_id());
        }
    }
    while next < cut_points.len() {
        assert_eq!(cut_points[next], records.len(), "cut point out of range");
        out.push((subs.clone(), upds.clone()));
        next += 1;
    }
    out
}

/// A two-dimensional instance with three subscriptions and two updates whose
/// only subscription-update overlaps are (S0,U0), (S1,U1), (S2,U0), (S2,U1),
/// while S0 and S1 overlap each other. All bounds are multiples of 0.25 so
/// the sampled-containment check below is exact.
pub fn crossed_topology() -> (Vec<Extent>, Vec<Extent>, Vec<(u32, u32)>) {
    let subs = vec![
        Extent::from_pairs(0, ExtentKind::Subscription, &[(0.0, 4.0), (4.0, 8.0)]).unwrap(),
        Extent::from_pairs(1, ExtentKind::Subscription, &[(3.0, 7.0), (5.0, 9.0)]).unwrap(),
        Extent::from_pairs(2, ExtentKind::Subscription, &[(2.0, 9.0), (0.0, 3.0)]).unwrap(),
    ];
    let upds = vec![
        Extent::from_pairs(0, ExtentKind::Update, &[(0.5, 2.5), (1.0, 5.0)]).unwrap(),
        Extent::from_pairs(1, ExtentKind::Update, &[(6.0, 8.0), (2.0, 6.0)]).unwrap(),
    ];
    let expected = vec![(0, 0), (1, 1), (2, 0), (2, 1)];
    (subs, upds, expected)
}

/// Geometric oracle: a pair intersects iff some sample point lies inside both
/// extents. Exact whenever all bounds are multiples of `step`, because the
/// intersection rectangle's corners then lie on the sampling lattice.
pub fn sampled_pairs(subs: &[Extent], upds: &[Extent], step: f64, span: f64) -> Vec<(u32, u32)> {
    let points_on_axis = (span / step).round() as i64 + 1;
    let dims = subs.first().map_or(1, |e| e.dims());
    let mut pairs = Vec::new();
    for s in subs {
        for u in upds {
            let mut found = false;
            let mut point = vec![0i64; dims];
            'outer: loop {
                let contained = |e: &Extent| {
                    point
                        .iter()
                        .enumerate()
                        .all(|(d, &k)| e.interval(d).contains(k as f64 * step))
                };
                if contained(s) && contained(u) {
                    found = true;
                    break;
                }
                // Advance the lattice odometer.
                for d in 0..dims {
                    point[d] += 1;
                    if point[d] < points_on_axis {
                        continue 'outer;
                    }
                    point[d] = 0;
                }
                break;
            }
            if found {
                pairs.push((s.id(), u.id()));
            }
        }
    }
    pairs
}

/// Analytic expectation of the match count for a generated workload: with
/// both lower bounds uniform on `[0, L - l]` and equal lengths `l`, a pair
/// overlaps iff the lower bounds differ by at most `l`, which happens with
/// probability `(2lw - l^2) / w^2` for `w = L - l`.
pub fn expected_matches(n_subs: usize, n_upds: usize, length: f64, space: f64) -> f64 {
    let w = space - length;
    let p = if w <= 0.0 {
        1.0
    } else {
        ((2.0 * length * w - length * length) / (w * w)).min(1.0)
    };
    n_subs as f64 * n_upds as f64 * p
}

/// Physical core count: unique (physical id, core id) pairs from
/// /proc/cpuinfo, falling back to the logical count.
pub fn physical_cores() -> usize {
    let logical = std::thread::available_parallelism().map_or(1, |n| n.get());
    let Ok(info) = std::fs::read_to_string("/proc/cpuinfo") else {
        return logical;
    };
    let mut cores = BTreeSet::new();
    let (mut phys, mut core) = (None, None);
    for line in info.lines() {
        let mut split = line.splitn(2, ':');
        let key = split.next().unwrap_or("").trim();
        let value = split.next().unwrap_or("").trim().to_string();
        match key {
            "physical id" => phys = Some(value),
            "core id" => core = Some(value),
            "" => {
                if let (Some(p), Some(c)) = (phys.take(), core.take()) {
                    cores.insert((p, c));
                }
            }
            _ => {}
        }
    }
    if let (Some(p), Some(c)) = (phys, core) {
        cores.insert((p, c));
    }
    if cores.is_empty() {
        logical
    } else {
        cores.len().min(logical)
    }
}

pub fn median(mut samples: Vec<f64>) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

pub fn time_seconds<T>(f: impl FnOnce() -> T) -> (f64, T) {
    let start = Instant::now();
    let value = f();
    (start.elapsed().as_secs_f64(), value)
}
