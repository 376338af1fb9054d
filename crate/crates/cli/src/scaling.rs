//! Speedup and scaling efficiencies from benchmark records.
//!
//! For mean wall-clock times `T(N, P)`:
//!
//! - speedup           `S_N(P) = T(N, 1) / T(N, P)`
//! - strong efficiency `E_strong(P) = S_N(P) / P`
//! - weak efficiency   `E_weak(P) = T(N/P, 1) / T(N, P)` for rows whose size
//!   is `P` times a measured baseline (constant per-worker work).

use std::collections::BTreeMap;

use ddm_core::{Algorithm, ReportMode};

use crate::suite::BenchRecord;

/// Scaling metrics for one `(algorithm, N, alpha, mode, P)` cell. Metrics
/// whose baseline was not measured are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub alpha: f64,
    pub mode: ReportMode,
    pub p: usize,
    pub speedup: Option<f64>,
    pub strong_efficiency: Option<f64>,
    pub weak_efficiency: Option<f64>,
}

#[derive(Debug, Default)]
pub struct ScalingSummary {
    pub rows: Vec<ScalingRow>,
    /// Human-readable notes for cells whose P=1 baseline is missing.
    pub missing_baselines: Vec<String>,
}

// Alphas are positive, so their bit patterns order like the values.
type GroupKey = (&'static str, u64, usize, u8, usize);

fn key(algorithm: Algorithm, n: usize, alpha: f64, mode: ReportMode, p: usize) -> GroupKey {
    (algorithm.name(), alpha.to_bits(), n, mode as u8, p)
}

/// Computes the scaling summary over the mean wall-clock time of every
/// `(algorithm, N, alpha, mode, P)` group found in `records`.
pub fn compute_scaling(records: &[BenchRecord]) -> ScalingSummary {
    let mut sums: BTreeMap<GroupKey, (Algorithm, f64, usize)> = BTreeMap::new();
    for r in records {
        let entry = sums
            .entry(key(r.algorithm, r.n, r.alpha, r.mode, r.p))
            .or_insert((r.algorithm, 0.0, 0));
        entry.1 += r.wct_seconds;
        entry.2 += 1;
    }
    let means: BTreeMap<GroupKey, (Algorithm, f64)> = sums
        .into_iter()
        .map(|(k, (algo, sum, count))| (k, (algo, sum / count as f64)))
        .collect();

    let mut summary = ScalingSummary::default();
    for (&(_, alpha_bits, n, mode_bits, p), &(algorithm, mean)) in &means {
        let alpha = f64::from_bits(alpha_bits);
        let mode = if mode_bits == ReportMode::Count as u8 {
            ReportMode::Count
        } else {
            ReportMode::List
        };

        let same_size_baseline = means
            .get(&key(algorithm, n, alpha, mode, 1))
            .map(|&(_, t1)| t1);
        let speedup = same_size_baseline.map(|t1| t1 / mean);
        if speedup.is_none() {
            summary.missing_baselines.push(format!(
                "{algorithm} N={n} alpha={alpha}: no P=1 run at this size"
            ));
        }
        let strong_efficiency = speedup.map(|s| s / p as f64);

        let weak_efficiency = if n % p == 0 {
            means
                .get(&key(algorithm, n / p, alpha, mode, 1))
                .map(|&(_, t_base)| t_base / mean)
        } else {
            None
        };

        summary.rows.push(ScalingRow {
            algorithm,
            n,
            alpha,
            mode,
            p,
            speedup,
            strong_efficiency,
            weak_efficiency,
        });
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(algorithm: Algorithm, n: usize, p: usize, wct_seconds: f64) -> BenchRecord {
        BenchRecord {
            algorithm,
            n,
            alpha: 100.0,
            p,
            rep: 0,
            seed: 1,
            mode: ReportMode::Count,
            wct_seconds,
            matches: 10,
            peak_rss_bytes: None,
        }
    }

    fn row_at(summary: &ScalingSummary, n: usize, p: usize) -> &ScalingRow {
        summary
            .rows
            .iter()
            .find(|r| r.n == n && r.p == p)
            .expect("row exists")
    }

    #[test]
    fn speedup_and_strong_efficiency_from_the_definition() {
        let records = vec![
            record(Algorithm::SbmPar, 1000, 1, 10.0),
            record(Algorithm::SbmPar, 1000, 4, 4.0),
        ];
        let summary = compute_scaling(&records);
        let row = row_at(&summary, 1000, 4);
        assert_eq!(row.speedup, Some(2.5));
        assert_eq!(row.strong_efficiency, Some(0.625));
        let base = row_at(&summary, 1000, 1);
        assert_eq!(base.speedup, Some(1.0));
        assert_eq!(base.strong_efficiency, Some(1.0));
    }

    #[test]
    fn equal_times_mean_speedup_one() {
        let records = vec![
            record(Algorithm::BruteForce, 500, 1, 2.0),
            record(Algorithm::BruteForce, 500, 2, 2.0),
            record(Algorithm::BruteForce, 500, 8, 2.0),
        ];
        let summary = compute_scaling(&records);
        for p in [2usize, 8] {
            assert_eq!(row_at(&summary, 500, p).speedup, Some(1.0), "p={p}");
        }
    }

    #[test]
    fn weak_efficiency_uses_the_smaller_baseline() {
        let records = vec![
            record(Algorithm::SbmPar, 1000, 1, 8.0),
            record(Algorithm::SbmPar, 4000, 4, 10.0),
        ];
        let summary = compute_scaling(&records);
        let row = row_at(&summary, 4000, 4);
        assert_eq!(row.weak_efficiency, Some(0.8));
        // No same-size P=1 run, so speedup is not computable there.
        assert_eq!(row.speedup, None);
        assert!(!summary.missing_baselines.is_empty());
    }

    #[test]
    fn means_are_taken_over_repetitions() {
        let records = vec![
            record(Algorithm::SbmPar, 1000, 1, 9.0),
            record(Algorithm::SbmPar, 1000, 1, 11.0),
            record(Algorithm::SbmPar, 1000, 2, 5.0),
        ];
        let summary = compute_scaling(&records);
        assert_eq!(row_at(&summary, 1000, 2).speedup, Some(2.0));
    }
}
