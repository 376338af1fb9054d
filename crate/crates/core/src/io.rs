//! Extent persistence: a line-oriented text format plus a JSON metadata
//! sidecar for generated workloads.
//!
//! One extent per line, whitespace-separated:
//!
//! ```text
//! # comment
//! S 0 12.5 14.75
//! U 3 0.25 10 2 4
//! ```
//!
//! The leading tag is `S` for subscriptions and `U` for updates, followed by
//! the id and one `low high` pair per dimension. Coordinates use decimal
//! notation; `#`-prefixed lines are ignored. Floats are written in Rust's
//! shortest round-trip notation, so `load(save(x)) == x`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extent::{Extent, ExtentKind};
use crate::workload::{WorkloadConfig, RNG_ALGORITHM};

/// Errors from reading an extent file.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("line {line}: extent has {found} dimensions, expected {expected}")]
    DimensionMismatch {
        line: usize,
        found: usize,
        expected: usize,
    },

    #[error("line {line}: duplicate {kind} id {id}")]
    DuplicateId {
        line: usize,
        kind: ExtentKind,
        id: u32,
    },
}

fn malformed(line: usize, reason: impl Into<String>) -> LoadError {
    LoadError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Writes both extent sets to `path` in the text format.
pub fn save_extents(subs: &[Extent], upds: &[Extent], path: &Path) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# extent set: kind id low_0 high_0 [low_1 high_1 ...]")?;
    for e in subs.iter().chain(upds.iter()) {
        write!(out, "{} {}", e.kind().tag(), e.id())?;
        for iv in e.bounds() {
            write!(out, " {} {}", iv.low(), iv.high())?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// Reads an extent file back into its subscription and update sets,
/// preserving the in-file order within each kind.
pub fn load_extents(path: &Path) -> Result<(Vec<Extent>, Vec<Extent>), LoadError> {
    let reader = BufReader::new(File::open(path)?);
    let mut subs = Vec::new();
    let mut upds = Vec::new();
    let mut seen_sub_ids = HashSet::new();
    let mut seen_upd_ids = HashSet::new();
    let mut expected_dims: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let tag = tokens.next().expect("non-empty line has a first token");
        let kind = ExtentKind::from_tag(tag)
            .ok_or_else(|| malformed(line_no, format!("unknown kind tag `{tag}`")))?;
        let id: u32 = tokens
            .next()
            .ok_or_else(|| malformed(line_no, "missing extent id"))?
            .parse()
            .map_err(|e| malformed(line_no, format!("bad extent id: {e}")))?;

        let coords = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| malformed(line_no, format!("bad coordinate `{t}`: {e}")))
            })
            .collect::<Result<Vec<f64>, LoadError>>()?;
        if coords.is_empty() {
            return Err(malformed(line_no, "extent has no coordinates"));
        }
        if coords.len() % 2 != 0 {
            return Err(malformed(
                line_no,
                format!("odd number of coordinates ({})", coords.len()),
            ));
        }

        let pairs: Vec<(f64, f64)> = coords.chunks(2).map(|c| (c[0], c[1])).collect();
        let dims = pairs.len();
        match expected_dims {
            None => expected_dims = Some(dims),
            Some(expected) if expected != dims => {
                return Err(LoadError::DimensionMismatch {
                    line: line_no,
                    found: dims,
                    expected,
                });
            }
            _ => {}
        }

        let extent = Extent::from_pairs(id, kind, &pairs)
            .map_err(|e| malformed(line_no, e.to_string()))?;
        let (bucket, seen) = match kind {
            ExtentKind::Subscription => (&mut subs, &mut seen_sub_ids),
            ExtentKind::Update => (&mut upds, &mut seen_upd_ids),
        };
        if !seen.insert(id) {
            return Err(LoadError::DuplicateId {
                line: line_no,
                kind,
                id,
            });
        }
        bucket.push(extent);
    }
    Ok((subs, upds))
}

/// Workload provenance written next to each generated extent file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadMetadata {
    pub config: WorkloadConfig,
    pub rng: String,
    pub extent_length: f64,
}

impl WorkloadMetadata {
    pub fn for_config(config: &WorkloadConfig) -> Self {
        Self {
            config: config.clone(),
            rng: RNG_ALGORITHM.to_string(),
            extent_length: config.extent_length(),
        }
    }
}

/// The sidecar path for a workload file: `<path>.meta.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Saves a generated workload together with its metadata sidecar.
pub fn save_workload(
    cfg: &WorkloadConfig,
    subs: &[Extent],
    upds: &[Extent],
    path: &Path,
) -> std::io::Result<()> {
    save_extents(subs, upds, path)?;
    let meta = WorkloadMetadata::for_config(cfg);
    let file = BufWriter::new(File::create(sidecar_path(path))?);
    serde_json::to_writer_pretty(file, &meta).map_err(std::io::Error::other)
}

/// Reads a workload's metadata sidecar.
pub fn load_metadata(path: &Path) -> std::io::Result<WorkloadMetadata> {
    let file = BufReader::new(File::open(sidecar_path(path))?);
    serde_json::from_reader(file).map_err(std::io::Error::other)
}
