//! Fixed-schema CSV output for benchmark records, aggregates and scaling
//! summaries.
//!
//! Record files carry the header `algorithm,N,alpha,P,rep,seed,mode,
//! wct_seconds,K`, plus a trailing `peak_rss_bytes` column when peak-RSS
//! measurement is available. Floats are written with Rust's locale-independent
//! shortest round-trip formatting, so re-reading a file reproduces the
//! records exactly.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::scaling::ScalingSummary;
use crate::suite::{Aggregate, BenchRecord};

pub const RECORD_HEADER: &str = "algorithm,N,alpha,P,rep,seed,mode,wct_seconds,K";
pub const RSS_COLUMN: &str = "peak_rss_bytes";
pub const AGGREGATE_HEADER: &str =
    "algorithm,N,alpha,P,mode,reps,mean_wct_seconds,std_wct_seconds,K";
pub const SCALING_HEADER: &str =
    "algorithm,N,alpha,mode,P,speedup,strong_efficiency,weak_efficiency";

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn malformed(line: usize, reason: impl Into<String>) -> CsvError {
    CsvError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Streaming record writer; decides once at construction whether the
/// peak-RSS column is present.
pub struct RecordWriter<W: Write> {
    out: W,
    with_rss: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(mut out: W, with_rss: bool) -> io::Result<Self> {
        if with_rss {
            writeln!(out, "{RECORD_HEADER},{RSS_COLUMN}")?;
        } else {
            writeln!(out, "{RECORD_HEADER}")?;
        }
        Ok(Self { out, with_rss })
    }

    pub fn write(&mut self, r: &BenchRecord) -> io::Result<()> {
        write!(
            self.out,
            "{},{},{},{},{},{},{},{},{}",
            r.algorithm, r.n, r.alpha, r.p, r.rep, r.seed, r.mode, r.wct_seconds, r.matches
        )?;
        if self.with_rss {
            match r.peak_rss_bytes {
                Some(bytes) => write!(self.out, ",{bytes}")?,
                None => write!(self.out, ",")?,
            }
        }
        writeln!(self.out)
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Writes all records at once; the RSS column appears iff any record has a
/// measurement.
pub fn write_records<W: Write>(out: W, records: &[BenchRecord]) -> io::Result<()> {
    let with_rss = records.iter().any(|r| r.peak_rss_bytes.is_some());
    let mut writer = RecordWriter::new(out, with_rss)?;
    for r in records {
        writer.write(r)?;
    }
    writer.finish()?;
    Ok(())
}

/// Reads a record CSV produced by [`RecordWriter`].
pub fn read_records(input: impl BufRead) -> Result<Vec<BenchRecord>, CsvError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty file, expected a header"))?;
    let header = header?;
    let with_rss = match header.as_str() {
        h if h == RECORD_HEADER => false,
        h if h == format!("{RECORD_HEADER},{RSS_COLUMN}") => true,
        other => {
            return Err(malformed(
                1,
                format!("unexpected header `{other}`, expected `{RECORD_HEADER}[,{RSS_COLUMN}]`"),
            ))
        }
    };
    let expected_fields = 9 + usize::from(with_rss);

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected_fields {
            return Err(malformed(
                line_no,
                format!("expected {expected_fields} fields, found {}", fields.len()),
            ));
        }
        let parse_err = |field: &str, what: &str| malformed(line_no, format!("bad {what} `{field}`"));
        let record = BenchRecord {
            algorithm: fields[0]
                .parse()
                .map_err(|_| parse_err(fields[0], "algorithm"))?,
            n: fields[1].parse().map_err(|_| parse_err(fields[1], "N"))?,
            alpha: fields[2].parse().map_err(|_| parse_err(fields[2], "alpha"))?,
            p: fields[3].parse().map_err(|_| parse_err(fields[3], "P"))?,
            rep: fields[4].parse().map_err(|_| parse_err(fields[4], "rep"))?,
            seed: fields[5].parse().map_err(|_| parse_err(fields[5], "seed"))?,
            mode: fields[6].parse().map_err(|_| parse_err(fields[6], "mode"))?,
            wct_seconds: fields[7]
                .parse()
                .map_err(|_| parse_err(fields[7], "wct_seconds"))?,
            matches: fields[8].parse().map_err(|_| parse_err(fields[8], "K"))?,
            peak_rss_bytes: if with_rss && !fields[9].is_empty() {
                Some(fields[9].parse().map_err(|_| parse_err(fields[9], RSS_COLUMN))?)
            } else {
                None
            },
        };
        records.push(record);
    }
    Ok(records)
}

pub fn write_aggregates<W: Write>(mut out: W, aggregates: &[Aggregate]) -> io::Result<()> {
    writeln!(out, "{AGGREGATE_HEADER}")?;
    for a in aggregates {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            a.algorithm,
            a.n,
            a.alpha,
            a.p,
            a.mode,
            a.reps,
            a.mean_wct_seconds,
            a.std_wct_seconds,
            a.matches
        )?;
    }
    out.flush()
}

fn optional(value: Option<f64>) -> String {
    value.map_or_else(String::new, |v| v.to_string())
}

pub fn write_scaling<W: Write>(mut out: W, summary: &ScalingSummary) -> io::Result<()> {
    writeln!(out, "{SCALING_HEADER}")?;
    for row in &summary.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.algorithm,
            row.n,
            row.alpha,
            row.mode,
            row.p,
            optional(row.speedup),
            optional(row.strong_efficiency),
            optional(row.weak_efficiency)
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddm_core::{Algorithm, ReportMode};

    fn record(rep: usize, rss: Option<u64>) -> BenchRecord {
        BenchRecord {
            algorithm: Algorithm::SbmPar,
            n: 10_000,
            alpha: 0.01,
            p: 4,
            rep,
            seed: 42,
            mode: ReportMode::Count,
            wct_seconds: 0.001234567 + rep as f64,
            matches: 217,
            peak_rss_bytes: rss,
        }
    }

    #[test]
    fn records_round_trip_without_rss() {
        let records = vec![record(0, None), record(1, None)];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(RECORD_HEADER));
        assert!(!text.contains(RSS_COLUMN));
        let back = read_records(&buf[..]).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn records_round_trip_with_rss() {
        let records = vec![record(0, Some(1 << 20)), record(1, Some(1 << 21))];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().next().unwrap().ends_with(RSS_COLUMN));
        let back = read_records(&buf[..]).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn bad_headers_and_fields_name_the_line() {
        let err = read_records("nope\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Malformed { line: 1, .. }), "{err}");

        let text = format!("{RECORD_HEADER}\nbf,100,1,1,0,7,count,oops,3\n");
        let err = read_records(text.as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Malformed { line: 2, .. }), "{err}");
    }

    #[test]
    fn scaling_rows_leave_missing_cells_empty() {
        use crate::scaling::{ScalingRow, ScalingSummary};
        let summary = ScalingSummary {
            rows: vec![ScalingRow {
                algorithm: Algorithm::IntervalTree,
                n: 4000,
                alpha: 1.0,
                mode: ReportMode::Count,
                p: 4,
                speedup: None,
                strong_efficiency: None,
                weak_efficiency: Some(0.8),
            }],
            missing_baselines: vec![],
        };
        let mut buf = Vec::new();
        write_scaling(&mut buf, &summary).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "itm,4000,1,count,4,,,0.8");
    }
}
