//! Peak resident-set measurement.
//!
//! Two sources, tried in order:
//!
//! - **Per-run**: the kernel's resident-set high-water mark (`VmHWM` in
//!   `/proc/self/status`), reset to the current resident size by writing `5`
//!   to `/proc/self/clear_refs` before each run. Gives each run its own peak.
//! - **Cumulative**: `getrusage(RUSAGE_SELF).ru_maxrss`, the process-lifetime
//!   peak. Available almost everywhere but never decreases, so a run's value
//!   is the maximum over everything the process has done so far.
//!
//! When neither source works the capability is reported as absent and no
//! value is ever fabricated.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capability {
    /// High-water mark resettable between runs.
    PerRun,
    /// Process-lifetime peak only.
    Cumulative,
    Unavailable,
}

pub fn capability() -> Capability {
    static CAPABILITY: OnceLock<Capability> = OnceLock::new();
    *CAPABILITY.get_or_init(|| {
        if reset_high_water_mark().is_some() && read_high_water_mark().is_some() {
            Capability::PerRun
        } else if read_rusage_peak().is_some() {
            Capability::Cumulative
        } else {
            Capability::Unavailable
        }
    })
}

pub fn supported() -> bool {
    capability() != Capability::Unavailable
}

pub fn per_run() -> bool {
    capability() == Capability::PerRun
}

/// A measurement window around one run.
#[derive(Debug)]
pub struct PeakRss(Capability);

impl PeakRss {
    pub fn begin() -> Option<PeakRss> {
        match capability() {
            Capability::PerRun => {
                reset_high_water_mark()?;
                Some(PeakRss(Capability::PerRun))
            }
            Capability::Cumulative => Some(PeakRss(Capability::Cumulative)),
            Capability::Unavailable => None,
        }
    }

    /// Peak resident set in bytes: since `begin` under [`Capability::PerRun`],
    /// since process start under [`Capability::Cumulative`].
    pub fn end(self) -> Option<u64> {
        match self.0 {
            Capability::PerRun => read_high_water_mark(),
            Capability::Cumulative => read_rusage_peak(),
            Capability::Unavailable => None,
        }
    }
}

#[cfg(target_os = "linux")]
fn reset_high_water_mark() -> Option<()> {
    std::fs::write("/proc/self/clear_refs", "5").ok()
}

#[cfg(target_os = "linux")]
fn read_high_water_mark() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(not(target_os = "linux"))]
fn reset_high_water_mark() -> Option<()> {
    None
}

#[cfg(not(target_os = "linux"))]
fn read_high_water_mark() -> Option<u64> {
    None
}

#[cfg(unix)]
fn read_rusage_peak() -> Option<u64> {
    let mut usage = std::mem::MaybeUninit::<libc::rusage>::zeroed();
    let rc = unsafe { libc::getrusage(libc::RUSAGE_SELF, usage.as_mut_ptr()) };
    if rc != 0 {
        return None;
    }
    let usage = unsafe { usage.assume_init() };
    if usage.ru_maxrss <= 0 {
        return None;
    }
    // ru_maxrss is kilobytes on Linux, bytes on macOS.
    let unit = if cfg!(target_os = "macos") { 1 } else { 1024 };
    Some(usage.ru_maxrss as u64 * unit)
}

#[cfg(not(unix))]
fn read_rusage_peak() -> Option<u64> {
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_tracks_a_large_allocation() {
        let Some(probe) = PeakRss::begin() else {
            eprintln!("peak-RSS probe unsupported here; skipping");
            return;
        };
        // Touch 64 MiB so it is actually resident.
        let block = vec![1u8; 64 << 20];
        std::hint::black_box(&block);
        let peak = probe.end().expect("probe began, so reads should work");
        assert!(peak >= block.len() as u64, "peak {peak} below allocation");
        drop(block);
    }

    #[test]
    fn cumulative_peaks_never_decrease() {
        if !supported() {
            eprintln!("peak-RSS probe unsupported here; skipping");
            return;
        }
        let first = PeakRss::begin().unwrap().end().unwrap();
        let block = vec![2u8; 16 << 20];
        std::hint::black_box(&block);
        let second = PeakRss::begin().unwrap().end().unwrap();
        drop(block);
        if capability() == Capability::Cumulative {
            assert!(second >= first);
        }
        assert!(second >= 16 << 20);
    }
}
