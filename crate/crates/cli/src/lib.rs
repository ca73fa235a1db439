//! Library side of the `kduncd` command: plotting, diagram caching and the
//! verification suites, shared by the binary and its tests.

pub mod plot;
pub mod store;
pub mod suites;

use std::ops::RangeInclusive;

/// Parses `N` or `A..B` (inclusive).
pub fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension {t:?}: {e}"));
    let range = match s.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.trim_start_matches('='))?,
        None => {
            let d = parse(s)?;
            d..=d
        }
    };
    if *range.start() == 0 || range.start() > range.end() {
        return Err(format!("empty or zero dimension range {s:?}"));
    }
    Ok(range)
}
