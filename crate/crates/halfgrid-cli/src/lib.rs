//! File formats and argument plumbing for the `halfgrid` binary: JSONL
//! traces and stream files, CSV sweep tables, and exact-rational argument
//! parsing. Numbers are never rounded; rationals travel as `p/q` strings.

pub mod jsonl;

use anyhow::{anyhow, bail, Context, Result};
use halfgrid::lattice::{HalfSpace, Int, IntVec, Rat};
use halfgrid::streams::{StreamKind, StreamSpec};

/// Parses an exact rational: an integer or `p/q`. Decimal input is
/// rejected so nothing is silently rounded.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.contains('.') {
        bail!("decimal input {s:?} rejected: write an exact rational like 3/2");
    }
    let int = |v: &str, what: &'static str| -> Result<Int> {
        v.trim()
            .parse::<Int>()
            .map_err(|e| anyhow!("{what}: {e}"))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let num = int(num, "rational numerator")?;
            let den = int(den, "rational denominator")?;
            if den == Int::from(0) {
                bail!("rational denominator is zero");
            }
            Ok(Rat::new(num, den))
        }
        None => Ok(Rat::from_integer(int(s, "integer")?)),
    }
}

/// Parses a comma-separated list of exact rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rational).collect()
}

/// Parses a comma-separated integer point.
pub fn parse_point(s: &str) -> Result<IntVec> {
    let coords: Result<Vec<Int>> = s
        .split(',')
        .map(|c| c.trim().parse::<Int>().map_err(|e| anyhow!("point coordinate: {e}")))
        .collect();
    let coords = coords?;
    if coords.is_empty() {
        bail!("empty point");
    }
    Ok(IntVec::new(coords))
}

/// The canonical half-space of the target inequality
/// `sum coeffs_i x_i + offset >= 0`.
pub fn parse_target(coeffs: &str, offset: &str) -> Result<HalfSpace> {
    let coeffs = parse_rational_list(coeffs).context("target coeffs")?;
    let offset = parse_rational(offset).context("target offset")?;
    HalfSpace::from_inequality(&coeffs, &offset)
        .map_err(|_| anyhow!("target slopes all zero"))
}

/// Builds a stream spec from CLI-level fields.
pub fn build_stream(
    target: HalfSpace,
    kind: &str,
    seed: u64,
    repeat_rate: u8,
    withhold: Option<&IntVec>,
    release_at: u64,
) -> Result<StreamSpec> {
    let kind = match kind {
        "canonical" => StreamKind::Canonical,
        "permuted" => StreamKind::Permuted,
        "repeat" | "repeat-heavy" => StreamKind::RepeatHeavy {
            repeat_percent: repeat_rate,
        },
        "withhold" => StreamKind::Withhold {
            point: withhold
                .cloned()
                .ok_or_else(|| anyhow!("stream kind withhold needs --withhold x,y"))?,
            release_at,
        },
        other => bail!("unknown stream kind {other:?}"),
    };
    StreamSpec::new(target, kind, seed).map_err(|e| anyhow!("stream: {e}"))
}

/// Formats a half-space compactly for CSV rows: `a1,a2;c`.
pub fn target_label(h: &HalfSpace) -> String {
    let coords: Vec<String> = h.normal().coords().iter().map(|c| c.to_string()).collect();
    format!("{};{}", coords.join(","), h.floor_offset())
}
