//! Line-oriented text format for exact pp tables:
//!
//! ```text
//! # planepart-table v1
//! # N=<n>
//! # sigma2sha=<hex>
//! <pp(0)>
//! ...
//! <pp(N)>
//! ```

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{sigma2_hash, PPTable};
use crate::divisor::Sigma2Table;
use crate::error::{CacheError, Result};

pub const FORMAT_VERSION: u32 = 1;

const MAGIC: &str = "# planepart-table v";
const SPOT_CHECKS: usize = 16;
const SPOT_SEED: u64 = 0x7070_7461_626c_6531;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableHeader {
    pub version: u32,
    pub n: usize,
    pub sigma2_sha: String,
}

pub fn cache_file_name(n: usize) -> String {
    format!("pp-{n}.txt")
}

/// Smallest cached table in `dir` covering index `n`.
pub fn find_cached(dir: &Path, n: usize) -> Option<PathBuf> {
    let entries = fs::read_dir(dir).ok()?;
    entries
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let size: usize = name.strip_prefix("pp-")?.strip_suffix(".txt")?.parse().ok()?;
            (size >= n).then(|| (size, e.path()))
        })
        .min_by_key(|(size, _)| *size)
        .map(|(_, p)| p)
}

pub(super) fn save_table(table: &PPTable, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write!(out, "{MAGIC}{FORMAT_VERSION}\n# N={}\n# sigma2sha={}\n", table.n_max(), table.sigma2_sha())?;
    for v in table.values() {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

fn parse_header_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<TableHeader, CacheError> {
    let mut next = |what: &str| lines.next().ok_or_else(|| CacheError::CorruptHeader(format!("missing {what} line")));
    let first = next("version")?;
    let version = first
        .strip_prefix(MAGIC)
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| CacheError::CorruptHeader(format!("unrecognized first line {first:?}")))?;
    if version != FORMAT_VERSION {
        return Err(CacheError::UnsupportedVersion(version));
    }
    let second = next("N")?;
    let n = second
        .strip_prefix("# N=")
        .filter(|v| v.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| CacheError::CorruptHeader(format!("bad size line {second:?}")))?;
    let third = next("sigma2sha")?;
    let sha = third
        .strip_prefix("# sigma2sha=")
        .filter(|v| v.len() == 64 && v.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()))
        .ok_or_else(|| CacheError::CorruptHeader(format!("bad hash line {third:?}")))?;
    Ok(TableHeader { version, n, sigma2_sha: sha.to_string() })
}

/// Reads only the header block.
pub fn read_header(path: &Path) -> Result<TableHeader> {
    let text = fs::read_to_string(path)?;
    Ok(parse_header_lines(&mut text.split('\n'))?)
}

pub(super) fn load_table(path: &Path) -> Result<PPTable> {
    let text = fs::read_to_string(path)?;
    Ok(parse_table(&text)?)
}

pub(super) fn parse_table(text: &str) -> Result<PPTable, CacheError> {
    let body = text
        .strip_suffix('\n')
        .ok_or(CacheError::Malformed { line: text.split('\n').count(), reason: "missing final newline".into() })?;
    let mut lines = body.split('\n');
    let header = parse_header_lines(&mut lines)?;
    let sigma = if header.n == 0 { None } else { Some(Sigma2Table::new(header.n).map_err(|e| CacheError::CorruptHeader(e.to_string()))?) };
    let expected = sigma2_hash(sigma.as_ref(), header.n);
    if expected != header.sigma2_sha {
        return Err(CacheError::HashMismatch { expected, found: header.sigma2_sha });
    }
    let mut values = Vec::with_capacity(header.n + 1);
    for (i, line) in lines.enumerate() {
        let line_no = i + 4;
        if line.is_empty() || !line.bytes().all(|b| b.is_ascii_digit()) || (line.len() > 1 && line.starts_with('0')) {
            return Err(CacheError::Malformed { line: line_no, reason: format!("not a canonical decimal: {line:?}") });
        }
        let v = line.parse::<BigUint>().map_err(|e| CacheError::Malformed { line: line_no, reason: e.to_string() })?;
        values.push(v);
    }
    if values.len() != header.n + 1 {
        return Err(CacheError::Malformed {
            line: values.len() + 3,
            reason: format!("expected {} values, found {}", header.n + 1, values.len()),
        });
    }
    let table = PPTable::from_parts(values, header.sigma2_sha);
    spot_check(&table, sigma.as_ref())?;
    Ok(table)
}

/// Every index when N ≤ 16, else index 0 and 16 seeded random indices.
fn spot_check(table: &PPTable, sigma: Option<&Sigma2Table>) -> Result<(), CacheError> {
    if !table.recurrence_holds_at_zero() {
        return Err(CacheError::RecurrenceMismatch(0));
    }
    let Some(sigma) = sigma else { return Ok(()) };
    let n = table.n_max();
    let mut indices: Vec<usize> = if n <= SPOT_CHECKS {
        (1..=n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED);
        sample(&mut rng, n, SPOT_CHECKS).into_iter().map(|i| i + 1).collect()
    };
    indices.sort_unstable();
    match indices.into_iter().find(|&i| !table.recurrence_holds_at(sigma, i)) {
        Some(i) => Err(CacheError::RecurrenceMismatch(i)),
        None => Ok(()),
    }
}
