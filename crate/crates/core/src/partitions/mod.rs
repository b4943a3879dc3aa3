//! Plane-partition numbers pp(n) from the recurrence
//! n·pp(n) = Σ_{k=1..n} σ₂(k)·pp(n−k), exactly or as certified balls.

mod ball;
mod cache;
mod exact;

use num_bigint::{BigInt, BigUint};

pub use ball::{pp_ball, BallPPTable, DEFAULT_BALL_PRECISION};
pub use cache::{cache_file_name, find_cached, read_header, TableHeader, FORMAT_VERSION};
pub use exact::{estimate_table_bytes, pp_exact, pp_exact_capped, pp_exact_with, DEFAULT_MEM_CAP};

use crate::divisor::{sha256_prefix_hex, Sigma2Table};
use crate::error::{invalid, Result};
use crate::report::{Backend, IneqReport, ReportKind};

pub const RECURRENCE_ID: &str = "macmahon-sigma2";

/// Exact pp(0..=N) together with the hash of the σ₂ table that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPTable {
    values: Vec<BigUint>,
    sigma2_sha: String,
}

impl PPTable {
    pub(crate) fn from_parts(values: Vec<BigUint>, sigma2_sha: String) -> PPTable {
        PPTable { values, sigma2_sha }
    }

    /// Largest index N.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn sigma2_sha(&self) -> &str {
        &self.sigma2_sha
    }

    /// Recurrence identifier plus σ₂ hash.
    pub fn generated_by(&self) -> String {
        format!("{RECURRENCE_ID}/{}", self.sigma2_sha)
    }

    /// The first `n + 1` values as a table of its own.
    pub fn truncated(&self, n: usize) -> Result<PPTable> {
        if n > self.n_max() {
            return invalid(format!("cannot truncate a table of size {} to {n}", self.n_max()));
        }
        let sigma = if n == 0 { None } else { Some(Sigma2Table::new(n)?) };
        Ok(PPTable { values: self.values[..=n].to_vec(), sigma2_sha: sigma2_hash(sigma.as_ref(), n) })
    }

    /// Checks n·pp(n) = Σ σ₂(k)·pp(n−k) at a single index n ≥ 1.
    pub fn recurrence_holds_at(&self, sigma: &Sigma2Table, n: usize) -> bool {
        if n == 0 {
            return self.values[0] == BigUint::from(1u32);
        }
        let sum = (1..=n).fold(BigUint::default(), |acc, k| acc + &self.values[n - k] * sigma.get(k));
        sum == &self.values[n] * n
    }

    /// Checks the recurrence at every index; returns the first failing one.
    pub fn verify_recurrence(&self) -> Result<Option<usize>> {
        if self.n_max() == 0 {
            return Ok((!self.recurrence_holds_at_zero()).then_some(0));
        }
        let sigma = Sigma2Table::new(self.n_max())?;
        Ok((0..=self.n_max()).find(|&n| !self.recurrence_holds_at(&sigma, n)))
    }

    fn recurrence_holds_at_zero(&self) -> bool {
        self.values[0] == BigUint::from(1u32)
    }
}

pub(crate) fn sigma2_hash(sigma: Option<&Sigma2Table>, n: usize) -> String {
    match sigma {
        Some(t) => t.prefix_sha256_hex(n),
        None => sha256_prefix_hex(&[], 0),
    }
}

/// pp(n+1) < 3·pp(n) for 1 ≤ n ≤ N; equality is expected only at n = 1.
pub fn check_step_bound(n_max: usize) -> Result<IneqReport> {
    if n_max < 1 {
        return invalid("step bound needs N >= 1");
    }
    let table = pp_exact(n_max + 1)?;
    Ok(step_bound_report(&table, 1, n_max))
}

pub(crate) fn step_bound_report(table: &PPTable, n_min: usize, n_max: usize) -> IneqReport {
    let mut report = IneqReport::new(ReportKind::Step, format!("{n_min}..={n_max}"), Backend::Exact);
    for n in n_min..=n_max {
        let three = BigInt::from(table.get(n) * 3u32);
        report.push_exact_int(n as u64, None, three - BigInt::from(table.get(n + 1).clone()));
    }
    report
}

pub fn save_table(table: &PPTable, path: impl AsRef<std::path::Path>) -> Result<()> {
    cache::save_table(table, path.as_ref())
}

pub fn load_table(path: impl AsRef<std::path::Path>) -> Result<PPTable> {
    cache::load_table(path.as_ref())
}
