//! Sum of squared divisors, σ₂(n) = Σ_{d|n} d², and its elementary bounds.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};
use crate::report::{Backend, IneqReport, ReportKind};

/// σ₂(1..=N), built once by a divisor sieve and immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma2Table {
    // values[i] = σ₂(i + 1)
    values: Vec<u64>,
}

impl Sigma2Table {
    /// Sieves σ₂(1..=n) in O(n log n) additions.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("sigma2 table needs N >= 1");
        }
        let mut values = vec![0u64; n];
        for d in 1..=n {
            let sq = (d as u64) * (d as u64);
            for multiple in (d..=n).step_by(d) {
                values[multiple - 1] += sq;
            }
        }
        Ok(Sigma2Table { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// σ₂(n) for 1 ≤ n ≤ len.
    pub fn get(&self, n: usize) -> u64 {
        assert!(n >= 1 && n <= self.values.len(), "sigma2 index {n} outside 1..={}", self.values.len());
        self.values[n - 1]
    }

    /// σ₂(1), σ₂(2), … in order.
    pub fn as_slice(&self) -> &[u64] {
        &self.values
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// SHA-256 over the decimal values, one per line (LF), σ₂(1) first.
    pub fn sha256_hex(&self) -> String {
        sha256_prefix_hex(&self.values, self.values.len())
    }

    /// Hash of the first `n` entries, identical to `Sigma2Table::new(n)?.sha256_hex()`.
    pub fn prefix_sha256_hex(&self, n: usize) -> String {
        sha256_prefix_hex(&self.values, n)
    }
}

pub(crate) fn sha256_prefix_hex(values: &[u64], n: usize) -> String {
    let mut hasher = Sha256::new();
    for v in &values[..n] {
        hasher.update(v.to_string().as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

pub fn sigma2_table(n: usize) -> Result<Sigma2Table> {
    Sigma2Table::new(n)
}

/// Compares Π lhs with Π rhs exactly, widening to big integers on overflow.
pub(crate) fn cmp_products(lhs: &[u64], rhs: &[u64]) -> Ordering {
    fn narrow(xs: &[u64]) -> Option<u128> {
        xs.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128))
    }
    match (narrow(lhs), narrow(rhs)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => {
            let wide = |xs: &[u64]| xs.iter().fold(BigUint::from(1u32), |acc, &x| acc * x);
            wide(lhs).cmp(&wide(rhs))
        }
    }
}

fn product_difference(lhs: &[u64], rhs: &[u64]) -> BigInt {
    let wide = |xs: &[u64]| xs.iter().fold(BigInt::from(1), |acc, &x| acc * x);
    wide(lhs) - wide(rhs)
}

/// For every even n in [2, N]: (σ₂(n)/n)² > σ₂(n−1)/(n−1) · σ₂(n+1)/(n+1),
/// compared as σ₂(n)²(n−1)(n+1) against n²σ₂(n−1)σ₂(n+1).
pub fn check_sigma2_even_logconcave(n_max: usize) -> Result<IneqReport> {
    if n_max < 2 {
        return invalid("even log-concavity check needs N >= 2");
    }
    let table = Sigma2Table::new(n_max + 1)?;
    let mut report = IneqReport::new(
        ReportKind::Custom("sigma2-even-logconcave".into()),
        format!("even n in [2, {n_max}]"),
        Backend::Exact,
    );
    for n in (2..=n_max).step_by(2) {
        let s = table.get(n);
        let lhs = [s, s, (n - 1) as u64, (n + 1) as u64];
        let rhs = [n as u64, n as u64, table.get(n - 1), table.get(n + 1)];
        match cmp_products(&lhs, &rhs) {
            Ordering::Greater => report.push_exact_int(n as u64, None, BigInt::from(1)),
            _ => report.push_exact_int(n as u64, None, product_difference(&lhs, &rhs)),
        };
    }
    Ok(report)
}

/// n² ≤ σ₂(n) < 2n² for 1 ≤ n ≤ N. The recorded difference is the smaller
/// of the two slacks σ₂(n) − n² + 1 and 2n² − σ₂(n), so HOLDS means both
/// hold.
pub fn check_sigma2_upper_bound(n_max: usize) -> Result<IneqReport> {
    let table = Sigma2Table::new(n_max)?;
    let mut report = IneqReport::new(
        ReportKind::Custom("sigma2-bounds".into()),
        format!("n in [1, {n_max}]"),
        Backend::Exact,
    );
    for n in 1..=n_max {
        let sq = (n as i128) * (n as i128);
        let s = table.get(n) as i128;
        let lower_slack = s - sq + 1;
        let upper_slack = 2 * sq - s;
        report.push_exact_int(n as u64, None, BigInt::from(lower_slack.min(upper_slack)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn trial_division(n: u64) -> u64 {
        let mut total = 0;
        let mut d = 1;
        while d * d <= n {
            if n.is_multiple_of(d) {
                total += d * d;
                let e = n / d;
                if e != d {
                    total += e * e;
                }
            }
            d += 1;
        }
        total
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn first_values_match_table_four() {
        assert_eq!(Sigma2Table::new(5).unwrap().as_slice(), &[1, 5, 10, 21, 26]);
        assert_eq!(Sigma2Table::new(1).unwrap().as_slice(), &[1]);
        assert_eq!(Sigma2Table::new(12).unwrap().get(12), 1 + 4 + 9 + 16 + 36 + 144);
    }

    #[test]
    fn rejects_empty_table() {
        assert!(Sigma2Table::new(0).is_err());
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let t = Sigma2Table::new(10_000).unwrap();
        for n in 1..=10_000 {
            assert_eq!(t.get(n), trial_division(n as u64), "n = {n}");
        }
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let t = Sigma2Table::new(2500).unwrap();
        for m in 1..=50 {
            for n in 1..=50 {
                if gcd(m, n) == 1 {
                    assert_eq!(t.get(m * n), t.get(m) * t.get(n));
                }
            }
        }
    }

    #[test]
    fn primes_have_sigma2_one_plus_square() {
        let t = Sigma2Table::new(100).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            assert_eq!(t.get(p as usize), 1 + p * p);
        }
    }

    #[test]
    fn even_logconcavity_small_cases() {
        let r = check_sigma2_even_logconcave(2).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].verdict, Verdict::Holds);
        // n = 2: 5²·1·3 = 75 > 2²·1·10 = 40
        assert_eq!(cmp_products(&[5, 5, 1, 3], &[2, 2, 1, 10]), Ordering::Greater);
        let r = check_sigma2_even_logconcave(10).unwrap();
        assert_eq!(r.records.len(), 5);
        assert!(r.all_hold());
        assert!(check_sigma2_even_logconcave(1).is_err());
    }

    #[test]
    fn odd_indices_can_fail_log_concavity() {
        // n = 3: (10/3)² = 11.1 < (5/2)(21/4) = 13.1
        let t = Sigma2Table::new(4).unwrap();
        let lhs = [t.get(3), t.get(3), 2, 4];
        let rhs = [3, 3, t.get(2), t.get(4)];
        assert_eq!(cmp_products(&lhs, &rhs), Ordering::Less);
    }

    #[test]
    fn square_bounds_small_cases() {
        let r = check_sigma2_upper_bound(6).unwrap();
        assert!(r.all_hold());
        let t = Sigma2Table::new(6).unwrap();
        assert!(1 <= t.get(1) && t.get(1) < 2);
        assert!(16 <= t.get(4) && t.get(4) < 32);
        assert!(36 <= t.get(6) && t.get(6) < 72 && t.get(6) == 50);
    }

    #[test]
    fn bounds_and_even_logconcavity_to_one_hundred_thousand() {
        assert!(check_sigma2_upper_bound(100_000).unwrap().all_hold());
        assert!(check_sigma2_even_logconcave(100_000).unwrap().all_hold());
    }

    #[test]
    fn prefix_hash_matches_fresh_table() {
        let big = Sigma2Table::new(50).unwrap();
        assert_eq!(big.prefix_sha256_hex(20), Sigma2Table::new(20).unwrap().sha256_hex());
    }
}
