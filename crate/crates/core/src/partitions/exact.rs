use num_bigint::BigUint;

use super::{sigma2_hash, PPTable};
use crate::divisor::Sigma2Table;
use crate::error::{Error, Result};

pub const DEFAULT_MEM_CAP: u64 = 4 << 30;

/// Rough peak memory of `pp_exact(n)`: limb vectors plus the final big
/// integers, using ~0.873·n^(2/3) decimal digits for pp(n).
pub fn estimate_table_bytes(n: usize) -> u64 {
    let n = n as f64;
    let digit_sum = 0.873 * 0.6 * n.powf(5.0 / 3.0);
    let bytes_per_digit = std::f64::consts::LOG2_10 / 8.0;
    (2.0 * digit_sum * bytes_per_digit + 96.0 * (n + 1.0)) as u64
}

pub fn pp_exact(n: usize) -> Result<PPTable> {
    pp_exact_capped(n, DEFAULT_MEM_CAP)
}

/// `pp_exact` with an explicit memory cap in bytes.
pub fn pp_exact_capped(n: usize, mem_cap: u64) -> Result<PPTable> {
    let needed = estimate_table_bytes(n);
    if needed > mem_cap {
        return Err(Error::ResourceLimit { needed, cap: mem_cap });
    }
    if n == 0 {
        return Ok(PPTable::from_parts(vec![BigUint::from(1u32)], sigma2_hash(None, 0)));
    }
    let sigma = Sigma2Table::new(n)?;
    Ok(pp_exact_with(&sigma, n))
}

/// pp(0..=n) from a σ₂ table with at least `n` entries.
pub fn pp_exact_with(sigma: &Sigma2Table, n: usize) -> PPTable {
    let limbs = recurrence_limbs(sigma.as_slice(), n);
    let values = limbs.iter().map(|l| from_limbs(l)).collect();
    let sha = if n == 0 { sigma2_hash(None, 0) } else { sigma.prefix_sha256_hex(n) };
    PPTable::from_parts(values, sha)
}

fn from_limbs(limbs: &[u64]) -> BigUint {
    let digits: Vec<u32> = limbs.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect();
    BigUint::new(digits)
}

/// Runs the recurrence on little-endian u64 limbs. Products σ₂(k)·limb are
/// summed into u128 lanes; lanes are carry-normalized often enough that
/// they never overflow. The final division by n must leave no remainder.
fn recurrence_limbs(sigma: &[u64], n_max: usize) -> Vec<Vec<u64>> {
    let max_sigma = sigma[..n_max].iter().copied().max().unwrap_or(1).max(1);
    // each lane starts below 2^64 after normalization; `chunk` more
    // products of size < 2^64·max_sigma keep it below 2^128
    recurrence_limbs_chunked(sigma, n_max, (u64::MAX / max_sigma).max(1) as usize)
}

fn recurrence_limbs_chunked(sigma: &[u64], n_max: usize, chunk: usize) -> Vec<Vec<u64>> {
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(n_max + 1);
    table.push(vec![1]);
    let mut acc: Vec<u128> = Vec::new();
    for n in 1..=n_max {
        let width = table[n - 1].len() + 2;
        acc.clear();
        acc.resize(width, 0);
        let mut since_flush = 0usize;
        for k in 1..=n {
            let s = sigma[k - 1] as u128;
            for (lane, &limb) in acc.iter_mut().zip(&table[n - k]) {
                *lane += limb as u128 * s;
            }
            since_flush += 1;
            if since_flush == chunk {
                normalize(&mut acc);
                since_flush = 0;
            }
        }
        normalize(&mut acc);
        let mut limbs: Vec<u64> = acc.iter().map(|&v| v as u64).collect();
        let rem = div_small(&mut limbs, n as u64);
        assert_eq!(rem, 0, "recurrence sum at n = {n} is not divisible by n");
        while limbs.len() > 1 && *limbs.last().unwrap() == 0 {
            limbs.pop();
        }
        table.push(limbs);
    }
    table
}

fn normalize(acc: &mut [u128]) {
    let mut carry = 0u128;
    for lane in acc.iter_mut() {
        let v = *lane + carry;
        *lane = v & u64::MAX as u128;
        carry = v >> 64;
    }
    assert_eq!(carry, 0, "accumulator width too small");
}

fn div_small(limbs: &mut [u64], d: u64) -> u64 {
    let mut rem = 0u128;
    for limb in limbs.iter_mut().rev() {
        let cur = (rem << 64) | *limb as u128;
        *limb = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    rem as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    /// Coefficients of ∏_{m=1..N} (1 − q^m)^(−m), expanded by repeated
    /// multiplication with 1/(1 − q^m).
    fn product_oracle(n: usize) -> Vec<BigUint> {
        let mut series = vec![BigUint::default(); n + 1];
        series[0] = BigUint::from(1u32);
        for m in 1..=n {
            for _ in 0..m {
                for i in m..=n {
                    let prev = series[i - m].clone();
                    series[i] += prev;
                }
            }
        }
        series
    }

    #[test]
    fn first_values_match_table_one() {
        let t = pp_exact(10).unwrap();
        let got: Vec<u64> = t.values().iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]);
        assert_eq!(pp_exact(0).unwrap().values(), &[BigUint::from(1u32)]);
    }

    #[test]
    fn agrees_with_product_expansion_to_two_hundred() {
        let t = pp_exact(200).unwrap();
        let oracle = product_oracle(200);
        assert_eq!(t.values(), &oracle[..]);
        assert_eq!(t.get(20), &BigUint::from(75278u32));
    }

    #[test]
    fn recurrence_identity_and_monotonicity() {
        let t = pp_exact(400).unwrap();
        assert_eq!(t.verify_recurrence().unwrap(), None);
        for n in 1..400 {
            assert!(t.get(n) < t.get(n + 1));
        }
    }

    #[test]
    fn frequent_flushes_give_same_values() {
        let sigma = Sigma2Table::new(80).unwrap();
        let reference = recurrence_limbs(sigma.as_slice(), 80);
        for chunk in [1, 3, 7] {
            assert_eq!(recurrence_limbs_chunked(sigma.as_slice(), 80, chunk), reference);
        }
    }

    #[test]
    fn memory_cap_refuses_large_requests() {
        assert!(matches!(pp_exact_capped(100_000, 1 << 20), Err(Error::ResourceLimit { .. })));
        assert!(estimate_table_bytes(100_000) < DEFAULT_MEM_CAP);
    }

    #[test]
    fn division_helper() {
        let mut limbs = vec![0u64, 6];
        assert_eq!(div_small(&mut limbs, 4), 0);
        assert_eq!(limbs, [1u64 << 63, 1]);
    }
}
