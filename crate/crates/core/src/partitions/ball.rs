use crate::ball::{Ball, Float, Mag};
use crate::divisor::Sigma2Table;
use crate::error::{invalid, Error, Result};

use super::exact::pp_exact_with;

pub const DEFAULT_BALL_PRECISION: u64 = 192;

/// Indices up to this bound are cross-checked against the exact recurrence.
const EXACT_CHECK_WINDOW: usize = 256;

const GUARD_BITS: u64 = 32;

/// Certified enclosures of pp(0..=N).
#[derive(Debug, Clone)]
pub struct BallPPTable {
    balls: Vec<Ball>,
    precision_bits: u64,
    degraded_from: Option<usize>,
}

impl BallPPTable {
    pub fn n_max(&self) -> usize {
        self.balls.len() - 1
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn get(&self, n: usize) -> &Ball {
        &self.balls[n]
    }

    pub fn mid(&self, n: usize) -> &Float {
        self.balls[n].mid()
    }

    pub fn rad(&self, n: usize) -> &Mag {
        self.balls[n].rad()
    }

    pub fn precision_bits(&self) -> u64 {
        self.precision_bits
    }

    /// First index whose relative radius exceeds 2^(−precision/2), if any.
    pub fn degraded_from(&self) -> Option<usize> {
        self.degraded_from
    }

    pub fn is_degraded(&self) -> bool {
        self.degraded_from.is_some()
    }
}

/// Enclosures of pp(0..=n) at `precision_bits` bits.
///
/// For large n the recurrence sum is cut once the remaining terms are
/// negligible; since pp is non-decreasing, the remainder is bounded by
/// pp(n−K−1)·Σ_{k>K} σ₂(k) and folded into the radius.
pub fn pp_ball(n: usize, precision_bits: u64) -> Result<BallPPTable> {
    if precision_bits < 64 {
        return invalid(format!("ball precision must be at least 64 bits, got {precision_bits}"));
    }
    let mut balls = vec![Ball::one()];
    if n == 0 {
        return Ok(BallPPTable { balls, precision_bits, degraded_from: None });
    }
    let sigma = Sigma2Table::new(n)?;
    let s = sigma.as_slice();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u128);
    for &v in s {
        prefix.push(prefix.last().unwrap() + v as u128);
    }
    let wp = precision_bits + GUARD_BITS;
    let mut log2_pp = vec![0f64];
    let degrade_limit = -(precision_bits as f64) / 2.0;
    let mut degraded_from = None;

    for m in 1..=n {
        let floor = log2_pp[m - 1] - wp as f64 - 8.0;
        let mut mid_sum = Float::zero();
        let mut rad_sum = Mag::zero();
        let mut tail = Mag::zero();
        for k in 1..=m {
            let term = &balls[m - k];
            mid_sum = mid_sum.add(&term.mid().mul_u64(s[k - 1]));
            rad_sum = rad_sum.add(&term.rad().mul_u64(s[k - 1]));
            let rest = m - k;
            if rest >= 1 && k % 16 == 0 {
                let remaining = prefix[m] - prefix[k];
                if log2_pp[rest - 1] + (remaining as f64).log2() < floor {
                    tail = Mag::upper_of(&balls[rest - 1].upper()).mul(&mag_from_u128(remaining));
                    break;
                }
            }
        }
        let sum = Ball::new(mid_sum, rad_sum.add(&tail)).round(wp);
        let value = sum.div_u64(m as u64, precision_bits);
        if degraded_from.is_none() && !value.is_exact() && value.rad().log2_approx() - value.mid().log2_approx() > degrade_limit {
            degraded_from = Some(m);
        }
        log2_pp.push(value.mid().log2_approx());
        balls.push(value);
    }

    let window = n.min(EXACT_CHECK_WINDOW);
    let exact = pp_exact_with(&sigma, window);
    for (i, v) in exact.values().iter().enumerate() {
        if !balls[i].contains(&Float::from_biguint(v)) {
            return Err(Error::Inconclusive(format!("ball for pp({i}) misses the exact value")));
        }
    }
    Ok(BallPPTable { balls, precision_bits, degraded_from })
}

fn mag_from_u128(v: u128) -> Mag {
    let hi = (v >> 64) as u64;
    let lo = v as u64;
    Mag::from_u64(hi).mul_2exp(64).add(&Mag::from_u64(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::pp_exact;

    #[test]
    fn small_table_contains_exact_values() {
        let t = pp_ball(10, 64).unwrap();
        for (i, v) in [1u64, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500].iter().enumerate() {
            assert!(t.get(i).contains(&Float::from_u64(*v)), "n = {i}");
        }
        assert!(!t.is_degraded());
    }

    #[test]
    fn zero_gives_exact_one() {
        let t = pp_ball(0, 64).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.get(0).is_exact());
        assert_eq!(t.mid(0), &Float::one());
        assert!(pp_ball(5, 32).is_err());
    }

    #[test]
    fn two_thousand_at_192_bits() {
        let t = pp_ball(2000, 192).unwrap();
        let exact = pp_exact(2000).unwrap();
        for n in [300, 1000, 1999, 2000] {
            assert!(t.get(n).contains(&Float::from_biguint(exact.get(n))), "n = {n}");
        }
        assert!(!t.is_degraded());
        assert!(t.get(2000).accuracy_bits() > 150.0);
    }

    #[test]
    fn low_precision_tables_still_contain_values() {
        let t = pp_ball(600, 64).unwrap();
        let exact = pp_exact(600).unwrap();
        for n in (0..=600).step_by(37) {
            assert!(t.get(n).contains(&Float::from_biguint(exact.get(n))), "n = {n}");
        }
    }

    #[test]
    fn wide_magnitudes() {
        let m = mag_from_u128((1u128 << 100) + 12345);
        assert!(m.to_float().to_rational() >= num_rational::BigRational::from_integer(((1u128 << 100) + 12345).into()));
    }
}
