use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::family_values;
use crate::error::{invalid, Result};
use crate::family::PolyFamily;
use crate::partitions::PPTable;

/// Largest index the sums reach: k + b ≤ 11.
const SUM_TOP: usize = 11;

fn negative_part<T: Zero + PartialOrd>(v: T) -> T {
    if v < T::zero() {
        v
    } else {
        T::zero()
    }
}

/// For b = 1..=b_max: Σ_{k=1..11−b} (P_k(x)P_b(x) − P_{k+b}(x))₋ with
/// v₋ = min(v, 0).
pub fn minimal_sums_table(family: &PolyFamily, x: &BigRational, b_max: usize) -> Result<Vec<BigRational>> {
    if b_max == 0 || b_max > 10 {
        return invalid(format!("b_max must lie in 1..=10, got {b_max}"));
    }
    let p = family_values(family, SUM_TOP, x)?;
    Ok((1..=b_max)
        .map(|b| (1..=SUM_TOP - b).map(|k| negative_part(&p[k] * &p[b] - &p[k + b])).sum())
        .collect())
}

fn pp_sums(table: &PPTable, b_max: usize, term: impl Fn(BigInt) -> BigInt) -> Result<Vec<BigInt>> {
    if !(2..=9).contains(&b_max) {
        return invalid(format!("b_max must lie in 2..=9, got {b_max}"));
    }
    if table.n_max() < SUM_TOP {
        return invalid(format!("pp table covers up to {}, need {SUM_TOP}", table.n_max()));
    }
    let pp: Vec<BigInt> = table.values()[..=SUM_TOP].iter().map(|v| BigInt::from(v.clone())).collect();
    Ok((2..=b_max)
        .map(|b| (2..=SUM_TOP - b).map(|k| term(&pp[k] * &pp[b] - &pp[k + b])).sum())
        .collect())
}

/// For b = 2..=b_max: Σ_{k=2..11−b} (pp(k)pp(b) − pp(k+b))₋.
pub fn pp_sums_table(table: &PPTable, b_max: usize) -> Result<Vec<BigInt>> {
    pp_sums(table, b_max, negative_part)
}

/// The same sums without taking negative parts.
pub fn pp_sums_table_plain(table: &PPTable, b_max: usize) -> Result<Vec<BigInt>> {
    pp_sums(table, b_max, |v| v)
}
