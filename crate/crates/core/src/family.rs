//! The polynomials Pₙ(x) defined by P₀ = 1 and
//! Pₙ(x) = (x/n)·Σ_{k=1..n} σ₂(k)·P_{n−k}(x), with Pₙ(1) = pp(n).
//!
//! Each Pₙ is stored over the denominator n!, so its numerators are the
//! non-negative integers A_{n,m} and the recurrence stays integral:
//! A_n(x) = x·Σ_k σ₂(k)·(n−1)!/(n−k)!·A_{n−k}(x).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::divisor::Sigma2Table;
use crate::error::{invalid, Error, Result};
use crate::poly::ExactPoly;
use crate::report::{Backend, IneqReport, ReportKind};

pub const DEFAULT_FAMILY_MEM_CAP: u64 = 4 << 30;

/// Above this many coefficients per step the inner sums run on the rayon pool.
const PARALLEL_MIN_DEGREE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFamily {
    polys: Vec<ExactPoly>,
}

impl PolyFamily {
    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Pₙ over the denominator n!.
    pub fn get(&self, n: usize) -> &ExactPoly {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[ExactPoly] {
        &self.polys
    }

    /// A_{n,m} = n!·[x^m]Pₙ.
    pub fn a_coeff(&self, n: usize, m: usize) -> BigInt {
        self.polys[n].numerators().get(m).cloned().unwrap_or_default()
    }

    pub fn eval(&self, n: usize, x: &BigRational) -> BigRational {
        self.polys[n].eval(x)
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return invalid(format!("index {n} beyond family size {}", self.n_max()));
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Upper estimate of the bytes held by `generate_family(n)`.
pub fn estimate_family_bytes(n: usize) -> u64 {
    let mut total = 0f64;
    for j in 1..=n {
        let jf = j as f64;
        let fact_bits = (1..=j).map(|i| (i as f64).log2()).sum::<f64>();
        let pp_bits = 0.873 * std::f64::consts::LOG2_10 * jf.powf(2.0 / 3.0);
        total += (jf + 1.0) * ((fact_bits + pp_bits) / 8.0 + 32.0);
    }
    total as u64
}

pub fn generate_family(n: usize) -> Result<PolyFamily> {
    generate_family_capped(n, DEFAULT_FAMILY_MEM_CAP)
}

pub fn generate_family_capped(n: usize, mem_cap: u64) -> Result<PolyFamily> {
    let needed = estimate_family_bytes(n);
    if needed > mem_cap {
        return Err(Error::ResourceLimit { needed, cap: mem_cap });
    }
    let mut nums: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    if n == 0 {
        return Ok(PolyFamily { polys: vec![ExactPoly::one()] });
    }
    let sigma = Sigma2Table::new(n)?;
    for j in 1..=n {
        // weights[k] = σ₂(k)·(j−1)!/(j−k)!
        let mut weights = Vec::with_capacity(j + 1);
        weights.push(BigInt::zero());
        let mut falling = BigInt::one();
        for k in 1..=j {
            if k > 1 {
                falling *= j - k + 1;
            }
            weights.push(&falling * sigma.get(k));
        }
        // coefficient of x^m in A_j draws on coefficient m−1 of every A_{j−k}
        let coeff = |m: usize| -> BigInt {
            let mut acc = BigInt::zero();
            for (k, w) in weights.iter().enumerate().skip(1) {
                if let Some(c) = nums[j - k].get(m - 1) {
                    if !c.is_zero() {
                        acc += w * c;
                    }
                }
            }
            acc
        };
        let mut row = vec![BigInt::zero()];
        if j >= PARALLEL_MIN_DEGREE {
            row.par_extend((1..=j).into_par_iter().map(coeff));
        } else {
            row.extend((1..=j).map(coeff));
        }
        debug_assert_eq!(row[1], factorial(j) * sigma.get(j) / j);
        debug_assert!(row.iter().all(|c| !c.is_negative()));
        debug_assert!(!row[j].is_zero());
        nums.push(row);
    }
    let polys = nums
        .into_iter()
        .enumerate()
        .map(|(j, row)| ExactPoly::from_parts_unchecked(row, factorial(j)))
        .collect();
    Ok(PolyFamily { polys })
}

/// Σ_{k=1..n} (σ₂(k)/k)·P_{n−k}(x), over the denominator n!.
pub fn derivative_by_recurrence(family: &PolyFamily, n: usize) -> Result<ExactPoly> {
    family.check(n)?;
    if n == 0 {
        return Ok(ExactPoly::zero());
    }
    let sigma = Sigma2Table::new(n)?;
    // n!/(k·(n−k)!) = C(n,k)·(k−1)!
    let mut out = vec![BigInt::zero(); n];
    let mut binom = BigInt::one();
    let mut fact_km1 = BigInt::one();
    for k in 1..=n {
        binom = binom * (n - k + 1) / k;
        if k > 1 {
            fact_km1 *= k - 1;
        }
        let w = &binom * &fact_km1 * sigma.get(k);
        for (m, c) in family.get(n - k).numerators().iter().enumerate() {
            out[m] += &w * c;
        }
    }
    Ok(ExactPoly::from_parts_unchecked(out, factorial(n)))
}

/// Δₙ(x) = Pₙ(x) − P_{n−1}(x), over the denominator n!.
pub fn increment_poly(family: &PolyFamily, n: usize) -> Result<ExactPoly> {
    family.check(n)?;
    if n == 0 {
        return invalid("increment needs n >= 1");
    }
    let mut out = family.get(n).numerators().to_vec();
    for (m, c) in family.get(n - 1).numerators().iter().enumerate() {
        out[m] -= c * n;
    }
    Ok(ExactPoly::from_parts_unchecked(out, factorial(n)))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// (1/ℓ!)·C(n+ℓ−1, 2ℓ−1) for ℓ = 1..=m: the coefficients of the minorant
/// Sₙ(x) built from k² in place of σ₂(k).
pub fn lower_bound_terms(n: usize, m: usize) -> Result<Vec<BigRational>> {
    if n <= 1 {
        return invalid(format!("lower bound needs n > 1, got {n}"));
    }
    if m == 0 {
        return invalid("lower bound needs m >= 1");
    }
    Ok((1..=m)
        .map(|l| BigRational::new(binomial(n + l - 1, 2 * l - 1), factorial(l)))
        .collect())
}

/// Σ_{ℓ=1..m} (1/ℓ!)·C(n+ℓ−1, 2ℓ−1)·x^ℓ.
pub fn lower_bound_poly(n: usize, m: usize) -> Result<ExactPoly> {
    let mut coeffs = vec![BigRational::zero()];
    coeffs.extend(lower_bound_terms(n, m)?);
    Ok(ExactPoly::from_rationals(&coeffs))
}

/// Δ_{n+1}(x) > 0 at `x_probe` for 1 ≤ n ≤ N, evaluated exactly.
pub fn check_monotone(family: &PolyFamily, n_max: usize, x_probe: &BigRational) -> Result<IneqReport> {
    if x_probe < &BigRational::one() {
        return invalid(format!("monotonicity is only claimed for x >= 1, got {x_probe}"));
    }
    family.check(n_max + 1)?;
    let kind = ReportKind::Custom("monotone".into());
    let mut report = IneqReport::new(kind, format!("1..={n_max} at x={x_probe}"), Backend::Exact);
    for n in 1..=n_max {
        let d = increment_poly(family, n + 1)?;
        report.push_exact(n as u64, None, d.eval(x_probe));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::pp_exact;
    use crate::report::Verdict;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(c: &[(i64, i64)]) -> ExactPoly {
        ExactPoly::from_rationals(&c.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>())
    }

    #[test]
    fn first_polynomials_match_table_two() {
        let f = generate_family(5).unwrap();
        assert_eq!(f.get(0), &ExactPoly::one());
        assert_eq!(f.get(1), &ExactPoly::x());
        assert_eq!(f.get(2), &poly(&[(0, 1), (5, 2), (1, 2)]));
        assert_eq!(f.get(3), &poly(&[(0, 1), (10, 3), (5, 2), (1, 6)]));
        assert_eq!(f.get(4), &poly(&[(0, 1), (21, 4), (155, 24), (5, 4), (1, 24)]));
        assert_eq!(f.get(5), &poly(&[(0, 1), (26, 5), (163, 12), (115, 24), (5, 12), (1, 120)]));
        assert_eq!(f.get(4).denominator(), &BigInt::from(24));
    }

    #[test]
    fn specializes_to_pp_and_keeps_invariants() {
        let f = generate_family(60).unwrap();
        let pp = pp_exact(60).unwrap();
        let sigma = Sigma2Table::new(60).unwrap();
        for n in 0..=60 {
            assert_eq!(f.eval(n, &BigRational::one()), BigRational::from_integer(pp.get(n).clone().into()));
            assert_eq!(f.get(n).degree(), Some(n));
            if n >= 1 {
                assert!(f.a_coeff(n, 0).is_zero());
                assert_eq!(f.a_coeff(n, 1), factorial(n) * sigma.get(n) / n);
            }
            assert!(f.get(n).numerators().iter().all(|c| !c.is_negative()));
        }
    }

    /// [z^m q^n] exp(z·Σ σ₂(k) q^k / k), built from the exponential series
    /// in z: the coefficient of z^m is L(q)^m / m! with L = Σ σ₂(k) q^k / k.
    fn exp_series_oracle(n_max: usize) -> Vec<Vec<BigRational>> {
        let sigma = Sigma2Table::new(n_max).unwrap();
        let mut l = vec![BigRational::zero(); n_max + 1];
        for k in 1..=n_max {
            l[k] = q(sigma.get(k) as i64, k as i64);
        }
        let mut out = vec![vec![BigRational::zero(); n_max + 1]; n_max + 1];
        let mut power = vec![BigRational::zero(); n_max + 1];
        power[0] = BigRational::one();
        let mut fact = BigRational::one();
        for m in 0..=n_max {
            if m > 0 {
                let mut next = vec![BigRational::zero(); n_max + 1];
                for i in 0..=n_max {
                    for j in 1..=n_max - i {
                        next[i + j] += &power[i] * &l[j];
                    }
                }
                power = next;
                fact *= BigRational::from_integer(m.into());
            }
            for n in 0..=n_max {
                out[n][m] = &power[n] / &fact;
            }
        }
        out
    }

    #[test]
    fn agrees_with_exponential_generating_function() {
        let f = generate_family(30).unwrap();
        let oracle = exp_series_oracle(30);
        for n in 0..=30 {
            for m in 0..=30 {
                assert_eq!(f.get(n).coeff(m), oracle[n][m], "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn derivative_identity_to_one_hundred() {
        let f = generate_family(100).unwrap();
        for n in 0..=100 {
            assert_eq!(derivative_by_recurrence(&f, n).unwrap(), f.get(n).derivative(), "n = {n}");
        }
        assert_eq!(derivative_by_recurrence(&f, 2).unwrap(), poly(&[(5, 2), (1, 1)]));
        assert_eq!(derivative_by_recurrence(&f, 1).unwrap(), ExactPoly::one());
        assert!(derivative_by_recurrence(&f, 101).is_err());
    }

    #[test]
    fn increments() {
        let f = generate_family(10).unwrap();
        let d2 = increment_poly(&f, 2).unwrap();
        assert_eq!(d2, poly(&[(0, 1), (3, 2), (1, 2)]));
        assert_eq!(d2.eval(&BigRational::one()), q(2, 1));
        assert_eq!(increment_poly(&f, 1).unwrap(), poly(&[(-1, 1), (1, 1)]));
        assert_eq!(increment_poly(&f, 4).unwrap().eval(&BigRational::one()), q(7, 1));
        assert!(increment_poly(&f, 0).is_err());
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound_terms(2, 1).unwrap(), vec![q(2, 1)]);
        assert_eq!(lower_bound_terms(3, 2).unwrap()[1], q(2, 1));
        assert!(lower_bound_terms(1, 1).is_err());
        assert!(lower_bound_terms(3, 0).is_err());
        let f = generate_family(40).unwrap();
        for n in 2..=40 {
            for m in [1, 2, n / 2, n] {
                let s = lower_bound_poly(n, m.max(1)).unwrap();
                for x in [q(1, 1), q(3, 2), q(7, 1)] {
                    assert!(s.eval(&x) < f.eval(n, &x), "n = {n}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn minorant_family_has_binomial_coefficients() {
        // S₀ = 1, Sₙ = (x/n)·Σ k²·S_{n−k}
        let n_max = 25;
        let mut s: Vec<ExactPoly> = vec![ExactPoly::one()];
        for n in 1..=n_max {
            let mut acc = ExactPoly::zero();
            for k in 1..=n {
                acc = acc.add(&s[n - k].scale(&q((k * k) as i64, 1)));
            }
            s.push(acc.shift(1).scale(&q(1, n as i64)));
        }
        for n in 2..=n_max {
            let terms = lower_bound_terms(n, n).unwrap();
            for (l, t) in terms.iter().enumerate() {
                assert_eq!(&s[n].coeff(l + 1), t, "n = {n}, l = {}", l + 1);
            }
        }
    }

    #[test]
    fn monotone_checks() {
        let f = generate_family(51).unwrap();
        let r = check_monotone(&f, 10, &BigRational::one()).unwrap();
        assert!(r.all_hold());
        let r = check_monotone(&f, 50, &q(2, 1)).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.records.len(), 50);
        assert!(check_monotone(&f, 10, &q(1, 2)).is_err());
        assert!(check_monotone(&f, 51, &BigRational::one()).is_err());
        let r = check_monotone(&f, 3, &q(5, 4)).unwrap();
        assert_eq!(r.get(1, None).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn resource_cap() {
        assert!(matches!(generate_family_capped(500, 1000), Err(Error::ResourceLimit { .. })));
    }
}
