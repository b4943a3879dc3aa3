//! Wright's asymptotic formula for pp(n) and sampled checks of the two
//! expansions behind eventual log-concavity.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::ball::{pi, zeta3, Ball, RoundDir};
use crate::error::{invalid, Result};
use crate::family::binomial;
use crate::report::Verdict;

/// Constants are never computed below this many decimal digits.
const MIN_DIGITS: usize = 64;
/// Terms summed directly before the Euler–Maclaurin tail.
const GLAISHER_TERMS: u64 = 256;
const SAMPLES_PER_DECADE: u32 = 64;

fn bits_for_digits(digits: usize) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 8
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Debug, Clone)]
pub struct WrightConstants {
    pub precision_bits: u64,
    pub zeta3: Ball,
    pub ln_glaisher: Ball,
    /// ζ′(−1) = 1/12 − ln A.
    pub zeta_prime_minus_one: Ball,
    /// 3·ζ(3)^(1/3) / 2^(2/3)
    pub c1: Ball,
    /// ζ(3)^(7/36)·2^(25/36)·e^(ζ′(−1)) / √(12π)
    pub c2: Ball,
    /// Exponent of n in the prefactor, −25/36.
    pub r: BigRational,
}

/// B₀, B₁, …, B_m by Σ_{k=0..j} C(j+1, k)·B_k = 0.
fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for j in 1..=m {
        let s: BigRational = (0..j).map(|k| &b[k] * BigRational::from_integer(binomial(j + 1, k))).sum();
        b.push(-s / BigRational::from_integer(BigInt::from(j + 1)));
    }
    b
}

/// ln A from Σ_{k≤N} k·ln k − (N²/2 + N/2 + 1/12)·ln N + N²/4 plus the
/// Euler–Maclaurin corrections B_{2j}/(2j(2j−1)(2j−2))·N^{2−2j}. The
/// derivatives of x·ln x of even order are positive, so the remainder is
/// bounded by the first omitted correction.
pub(crate) fn ln_glaisher_with(terms: u64, prec: u64) -> Ball {
    let wp = prec + 32;
    let big_n = Ball::from_u64(terms);
    let ln_n = big_n.ln(wp).expect("N >= 1");
    let mut sum = Ball::zero();
    for k in 2..=terms {
        let lk = Ball::from_u64(k).ln(wp).expect("k >= 2");
        sum = sum.add(&lk.mul_u64(k, wp), wp);
    }
    let n2 = BigRational::from_integer((terms * terms).into());
    let coeff = &n2 / BigInt::from(2) + q(terms as i64, 2) + q(1, 12);
    sum = sum.sub(&Ball::from_rational(&coeff, wp).mul(&ln_n, wp), wp);
    sum = sum.add(&Ball::from_rational(&(n2 / BigInt::from(4)), wp), wp);

    let eps = BigRational::new(BigInt::one(), BigInt::one() << (wp as usize + 4));
    let n_big = BigInt::from(terms);
    let mut bern = bernoulli_numbers(8);
    let mut j = 2usize;
    loop {
        if bern.len() <= 2 * j {
            bern = bernoulli_numbers(4 * j);
        }
        let den = BigInt::from(2 * j * (2 * j - 1) * (2 * j - 2)) * n_big.pow(2 * j as u32 - 2);
        let term = &bern[2 * j] / BigRational::from_integer(den);
        if term.abs() < eps {
            let tail = Ball::from_rational(&term.abs(), 64);
            return sum.add_error(&tail.mag_upper()).round(prec);
        }
        sum = sum.add(&Ball::from_rational(&term, wp), wp);
        j += 1;
    }
}

fn compute_constants(prec: u64) -> WrightConstants {
    let wp = prec + 32;
    let z3 = zeta3(wp);
    let ln_a = ln_glaisher_with(GLAISHER_TERMS, wp);
    let zp = Ball::from_rational(&q(1, 12), wp).sub(&ln_a, wp);
    let two = Ball::from_u64(2);
    let pow = |b: &Ball, n: i64, d: i64| b.pow_rational(&q(n, d), wp).expect("positive base");
    let c1 = pow(&z3, 1, 3).mul_u64(3, wp).div(&pow(&two, 2, 3), wp).expect("nonzero");
    let root = pi(wp).mul_u64(12, wp).sqrt(wp).expect("positive");
    let c2 = pow(&z3, 7, 36).mul(&pow(&two, 25, 36), wp).mul(&zp.exp(wp), wp).div(&root, wp).expect("nonzero");
    WrightConstants {
        precision_bits: prec,
        zeta3: z3.round(prec),
        ln_glaisher: ln_a.round(prec),
        zeta_prime_minus_one: zp.round(prec),
        c1: c1.round(prec),
        c2: c2.round(prec),
        r: q(-25, 36),
    }
}

/// Wright's constants at `max(digits, 64)` decimal digits, computed once
/// per precision and shared afterwards.
pub fn wright_constants(digits: usize) -> Arc<WrightConstants> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<WrightConstants>>>> = OnceLock::new();
    let prec = bits_for_digits(digits.max(MIN_DIGITS));
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(prec).or_insert_with(|| Arc::new(compute_constants(prec))).clone()
}

#[derive(Debug, Clone)]
pub struct WrightEstimate {
    pub n: u64,
    /// C₂·n^r·exp(C₁·n^(2/3))
    pub estimate: Ball,
    pub constants: Arc<WrightConstants>,
}

pub fn wright_estimate(n: u64, digits: usize) -> Result<WrightEstimate> {
    if n == 0 {
        return invalid("Wright's formula needs n >= 1");
    }
    if digits < 16 {
        return invalid(format!("need at least 16 digits, got {digits}"));
    }
    let constants = wright_constants(digits);
    let exponent_bits = 2.0 * (n as f64).log2() / 3.0 + 2.0;
    let wp = bits_for_digits(digits) + exponent_bits.max(0.0) as u64 + 32;
    let nb = Ball::from_u64(n);
    let growth = constants.c1.mul(&nb.pow_rational(&q(2, 3), wp)?, wp).exp(wp);
    let prefactor = constants.c2.mul(&nb.pow_rational(&constants.r, wp)?, wp);
    let estimate = prefactor.mul(&growth, wp).round(bits_for_digits(digits) + 16);
    Ok(WrightEstimate { n, estimate, constants })
}

/// Deterministic log-uniform sample of integers in `[lo, hi]`,
/// 64 points per decade, always including both ends.
pub fn log_grid(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let start = (lo as f64).log10();
    let mut k = 0u32;
    loop {
        let v = 10f64.powf(start + f64::from(k) / f64::from(SAMPLES_PER_DECADE)).round() as u64;
        if v >= hi {
            break;
        }
        if out.last() != Some(&v) && v >= lo {
            out.push(v);
        }
        k += 1;
    }
    out.push(hi);
    out
}

#[derive(Debug, Clone)]
pub struct KonkavSample {
    pub n: u64,
    /// (2n^s − (n+1)^s − (n−1)^s − (1−s)s·n^(s−2))·n^(3−s)
    pub residual: Ball,
}

#[derive(Debug, Clone)]
pub struct KonkavReport {
    pub s: BigRational,
    pub samples: Vec<KonkavSample>,
    /// Upper bound on sup |Rₙ| over the samples.
    pub sup_abs: f64,
    /// (first n of the decade, upper bound on sup |Rₙ| within it)
    pub decade_sups: Vec<(u64, f64)>,
}

fn int_pow(base: u64, e: &BigInt) -> BigRational {
    let b = BigRational::from_integer(base.into());
    let k = e.abs().to_u32().expect("exponent fits in u32");
    let p = num_traits::pow(b, k as usize);
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

fn konkav_exact(s: &BigInt, n: u64) -> BigRational {
    let sr = BigRational::from_integer(s.clone());
    let main = (BigRational::one() - &sr) * &sr * int_pow(n, &(s - 2));
    let diff = int_pow(n, s) * BigInt::from(2) - int_pow(n + 1, s) - int_pow(n - 1, s);
    (diff - main) * int_pow(n, &(BigInt::from(3) - s))
}

fn konkav_ball(s: &BigRational, n: u64, wp: u64) -> Result<Ball> {
    let pw = |base: u64, e: &BigRational| Ball::from_u64(base).pow_rational(e, wp);
    let two = BigRational::from_integer(2.into());
    let three = BigRational::from_integer(3.into());
    let main = Ball::from_rational(&((BigRational::one() - s) * s), wp).mul(&pw(n, &(s - &two))?, wp);
    let diff = pw(n, s)?.mul_u64(2, wp).sub(&pw(n + 1, s)?, wp).sub(&pw(n - 1, s)?, wp);
    Ok(diff.sub(&main, wp).mul(&pw(n, &(three - s))?, wp))
}

fn check_range(n_min: u64, n_max: u64, lo: u64, hi: u64) -> Result<()> {
    if n_min < lo || n_max > hi || n_min > n_max {
        return invalid(format!("range {n_min}..={n_max} must lie within {lo}..={hi}"));
    }
    Ok(())
}

/// Samples Rₙ over `[n_min, n_max] ⊆ [10, 10⁶]`; exact for integer s.
pub fn expansion_check_konkav(s: &BigRational, n_min: u64, n_max: u64, prec: u64) -> Result<KonkavReport> {
    check_range(n_min, n_max, 10, 1_000_000)?;
    let wp = prec.max(64) + 4 * (64 - n_max.leading_zeros() as u64) + 32;
    let grid = log_grid(n_min, n_max);
    let samples = grid
        .iter()
        .map(|&n| {
            let residual = if s.is_integer() {
                Ball::from_rational(&konkav_exact(s.numer(), n), prec.max(64))
            } else {
                konkav_ball(s, n, wp)?.round(prec.max(64))
            };
            Ok(KonkavSample { n, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = |r: &Ball| r.mag_upper().to_f64();
    let sup_abs = samples.iter().map(|x| bound(&x.residual)).fold(0.0, f64::max);
    let mut decade_sups: Vec<(u64, f64)> = Vec::new();
    for x in &samples {
        let start = 10u64.pow((x.n as f64).log10().floor() as u32);
        match decade_sups.last_mut() {
            Some((d, sup)) if *d == start => *sup = sup.max(bound(&x.residual)),
            _ => decade_sups.push((start, bound(&x.residual))),
        }
    }
    Ok(KonkavReport { s: s.clone(), samples, sup_abs, decade_sups })
}

#[derive(Debug, Clone)]
pub struct CorollaryRow {
    pub n: u64,
    /// 1 + (C₁/9)·n^(−4/3)
    pub lower: Ball,
    /// exp(2C₁n^(2/3) − C₁(n+1)^(2/3) − C₁(n−1)^(2/3))
    pub middle: Ball,
    /// 1 + (4C₁/9)·n^(−4/3)
    pub upper: Ball,
    pub lower_verdict: Verdict,
    pub upper_verdict: Verdict,
}

impl CorollaryRow {
    pub fn verdict(&self) -> Verdict {
        let both = [self.lower_verdict, self.upper_verdict];
        if both.contains(&Verdict::Fails) || both.contains(&Verdict::Equality) {
            Verdict::Fails
        } else if both.contains(&Verdict::Uncertain) {
            Verdict::Uncertain
        } else {
            Verdict::Holds
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorollaryReport {
    pub c1: Ball,
    pub rows: Vec<CorollaryRow>,
    /// Least sampled n from which both inequalities hold at every later
    /// sample.
    pub holds_from: Option<u64>,
}

fn strict(difference: &Ball) -> Verdict {
    if difference.is_positive() {
        Verdict::Holds
    } else if difference.is_negative() {
        Verdict::Fails
    } else {
        Verdict::Uncertain
    }
}

impl CorollaryReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.verdict() == Verdict::Holds)
    }

    /// CSV with columns n, lower, middle, upper, verdict; values are ball
    /// midpoints to 20 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "lower", "middle", "upper", "verdict"]).map_err(csv_error)?;
        for r in &self.rows {
            let show = |b: &Ball| b.mid().to_sci(20, RoundDir::Down);
            w.write_record([r.n.to_string(), show(&r.lower), show(&r.middle), show(&r.upper), r.verdict().to_string()])
                .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| csv_error(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_error(e: impl std::fmt::Display) -> crate::error::Error {
    crate::error::Error::InvalidArgument(format!("csv: {e}"))
}

pub fn expansion_check_corollary(c1: &Ball, n_min: u64, n_max: u64, prec: u64) -> Result<CorollaryReport> {
    if !c1.is_positive() {
        return invalid(format!("C1 must be positive, got {c1}"));
    }
    check_range(n_min, n_max, 2, u64::MAX / 2)?;
    let wp = prec.max(64) + 4 * (64 - n_max.leading_zeros() as u64) + 32;
    let rows = log_grid(n_min, n_max)
        .into_iter()
        .map(|n| {
            let pw = |base: u64, e: BigRational| Ball::from_u64(base).pow_rational(&e, wp);
            let exponent = pw(n, q(2, 3))?.mul_u64(2, wp).sub(&pw(n + 1, q(2, 3))?, wp).sub(&pw(n - 1, q(2, 3))?, wp);
            let middle = c1.mul(&exponent, wp).exp(wp);
            let base = c1.mul(&pw(n, q(-4, 3))?, wp).div_u64(9, wp);
            let lower = Ball::one().add(&base, wp);
            let upper = Ball::one().add(&base.mul_u64(4, wp), wp);
            Ok(CorollaryRow {
                n,
                lower_verdict: strict(&middle.sub(&lower, wp)),
                upper_verdict: strict(&upper.sub(&middle, wp)),
                lower,
                middle,
                upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let holds_from = rows
        .iter()
        .rev()
        .take_while(|r| r.verdict() == Verdict::Holds)
        .last()
        .map(|r| r.n);
    Ok(CorollaryReport { c1: c1.clone(), rows, holds_from })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::partitions::pp_exact;

    fn decimal(s: &str) -> BigRational {
        let (neg, body) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let num: BigInt = format!("{int}{frac}").parse().unwrap();
        let v = BigRational::new(num, BigInt::from(10).pow(frac.len() as u32));
        if neg {
            -v
        } else {
            v
        }
    }

    /// `b` agrees with the reference decimal to all of its digits.
    fn close(b: &Ball, digits: &str) {
        let reference = decimal(digits);
        let places = digits.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
        let diff = b.sub(&Ball::from_rational(&reference, 256), 256);
        assert!(diff.mag_upper().to_f64() < 10f64.powi(-places + 1), "{b} vs {digits}");
    }

    #[test]
    fn bernoulli() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], BigRational::zero());
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn constants_match_reference_digits() {
        let c = wright_constants(16);
        assert!(c.precision_bits >= 212);
        close(&c.zeta3, "1.2020569031595942853997381615114499907649");
        close(&c.ln_glaisher, "0.2487544770337842625472529935761139760973");
        close(&c.zeta_prime_minus_one, "-0.1654211437004509292139196602427806427640");
        close(&c.c1, "2.0094456608770137530649087658164343158859");
        close(&c.c2, "0.2315168134488983705603564064063321108551");
        assert!(c.zeta3.accuracy_bits() > 200.0);
        assert!(Arc::ptr_eq(&c, &wright_constants(20)));
    }

    #[test]
    fn glaisher_independent_of_cutoff() {
        let a = ln_glaisher_with(40, 256);
        let b = ln_glaisher_with(300, 256);
        assert!(a.overlaps(&b));
        assert!(a.accuracy_bits() > 240.0 && b.accuracy_bits() > 240.0);
    }

    #[test]
    fn estimate_small_n() {
        let e = wright_estimate(1, 30).unwrap();
        assert!(e.estimate.is_positive());
        close(&e.estimate, "1.726925882046137884635108949467");
        assert!(wright_estimate(0, 30).is_err());
        assert!(wright_estimate(5, 15).is_err());
    }

    #[test]
    fn ratio_approaches_one() {
        let t = pp_exact(1000).unwrap();
        let gap = |n: u64| {
            let e = wright_estimate(n, 30).unwrap().estimate;
            let ratio = Ball::from_biguint(t.get(n as usize), 128).div(&e, 128).unwrap();
            assert!(ratio.to_f64() > 0.5 && ratio.to_f64() < 1.5);
            (ratio.to_f64() - 1.0).abs()
        };
        assert!(gap(1000) < gap(100));
    }

    #[test]
    fn grid_is_log_uniform() {
        let g = log_grid(100, 10_000);
        assert_eq!(g[0], 100);
        assert_eq!(*g.last().unwrap(), 10_000);
        assert_eq!(g.len(), 129);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_grid(10, 12), vec![10, 11, 12]);
    }

    #[test]
    fn konkav_integer_exponents_cancel() {
        for s in [1, 2] {
            let r = expansion_check_konkav(&q(s, 1), 10, 1000, 128).unwrap();
            assert!(r.samples.iter().all(|x| x.residual.is_exact() && x.residual.mid().is_zero()));
            assert_eq!(r.sup_abs, 0.0);
        }
        // s = 3: 2n³ − (n+1)³ − (n−1)³ = −6n, main term −6n, residual 0
        let r = expansion_check_konkav(&q(3, 1), 10, 100, 128).unwrap();
        assert_eq!(r.sup_abs, 0.0);
        assert!(expansion_check_konkav(&q(1, 2), 9, 100, 128).is_err());
        assert!(expansion_check_konkav(&q(1, 2), 10, 2_000_000, 128).is_err());
    }

    #[test]
    fn konkav_two_thirds_decreases() {
        let r = expansion_check_konkav(&q(2, 3), 100, 10_000, 128).unwrap();
        assert!(r.sup_abs.is_finite() && r.sup_abs > 0.0);
        assert_eq!(r.decade_sups.len(), 3);
        assert!(r.decade_sups[1].1 <= r.decade_sups[0].1);
        assert!(r.decade_sups[2].1 <= r.decade_sups[1].1);
        // leading residual −2·C(s, 4)/n
        let x = r.samples.iter().find(|x| x.n == 1000).unwrap();
        let lead = -2.0 * (2.0 / 3.0) * (-1.0 / 3.0) * (-4.0 / 3.0) * (-7.0 / 3.0) / 24.0 / 1000.0;
        assert!((x.residual.to_f64() - lead).abs() < 1e-3 * lead.abs());
    }

    #[test]
    fn corollary_with_wright_c1() {
        let c1 = wright_constants(16).c1.clone();
        let r = expansion_check_corollary(&c1, 1000, 100_000, 128).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.holds_from, Some(1000));
        let r = expansion_check_corollary(&c1, 1_000_000, 1_000_000, 128).unwrap();
        let gap = r.rows[0].middle.sub(&Ball::one(), 128).to_f64();
        assert!(gap > 0.0 && gap < 1e-7);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("n,lower,middle,upper,verdict\n1000000,"));
    }

    #[test]
    fn corollary_fails_for_huge_c1_at_small_n() {
        let c1 = Ball::from_u64(1_000_000);
        let r = expansion_check_corollary(&c1, 10, 10, 128).unwrap();
        assert_eq!(r.rows[0].verdict(), Verdict::Fails);
        assert_eq!(r.rows[0].lower_verdict, Verdict::Holds);
        assert_eq!(r.rows[0].upper_verdict, Verdict::Fails);
        assert_eq!(r.holds_from, None);
        let r = expansion_check_corollary(&c1, 10, 1_000_000, 128).unwrap();
        let first = r.holds_from.unwrap();
        assert!(first > 10);
        assert!(r.rows.iter().filter(|x| x.n < first).any(|x| x.verdict() == Verdict::Fails));
        assert!(expansion_check_corollary(&Ball::zero(), 10, 20, 128).is_err());
    }

    #[test]
    fn doubling_precision_keeps_verdicts() {
        let c1 = Ball::from_rational(&q(20087, 10000), 128);
        let a = expansion_check_corollary(&c1, 10, 10_000, 96).unwrap();
        let b = expansion_check_corollary(&c1, 10, 10_000, 192).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            if x.verdict() != Verdict::Uncertain {
                assert_eq!(x.verdict(), y.verdict(), "n = {}", x.n);
            }
        }
    }
}
