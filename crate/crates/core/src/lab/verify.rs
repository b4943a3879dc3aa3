use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{family_values, turan_poly};
use crate::ball::Ball;
use crate::error::{invalid, Result};
use crate::family::PolyFamily;
use crate::partitions::{BallPPTable, PPTable};
use crate::report::{Backend, IneqReport, ReportKind};

/// Pairs 1 ≤ b ≤ a with `sum_min ≤ a+b ≤ sum_max` and `b ≥ b_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRegion {
    pub sum_min: usize,
    pub sum_max: usize,
    pub b_min: usize,
}

impl PairRegion {
    pub fn new(sum_min: usize, sum_max: usize, b_min: usize) -> PairRegion {
        PairRegion { sum_min, sum_max, b_min: b_min.max(1) }
    }

    /// Pairs in order of increasing a+b, then increasing b.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in self.sum_min.max(2)..=self.sum_max {
            for b in self.b_min..=s / 2 {
                out.push((s - b, b));
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!("{}<=a+b<={}, b>={}, b<=a", self.sum_min, self.sum_max, self.b_min)
    }
}

/// A sweep of pp(a)pp(b) > pp(a+b) together with the failing pairs found
/// below a+b = 12.
#[derive(Debug, Clone)]
pub struct BoPpSweep {
    pub report: IneqReport,
    pub exceptions: Vec<(usize, usize)>,
}

fn pp_int(table: &PPTable) -> Vec<BigInt> {
    table.values().iter().map(|v| BigInt::from(v.clone())).collect()
}

pub fn verify_bo_pp(table: &PPTable, sum_min: usize, sum_max: usize) -> Result<BoPpSweep> {
    let top = sum_max.max(11);
    if table.n_max() < top {
        return invalid(format!("pp table covers up to {}, need {top}", table.n_max()));
    }
    let pp = pp_int(table);
    let defect = |&(a, b): &(usize, usize)| &pp[a] * &pp[b] - &pp[a + b];
    let region = PairRegion::new(sum_min, sum_max, 2);
    let pairs = region.pairs();
    let diffs: Vec<BigInt> = pairs.par_iter().map(defect).collect();
    let mut report = IneqReport::new(ReportKind::BoPp, region.describe(), Backend::Exact);
    for (&(a, b), d) in pairs.iter().zip(diffs) {
        report.push_exact_int(a as u64, Some(b as u64), d);
    }
    let exceptions = PairRegion::new(4, 11, 2)
        .pairs()
        .into_iter()
        .filter(|p| !defect(p).is_positive())
        .collect();
    Ok(BoPpSweep { report, exceptions })
}

/// A pp table in either backend.
#[derive(Debug, Clone, Copy)]
pub enum PpValues<'a> {
    Exact(&'a PPTable),
    Ball(&'a BallPPTable),
}

/// pp(n)² > pp(n−1)·pp(n+1) for n_min ≤ n ≤ n_max.
pub fn verify_logconcave_pp(table: PpValues<'_>, n_min: usize, n_max: usize) -> Result<IneqReport> {
    if n_min == 0 {
        return invalid("log-concavity needs n >= 1");
    }
    let covered = match table {
        PpValues::Exact(t) => t.n_max(),
        PpValues::Ball(t) => t.n_max(),
    };
    if covered < n_max + 1 {
        return invalid(format!("pp table covers up to {covered}, need {}", n_max + 1));
    }
    let range = format!("{n_min}..={n_max}");
    let ns: Vec<usize> = (n_min..=n_max).collect();
    match table {
        PpValues::Exact(t) => {
            let mut report = IneqReport::new(ReportKind::LogconcavePp, range, Backend::Exact);
            let diffs: Vec<BigInt> = ns
                .par_iter()
                .map(|&n| BigInt::from(t.get(n) * t.get(n)) - BigInt::from(t.get(n - 1) * t.get(n + 1)))
                .collect();
            for (n, d) in ns.iter().zip(diffs) {
                report.push_exact_int(*n as u64, None, d);
            }
            Ok(report)
        }
        PpValues::Ball(t) => {
            let mut report = IneqReport::new(ReportKind::LogconcavePp, range, Backend::Ball);
            let prec = t.precision_bits();
            let diffs: Vec<Ball> = ns
                .par_iter()
                .map(|&n| t.get(n).sqr(prec).sub(&t.get(n - 1).mul(t.get(n + 1), prec), prec))
                .collect();
            for (n, d) in ns.iter().zip(diffs) {
                report.push_ball(*n as u64, None, &d);
            }
            Ok(report)
        }
    }
}

/// Exact sign of P_{a,b}(x) over a region of pairs b ≤ a.
pub fn verify_bo_poly(family: &PolyFamily, x: &BigRational, region: PairRegion) -> Result<IneqReport> {
    if !x.is_positive() {
        return invalid(format!("probe point must be positive, got {x}"));
    }
    let values = family_values(family, region.sum_max, x)?;
    let pairs = region.pairs();
    let diffs: Vec<BigRational> =
        pairs.par_iter().map(|&(a, b)| &values[a] * &values[b] - &values[a + b]).collect();
    let mut report = IneqReport::new(ReportKind::BoPoly, format!("{} at x={x}", region.describe()), Backend::Exact);
    for (&(a, b), d) in pairs.iter().zip(diffs) {
        report.push_exact(a as u64, Some(b as u64), d);
    }
    Ok(report)
}

/// Coefficient of x² in P_a² − P_{a−1}P_{a+1}:
/// (σ₂(a)/a)² − σ₂(a−1)σ₂(a+1)/((a−1)(a+1)), with σ₂(0)/0 read as 0.
pub fn turan_x2_coefficient(family: &PolyFamily, a: usize) -> Result<BigRational> {
    family.check(a + 1)?;
    let c = |n: usize| if n == 0 { BigRational::zero() } else { family.get(n).coeff(1) };
    Ok(c(a) * c(a) - c(a - 1) * c(a + 1))
}

/// Coefficient signs of P_a² − P_{a−1}P_{a+1} for 2 ≤ a ≤ a_max.
///
/// The recorded difference is the most negative coefficient when one
/// exists, and otherwise the x² coefficient, so HOLDS means every
/// coefficient is ≥ 0 and the x² coefficient is > 0. For odd a the
/// records are observations only.
pub fn even_a_coefficient_scan(family: &PolyFamily, a_max: usize) -> Result<IneqReport> {
    family.check(a_max + 1)?;
    let kind = ReportKind::Custom("even-a-coefficients".into());
    let mut report = IneqReport::new(kind, format!("2..={a_max}"), Backend::Exact);
    let ays: Vec<usize> = (2..=a_max).collect();
    let diffs: Vec<BigRational> = ays
        .par_iter()
        .map(|&a| {
            let t = turan_poly(family, a)?;
            let min = t.coeffs().into_iter().min().unwrap_or_default();
            Ok(if min.is_negative() { min } else { t.coeff(2) })
        })
        .collect::<Result<_>>()?;
    for (a, d) in ays.iter().zip(diffs) {
        report.push_exact(*a as u64, None, d);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::check_sigma2_even_logconcave;
    use crate::family::generate_family;
    use crate::partitions::{pp_ball, pp_exact};
    use crate::report::Verdict;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn region_pairs() {
        assert_eq!(PairRegion::new(2, 4, 1).pairs(), vec![(1, 1), (2, 1), (3, 1), (2, 2)]);
        assert_eq!(PairRegion::new(12, 13, 2).pairs().len(), 5 + 5);
    }

    #[test]
    fn bo_pp_examples_and_exceptions() {
        let t = pp_exact(472).unwrap();
        let sweep = verify_bo_pp(&t, 4, 12).unwrap();
        assert_eq!(sweep.report.get(2, Some(2)).unwrap().verdict, Verdict::Fails);
        assert_eq!(sweep.report.get(4, Some(3)).unwrap().verdict, Verdict::Fails);
        assert_eq!(sweep.report.get(4, Some(4)).unwrap().verdict, Verdict::Holds);
        let mut expected: Vec<(usize, usize)> = (2..=9).map(|a| (a, 2)).collect();
        expected.extend((3..=5).map(|a| (a, 3)));
        expected.sort_by_key(|&(a, b)| (a + b, b));
        assert_eq!(sweep.exceptions, expected);
        let full = verify_bo_pp(&t, 12, 472).unwrap();
        let tally = full.report.tally();
        assert_eq!((tally.fails, tally.equality), (0, 0));
        assert!(tally.holds > 27_000);
        assert!(verify_bo_pp(&t, 12, 473).is_err());
    }

    #[test]
    fn logconcavity_small_n() {
        let t = pp_exact(2000).unwrap();
        let r = verify_logconcave_pp(PpValues::Exact(&t), 1, 11).unwrap();
        for n in 1..=11u64 {
            let want = if n % 2 == 1 {
                Verdict::Fails
            } else {
                Verdict::Holds
            };
            assert_eq!(r.get(n, None).unwrap().verdict, want, "n = {n}");
        }
        assert!(verify_logconcave_pp(PpValues::Exact(&t), 12, 1999).unwrap().all_hold());
        let b = pp_ball(1000, 192).unwrap();
        let rb = verify_logconcave_pp(PpValues::Ball(&b), 1, 999).unwrap();
        let re = verify_logconcave_pp(PpValues::Exact(&t), 1, 999).unwrap();
        for n in 2..=999u64 {
            assert_eq!(rb.get(n, None).unwrap().verdict, re.get(n, None).unwrap().verdict);
        }
        assert!(verify_logconcave_pp(PpValues::Ball(&b), 1, 1000).is_err());
    }

    #[test]
    fn turan_at_one_matches_pp_logconcavity() {
        let f = generate_family(41).unwrap();
        let t = pp_exact(41).unwrap();
        let r = verify_logconcave_pp(PpValues::Exact(&t), 1, 40).unwrap();
        for a in 1..=40 {
            let v = turan_poly(&f, a).unwrap().eval(&int(1));
            assert_eq!(Verdict::from_sign(&v), r.get(a as u64, None).unwrap().verdict);
        }
    }

    #[test]
    fn bo_poly_regions() {
        let f = generate_family(52).unwrap();
        let r = verify_bo_poly(&f, &int(5), PairRegion::new(2, 2, 1)).unwrap();
        assert_eq!(r.get(1, Some(1)).unwrap().verdict, Verdict::Equality);
        assert!(verify_bo_poly(&f, &int(6), PairRegion::new(2, 24, 1)).unwrap().all_hold());
        assert!(verify_bo_poly(&f, &int(2), PairRegion::new(12, 52, 1)).unwrap().all_hold());
        assert!(verify_bo_poly(&f, &int(0), PairRegion::new(2, 3, 1)).is_err());
        assert!(verify_bo_poly(&f, &int(2), PairRegion::new(12, 53, 1)).is_err());
    }

    #[test]
    fn even_a_scan() {
        let f = generate_family(61).unwrap();
        let r = even_a_coefficient_scan(&f, 60).unwrap();
        for a in (2..=60u64).step_by(2) {
            assert_eq!(r.get(a, None).unwrap().verdict, Verdict::Holds, "a = {a}");
        }
        for a in [3u64, 5] {
            assert_eq!(r.get(a, None).unwrap().verdict, Verdict::Fails);
        }
        let x2 = turan_x2_coefficient(&f, 5).unwrap();
        assert_eq!(x2, BigRational::new((-1671).into(), 100.into()));
        let sigma = check_sigma2_even_logconcave(60).unwrap();
        for a in (2..=60u64).step_by(2) {
            let c = turan_x2_coefficient(&f, a as usize).unwrap();
            assert_eq!(Verdict::from_sign(&c), sigma.get(a, None).unwrap().verdict);
        }
    }
}
