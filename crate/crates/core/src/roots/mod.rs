//! Real-root isolation with Sturm sequences and complex roots by
//! Aberth–Ehrlich iteration, for polynomials with rational coefficients.

pub(crate) mod aberth;
pub(crate) mod sturm;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ball::{Float, RoundDir};
use crate::error::{Error, Result};
use crate::poly::ExactPoly;

use sturm::{sign_at, IPoly, SturmSequence};

pub const DEFAULT_ROOT_PRECISION: u64 = 128;
pub const MAX_ROOT_PRECISION: u64 = 1024;

/// Closed rational interval holding exactly one real root; `lo == hi` when
/// the root is rational and was hit exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealEnclosure {
    pub fn exact(x: BigRational) -> RealEnclosure {
        RealEnclosure { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Both endpoints rounded half-up to `decimals` places, when they agree.
    pub fn rounded(&self, decimals: usize) -> Option<String> {
        let a = round_half_up(&self.lo, decimals);
        (a == round_half_up(&self.hi, decimals)).then_some(a)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.midpoint();
        Float::from_rational(&m, 64).0.to_f64()
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = Float::from_rational(&self.lo, 80);
        let hi = Float::from_rational(&self.hi, 80);
        let lo = lo.0.sub(&lo.1.to_float()).to_sci(15, RoundDir::Down);
        let hi = hi.0.add(&hi.1.to_float()).to_sci(15, RoundDir::Up);
        write!(f, "[{lo}, {hi}]")
    }
}

/// Rounds half-up (towards +∞ on ties) to a fixed number of decimals.
pub fn round_half_up(x: &BigRational, decimals: usize) -> String {
    let scale = BigInt::from(10).pow(decimals as u32);
    let scaled = x * BigRational::from_integer(scale.clone()) + BigRational::new(1.into(), 2.into());
    let v = scaled.floor().to_integer();
    let negative = v.is_negative();
    let (int, frac) = v.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = decimals)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRoot {
    pub enclosure: RealEnclosure,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct ComplexRoot {
    pub re: Float,
    pub im: Float,
    /// log2 of the inclusion radius deg·(|p(z)| + e)/|p′(z)| for the
    /// square-free factor the root belongs to, where e bounds the rounding
    /// and evaluation error.
    pub radius_log2: f64,
    pub multiplicity: usize,
    pub is_real: bool,
}

impl ComplexRoot {
    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }
}

#[derive(Debug, Clone)]
pub struct RootSummary {
    pub degree: usize,
    pub real_roots: Vec<RealRoot>,
    pub largest_real: Option<RealEnclosure>,
    pub complex_roots: Vec<ComplexRoot>,
    /// Set when the complex iteration did not settle by the precision cap.
    pub uncertain: bool,
    pub precision_bits: u64,
}

fn integer_form(p: &ExactPoly) -> Result<IPoly> {
    p.primitive_integer()
}

/// Bisects (lo, hi] with Sturm counts until it holds one root with non-zero
/// endpoint signs, or the root itself is hit.
fn settle(seq: &SturmSequence, mut lo: BigRational, mut hi: BigRational) -> RealEnclosure {
    let f = seq.squarefree();
    let half = BigRational::new(1.into(), 2.into());
    loop {
        if sign_at(f, &hi) == 0 {
            return RealEnclosure::exact(hi);
        }
        if sign_at(f, &lo) != 0 {
            return RealEnclosure { lo, hi };
        }
        let mid = (&lo + &hi) * &half;
        if seq.count(Some(&mid), Some(&hi)) == 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Shrinks an isolating interval with sign changes at both ends by
/// bisection until `done` accepts it.
fn refine(f: &IPoly, enc: RealEnclosure, done: impl Fn(&RealEnclosure) -> bool) -> RealEnclosure {
    if enc.is_exact() {
        return enc;
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut e = enc;
    let s_lo = sign_at(f, &e.lo);
    debug_assert!(s_lo * sign_at(f, &e.hi) < 0);
    while !done(&e) {
        let mid = (&e.lo + &e.hi) * &half;
        let s = sign_at(f, &mid);
        if s == 0 {
            return RealEnclosure::exact(mid);
        }
        if s == s_lo {
            e.lo = mid;
        } else {
            e.hi = mid;
        }
    }
    e
}

fn isolate_all(seq: &SturmSequence, lo: BigRational, hi: BigRational) -> Vec<RealEnclosure> {
    let mut out = Vec::new();
    let half = BigRational::new(1.into(), 2.into());
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        match seq.count(Some(&a), Some(&b)) {
            0 => {}
            1 => out.push(settle(seq, a, b)),
            _ => {
                let mid = (&a + &b) * &half;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Isolates the largest root in (lo, hi], given at least one root there.
fn isolate_largest(seq: &SturmSequence, mut lo: BigRational, mut hi: BigRational) -> RealEnclosure {
    let half = BigRational::new(1.into(), 2.into());
    while seq.count(Some(&lo), Some(&hi)) > 1 {
        let mid = (&lo + &hi) * &half;
        if seq.count(Some(&mid), Some(&hi)) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    settle(seq, lo, hi)
}

/// Distinct real roots in (lo, hi] (default all of ℝ), isolated exactly and
/// refined to width at most 2^−32.
pub fn sturm_real_roots(p: &ExactPoly, interval: Option<(BigRational, BigRational)>) -> Result<RootSummary> {
    let ip = integer_form(p)?;
    let seq = SturmSequence::new(&ip);
    let bound = sturm::cauchy_bound(&ip);
    let (lo, hi) = match interval {
        Some((lo, hi)) => {
            if lo >= hi {
                return Err(Error::InvalidArgument(format!("empty interval ({lo}, {hi}]")));
            }
            (lo.max(-bound.clone()), hi.min(bound.clone()))
        }
        None => (-bound.clone(), bound),
    };
    let tol = BigRational::new(1.into(), BigInt::from(1u64 << 32));
    let encs: Vec<RealEnclosure> = if lo < hi { isolate_all(&seq, lo, hi) } else { Vec::new() }
        .into_iter()
        .map(|e| refine(seq.squarefree(), e, |e| e.width() <= tol))
        .collect();
    let factors: Vec<(SturmSequence, usize)> =
        sturm::squarefree_factors(&ip).into_iter().map(|(f, m)| (SturmSequence::from_squarefree(f), m)).collect();
    let real_roots: Vec<RealRoot> = encs
        .into_iter()
        .map(|enc| {
            let multiplicity = factors.iter().find(|(s, _)| encloses(s, &enc)).map(|(_, m)| *m).unwrap_or(1);
            RealRoot { enclosure: enc, multiplicity }
        })
        .collect();
    let largest_real = real_roots.last().map(|r| r.enclosure.clone());
    Ok(RootSummary {
        degree: sturm::degree(&ip),
        real_roots,
        largest_real,
        complex_roots: Vec::new(),
        uncertain: false,
        precision_bits: 0,
    })
}

fn encloses(seq: &SturmSequence, enc: &RealEnclosure) -> bool {
    if enc.is_exact() {
        sign_at(seq.squarefree(), &enc.lo) == 0
    } else {
        seq.count(Some(&enc.lo), Some(&enc.hi)) == 1
    }
}

/// Number of distinct real roots in (lo, hi]; `None` endpoints are ∓∞.
pub fn count_real_roots(p: &ExactPoly, lo: Option<&BigRational>, hi: Option<&BigRational>) -> Result<usize> {
    let ip = integer_form(p)?;
    Ok(SturmSequence::new(&ip).count(lo, hi))
}

/// Enclosure of width ≤ `abs_tol` around the largest real root.
pub fn largest_real_root(p: &ExactPoly, abs_tol: &BigRational) -> Result<Option<RealEnclosure>> {
    largest_root_above(p, None, |e| &e.width() <= abs_tol)
}

/// As `largest_real_root`, restricted to (0, ∞).
pub fn largest_positive_root(p: &ExactPoly, abs_tol: &BigRational) -> Result<Option<RealEnclosure>> {
    largest_root_above(p, Some(BigRational::zero()), |e| &e.width() <= abs_tol)
}

fn largest_root_above(
    p: &ExactPoly,
    floor: Option<BigRational>,
    done: impl Fn(&RealEnclosure) -> bool,
) -> Result<Option<RealEnclosure>> {
    let ip = integer_form(p)?;
    if sturm::degree(&ip) == 0 {
        return Ok(None);
    }
    let seq = SturmSequence::new(&ip);
    let bound = sturm::cauchy_bound(&ip);
    let lo = floor.unwrap_or_else(|| -bound.clone());
    if seq.count(Some(&lo), Some(&bound)) == 0 {
        return Ok(None);
    }
    let enc = isolate_largest(&seq, lo, bound);
    Ok(Some(refine(seq.squarefree(), enc, done)))
}

/// The largest real root (or the largest in (0, ∞) when `positive_only`),
/// rounded half-up to `decimals` places once the certified enclosure
/// determines the digits. A root within 10^−(decimals+40) of a rounding
/// boundary is reported from the enclosure midpoint.
pub fn largest_root_decimal(p: &ExactPoly, decimals: usize, positive_only: bool) -> Result<Option<String>> {
    let floor = positive_only.then(BigRational::zero);
    let giveup = BigRational::new(1.into(), BigInt::from(10).pow(decimals as u32 + 40));
    let enc = largest_root_above(p, floor, |e| e.rounded(decimals).is_some() || e.width() < giveup)?;
    Ok(enc.map(|e| e.rounded(decimals).unwrap_or_else(|| round_half_up(&e.midpoint(), decimals))))
}

/// Sign changes in the coefficient sequence.
pub fn descartes_bound(p: &ExactPoly) -> Result<usize> {
    Ok(sturm::descartes_bound(&integer_form(p)?))
}

/// Real roots counted with multiplicity.
pub fn real_root_count_with_multiplicity(p: &ExactPoly) -> Result<usize> {
    let ip = integer_form(p)?;
    Ok(sturm::squarefree_factors(&ip)
        .iter()
        .map(|(f, m)| SturmSequence::from_squarefree(f.clone()).count(None, None) * m)
        .sum())
}

/// True iff every complex root is real.
pub fn is_hyperbolic(p: &ExactPoly) -> Result<bool> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::InvalidArgument("hyperbolicity needs degree >= 1".into()));
    }
    Ok(real_root_count_with_multiplicity(p)? == d)
}

/// All complex roots with multiplicity, by Aberth–Ehrlich on each
/// square-free factor. Precision starts at `precision_bits`, raised to
/// twice the estimated conditioning of the roots plus 64 bits, and doubles
/// up to 1024 bits, warm-started each time, until the iteration converges
/// and the inclusion discs separate the roots and decide which are real.
pub fn complex_roots(p: &ExactPoly, precision_bits: u64) -> Result<RootSummary> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::InvalidArgument("root finding needs degree >= 1".into()));
    }
    let ip = integer_form(p)?;
    let mut roots = Vec::with_capacity(d);
    let mut uncertain = false;
    let mut used = precision_bits;
    for (factor, mult) in sturm::squarefree_factors(&ip) {
        let mut prec = precision_bits.max(64);
        let mut start: Option<Vec<aberth::Cx>> = None;
        if sturm::degree(&factor) >= 2 {
            let (z, cond) = aberth::initial(&factor);
            let wanted = ((2.0 * cond).ceil() as u64 + 64).div_ceil(64) * 64;
            prec = prec.max(wanted).min(MAX_ROOT_PRECISION);
            start = Some(z);
        }
        loop {
            let res = aberth::aberth(&factor, prec, start.as_deref());
            let real = aberth::certify_real(&res.roots, &res.radius_log2, prec);
            let done = res.converged && real.is_some();
            if done || prec >= MAX_ROOT_PRECISION {
                uncertain |= !done;
                used = used.max(prec);
                let flags = real.unwrap_or_else(|| res.roots.iter().map(|z| z.im.is_zero()).collect());
                for ((z, r), is_real) in res.roots.into_iter().zip(res.radius_log2).zip(flags) {
                    let im = if is_real { Float::zero() } else { z.im };
                    let root = ComplexRoot { re: z.re, im, radius_log2: r, multiplicity: mult, is_real };
                    roots.extend(std::iter::repeat_n(root, mult));
                }
                break;
            }
            start = Some(res.roots);
            prec = (prec * 2).min(MAX_ROOT_PRECISION);
        }
    }
    roots.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    Ok(RootSummary {
        degree: d,
        real_roots: Vec::new(),
        largest_real: None,
        complex_roots: roots,
        uncertain,
        precision_bits: used,
    })
}

/// `complex_roots` filtered to Re z > 0; both members of a conjugate pair
/// are kept.
pub fn positive_real_part_roots(p: &ExactPoly, precision_bits: u64) -> Result<RootSummary> {
    let mut s = complex_roots(p, precision_bits)?;
    s.complex_roots.retain(|r| r.re.is_positive());
    Ok(s)
}
