//! Integer polynomial algebra (coefficients little-endian) and Sturm
//! sequences for exact real-root counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{eval_homogeneous, primitive_part, sign_of};

pub(crate) type IPoly = Vec<BigInt>;

fn trim(p: &mut IPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

pub(crate) fn derivative(p: &[BigInt]) -> IPoly {
    p.iter().enumerate().skip(1).map(|(m, c)| c * m).collect()
}

/// Pseudo-division with a positive multiplier: returns (q, r) with
/// c·a = q·b + r for some c > 0 and deg r < deg b.
fn pseudo_divide(a: &[BigInt], b: &[BigInt]) -> (IPoly, IPoly) {
    let db = degree(b);
    let lb = b.last().expect("nonzero divisor").clone();
    let lb_abs = lb.abs();
    let lb_sign = lb.signum();
    let mut r: IPoly = a.to_vec();
    trim(&mut r);
    let mut q: IPoly = vec![BigInt::zero(); r.len().saturating_sub(db).max(1)];
    while !r.is_empty() && degree(&r) >= db {
        let k = degree(&r) - db;
        let lr = r.last().unwrap().clone();
        let factor = &lr * &lb_sign;
        for c in q.iter_mut() {
            *c *= &lb_abs;
        }
        q[k] += &factor;
        for c in r.iter_mut() {
            *c *= &lb_abs;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + k] -= &factor * c;
        }
        debug_assert!(r.last().unwrap().is_zero());
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// lc(b)^(δ+1)·a mod b with δ = deg a − deg b.
fn prem(a: &[BigInt], b: &[BigInt]) -> IPoly {
    let db = degree(b);
    let lb = b.last().expect("nonzero divisor");
    let mut r: IPoly = a.to_vec();
    let delta = degree(a) - db;
    for k in (0..=delta).rev() {
        let t = r[db + k].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        if !t.is_zero() {
            for (i, c) in b.iter().enumerate() {
                r[i + k] -= &t * c;
            }
        }
        r.pop();
    }
    trim(&mut r);
    r
}

fn exact_div_all(p: IPoly, d: &BigInt) -> IPoly {
    p.into_iter().map(|c| c / d).collect()
}

/// Subresultant remainder sequence r₀ = a, r₁ = b, r_{i+1} =
/// prem(r_{i−1}, r_i)/β_i, with the sign of each β_i. Needs deg a ≥ deg b.
fn subresultant_prs(a: &[BigInt], b: &[BigInt]) -> (Vec<IPoly>, Vec<i32>) {
    let mut seq = vec![a.to_vec(), b.to_vec()];
    let mut beta_signs = Vec::new();
    let mut psi = -BigInt::one();
    let mut d_prev = 0usize;
    loop {
        let n = seq.len();
        let (r0, r1) = (&seq[n - 2], &seq[n - 1]);
        let d = degree(r0) - degree(r1);
        let beta = if n == 2 {
            if d.is_multiple_of(2) { -BigInt::one() } else { BigInt::one() }
        } else {
            let lc_prev = -(r0.last().unwrap().clone());
            psi = if d_prev == 0 {
                psi.clone()
            } else {
                lc_prev.pow(d_prev as u32) / psi.pow(d_prev as u32 - 1)
            };
            lc_prev * psi.pow(d as u32)
        };
        let r = prem(r0, r1);
        if r.is_empty() {
            break;
        }
        beta_signs.push(sign_of(&beta));
        seq.push(exact_div_all(r, &beta));
        d_prev = d;
    }
    (seq, beta_signs)
}

/// Primitive gcd with positive leading coefficient.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> IPoly {
    let (mut x, mut y) = (primitive_part(a), primitive_part(b));
    if x.is_empty() {
        return y;
    }
    if y.is_empty() {
        return x;
    }
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    let (seq, _) = subresultant_prs(&x, &y);
    let g = primitive_part(seq.last().unwrap());
    if g.len() == 1 {
        return vec![BigInt::one()];
    }
    g
}

/// a / b for b dividing a over ℚ, returned as a primitive integer polynomial.
pub(crate) fn divide_exact(a: &[BigInt], b: &[BigInt]) -> IPoly {
    let (q, r) = pseudo_divide(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    primitive_part(&q)
}

const MOD_PRIMES: [u64; 3] = [(1 << 61) - 1, 4_611_686_018_427_387_847, 2_305_843_009_213_693_921];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn reduce_mod(p: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut out: Vec<u64> = p.iter().map(|c| c.mod_floor(&mb).try_into().expect("reduced below modulus")).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Degree of gcd(a, b) over ℤ/m for prime m.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> usize {
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), m - 2, m);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mul_mod(*a.last().unwrap(), inv, m);
            for (i, c) in b.iter().enumerate() {
                let t = mul_mod(f, *c, m);
                a[i + shift] = (a[i + shift] + m - t) % m;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test for square-freeness: gcd(f, f′) is constant modulo a
/// prime not dividing the leading coefficient.
fn squarefree_mod_p(f: &[BigInt]) -> bool {
    if degree(f) <= 1 {
        return true;
    }
    let df = derivative(f);
    MOD_PRIMES.iter().any(|&m| {
        let fm = reduce_mod(f, m);
        fm.len() == f.len() && gcd_degree_mod(fm, reduce_mod(&df, m), m) == 0
    })
}

/// Splits off the power of x dividing f.
fn strip_x(f: &[BigInt]) -> (usize, IPoly) {
    let k = f.iter().take_while(|c| c.is_zero()).count();
    (k, f[k..].to_vec())
}

/// Square-free factors with multiplicities, from the tower
/// g₀ = f, g_{i+1} = gcd(g_i, g_i′): hᵢ = g_{i−1}/gᵢ collects the factors of
/// multiplicity ≥ i, and hᵢ/h_{i+1} those of multiplicity exactly i.
pub(crate) fn squarefree_factors(f: &[BigInt]) -> Vec<(IPoly, usize)> {
    let (k, rest) = strip_x(&primitive_part(f));
    if squarefree_mod_p(&rest) {
        let mut out = Vec::new();
        if degree(&rest) > 0 {
            out.push((rest, 1));
        }
        if k > 0 {
            out.push((vec![BigInt::zero(), BigInt::one()], k));
        }
        out.sort_by_key(|(_, m)| *m);
        return out;
    }
    let mut tower = vec![primitive_part(f)];
    while degree(tower.last().unwrap()) > 0 {
        let g = tower.last().unwrap();
        let next = gcd(g, &derivative(g));
        tower.push(next);
    }
    let h: Vec<IPoly> = tower.windows(2).map(|w| divide_exact(&w[0], &w[1])).collect();
    let mut out = Vec::new();
    for i in 0..h.len() {
        let factor = match h.get(i + 1) {
            Some(next) => divide_exact(&h[i], next),
            None => h[i].clone(),
        };
        if degree(&factor) > 0 {
            out.push((factor, i + 1));
        }
    }
    out
}

/// f / gcd(f, f′), primitive.
pub(crate) fn squarefree_part(f: &[BigInt]) -> IPoly {
    let f = primitive_part(f);
    let (k, rest) = strip_x(&f);
    if squarefree_mod_p(&rest) {
        return if k > 0 { crate::poly::mul_coeffs(&rest, &[BigInt::zero(), BigInt::one()]) } else { rest };
    }
    let g = gcd(&f, &derivative(&f));
    divide_exact(&f, &g)
}

pub(crate) fn sign_at(p: &[BigInt], x: &BigRational) -> i32 {
    sign_of(&eval_homogeneous(p, x.numer(), x.denom()))
}

/// Sign changes in the coefficient sequence: an upper bound on the number
/// of positive roots counted with multiplicity.
pub(crate) fn descartes_bound(p: &[BigInt]) -> usize {
    let signs: Vec<i32> = p.iter().map(sign_of).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// 2^k with 2^k > 1 + max|aᵢ/aₙ|, a strict bound on every root modulus.
pub(crate) fn cauchy_bound(p: &[BigInt]) -> BigRational {
    let lead = p.last().expect("nonzero polynomial").abs();
    let max: BigInt = p[..p.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    let ratio: BigInt = <BigInt as Integer>::div_ceil(&max, &lead) + BigInt::one();
    let k = ratio.bits() + 1;
    BigRational::from_integer(BigInt::one() << k)
}

#[derive(Debug, Clone)]
pub(crate) struct SturmSequence {
    seq: Vec<IPoly>,
}

impl SturmSequence {
    /// Built on the square-free part, so counts are of distinct roots. The
    /// elements are subresultants with signs fixed so that each is a
    /// positive multiple of the classical negated remainder.
    pub(crate) fn new(p: &[BigInt]) -> SturmSequence {
        SturmSequence::from_squarefree(squarefree_part(p))
    }

    /// As `new`, for a polynomial already known to be square-free.
    pub(crate) fn from_squarefree(f: IPoly) -> SturmSequence {
        if degree(&f) == 0 {
            return SturmSequence { seq: vec![f] };
        }
        let (prs, beta_signs) = subresultant_prs(&f, &derivative(&f));
        let mut eps = vec![1i32, 1];
        for i in 1..prs.len() - 1 {
            let d = degree(&prs[i - 1]) - degree(&prs[i]);
            let lc_sign = sign_of(prs[i].last().unwrap());
            let lc_pow = if (d + 1).is_multiple_of(2) { 1 } else { lc_sign };
            eps.push(-lc_pow * eps[i - 1] * beta_signs[i - 1]);
        }
        let seq = prs
            .into_iter()
            .zip(eps)
            .map(|(r, e)| {
                if e < 0 {
                    r.into_iter().map(|c| -c).collect()
                } else {
                    r
                }
            })
            .collect();
        SturmSequence { seq }
    }

    pub(crate) fn squarefree(&self) -> &IPoly {
        &self.seq[0]
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations at x, or at ±∞ when `x` is None (`plus` picks the side).
    fn variations_at(&self, x: Option<&BigRational>, plus: bool) -> usize {
        match x {
            Some(x) => Self::variations(self.seq.iter().map(|p| sign_at(p, x))),
            None => Self::variations(self.seq.iter().map(|p| {
                let s = sign_of(p.last().unwrap());
                if plus || degree(p).is_multiple_of(2) {
                    s
                } else {
                    -s
                }
            })),
        }
    }

    /// Number of distinct real roots in (lo, hi]; None stands for ∓∞.
    pub(crate) fn count(&self, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
        let a = self.variations_at(lo, false);
        let b = self.variations_at(hi, true);
        a.saturating_sub(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IPoly {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gcd_and_exact_division() {
        // (x−1)(x+2) and (x−1)(x−3)
        let a = ip(&[-2, 1, 1]);
        let b = ip(&[3, -4, 1]);
        assert_eq!(gcd(&a, &b), ip(&[-1, 1]));
        assert_eq!(divide_exact(&a, &ip(&[-1, 1])), ip(&[2, 1]));
        assert_eq!(gcd(&ip(&[1, 1]), &ip(&[-1, 1])), ip(&[1]));
    }

    #[test]
    fn squarefree_decomposition_tracks_multiplicity() {
        // x²·(x−1)³·(x+2)
        let mut f = ip(&[1]);
        for factor in [ip(&[0, 1]), ip(&[0, 1]), ip(&[-1, 1]), ip(&[-1, 1]), ip(&[-1, 1]), ip(&[2, 1])] {
            f = crate::poly::mul_coeffs(&f, &factor);
        }
        let factors = squarefree_factors(&f);
        assert_eq!(factors, vec![(ip(&[2, 1]), 1), (ip(&[0, 1]), 2), (ip(&[-1, 1]), 3)]);
        assert_eq!(squarefree_part(&f), crate::poly::mul_coeffs(&crate::poly::mul_coeffs(&ip(&[0, 1]), &ip(&[-1, 1])), &ip(&[2, 1])));
    }

    #[test]
    fn modular_squarefree_test() {
        assert!(squarefree_mod_p(&ip(&[-2, 1, 1])));
        assert!(!squarefree_mod_p(&ip(&[1, -2, 1])));
        assert!(!squarefree_mod_p(&ip(&[0, 0, 1, 1])));
        let f = crate::poly::mul_coeffs(&ip(&[3, 0, 1]), &ip(&[3, 0, 1]));
        assert!(!squarefree_mod_p(&f));
        assert_eq!(squarefree_part(&f), ip(&[3, 0, 1]));
        assert_eq!(squarefree_factors(&ip(&[0, 0, 2, 2])), vec![(ip(&[1, 1]), 1), (ip(&[0, 1]), 2)]);
    }

    #[test]
    fn sturm_counts() {
        // x³ − 10x: roots −√10, 0, √10
        let s = SturmSequence::new(&ip(&[0, -10, 0, 1]));
        assert_eq!(s.count(None, None), 3);
        assert_eq!(s.count(Some(&q(0)), None), 1);
        assert_eq!(s.count(Some(&q(-1)), Some(&q(0))), 1);
        assert_eq!(s.count(Some(&q(3)), Some(&q(4))), 1);
        // x⁴ + 35x²: only the double root 0
        let s = SturmSequence::new(&ip(&[0, 0, 35, 0, 1]));
        assert_eq!(s.count(None, None), 1);
        assert_eq!(s.count(Some(&q(0)), None), 0);
        // x² + 1
        assert_eq!(SturmSequence::new(&ip(&[1, 0, 1])).count(None, None), 0);
    }

    #[test]
    fn descartes_and_cauchy() {
        assert_eq!(descartes_bound(&ip(&[0, -10, 0, 1])), 1);
        assert_eq!(descartes_bound(&ip(&[1, 2, 3])), 0);
        let b = cauchy_bound(&ip(&[-100, 0, 1]));
        assert!(b > q(10));
    }
}
