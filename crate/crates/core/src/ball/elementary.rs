//! Certified elementary functions on balls.
//!
//! Point evaluations use series with explicit tail bounds; a ball argument
//! is handled by evaluating the (monotone) function at both endpoints and
//! taking the hull.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Ball, Float, Mag};
use crate::error::{Error, Result};

const GUARD_BITS: u64 = 24;

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u64, Ball>> = RefCell::new(HashMap::new());
    static PI_CACHE: RefCell<HashMap<u64, Ball>> = RefCell::new(HashMap::new());
}

/// Σ_{j≥0} z^{2j+1}/(2j+1) for |z| ≤ 1/2, with the tail folded into the radius.
fn atanh_series(z: &Ball, wp: u64) -> Ball {
    let z2 = z.sqr(wp);
    let mut power = z.clone();
    let mut sum = z.clone();
    let eps = Mag::pow2(-(wp as i64) - 4);
    let mut j = 1u64;
    loop {
        power = power.mul(&z2, wp);
        let term = power.div_u64(2 * j + 1, wp);
        sum = sum.add(&term, wp);
        j += 1;
        if power.mag_upper() < eps {
            // remaining terms are bounded by |z|^{2j+1}·Σ z^{2i} ≤ (4/3)|power|
            let tail = power.mag_upper().mul(&z2.mag_upper()).mul_u64(2);
            return sum.add_error(&tail);
        }
    }
}

/// Σ_{j≥0} (−1)^j / ((2j+1) m^{2j+1}) for an integer m ≥ 2.
fn atan_recip(m: u64, wp: u64) -> Ball {
    let inv = Ball::from_rational(&BigRational::new(BigInt::one(), m.into()), wp);
    let inv2 = inv.sqr(wp);
    let mut power = inv.clone();
    let mut sum = inv;
    let eps = Mag::pow2(-(wp as i64) - 4);
    let mut j = 1u64;
    loop {
        power = power.mul(&inv2, wp);
        let term = power.div_u64(2 * j + 1, wp);
        sum = if j % 2 == 1 { sum.sub(&term, wp) } else { sum.add(&term, wp) };
        j += 1;
        if term.mag_upper() < eps {
            // alternating with decreasing terms: tail below the next term
            return sum.add_error(&term.mag_upper());
        }
    }
}

/// ln 2 = 2·atanh(1/3).
pub fn ln2(prec: u64) -> Ball {
    if let Some(hit) = LN2_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
        return hit;
    }
    let wp = prec + GUARD_BITS;
    let third = Ball::from_rational(&BigRational::new(1.into(), 3.into()), wp);
    let value = atanh_series(&third, wp).mul_2exp(1).round(prec);
    LN2_CACHE.with(|c| c.borrow_mut().insert(prec, value.clone()));
    value
}

/// π by Machin's formula.
pub fn pi(prec: u64) -> Ball {
    if let Some(hit) = PI_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
        return hit;
    }
    let wp = prec + GUARD_BITS;
    let a = atan_recip(5, wp).mul_u64(16, wp);
    let b = atan_recip(239, wp).mul_u64(4, wp);
    let value = a.sub(&b, wp).round(prec);
    PI_CACHE.with(|c| c.borrow_mut().insert(prec, value.clone()));
    value
}

/// ζ(3) = (5/2) Σ_{k≥1} (−1)^{k+1} / (k³·C(2k, k)).
pub fn zeta3(prec: u64) -> Ball {
    let wp = prec + GUARD_BITS;
    let eps = Mag::pow2(-(wp as i64) - 4);
    let mut central = BigInt::one(); // C(2k, k)
    let mut sum = Ball::zero();
    let mut k = 1u64;
    loop {
        central = central * (2 * (2 * k - 1)) / k;
        let denom = BigInt::from(k).pow(3) * &central;
        let term = Ball::from_rational(&BigRational::new(BigInt::one(), denom), wp);
        sum = if k % 2 == 1 { sum.add(&term, wp) } else { sum.sub(&term, wp) };
        k += 1;
        if term.mag_upper() < eps {
            sum = sum.add_error(&term.mag_upper());
            break;
        }
    }
    sum.mul_u64(5, wp).mul_2exp(-1).round(prec)
}

fn exp_point(x: &Float, prec: u64) -> Ball {
    if x.is_zero() {
        return Ball::one();
    }
    // y = x / 2^s with |y| < 2^-12, then square s times
    let s = (x.top() + 12).max(0) as u64;
    let wp = prec + GUARD_BITS + s;
    let y = Ball::exact(x.mul_2exp(-(s as i64)));
    let eps = Mag::pow2(-(wp as i64) - 4);
    let mut term = Ball::one();
    let mut sum = Ball::one();
    let mut j = 1u64;
    loop {
        term = term.mul(&y, wp).div_u64(j, wp);
        sum = sum.add(&term, wp);
        j += 1;
        if term.mag_upper() < eps {
            // |y| < 1/2: tail ≤ |term|·|y|·2
            sum = sum.add_error(&term.mag_upper().mul(&y.mag_upper()).mul_u64(2));
            break;
        }
    }
    for _ in 0..s {
        sum = sum.sqr(wp);
    }
    sum.round(prec)
}

fn ln_point(x: &Float, prec: u64) -> Ball {
    assert!(x.is_positive(), "ln of non-positive value");
    // x = y · 2^k with y ∈ [1/√2, √2]
    let bits = x.bits();
    let man_sq = x.mantissa() * x.mantissa();
    let above_sqrt2 = man_sq > (num_bigint::BigUint::one() << (2 * bits - 1) as usize);
    let k = if above_sqrt2 { x.top() } else { x.top() - 1 };
    let wp = prec + GUARD_BITS + 64 - (k.unsigned_abs().max(1)).leading_zeros() as u64;
    let y = Ball::exact(x.mul_2exp(-k));
    let one = Ball::one();
    let z = y.sub(&one, wp).div(&y.add(&one, wp), wp).expect("y + 1 > 0");
    let ln_y = atanh_series(&z, wp).mul_2exp(1);
    let scaled = if k == 0 {
        Ball::zero()
    } else {
        let l2 = ln2(wp);
        let prod = l2.mul_u64(k.unsigned_abs(), wp);
        if k < 0 {
            prod.neg()
        } else {
            prod
        }
    };
    ln_y.add(&scaled, wp).round(prec)
}

impl Ball {
    pub fn exp(&self, prec: u64) -> Ball {
        if self.is_exact() {
            return exp_point(&self.mid, prec);
        }
        let lo = exp_point(&self.lower(), prec);
        let hi = exp_point(&self.upper(), prec);
        Ball::from_endpoints(&lo.lower(), &hi.upper()).round(prec)
    }

    /// Natural logarithm; fails unless the ball is strictly positive.
    pub fn ln(&self, prec: u64) -> Result<Ball> {
        if !self.is_positive() {
            return Err(Error::Inconclusive(format!("ln of a ball not known to be positive: {self}")));
        }
        if self.is_exact() {
            return Ok(ln_point(&self.mid, prec));
        }
        let lo = ln_point(&self.lower(), prec);
        let hi = ln_point(&self.upper(), prec);
        Ok(Ball::from_endpoints(&lo.lower(), &hi.upper()).round(prec))
    }

    /// `self^q` for a positive ball and rational exponent.
    pub fn pow_rational(&self, q: &BigRational, prec: u64) -> Result<Ball> {
        let wp = prec + GUARD_BITS;
        let exponent = Ball::from_rational(q, wp);
        Ok(self.ln(wp)?.mul(&exponent, wp).exp(prec))
    }

    pub fn sqrt(&self, prec: u64) -> Result<Ball> {
        self.pow_rational(&BigRational::new(1.into(), 2.into()), prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(b: &Ball, v: f64, tol: f64) -> bool {
        (b.to_f64() - v).abs() <= tol * v.abs().max(1.0)
    }

    #[test]
    fn constants_match_known_values() {
        let p = pi(200);
        assert!(close(&p, std::f64::consts::PI, 1e-15));
        assert!(p.accuracy_bits() > 190.0);
        let l = ln2(200);
        assert!(close(&l, std::f64::consts::LN_2, 1e-15));
        let z = zeta3(200);
        assert!(close(&z, 1.2020569031595942, 1e-15));
        assert!(z.accuracy_bits() > 190.0);
    }

    #[test]
    fn pi_digits_are_certified() {
        // 3.14159265358979323846264338327950288419716939937510...
        let p = pi(256);
        let digits: BigInt = "314159265358979323846264338327950288419716939937510".parse().unwrap();
        let scale = BigInt::from(10).pow(50);
        let lo = BigRational::new(digits.clone(), scale.clone());
        let hi = BigRational::new(digits + 1, scale);
        assert!(p.lower().to_rational() >= lo);
        assert!(p.upper().to_rational() <= hi);
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for v in [-30.5, -1.0, 0.001, 1.0, 2.5, 700.0, 5000.0] {
            let x = Ball::exact(Float::from_f64(v));
            let e = x.exp(160);
            let back = e.ln(160).unwrap();
            assert!(back.contains(&Float::from_f64(v)), "v = {v}: {back}");
            assert!(back.accuracy_bits() > 100.0 || v.abs() < 0.01);
        }
        assert!(close(&Ball::from_u64(10).ln(128).unwrap(), 10f64.ln(), 1e-15));
        assert!(close(&Ball::from_rational(&BigRational::new(1.into(), 7.into()), 128).ln(128).unwrap(), (1.0f64 / 7.0).ln(), 1e-15));
    }

    #[test]
    fn ball_arguments_widen_results() {
        let x = Ball::new(Float::one(), Mag::pow2(-20));
        let e = x.exp(128);
        assert!(e.contains(&Float::from_f64(std::f64::consts::E)));
        assert!(e.rad() > &Mag::pow2(-20));
        assert!(Ball::new(Float::zero(), Mag::pow2(-3)).ln(64).is_err());
    }

    #[test]
    fn rational_powers() {
        let x = Ball::from_u64(8);
        let r = x.pow_rational(&BigRational::new(2.into(), 3.into()), 128).unwrap();
        assert!(r.contains(&Float::from_u64(4)));
        let s = Ball::from_u64(2).sqrt(128).unwrap();
        assert!(close(&s, std::f64::consts::SQRT_2, 1e-15));
    }
}
