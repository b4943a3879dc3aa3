//! Midpoint–radius interval arithmetic over arbitrary-precision dyadics.
//!
//! Midpoints are truncated to the working precision after every operation
//! and the discarded part is added to the radius; radii only ever round up.
//! A ball returned by any operation here therefore contains the exact
//! result of the operation applied to any points of the input balls.

mod elementary;
mod float;
mod mag;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

pub use elementary::{ln2, pi, zeta3};
pub use float::{Float, RoundDir};
pub use mag::Mag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Float,
    rad: Mag,
}

impl Ball {
    pub fn new(mid: Float, rad: Mag) -> Ball {
        Ball { mid, rad }
    }

    pub fn zero() -> Ball {
        Ball::exact(Float::zero())
    }

    pub fn one() -> Ball {
        Ball::exact(Float::one())
    }

    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: Mag::zero() }
    }

    pub fn from_u64(v: u64) -> Ball {
        Ball::exact(Float::from_u64(v))
    }

    pub fn from_i64(v: i64) -> Ball {
        Ball::exact(Float::from_i64(v))
    }

    pub fn from_biguint(v: &BigUint, prec: u64) -> Ball {
        let (mid, rad) = Float::from_biguint(v).round(prec);
        Ball { mid, rad }
    }

    pub fn from_bigint(v: &BigInt, prec: u64) -> Ball {
        let (mid, rad) = Float::from_bigint(v).round(prec);
        Ball { mid, rad }
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Ball {
        let (mid, rad) = Float::from_rational(q, prec);
        Ball { mid, rad }
    }

    /// Smallest representable ball around `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float) -> Ball {
        debug_assert!(lo <= hi);
        let mid = lo.add(hi).mul_2exp(-1);
        let rad = Mag::upper_of(&hi.sub(lo).mul_2exp(-1));
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Float {
        self.mid.sub(&self.rad.to_float())
    }

    pub fn upper(&self) -> Float {
        self.mid.add(&self.rad.to_float())
    }

    /// Upper bound on every |x| in the ball.
    pub fn mag_upper(&self) -> Mag {
        Mag::upper_of(&self.mid).add(&self.rad)
    }

    /// Lower bound on every |x| in the ball (zero when it straddles zero).
    pub fn mag_lower(&self) -> Mag {
        let lo = self.mid.abs().sub(&self.rad.to_float());
        if lo.is_positive() {
            Mag::lower_of(&lo)
        } else {
            Mag::zero()
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid.cmp_abs(&self.rad.to_float()) == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.cmp_abs(&self.rad.to_float()) == Ordering::Greater
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, x: &Float) -> bool {
        x.sub(&self.mid).cmp_abs(&self.rad.to_float()) != Ordering::Greater
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        (q - self.mid.to_rational()).abs() <= self.rad.to_float().to_rational()
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Float::from_bigint(v))
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        let gap = self.mid.sub(&other.mid);
        gap.cmp_abs(&self.rad.add(&other.rad).to_float()) != Ordering::Greater
    }

    /// log2(|mid| / rad); infinite for exact balls, negative when the radius
    /// dominates.
    pub fn accuracy_bits(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        if self.mid.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mid.log2_approx() - self.rad.log2_approx()
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad }
    }

    pub fn abs(&self) -> Ball {
        Ball { mid: self.mid.abs(), rad: self.rad }
    }

    pub fn add(&self, other: &Ball, prec: u64) -> Ball {
        let (mid, err) = self.mid.add_round(&other.mid, prec);
        Ball { mid, rad: self.rad.add(&other.rad).add(&err) }
    }

    pub fn sub(&self, other: &Ball, prec: u64) -> Ball {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Ball, prec: u64) -> Ball {
        let (mid, err) = self.mid.mul(&other.mid).round(prec);
        let rad = Mag::upper_of(&self.mid)
            .mul(&other.rad)
            .add(&Mag::upper_of(&other.mid).mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        Ball { mid, rad }
    }

    pub fn sqr(&self, prec: u64) -> Ball {
        self.mul(self, prec)
    }

    pub fn mul_u64(&self, k: u64, prec: u64) -> Ball {
        let (mid, err) = self.mid.mul_u64(k).round(prec);
        Ball { mid, rad: self.rad.mul_u64(k).add(&err) }
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball { mid: self.mid.mul_2exp(k), rad: self.rad.mul_2exp(k) }
    }

    /// Quotient; `None` when the divisor ball contains zero.
    pub fn div(&self, other: &Ball, prec: u64) -> Option<Ball> {
        let denom_low = other.mag_lower();
        if denom_low.is_zero() {
            return None;
        }
        let (mid, err) = self.mid.div_round(&other.mid, prec);
        // |a/b − ma/mb| ≤ (|ma|·rb + |mb|·ra) / (|mb| · (|mb| − rb))
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            err
        } else {
            let numer = Mag::upper_of(&self.mid)
                .mul(&other.rad)
                .add(&Mag::upper_of(&other.mid).mul(&self.rad));
            let denom = Mag::lower_of(&other.mid).mul_lower(&denom_low);
            numer.div(&denom).add(&err)
        };
        Some(Ball { mid, rad })
    }

    pub fn div_u64(&self, k: u64, prec: u64) -> Ball {
        assert!(k != 0, "division by zero");
        self.div(&Ball::from_u64(k), prec).expect("nonzero divisor")
    }

    pub fn recip(&self, prec: u64) -> Option<Ball> {
        Ball::one().div(self, prec)
    }

    /// Enlarges the radius by `extra`.
    pub fn add_error(&self, extra: &Mag) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.add(extra) }
    }

    /// Re-rounds the midpoint to `prec` bits.
    pub fn round(&self, prec: u64) -> Ball {
        let (mid, err) = self.mid.round(prec);
        Ball { mid, rad: self.rad.add(&err) }
    }

    /// Union hull of two balls.
    pub fn union(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal endpoints rounded outward.
    pub fn endpoints_decimal(&self, digits: usize) -> (String, String) {
        (self.lower().to_sci(digits, RoundDir::Down), self.upper().to_sci(digits, RoundDir::Up))
    }
}

impl Mag {
    /// Product rounded down; both factors must be lower bounds.
    pub(crate) fn mul_lower(&self, other: &Mag) -> Mag {
        let p = self.to_float().mul(&other.to_float());
        Mag::lower_of(&p)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid.to_sci(20, RoundDir::Down), self.rad.to_float().to_sci(3, RoundDir::Up))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn thirds_add_up_to_one() {
        let third = Ball::from_rational(&rat(1, 3), 64);
        assert!(!third.is_exact());
        let sum = third.add(&third, 64).add(&third, 64);
        assert!(sum.contains(&Float::one()));
        assert!(sum.accuracy_bits() > 55.0);
    }

    #[test]
    fn division_by_ball_around_zero_is_refused() {
        let around_zero = Ball::new(Float::zero(), Mag::pow2(-10));
        assert!(Ball::one().div(&around_zero, 64).is_none());
        assert!(around_zero.contains_zero());
    }

    #[test]
    fn sign_predicates() {
        let b = Ball::new(Float::from_i64(-3), Mag::from_u64(2));
        assert!(b.is_negative());
        let b = Ball::new(Float::from_i64(-3), Mag::from_u64(4));
        assert!(b.contains_zero());
        assert!(Ball::from_u64(7).is_positive());
    }

    fn q_of(mid: i64, rad_num: u64, shift: i64) -> (Ball, BigRational, BigRational) {
        let rad = Mag::from_u64(rad_num).mul_2exp(-shift);
        let b = Ball::new(Float::from_i64(mid).mul_2exp(-shift), rad);
        let lo = b.lower().to_rational();
        let hi = b.upper().to_rational();
        (b, lo, hi)
    }

    proptest! {
        #[test]
        fn operations_contain_exact_results(
            a in -1_000_000i64..1_000_000, ra in 0u64..1000,
            b in -1_000_000i64..1_000_000, rb in 0u64..1000,
            t in 0.0f64..1.0, u in 0.0f64..1.0,
            prec in 8u64..80,
        ) {
            let (x, xlo, xhi) = q_of(a, ra, 10);
            let (y, ylo, yhi) = q_of(b, rb, 7);
            let pick = |lo: &BigRational, hi: &BigRational, s: f64| {
                let s = BigRational::from_float(s).unwrap();
                lo + (hi - lo) * s
            };
            let xs = pick(&xlo, &xhi, t);
            let ys = pick(&ylo, &yhi, u);
            prop_assert!(x.add(&y, prec).contains_rational(&(&xs + &ys)));
            prop_assert!(x.sub(&y, prec).contains_rational(&(&xs - &ys)));
            prop_assert!(x.mul(&y, prec).contains_rational(&(&xs * &ys)));
            if let Some(qb) = x.div(&y, prec) {
                prop_assert!(!ys.is_zero());
                prop_assert!(qb.contains_rational(&(&xs / &ys)));
            }
        }
    }
}
