use std::cmp::Ordering;

use num_traits::ToPrimitive;

use super::Float;

const MAG_BITS: u32 = 32;

/// Non-negative magnitude bound `man · 2^exp` with a 32-bit mantissa. Every
/// operation rounds up unless the name says otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn ceil_shift(m: u128, shift: u32) -> u128 {
    if shift == 0 {
        return m;
    }
    if shift >= 128 {
        return u128::from(m != 0);
    }
    let q = m >> shift;
    if q << shift == m {
        q
    } else {
        q + 1
    }
}

impl Mag {
    pub fn zero() -> Mag {
        Mag { man: 0, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn pow2(e: i64) -> Mag {
        Mag { man: 1 << (MAG_BITS - 1), exp: e - (MAG_BITS as i64 - 1) }
    }

    fn from_u128_up(m: u128, exp: i64) -> Mag {
        if m == 0 {
            return Mag::zero();
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mut q = ceil_shift(m, shift);
            let mut e = exp + shift as i64;
            if q >> MAG_BITS != 0 {
                q = ceil_shift(q, 1);
                e += 1;
            }
            Mag { man: q as u64, exp: e }
        } else {
            let up = MAG_BITS - bits;
            Mag { man: (m << up) as u64, exp: exp - up as i64 }
        }
    }

    fn from_u128_down(m: u128, exp: i64) -> Mag {
        if m == 0 {
            return Mag::zero();
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            Mag { man: (m >> shift) as u64, exp: exp + shift as i64 }
        } else {
            let up = MAG_BITS - bits;
            Mag { man: (m << up) as u64, exp: exp - up as i64 }
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_u128_up(v as u128, 0)
    }

    /// Upper bound for |x|.
    pub fn upper_of(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::zero();
        }
        let bits = x.bits();
        let shift = bits.saturating_sub(96);
        let top = (x.mantissa() >> shift as usize).to_u128().expect("96 bits");
        let exact = shift == 0 || x.mantissa().trailing_zeros().unwrap_or(0) >= shift;
        let top = if exact { top } else { top + 1 };
        Mag::from_u128_up(top, x.exponent() + shift as i64)
    }

    /// Lower bound for |x|.
    pub fn lower_of(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::zero();
        }
        let bits = x.bits();
        let shift = bits.saturating_sub(96);
        let top = (x.mantissa() >> shift as usize).to_u128().expect("96 bits");
        Mag::from_u128_down(top, x.exponent() + shift as i64)
    }

    pub fn to_float(&self) -> Float {
        Float::from_parts(false, self.man.into(), self.exp)
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = big.exp - small.exp;
        if d > 64 {
            return Mag::from_u128_up(((big.man as u128) << 64) + 1, big.exp - 64);
        }
        Mag::from_u128_up(((big.man as u128) << d) + small.man as u128, small.exp)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::zero();
        }
        Mag::from_u128_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        self.mul(&Mag::from_u64(k))
    }

    /// `self / other`, rounded up. `other` must be a lower bound of the true
    /// divisor for the result to stay an upper bound.
    pub fn div(&self, other: &Mag) -> Mag {
        assert!(!other.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::zero();
        }
        let num = (self.man as u128) << 64;
        let d = other.man as u128;
        let q = num / d + u128::from(!num.is_multiple_of(d));
        Mag::from_u128_up(q, self.exp - other.exp - 64)
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() {
            return *self;
        }
        Mag { man: self.man, exp: self.exp + k }
    }

    pub fn sqrt(&self) -> Mag {
        if self.is_zero() {
            return *self;
        }
        let (m, e) = if self.exp.rem_euclid(2) == 1 { ((self.man as u128) << 1, self.exp - 1) } else { (self.man as u128, self.exp) };
        let m = m << 62;
        let e = e - 62;
        let mut s = (m as f64).sqrt() as u128;
        while s * s < m {
            s += 1;
        }
        while s > 0 && (s - 1) * (s - 1) >= m {
            s -= 1;
        }
        Mag::from_u128_up(s, e / 2)
    }

    pub fn max(&self, other: &Mag) -> Mag {
        if self.cmp(other) == Ordering::Less {
            *other
        } else {
            *self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float().to_f64()
    }

    pub fn log2_approx(&self) -> f64 {
        self.to_float().log2_approx()
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_float().cmp(&other.to_float())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(m: &Mag) -> BigRational {
        m.to_float().to_rational()
    }

    #[test]
    fn bounds_bracket_the_float() {
        let x = Float::from_parts(false, (1u128 << 100 | 12345).into(), -7);
        assert!(q(&Mag::upper_of(&x)) >= x.to_rational());
        assert!(q(&Mag::lower_of(&x)) <= x.to_rational());
        assert!(Mag::upper_of(&x) > Mag::lower_of(&x));
    }

    #[test]
    fn arithmetic_rounds_up() {
        let a = Mag::from_u64(0xffff_ffff);
        let b = Mag::from_u64(3);
        assert!(q(&a.mul(&b)) >= q(&a) * q(&b));
        assert!(q(&a.add(&b)) >= q(&a) + q(&b));
        assert!(q(&b.div(&a)) >= q(&b) / q(&a));
        let tiny = Mag::pow2(-500);
        assert!(a.add(&tiny) > a);
    }

    #[test]
    fn sqrt_is_an_upper_bound() {
        for v in [2u64, 3, 10, 1 << 40, 12345678901] {
            let m = Mag::from_u64(v);
            let s = m.sqrt();
            assert!(q(&s) * q(&s) >= q(&m), "v = {v}");
            assert!(s.to_f64() < (v as f64).sqrt() * 1.000001);
        }
        let m = Mag::pow2(-41);
        assert!(q(&m.sqrt()) * q(&m.sqrt()) >= q(&m));
    }
}
