use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Mag;

/// Exact dyadic number `(-1)^neg · man · 2^exp`.
///
/// Canonical: the mantissa is odd, or the value is zero with `exp = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Float {
    neg: bool,
    man: BigUint,
    exp: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Up,
}

impl Float {
    pub fn zero() -> Float {
        Float { neg: false, man: BigUint::zero(), exp: 0 }
    }

    pub fn one() -> Float {
        Float::from_u64(1)
    }

    fn make(neg: bool, man: BigUint, exp: i64) -> Float {
        if man.is_zero() {
            return Float::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            return Float { neg, man, exp };
        }
        Float { neg, man: man >> tz, exp: exp + tz as i64 }
    }

    pub fn from_parts(neg: bool, man: BigUint, exp: i64) -> Float {
        Float::make(neg, man, exp)
    }

    pub fn from_u64(v: u64) -> Float {
        Float::make(false, BigUint::from(v), 0)
    }

    pub fn from_i64(v: i64) -> Float {
        Float::make(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    pub fn from_biguint(v: &BigUint) -> Float {
        Float::make(false, v.clone(), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Float {
        Float::make(v.sign() == Sign::Minus, v.magnitude().clone(), 0)
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Float {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Float::zero();
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        Float::make(neg, BigUint::from(man), exp)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Float {
        Float { neg: false, man: BigUint::one(), exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.man.is_zero() {
            0
        } else if self.neg {
            -1
        } else {
            1
        }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Smallest `t` with `|x| < 2^t` (meaningless for zero).
    pub fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn neg(&self) -> Float {
        let mut r = self.clone();
        if !r.man.is_zero() {
            r.neg = !r.neg;
        }
        r
    }

    pub fn abs(&self) -> Float {
        Float { neg: false, man: self.man.clone(), exp: self.exp }
    }

    /// `self · 2^k`, exact.
    pub fn mul_2exp(&self, k: i64) -> Float {
        if self.is_zero() {
            return Float::zero();
        }
        Float { neg: self.neg, man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Float) -> Float {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.man << (self.exp - exp) as usize;
        let b = &other.man << (other.exp - exp) as usize;
        if self.neg == other.neg {
            Float::make(self.neg, a + b, exp)
        } else {
            match a.cmp(&b) {
                Ordering::Equal => Float::zero(),
                Ordering::Greater => Float::make(self.neg, a - b, exp),
                Ordering::Less => Float::make(other.neg, b - a, exp),
            }
        }
    }

    pub fn sub(&self, other: &Float) -> Float {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Float) -> Float {
        if self.is_zero() || other.is_zero() {
            return Float::zero();
        }
        Float { neg: self.neg != other.neg, man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    pub fn mul_u64(&self, k: u64) -> Float {
        Float::make(self.neg, &self.man * k, self.exp)
    }

    /// Truncates toward zero to at most `prec` mantissa bits; the error bound
    /// is zero exactly when nothing was discarded.
    pub fn round(&self, prec: u64) -> (Float, Mag) {
        let bits = self.man.bits();
        if bits <= prec {
            return (self.clone(), Mag::zero());
        }
        let shift = bits - prec;
        let kept = &self.man >> shift as usize;
        let err_exp = self.exp + shift as i64;
        let exact = (&kept << shift as usize) == self.man;
        let err = if exact { Mag::zero() } else { Mag::pow2(err_exp) };
        (Float::make(self.neg, kept, err_exp), err)
    }

    /// Truncation toward zero to at most `prec` bits, without an error bound.
    pub fn trunc(&self, prec: u64) -> Float {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        Float::make(self.neg, &self.man >> shift as usize, self.exp + shift as i64)
    }

    /// Sum truncated to `prec` bits, without an error bound.
    pub fn add_trunc(&self, other: &Float, prec: u64) -> Float {
        if self.is_zero() {
            return other.trunc(prec);
        }
        if other.is_zero() {
            return self.trunc(prec);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if small.top() + (prec as i64) + 8 < big.top() {
            return big.trunc(prec);
        }
        big.add(small).trunc(prec)
    }

    /// Sum rounded to `prec` bits; a summand far below the other's last kept
    /// bit is folded into the error instead of being aligned.
    pub fn add_round(&self, other: &Float, prec: u64) -> (Float, Mag) {
        if self.is_zero() {
            return other.round(prec);
        }
        if other.is_zero() {
            return self.round(prec);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if small.top() + (prec as i64) + 8 < big.top() {
            let (r, err) = big.round(prec);
            return (r, err.add(&Mag::upper_of(small)));
        }
        big.add(small).round(prec)
    }

    /// Quotient rounded toward zero to `prec` bits with its error bound.
    pub fn div_round(&self, other: &Float, prec: u64) -> (Float, Mag) {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return (Float::zero(), Mag::zero());
        }
        let want = prec as i64 + 2;
        let shift = (want + other.man.bits() as i64 - self.man.bits() as i64).max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_rem(&other.man);
        let exp = self.exp - other.exp - shift;
        let neg = self.neg != other.neg;
        let quotient = Float::make(neg, q, exp);
        let mut err = if r.is_zero() { Mag::zero() } else { Mag::pow2(exp) };
        let (rounded, e2) = quotient.round(prec);
        err = err.add(&e2);
        (rounded, err)
    }

    pub fn cmp_abs(&self, other: &Float) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let exp = self.exp.min(other.exp);
        let a = &self.man << (self.exp - exp) as usize;
        let b = &other.man << (other.exp - exp) as usize;
        a.cmp(&b)
    }

    pub fn to_rational(&self) -> BigRational {
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        let m = BigInt::from_biguint(sign, self.man.clone());
        if self.exp >= 0 {
            BigRational::from_integer(m << self.exp as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Rounds `q` toward zero to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u64) -> (Float, Mag) {
        let num = Float::from_bigint(q.numer());
        if q.denom().is_one() {
            return num.round(prec);
        }
        num.div_round(&Float::from_bigint(q.denom()), prec)
    }

    /// Floor toward -inf to an integer.
    pub fn floor_int(&self) -> BigInt {
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        let m = BigInt::from_biguint(sign, self.man.clone());
        if self.exp >= 0 {
            m << self.exp as usize
        } else {
            m >> (-self.exp) as usize
        }
    }

    /// Approximate value; saturates to ±inf or 0 outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.man >> shift as usize).to_u64().expect("64 bits");
        let e = self.exp + shift as i64;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            let mut v = top as f64;
            let mut e = e;
            while e < -900 {
                v *= 2f64.powi(-900);
                e += 900;
            }
            v * 2f64.powi(e as i32)
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// Approximate log2|x| that stays finite for huge exponents.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(53);
        let top = (&self.man >> shift as usize).to_u64().expect("53 bits") as f64;
        top.log2() + (self.exp + shift as i64) as f64
    }

    /// Scientific notation with `digits` significant digits, rounded in the
    /// given direction.
    pub fn to_sci(&self, digits: usize, dir: RoundDir) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let mut e10 = ((self.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let k = digits as i64 - 1 - e10;
            let mut num = BigInt::from_biguint(Sign::Plus, self.man.clone());
            let mut den = BigInt::one();
            if k >= 0 {
                num *= BigInt::from(10).pow(k as u32);
            } else {
                den *= BigInt::from(10).pow((-k) as u32);
            }
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            let (mut q, r) = num.div_rem(&den);
            let away = match dir {
                RoundDir::Up => !self.neg,
                RoundDir::Down => self.neg,
            };
            if away && !r.is_zero() {
                q += 1;
            }
            let s = q.to_string();
            if s.len() > digits {
                // estimate was low, or rounding carried into a new digit
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            let sign = if self.neg { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{e10}")
            } else {
                format!("{sign}{head}.{tail}e{e10}")
            };
        }
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Float {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, _) => Ordering::Equal,
            (1, _) => self.cmp_abs(other),
            _ => other.cmp_abs(self),
        }
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(20, RoundDir::Down))
    }
}
