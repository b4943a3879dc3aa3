//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are integer numerators over one shared positive denominator,
//! so the family Pₙ(x) keeps its natural `n!` scaling without gcd churn.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Multiplication switches from schoolbook to Karatsuba above this degree.
pub const KARATSUBA_THRESHOLD: usize = 512;

#[derive(Clone, Debug)]
pub struct ExactPoly {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl ExactPoly {
    /// Builds `Σ numerators[m]·x^m / denominator`; trailing zeros are dropped
    /// and a negative denominator is moved into the numerators.
    pub fn new(mut numerators: Vec<BigInt>, mut denominator: BigInt) -> Result<ExactPoly> {
        if denominator.is_zero() {
            return invalid("polynomial denominator must be nonzero");
        }
        if denominator.is_negative() {
            denominator = -denominator;
            for c in &mut numerators {
                *c = -std::mem::take(c);
            }
        }
        while numerators.last().is_some_and(Zero::is_zero) {
            numerators.pop();
        }
        Ok(ExactPoly { numerators, denominator })
    }

    pub(crate) fn from_parts_unchecked(mut numerators: Vec<BigInt>, denominator: BigInt) -> ExactPoly {
        debug_assert!(denominator.is_positive());
        while numerators.last().is_some_and(Zero::is_zero) {
            numerators.pop();
        }
        ExactPoly { numerators, denominator }
    }

    pub fn zero() -> ExactPoly {
        ExactPoly { numerators: Vec::new(), denominator: BigInt::one() }
    }

    pub fn one() -> ExactPoly {
        ExactPoly::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> ExactPoly {
        ExactPoly::from_integers(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigRational) -> ExactPoly {
        ExactPoly::from_parts_unchecked(vec![c.numer().clone()], c.denom().clone())
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> ExactPoly {
        ExactPoly::from_parts_unchecked(coeffs, BigInt::one())
    }

    pub fn from_i64s(coeffs: &[i64]) -> ExactPoly {
        ExactPoly::from_integers(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// From rational coefficients, lowest degree first, over their lcm.
    pub fn from_rationals(coeffs: &[BigRational]) -> ExactPoly {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        ExactPoly::from_parts_unchecked(nums, den)
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.numerators.len().checked_sub(1)
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn coeff(&self, m: usize) -> BigRational {
        match self.numerators.get(m) {
            Some(c) => BigRational::new(c.clone(), self.denominator.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.numerators.len()).map(|m| self.coeff(m)).collect()
    }

    pub fn leading_coeff(&self) -> Option<BigRational> {
        self.degree().map(|d| self.coeff(d))
    }

    /// Sign of the coefficient of x^m (−1, 0 or 1).
    pub fn coeff_sign(&self, m: usize) -> i32 {
        match self.numerators.get(m).map(BigInt::sign) {
            Some(Sign::Plus) => 1,
            Some(Sign::Minus) => -1,
            _ => 0,
        }
    }

    /// Expresses the same polynomial over `denominator`, if it is a multiple
    /// of the reduced denominator.
    pub fn with_denominator(&self, denominator: &BigInt) -> Option<ExactPoly> {
        if !denominator.is_positive() {
            return None;
        }
        let g = self.numerators.iter().fold(self.denominator.clone(), |acc, c| acc.gcd(c));
        let reduced_den = &self.denominator / &g;
        if !denominator.is_multiple_of(&reduced_den) {
            return None;
        }
        let scale = denominator / &reduced_den;
        let nums = self.numerators.iter().map(|c| c / &g * &scale).collect();
        Some(ExactPoly { numerators: nums, denominator: denominator.clone() })
    }

    /// Divides numerators and denominator by their common gcd.
    pub fn normalized(&self) -> ExactPoly {
        let g = self.numerators.iter().fold(self.denominator.clone(), |acc, c| acc.gcd(c));
        if g.is_one() {
            return self.clone();
        }
        ExactPoly {
            numerators: self.numerators.iter().map(|c| c / &g).collect(),
            denominator: &self.denominator / &g,
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.numerators.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc / BigRational::from_integer(self.denominator.clone())
    }

    /// Sign of p(num/den) for den > 0, without forming rationals.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> i32 {
        sign_of(&eval_homogeneous(&self.numerators, num, den))
    }

    pub fn derivative(&self) -> ExactPoly {
        let nums = self
            .numerators
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c * BigInt::from(m))
            .collect();
        ExactPoly::from_parts_unchecked(nums, self.denominator.clone())
    }

    pub fn neg(&self) -> ExactPoly {
        ExactPoly { numerators: self.numerators.iter().map(|c| -c).collect(), denominator: self.denominator.clone() }
    }

    fn combine(&self, other: &ExactPoly, subtract: bool) -> ExactPoly {
        let den = self.denominator.lcm(&other.denominator);
        let sa = &den / &self.denominator;
        let sb = &den / &other.denominator;
        let n = self.numerators.len().max(other.numerators.len());
        let mut out = Vec::with_capacity(n);
        for m in 0..n {
            let a = self.numerators.get(m).map(|c| c * &sa).unwrap_or_default();
            let b = other.numerators.get(m).map(|c| c * &sb).unwrap_or_default();
            out.push(if subtract { a - b } else { a + b });
        }
        ExactPoly::from_parts_unchecked(out, den)
    }

    pub fn add(&self, other: &ExactPoly) -> ExactPoly {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ExactPoly) -> ExactPoly {
        self.combine(other, true)
    }

    pub fn mul(&self, other: &ExactPoly) -> ExactPoly {
        let nums = mul_coeffs(&self.numerators, &other.numerators);
        ExactPoly::from_parts_unchecked(nums, &self.denominator * &other.denominator)
    }

    pub fn scale(&self, c: &BigRational) -> ExactPoly {
        let nums = self.numerators.iter().map(|v| v * c.numer()).collect();
        ExactPoly::from_parts_unchecked(nums, &self.denominator * c.denom())
    }

    /// `x^k · self`.
    pub fn shift(&self, k: usize) -> ExactPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut nums = vec![BigInt::zero(); k];
        nums.extend(self.numerators.iter().cloned());
        ExactPoly { numerators: nums, denominator: self.denominator.clone() }
    }

    /// Integer polynomial with the same roots: numerators divided by their
    /// content, leading coefficient positive.
    pub fn primitive_integer(&self) -> Result<Vec<BigInt>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(primitive_part(&self.numerators))
    }

    pub fn to_json_value(&self, n: Option<usize>) -> PolyJson {
        PolyJson {
            n,
            denominator: self.denominator.to_string(),
            numerators: self.numerators.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json_value(v: &PolyJson) -> Result<ExactPoly> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|e| Error::InvalidArgument(format!("bad integer {s:?}: {e}")))
        };
        let nums = v.numerators.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        ExactPoly::new(nums, parse(&v.denominator)?)
    }
}

/// Serialized form: decimal strings for every big integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    pub denominator: String,
    pub numerators: Vec<String>,
}

impl PartialEq for ExactPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.numerators.len() != other.numerators.len() {
            return false;
        }
        self.numerators
            .iter()
            .zip(&other.numerators)
            .all(|(a, b)| a * &other.denominator == b * &self.denominator)
    }
}

impl Eq for ExactPoly {}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for m in (0..self.numerators.len()).rev() {
            let c = self.coeff(m);
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let c = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let var = match m {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{m}"),
            };
            if m == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&var)?;
            } else if c.denom().is_one() {
                write!(f, "{}*{var}", c.numer())?;
            } else {
                write!(f, "{}/{}*{var}", c.numer(), c.denom())?;
            }
        }
        Ok(())
    }
}

pub(crate) fn sign_of(v: &BigInt) -> i32 {
    match v.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

/// Σ c_i · num^i · den^{d−i}; its sign equals the sign of p(num/den) for den > 0.
pub(crate) fn eval_homogeneous(coeffs: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * num + c * &den_pow;
        den_pow *= den;
    }
    acc
}

pub(crate) fn content(coeffs: &[BigInt]) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

pub(crate) fn primitive_part(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut g = content(&v);
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.iter().map(|c| c / &g).collect()
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt], offset: usize) {
    for (i, v) in src.iter().enumerate() {
        dst[offset + i] += v;
    }
}

fn karatsuba(a: &[BigInt], b: &[BigInt], threshold: usize) -> Vec<BigInt> {
    if a.len() <= threshold || b.len() <= threshold {
        return schoolbook(a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(a0, b0, threshold);
    let z2 = karatsuba(a1, b1, threshold);
    let sum = |lo: &[BigInt], hi: &[BigInt]| {
        let n = lo.len().max(hi.len());
        (0..n)
            .map(|i| lo.get(i).cloned().unwrap_or_default() + hi.get(i).cloned().unwrap_or_default())
            .collect::<Vec<_>>()
    };
    let mut z1 = karatsuba(&sum(a0, a1), &sum(b0, b1), threshold);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    add_into(&mut out, &z0, 0);
    let keep = z1.len().min(out.len() - half);
    add_into(&mut out, &z1[..keep], half);
    add_into(&mut out, &z2, 2 * half);
    out
}

pub(crate) fn mul_coeffs_with_threshold(a: &[BigInt], b: &[BigInt], threshold: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    karatsuba(a, b, threshold.max(1))
}

pub(crate) fn mul_coeffs(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    mul_coeffs_with_threshold(a, b, KARATSUBA_THRESHOLD)
}
