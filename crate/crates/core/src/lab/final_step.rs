use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{invalid, Error, Result};
use crate::family::factorial;
use crate::poly::ExactPoly;
use crate::roots::{largest_real_root, RealEnclosure};

/// Integers past the threshold at which positivity is checked exactly.
const CONFIRM_SPAN: i64 = 50;

/// Bound polynomials in the variable a closing the final induction steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FinalStepKind {
    /// −8a³ + Σ_{ℓ=1..5} C(a+ℓ−2, 2ℓ−1)·5^ℓ/ℓ!
    Grad7,
    /// −1290a³ + Σ_{ℓ=1..8} C(a+ℓ−2, 2ℓ−1)·2^ℓ/ℓ!
    X2Final,
    /// −76a³ + Σ_{ℓ=1..3} C(a+ℓ−2, 2ℓ−1)/ℓ!
    PpFinal,
    /// −76a³ + Σ_{ℓ=1..3} C(a−ℓ−2, 2ℓ−1)/ℓ!
    PpFinalAsPrinted,
}

impl FinalStepKind {
    pub const ALL: [FinalStepKind; 4] =
        [FinalStepKind::Grad7, FinalStepKind::X2Final, FinalStepKind::PpFinal, FinalStepKind::PpFinalAsPrinted];

    /// (cubic coefficient, number of terms, base, sign of ℓ in the binomial).
    fn shape(self) -> (i64, usize, i64, i64) {
        match self {
            FinalStepKind::Grad7 => (-8, 5, 5, 1),
            FinalStepKind::X2Final => (-1290, 8, 2, 1),
            FinalStepKind::PpFinal => (-76, 3, 1, 1),
            FinalStepKind::PpFinalAsPrinted => (-76, 3, 1, -1),
        }
    }

    /// The threshold the bound is claimed to reach.
    pub fn claimed_threshold(self) -> i64 {
        match self {
            FinalStepKind::Grad7 => 7,
            FinalStepKind::X2Final => 27,
            FinalStepKind::PpFinal | FinalStepKind::PpFinalAsPrinted => 237,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FinalStepKind::Grad7 => "grad7",
            FinalStepKind::X2Final => "x2final",
            FinalStepKind::PpFinal => "pp-final",
            FinalStepKind::PpFinalAsPrinted => "pp-final-as-printed",
        }
    }
}

impl fmt::Display for FinalStepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FinalStepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FinalStepKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .map_or_else(|| invalid(format!("unknown final-step kind {s:?}")), Ok)
    }
}

/// C(a + c, k) as a polynomial in a.
fn binomial_in_a(c: i64, k: usize) -> ExactPoly {
    let mut p = ExactPoly::one();
    for i in 0..k as i64 {
        p = p.mul(&ExactPoly::from_i64s(&[c - i, 1]));
    }
    p.scale(&BigRational::new(BigInt::one(), factorial(k)))
}

pub fn final_step_poly(kind: FinalStepKind) -> ExactPoly {
    let (cubic, terms, base, dir) = kind.shape();
    let mut p = ExactPoly::from_i64s(&[0, 0, 0, cubic]);
    for l in 1..=terms {
        let weight = BigRational::new(BigInt::from(base).pow(l as u32), factorial(l));
        p = p.add(&binomial_in_a(dir * l as i64 - 2, 2 * l - 1).scale(&weight));
    }
    p
}

#[derive(Debug, Clone)]
pub struct FinalStepResult {
    pub kind: FinalStepKind,
    pub poly: ExactPoly,
    pub largest_root: Option<RealEnclosure>,
    /// Least integer a ≥ 1 such that the polynomial is positive at every
    /// integer ≥ a.
    pub threshold: i64,
    /// Positivity confirmed exactly at threshold..=threshold+50, with the
    /// largest root inside that span and a positive leading coefficient.
    pub confirmed: bool,
}

pub fn final_step_threshold(kind: FinalStepKind) -> Result<FinalStepResult> {
    let poly = final_step_poly(kind);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 32);
    let largest_root = largest_real_root(&poly, &tol)?;
    let at = |a: i64| poly.eval(&BigRational::from_integer(a.into()));
    let mut threshold = match &largest_root {
        Some(e) => {
            let above: BigInt = e.hi.floor().to_integer() + 1;
            i64::try_from(above.max(BigInt::one()))
                .map_err(|_| Error::InvalidArgument("final-step root out of range".into()))?
        }
        None => 1,
    };
    while threshold > 1 && at(threshold - 1).is_positive() {
        threshold -= 1;
    }
    let lead_positive = poly.leading_coeff().is_some_and(|c| c.is_positive());
    let span_end = threshold + CONFIRM_SPAN;
    let root_covered =
        largest_root.as_ref().is_none_or(|e| e.hi < BigRational::from_integer(span_end.into()));
    let span_positive = (threshold..=span_end).all(|a| at(a).is_positive());
    let confirmed = lead_positive && root_covered && span_positive;
    Ok(FinalStepResult { kind, poly, largest_root, threshold, confirmed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn grad7_shape() {
        let p = final_step_poly(FinalStepKind::Grad7);
        assert_eq!(p.degree(), Some(9));
        assert_eq!(p.eval(&q(6, 1)), q(-6249, 8));
        let r = final_step_threshold(FinalStepKind::Grad7).unwrap();
        assert_eq!(r.threshold, 7);
        assert!(r.confirmed);
        let root = r.largest_root.unwrap().to_f64();
        assert!((root - 6.950).abs() < 5e-4, "{root}");
    }

    #[test]
    fn thresholds() {
        for (kind, want, root) in [
            (FinalStepKind::X2Final, 27, 26.7397),
            (FinalStepKind::PpFinal, 237, 236.299),
            (FinalStepKind::PpFinalAsPrinted, 251, f64::NAN),
        ] {
            let r = final_step_threshold(kind).unwrap();
            assert_eq!(r.threshold, want, "{kind}");
            assert!(r.confirmed, "{kind}");
            if root.is_finite() {
                assert!((r.largest_root.unwrap().to_f64() - root).abs() < 1e-3, "{kind}");
            }
        }
    }

    #[test]
    fn binomial_polynomial() {
        // C(a − 1, 1) = a − 1 and C(a, 3) at a = 5 is 10
        assert_eq!(binomial_in_a(-1, 1), ExactPoly::from_i64s(&[-1, 1]));
        assert_eq!(binomial_in_a(0, 3).eval(&q(5, 1)), q(10, 1));
        assert_eq!(binomial_in_a(0, 3).eval(&q(2, 1)), q(0, 1));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in FinalStepKind::ALL {
            assert_eq!(k.as_str().parse::<FinalStepKind>().unwrap(), k);
        }
        assert!("nope".parse::<FinalStepKind>().is_err());
    }
}
