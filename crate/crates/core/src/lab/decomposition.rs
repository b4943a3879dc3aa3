use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::family_values;
use crate::divisor::Sigma2Table;
use crate::error::{invalid, Result};
use crate::family::PolyFamily;

/// Which of the lower bounds on the parts hold at one (a, b, x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionFlags {
    /// L > −4ab·P_b(x).
    pub l_bound: bool,
    /// P_{a+b−k}(x) < P_{a−k}(x)·P_b(x) for 1 ≤ k ≤ k0−1.
    pub hypothesis: bool,
    /// R1 > b/(2a²)·P_{a−1}(x)·P_b(x).
    pub r1_bound: bool,
    pub r2_positive: bool,
    pub r33_positive: bool,
    /// Whether R32 = 0; only reported when A = 1.
    pub r32_zero: Option<bool>,
    /// Whether R31 = 0; only reported when B − b ≤ A.
    pub r31_zero: Option<bool>,
}

/// P_{a,b}(x) split as L + R1 + R2 + R31 + R32 + R33.
///
/// With f_k = σ₂(k)·(P_{a−k}P_b/a − P_{a+b−k}/(a+b)) and
/// L₀ = −Σ_{k=1..b} σ₂(k+a)/(a+b)·P_{b−k}, the recurrence gives
/// P_{a,b}(x) = x·(L₀ + Σ_{k=1..a} f_k). The stored parts carry the factor
/// x so they sum to P_{a,b}(x); the flags compare the parts without it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionBreakdown {
    pub a: usize,
    pub b: usize,
    pub big_a: usize,
    pub big_b: usize,
    pub x: BigRational,
    pub k0: usize,
    pub l: BigRational,
    pub r1: BigRational,
    pub r2: BigRational,
    pub r31: BigRational,
    pub r32: BigRational,
    pub r33: BigRational,
    pub flags: DecompositionFlags,
}

impl DecompositionBreakdown {
    pub fn total(&self) -> BigRational {
        &self.l + &self.r1 + &self.r2 + &self.r31 + &self.r32 + &self.r33
    }
}

pub fn decomposition_eval(
    family: &PolyFamily,
    a: usize,
    b: usize,
    big_a: usize,
    big_b: usize,
    x: &BigRational,
) -> Result<DecompositionBreakdown> {
    if !(1 <= big_a && big_a <= b && b <= a) {
        return invalid(format!("need 1 <= A <= b <= a, got A={big_a}, b={b}, a={a}"));
    }
    if big_b < 2 {
        return invalid(format!("need B >= 2, got {big_b}"));
    }
    let lower = big_b.saturating_sub(b).max(big_a);
    if lower + 1 > a {
        return invalid(format!("k0 = a - max(B-b, A) + 1 must be >= 2, got a={a}, max={lower}"));
    }
    if !x.is_positive() {
        return invalid(format!("x must be positive, got {x}"));
    }
    let k0 = a - lower + 1;
    let p = family_values(family, a + b, x)?;
    let sigma = Sigma2Table::new(a + b)?;
    let s = |k: usize| BigRational::from_integer(sigma.get(k).into());
    let an = BigRational::from_integer(a.into());
    let abn = BigRational::from_integer((a + b).into());

    let f = |k: usize| s(k) * (&p[a - k] * &p[b] / &an - &p[a + b - k] / &abn);
    let sum = |lo: usize, hi: usize| (lo..=hi).fold(BigRational::zero(), |acc, k| acc + f(k));

    let l0 = -(1..=b).fold(BigRational::zero(), |acc, k| acc + s(k + a) * &p[b - k]) / &abn;
    let r1 = f(1);
    let r2 = sum(2, k0 - 1);
    let r31 = sum(k0, a - big_a);
    let r32 = sum(a - big_a + 1, a - 1);
    let r33 = f(a);

    let four_ab = BigRational::from_integer((4 * a * b).into());
    let r1_floor = BigRational::new(b.into(), (2 * a * a).into()) * &p[a - 1] * &p[b];
    let flags = DecompositionFlags {
        l_bound: l0 > -(four_ab * &p[b]),
        hypothesis: (1..k0).all(|k| p[a + b - k] < &p[a - k] * &p[b]),
        r1_bound: r1 > r1_floor,
        r2_positive: r2.is_positive(),
        r33_positive: r33.is_positive(),
        r32_zero: (big_a == 1).then(|| r32.is_zero()),
        r31_zero: (big_b <= b + big_a).then(|| r31.is_zero()),
    };

    let out = DecompositionBreakdown {
        a,
        b,
        big_a,
        big_b,
        x: x.clone(),
        k0,
        l: l0 * x,
        r1: r1 * x,
        r2: r2 * x,
        r31: r31 * x,
        r32: r32 * x,
        r33: r33 * x,
        flags,
    };
    assert_eq!(out.total(), &p[a] * &p[b] - &p[a + b], "decomposition parts do not sum to P_a,b(x)");
    Ok(out)
}
