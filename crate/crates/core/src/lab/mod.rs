//! The inequality polynomials P_{a,b}, Δ_{a,b} and the Turán defect, and
//! the sweeps that test them.

mod decomposition;
mod final_step;
mod sums;
mod verify;
mod zeros;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use decomposition::{decomposition_eval, DecompositionBreakdown, DecompositionFlags};
pub use final_step::{final_step_poly, final_step_threshold, FinalStepKind, FinalStepResult};
pub use sums::{minimal_sums_table, pp_sums_table, pp_sums_table_plain};
pub use verify::{
    even_a_coefficient_scan, turan_x2_coefficient, verify_bo_poly, verify_bo_pp, verify_logconcave_pp, BoPpSweep,
    PairRegion, PpValues,
};
pub use zeros::{bo_zero_grid, cft_zero_grid, complex_zero_rows, ComplexZeroRow, ZeroEntry, ZeroFamily};

use crate::error::{invalid, Error, Result};
use crate::family::PolyFamily;
use crate::poly::ExactPoly;

/// P_{a,b}(x) = P_a(x)·P_b(x) − P_{a+b}(x).
pub fn bo_poly(family: &PolyFamily, a: usize, b: usize) -> Result<ExactPoly> {
    if a == 0 || b == 0 {
        return invalid("bo_poly needs a, b >= 1");
    }
    family.check(a + b)?;
    Ok(family.get(a).mul(family.get(b)).sub(family.get(a + b)))
}

/// Δ_{a,b}(x) = P_{a−1}(x)·P_{b+1}(x) − P_a(x)·P_b(x).
pub fn cft_poly(family: &PolyFamily, a: usize, b: usize) -> Result<ExactPoly> {
    if a == 0 {
        return invalid("cft_poly needs a >= 1");
    }
    family.check(a.max(b + 1))?;
    Ok(family.get(a - 1).mul(family.get(b + 1)).sub(&family.get(a).mul(family.get(b))))
}

/// P_a(x)² − P_{a−1}(x)·P_{a+1}(x), which equals Δ_{a+1,a−1}(x).
pub fn turan_poly(family: &PolyFamily, a: usize) -> Result<ExactPoly> {
    if a == 0 {
        return invalid("turan_poly needs a >= 1");
    }
    family.check(a + 1)?;
    let pa = family.get(a);
    Ok(pa.mul(pa).sub(&family.get(a - 1).mul(family.get(a + 1))))
}

/// J^{d,n}(X) = Σ_{k=0..d} C(d,k)·α(n+k)·X^k.
pub fn jensen_poly(alpha: &[BigInt], d: usize, n: usize) -> Result<ExactPoly> {
    if d == 0 {
        return invalid("Jensen polynomial needs d >= 1");
    }
    if alpha.len() < n + d + 1 {
        return Err(Error::InsufficientSequence { need: n + d + 1, have: alpha.len() });
    }
    let mut binom = BigInt::from(1);
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        coeffs.push(&binom * &alpha[n + k]);
        binom = binom * (d - k) / (k + 1);
    }
    Ok(ExactPoly::from_integers(coeffs))
}

/// Exact values P_0(x), …, P_N(x).
pub(crate) fn family_values(family: &PolyFamily, n_max: usize, x: &BigRational) -> Result<Vec<BigRational>> {
    family.check(n_max)?;
    Ok((0..=n_max).map(|n| family.eval(n, x)).collect())
}
