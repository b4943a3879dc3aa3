use rayon::prelude::*;

use super::{bo_poly, cft_poly, turan_poly};
use crate::error::{invalid, Result};
use crate::family::PolyFamily;
use crate::poly::ExactPoly;
use crate::roots::{largest_positive_root, largest_real_root, positive_real_part_roots, complex_roots, RealEnclosure};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// One cell of a largest-zero grid; `value` is None when there is no zero
/// in the searched range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroEntry {
    pub a: usize,
    pub b: usize,
    pub value: Option<String>,
    pub enclosure: Option<RealEnclosure>,
}

fn tolerance(decimals: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(decimals as u32 + 3))
}

fn entry(a: usize, b: usize, enc: Option<RealEnclosure>, decimals: usize) -> ZeroEntry {
    let value = enc.as_ref().map(|e| {
        e.rounded(decimals).unwrap_or_else(|| crate::roots::round_half_up(&e.midpoint(), decimals))
    });
    ZeroEntry { a, b, value, enclosure: enc }
}

fn refine_to_digits(p: &ExactPoly, positive_only: bool, decimals: usize) -> Result<Option<RealEnclosure>> {
    let mut tol = tolerance(decimals);
    let floor = BigRational::new(BigInt::one(), BigInt::from(10).pow(decimals as u32 + 40));
    loop {
        let enc = if positive_only { largest_positive_root(p, &tol)? } else { largest_real_root(p, &tol)? };
        match &enc {
            Some(e) if e.rounded(decimals).is_none() && tol > floor => tol /= BigRational::from_integer(1024.into()),
            _ => return Ok(enc),
        }
    }
}

/// Largest real zeros of P_{a,b} for 1 ≤ a ≤ a_max, 1 ≤ b ≤ b_max, row-major.
pub fn bo_zero_grid(family: &PolyFamily, a_max: usize, b_max: usize, decimals: usize) -> Result<Vec<ZeroEntry>> {
    if a_max == 0 || b_max == 0 {
        return invalid("zero grid needs a_max, b_max >= 1");
    }
    family.check(a_max + b_max)?;
    let cells: Vec<(usize, usize)> = (1..=a_max).flat_map(|a| (1..=b_max).map(move |b| (a, b))).collect();
    cells
        .par_iter()
        .map(|&(a, b)| {
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            let p = bo_poly(family, hi, lo)?;
            Ok(entry(a, b, refine_to_digits(&p, false, decimals)?, decimals))
        })
        .collect()
}

/// Largest positive real zeros of Δ_{a,b} for 2 ≤ a ≤ a_max, 0 ≤ b ≤ a−2.
pub fn cft_zero_grid(family: &PolyFamily, a_max: usize, decimals: usize) -> Result<Vec<ZeroEntry>> {
    if a_max < 2 {
        return invalid("cft zero grid needs a_max >= 2");
    }
    family.check(a_max)?;
    let cells: Vec<(usize, usize)> = (2..=a_max).flat_map(|a| (0..=a - 2).map(move |b| (a, b))).collect();
    cells
        .par_iter()
        .map(|&(a, b)| {
            let p = cft_poly(family, a, b)?;
            Ok(entry(a, b, refine_to_digits(&p, true, decimals)?, decimals))
        })
        .collect()
}

/// Which complex zeros to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFamily {
    /// Zeros of Δ_{a+1,a−1} with positive real part, for a in the range.
    Turan,
    /// Zeros of largest real part of Δ_{a,b} for b in 2..=4 and b+2 ≤ a.
    CftLargest,
}

/// One exported zero: `a`, `b` index the polynomial Δ_{a,b}.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexZeroRow {
    pub a: usize,
    pub b: usize,
    pub re: f64,
    pub im: f64,
    pub is_real: bool,
}

/// Complex zero data for `a` in `a_min..=a_max`. The flag is set when any
/// root computation stayed uncertain at the precision cap.
pub fn complex_zero_rows(
    family: &PolyFamily,
    which: ZeroFamily,
    a_min: usize,
    a_max: usize,
    precision_bits: u64,
) -> Result<(Vec<ComplexZeroRow>, bool)> {
    if a_min == 0 || a_min > a_max {
        return invalid(format!("empty or invalid range {a_min}..={a_max}"));
    }
    let jobs: Vec<(usize, usize)> = match which {
        ZeroFamily::Turan => {
            family.check(a_max + 1)?;
            (a_min..=a_max).map(|a| (a + 1, a - 1)).collect()
        }
        ZeroFamily::CftLargest => {
            family.check(a_max)?;
            (a_min..=a_max).flat_map(|a| (2..=4).filter(move |b| b + 2 <= a).map(move |b| (a, b))).collect()
        }
    };
    let per_job: Vec<(Vec<ComplexZeroRow>, bool)> = jobs
        .par_iter()
        .map(|&(a, b)| {
            let p = match which {
                ZeroFamily::Turan => turan_poly(family, b + 1)?,
                ZeroFamily::CftLargest => cft_poly(family, a, b)?,
            };
            let summary = match which {
                ZeroFamily::Turan => positive_real_part_roots(&p, precision_bits)?,
                ZeroFamily::CftLargest => complex_roots(&p, precision_bits)?,
            };
            let mut roots = summary.complex_roots;
            if which == ZeroFamily::CftLargest {
                if let Some(top) = roots.iter().map(|r| r.re.clone()).max() {
                    roots.retain(|r| r.re == top);
                }
            }
            roots.dedup_by(|x, y| x.re == y.re && x.im == y.im);
            let rows = roots
                .iter()
                .map(|r| {
                    let (re, im) = (r.re_f64(), r.im_f64());
                    let re = if re.abs() < 1e-40 * im.abs() { 0.0 } else { re };
                    ComplexZeroRow { a, b, re, im, is_real: r.is_real }
                })
                .collect();
            Ok((rows, summary.uncertain))
        })
        .collect::<Result<_>>()?;
    let uncertain = per_job.iter().any(|(_, u)| *u);
    Ok((per_job.into_iter().flat_map(|(r, _)| r).collect(), uncertain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::generate_family;

    fn cell(grid: &[ZeroEntry], a: usize, b: usize) -> Option<String> {
        grid.iter().find(|e| e.a == a && e.b == b).unwrap().value.clone()
    }

    #[test]
    fn bo_grid_cells() {
        let f = generate_family(24).unwrap();
        let g = bo_zero_grid(&f, 12, 12, 1).unwrap();
        assert_eq!(g.len(), 144);
        assert_eq!(cell(&g, 1, 1).as_deref(), Some("5.0"));
        assert_eq!(cell(&g, 2, 2).as_deref(), Some("1.9"));
        assert_eq!(cell(&g, 12, 1).as_deref(), Some("1.9"));
        assert_eq!(cell(&g, 12, 12).as_deref(), Some("0.3"));
        assert_eq!(cell(&g, 3, 7), cell(&g, 7, 3));
    }

    #[test]
    fn cft_grid_cells() {
        let f = generate_family(20).unwrap();
        let g = cft_zero_grid(&f, 20, 2).unwrap();
        assert_eq!(g.len(), (2..=20).map(|a| a - 1).sum::<usize>());
        assert_eq!(cell(&g, 3, 1), None);
        assert_eq!(cell(&g, 20, 0).as_deref(), Some("1.76"));
        assert_eq!(cell(&g, 18, 2).as_deref(), Some("0.03"));
        assert_eq!(cell(&g, 19, 1), None);
        assert_eq!(cell(&g, 20, 18).as_deref(), Some("0.61"));
    }

    #[test]
    fn aberth_real_count_matches_sturm() {
        let f = generate_family(24).unwrap();
        for a in 1..=12 {
            for b in 1..=a {
                let p = bo_poly(&f, a, b).unwrap();
                let sturm = crate::roots::sturm_real_roots(&p, None).unwrap();
                let distinct_real = sturm.real_roots.len();
                let found = complex_roots(&p, 128).unwrap();
                assert!(!found.uncertain, "({a},{b})");
                let mut real: Vec<_> = found.complex_roots.iter().filter(|r| r.is_real).map(|r| r.re.clone()).collect();
                real.dedup();
                assert_eq!(real.len(), distinct_real, "({a},{b})");
            }
        }
    }

    #[test]
    fn turan_complex_rows() {
        let f = generate_family(12).unwrap();
        let (rows, uncertain) = complex_zero_rows(&f, ZeroFamily::Turan, 2, 11, 128).unwrap();
        assert!(!uncertain);
        let a3: Vec<_> = rows.iter().filter(|r| r.b == 2).collect();
        assert_eq!(a3.len(), 1);
        assert!(a3[0].is_real && a3[0].re > 0.0);
        assert!(rows.iter().filter(|r| (r.b + 1) % 2 == 0).all(|r| !r.is_real));
    }

    #[test]
    fn cft_largest_rows() {
        let f = generate_family(14).unwrap();
        let (rows, uncertain) = complex_zero_rows(&f, ZeroFamily::CftLargest, 4, 14, 128).unwrap();
        assert!(!uncertain);
        for a in 4..=14 {
            for b in (2..=4).filter(|b| b + 2 <= a) {
                let here: Vec<_> = rows.iter().filter(|r| r.a == a && r.b == b).collect();
                assert!(!here.is_empty() && here.len() <= 2, "({a},{b})");
            }
        }
    }
}
