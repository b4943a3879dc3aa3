//! Aberth–Ehrlich simultaneous iteration for the complex roots of a
//! square-free integer polynomial: a double-precision warm-up followed by
//! iteration in arbitrary-precision complex arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::sturm::degree;
use crate::ball::Float;

const START_ANGLE: f64 = 0.4;
const WARM_PRECISION: u64 = 64;
const STALL_LIMIT: u32 = 3;

#[derive(Clone, Debug)]
pub(crate) struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    fn zero() -> Cx {
        Cx { re: Float::zero(), im: Float::zero() }
    }

    fn from_c64(z: Complex64) -> Cx {
        Cx { re: Float::from_f64(z.re), im: Float::from_f64(z.im) }
    }

    fn add(&self, o: &Cx, prec: u64) -> Cx {
        Cx { re: self.re.add_trunc(&o.re, prec), im: self.im.add_trunc(&o.im, prec) }
    }

    fn sub(&self, o: &Cx, prec: u64) -> Cx {
        Cx { re: self.re.add_trunc(&o.re.neg(), prec), im: self.im.add_trunc(&o.im.neg(), prec) }
    }

    fn mul(&self, o: &Cx, prec: u64) -> Cx {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im)).trunc(prec);
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re)).trunc(prec);
        Cx { re, im }
    }

    fn add_real(&self, c: &Float, prec: u64) -> Cx {
        Cx { re: self.re.add_trunc(c, prec), im: self.im.clone() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn div(&self, o: &Cx, prec: u64) -> Option<Cx> {
        if o.is_zero() {
            return None;
        }
        let norm = o.re.mul(&o.re).add(&o.im.mul(&o.im)).trunc(prec + 8);
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Cx { re: re.div_round(&norm, prec).0, im: im.div_round(&norm, prec).0 })
    }

    /// log2 of an upper bound on |z|.
    pub(crate) fn log2_abs(&self) -> f64 {
        let a = self.re.log2_approx();
        let b = self.im.log2_approx();
        a.max(b) + 0.5
    }

    #[cfg(test)]
    pub(crate) fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Nearest double-precision value; overflow saturates to ±f64::MAX.
    fn to_c64_scaled(&self) -> Complex64 {
        let clamp = |v: f64| v.clamp(-f64::MAX, f64::MAX);
        Complex64::new(clamp(self.re.to_f64()), clamp(self.im.to_f64()))
    }
}

fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(60);
    let top = (v.abs() >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// Radius of the starting circle, in log2: the Fujiwara bound
/// 2·max_k |a_{n−k}/a_n|^{1/k}, which tracks the largest root modulus to
/// within a factor 2n.
fn start_radius_log2(p: &[BigInt]) -> f64 {
    let n = p.len() - 1;
    let lead = log2_big(&p[n]);
    let max = (1..=n)
        .map(|k| (log2_big(&p[n - k]) - lead) / k as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    if max.is_finite() {
        max + 1.0
    } else {
        0.0
    }
}

fn start_points(n: usize, radius_log2: f64) -> Vec<(f64, f64)> {
    let r = radius_log2.exp2();
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + START_ANGLE;
            (r * t.cos(), r * t.sin())
        })
        .collect()
}

/// A complex number m·2^e with a separate exponent, so that evaluating
/// polynomials with huge coefficients cannot overflow double precision.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    m: Complex64,
    e: i64,
}

impl Scaled {
    const ZERO: Scaled = Scaled { m: Complex64::new(0.0, 0.0), e: i64::MIN / 4 };

    fn normalized(m: Complex64, e: i64) -> Scaled {
        let size = m.re.abs().max(m.im.abs());
        if size == 0.0 || !size.is_finite() {
            return Scaled { m: Complex64::zero(), e: i64::MIN / 4 };
        }
        if (1e-150..=1e150).contains(&size) {
            return Scaled { m, e };
        }
        let k = size.log2().floor() as i32;
        Scaled { m: m * 2f64.powi(-k), e: e + k as i64 }
    }

    fn from_bigint(v: &BigInt) -> Scaled {
        let shift = v.bits().saturating_sub(60);
        let top = (v >> shift).to_f64().unwrap_or(0.0);
        Scaled::normalized(Complex64::new(top, 0.0), shift as i64)
    }

    fn mul_c(self, z: Complex64) -> Scaled {
        Scaled::normalized(self.m * z, self.e)
    }

    fn add(self, o: Scaled) -> Scaled {
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let gap = lo.e - hi.e;
        if gap < -1100 {
            return hi;
        }
        Scaled::normalized(hi.m + lo.m * 2f64.powi(gap as i32), hi.e)
    }

    fn is_zero(self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    fn log2_abs(self) -> f64 {
        self.m.norm().log2() + self.e as f64
    }

    /// self / o as a plain complex number, or None if out of range.
    fn ratio(self, o: Scaled) -> Option<Complex64> {
        if o.is_zero() {
            return None;
        }
        let gap = self.e - o.e;
        if gap.abs() > 1000 {
            return None;
        }
        let q = self.m / o.m * 2f64.powi(gap as i32);
        q.is_finite().then_some(q)
    }
}

/// Double-precision warm-up with exponent-extended Horner evaluation;
/// returns the approximations and whether each one settled, either to
/// 1e−12 relative or to the rounding noise of evaluating p.
fn warm_up(p: &[BigInt], starts: &[(f64, f64)]) -> Option<(Vec<Complex64>, bool)> {
    let coeffs: Vec<Scaled> = p.iter().map(Scaled::from_bigint).collect();
    let mut z: Vec<Complex64> = starts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    if z.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let n = z.len();
    let noise = (64.0 * n as f64 * f64::EPSILON).log2();
    let abs_coeffs: Vec<Scaled> = coeffs.iter().map(|c| Scaled { m: Complex64::new(c.m.norm(), 0.0), e: c.e }).collect();
    let mut frozen = vec![false; n];
    for _ in 0..2000 {
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (mut v, mut d, mut bound) = (Scaled::ZERO, Scaled::ZERO, Scaled::ZERO);
            let zabs = Complex64::new(z[i].norm(), 0.0);
            for (c, ac) in coeffs.iter().zip(&abs_coeffs).rev() {
                d = d.mul_c(z[i]).add(v);
                v = v.mul_c(z[i]).add(*c);
                bound = bound.mul_c(zabs).add(*ac);
            }
            if v.is_zero() || v.log2_abs() <= bound.log2_abs() + noise {
                frozen[i] = true;
                continue;
            }
            let Some(ratio) = v.ratio(d) else { continue };
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                frozen[i] = w.norm() < 1e-12 * z[i].norm().max(1.0);
            }
        }
        if frozen.iter().all(|&f| f) {
            break;
        }
    }
    let settled = frozen.iter().all(|&f| f);
    z.iter().all(|v| v.is_finite()).then_some((z, settled))
}

pub(crate) struct AberthResult {
    pub roots: Vec<Cx>,
    /// Inclusion radius deg·|p(z)|/|p′(z)| for each root, as log2.
    pub radius_log2: Vec<f64>,
    pub converged: bool,
}

fn eval_with_derivative(coeffs: &[Float], z: &Cx, prec: u64) -> (Cx, Cx) {
    let mut v = Cx::zero();
    let mut d = Cx::zero();
    for c in coeffs.iter().rev() {
        d = d.mul(z, prec).add(&v, prec);
        v = v.mul(z, prec).add_real(c, prec);
    }
    (v, d)
}

/// Starting approximations for a square-free polynomial of degree ≥ 2,
/// with log2 of max Σ|aⱼ||z|^j / |p′(z)| over them, the factor by which
/// the rounding error of evaluating p moves a root.
pub(crate) fn initial(p: &[BigInt]) -> (Vec<Cx>, f64) {
    let n = degree(p);
    let starts = start_points(n, start_radius_log2(p));
    let (mut z, settled): (Vec<Cx>, bool) = match warm_up(p, &starts) {
        Some((w, settled)) => (w.into_iter().map(Cx::from_c64).collect(), settled),
        None => (starts.into_iter().map(|(re, im)| Cx::from_c64(Complex64::new(re, im))).collect(), false),
    };
    let coeffs: Vec<Float> = p.iter().map(|c| Float::from_bigint(c).round(WARM_PRECISION + 32).0).collect();
    if !settled {
        iterate(&coeffs, &mut z, WARM_PRECISION, 400 + 20 * n);
    }
    let coeff_logs: Vec<f64> = coeffs.iter().map(|c| c.log2_approx()).collect();
    let cond = z
        .iter()
        .map(|zi| {
            let (_, d) = eval_with_derivative(&coeffs, zi, WARM_PRECISION);
            abs_sum_log2(&coeff_logs, zi.log2_abs()) - d.re.log2_approx().max(d.im.log2_approx())
        })
        .fold(0.0, f64::max);
    (z, cond)
}

/// Iterates at `prec` bits on a square-free polynomial of degree ≥ 1,
/// from `start` when given and otherwise from `initial`.
pub(crate) fn aberth(p: &[BigInt], prec: u64, start: Option<&[Cx]>) -> AberthResult {
    let n = degree(p);
    assert!(n >= 1, "aberth needs degree >= 1");
    let coeffs: Vec<Float> = p.iter().map(|c| Float::from_bigint(c).round(prec + 32).0).collect();
    if n == 1 {
        let root = p[0].clone() * -1;
        let re = Float::from_bigint(&root).div_round(&Float::from_bigint(&p[1]), prec).0;
        let z = Cx { re, im: Float::zero() };
        return AberthResult { radius_log2: vec![residual_log2(&coeffs, &z, prec, 1)], roots: vec![z], converged: true };
    }
    let mut z: Vec<Cx> = match start {
        Some(s) if s.len() == n => s.to_vec(),
        _ => initial(p).0,
    };
    let converged = iterate(&coeffs, &mut z, prec, 60 + 8 * n);
    let radius_log2 = z.iter().map(|zi| residual_log2(&coeffs, zi, prec, n)).collect();
    AberthResult { roots: z, radius_log2, converged }
}

/// log2 of Σ|aᵢ|·|z|^i, the scale of the rounding error in evaluating p(z).
fn abs_sum_log2(coeff_logs: &[f64], z_log2: f64) -> f64 {
    let terms: Vec<f64> = coeff_logs
        .iter()
        .enumerate()
        .map(|(i, l)| if i == 0 { *l } else { l + i as f64 * z_log2 })
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// Σ_{j≠i} 1/(z_i − z_j) in double precision. The sum enters the
/// correction only at second order, so differences too small for doubles
/// are the only ones taken from the full-precision values.
fn aberth_sum(z: &[Cx], approx: &[Complex64], i: usize, prec: u64) -> Complex64 {
    let mut s = Complex64::zero();
    for j in 0..z.len() {
        if j == i {
            continue;
        }
        let mut diff = approx[i] - approx[j];
        if diff.norm() <= 1e-10 * approx[i].norm().max(approx[j].norm()) {
            diff = z[i].sub(&z[j], prec).to_c64_scaled();
        }
        let inv = diff.inv();
        if inv.is_finite() {
            s += inv;
        }
    }
    s
}

/// Gauss–Seidel Aberth sweeps at `prec` bits. A root is frozen once its
/// correction is below 2^(8−prec) relative to max(|z|, 1), once |p(z)| is
/// within the rounding noise of its evaluation, or once small corrections
/// stop shrinking; returns whether every root froze.
fn iterate(coeffs: &[Float], z: &mut [Cx], prec: u64, max_iter: usize) -> bool {
    let n = z.len();
    let target = -(prec as f64) + 8.0;
    let noise_slack = -(prec as f64) + (4.0 * n as f64).log2();
    let coeff_logs: Vec<f64> = coeffs.iter().map(|c| c.log2_approx()).collect();
    let one = Cx { re: Float::one(), im: Float::zero() };
    let mut approx: Vec<Complex64> = z.iter().map(Cx::to_c64_scaled).collect();
    let mut frozen = vec![false; n];
    let mut last_step = vec![f64::INFINITY; n];
    let mut stalls = vec![0u32; n];
    for _ in 0..max_iter {
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (v, d) = eval_with_derivative(coeffs, &z[i], prec);
            if v.is_zero() {
                frozen[i] = true;
                continue;
            }
            let at_noise = v.log2_abs() <= abs_sum_log2(&coeff_logs, z[i].log2_abs()) + noise_slack;
            let Some(ratio) = v.div(&d, prec) else { continue };
            let s = Cx::from_c64(aberth_sum(z, &approx, i, prec));
            let denom = one.sub(&ratio.mul(&s, prec), prec);
            let Some(w) = ratio.div(&denom, prec) else { continue };
            let scale = z[i].log2_abs().max(0.0);
            let step = w.log2_abs() - scale;
            stalls[i] = if step > last_step[i] - 1.0 { stalls[i] + 1 } else { 0 };
            last_step[i] = step;
            frozen[i] = at_noise || step < target || (step < -30.0 && stalls[i] >= STALL_LIMIT);
            z[i] = z[i].sub(&w, prec);
            approx[i] = z[i].to_c64_scaled();
        }
        if frozen.iter().all(|&f| f) {
            return true;
        }
    }
    false
}

/// log2 of n·(|p(z)| + e)/|p′(z)|, with e bounding the error of the
/// rounded coefficients and of the evaluation at prec+32 bits.
fn residual_log2(coeffs: &[Float], z: &Cx, prec: u64, n: usize) -> f64 {
    let work = prec + 32;
    let (v, d) = eval_with_derivative(coeffs, z, work);
    let coeff_logs: Vec<f64> = coeffs.iter().map(|c| c.log2_approx()).collect();
    let noise = abs_sum_log2(&coeff_logs, z.log2_abs()) + (2.0 * n as f64 + 2.0).log2() - work as f64;
    let value = if v.is_zero() { noise } else { log2_add(v.log2_abs(), noise) };
    let d_low = d.re.log2_approx().max(d.im.log2_approx());
    value + 0.5 - d_low + (n as f64).log2()
}

fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Pairwise-disjoint inclusion discs each hold exactly one root. Returns
/// Some(real) per root when every disc is disjoint from the others and is
/// either disjoint from the real axis or from the mirror images of the
/// other discs.
pub(crate) fn certify_real(roots: &[Cx], radius_log2: &[f64], prec: u64) -> Option<Vec<bool>> {
    let n = roots.len();
    let far = |a: &Cx, b: &Cx, r: f64| {
        let d = a.sub(b, prec + 32);
        d.re.log2_approx().max(d.im.log2_approx()) > r + 1.0
    };
    let conj = |z: &Cx| Cx { re: z.re.clone(), im: z.im.neg() };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut mirror_clear = true;
        for j in 0..n {
            if j == i {
                continue;
            }
            let r = radius_log2[i].max(radius_log2[j]);
            if !far(&roots[i], &roots[j], r) {
                return None;
            }
            mirror_clear &= far(&conj(&roots[i]), &roots[j], r);
        }
        if mirror_clear {
            out.push(true);
        } else if roots[i].im.log2_approx() > radius_log2[i] + 0.5 {
            out.push(false);
        } else {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aberth_cold(p: &[BigInt], prec: u64) -> AberthResult {
        aberth(p, prec, None)
    }

    #[test]
    fn certifies_real_and_complex_roots() {
        // (x² + 1)(x − 2)
        let r = aberth_cold(&ip(&[-2, 1, -2, 1]), 128);
        let real = certify_real(&r.roots, &r.radius_log2, 128).unwrap();
        for (z, is_real) in r.roots.iter().zip(real) {
            assert_eq!(is_real, (z.to_c64().re - 2.0).abs() < 1e-12);
        }
        let warm = aberth(&ip(&[-2, 1, -2, 1]), 256, Some(&r.roots));
        assert!(warm.converged && warm.radius_log2.iter().all(|&l| l < -200.0));
    }

    fn ip(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn unit_imaginary_pair() {
        let r = aberth_cold(&ip(&[1, 0, 1]), 128);
        assert!(r.converged);
        let mut ims: Vec<f64> = r.roots.iter().map(|z| z.to_c64().im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-15 && (ims[1] - 1.0).abs() < 1e-15);
        assert!(r.roots.iter().all(|z| z.re.log2_approx() < -100.0));
    }

    #[test]
    fn cubic_with_irrational_roots() {
        // x³ − 10x
        let r = aberth_cold(&ip(&[0, -10, 0, 1]), 256);
        assert!(r.converged);
        let mut res: Vec<f64> = r.roots.iter().map(|z| z.to_c64().re).collect();
        res.sort_by(f64::total_cmp);
        let s = 10f64.sqrt();
        assert!((res[0] + s).abs() < 1e-14 && res[1].abs() < 1e-14 && (res[2] - s).abs() < 1e-14);
        assert!(r.radius_log2.iter().all(|&l| l < -200.0));
    }

    #[test]
    fn linear_is_exact() {
        let r = aberth_cold(&ip(&[-3, 2]), 128);
        assert_eq!(r.roots[0].re.to_f64(), 1.5);
    }

    #[test]
    fn widely_spread_roots() {
        // (x − 10^80)(x − 1)
        let big = BigInt::from(10).pow(80u32);
        let p = vec![big.clone(), -(&big + BigInt::from(1)), BigInt::from(1)];
        let r = aberth_cold(&p, 512);
        assert!(r.converged);
        let mut logs: Vec<f64> = r.roots.iter().map(|z| z.re.log2_approx()).collect();
        logs.sort_by(f64::total_cmp);
        assert!(logs[0].abs() < 1e-9);
        assert!((logs[1] - 80.0 * 10f64.log2()).abs() < 1e-9);
    }
}
