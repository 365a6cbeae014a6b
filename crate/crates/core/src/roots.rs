//! Validated isolation of all complex roots of a squarefree integer
//! polynomial, and the logarithmic Mahler measure built on it.
//!
//! Approximations come from Aberth iterations (first in `f64`, then in
//! fixed-point big-integer arithmetic). They are validated exactly: with
//! `W_i = p(z_i) / (a_n Π_{j≠i} (z_i − z_j))`, the disks `D(z_i, n|W_i|)`
//! cover the roots and every connected component holds as many roots as
//! disks, so pairwise disjoint disks isolate one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::IntPolynomial;
use crate::resultant::has_repeated_root;

const MAX_BITS: u32 = 1 << 15;

/// Fixed-point complex number `(re + i·im) · 2^-wp`.
#[derive(Clone, Debug, PartialEq)]
struct CFix {
    re: BigInt,
    im: BigInt,
}

impl CFix {
    fn zero() -> Self {
        CFix { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn add(&self, o: &Self) -> Self {
        CFix { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        CFix { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self, wp: u32) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        CFix { re: re >> wp as usize, im: im >> wp as usize }
    }

    fn norm2(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Self, wp: u32) -> Option<Self> {
        let den = o.norm2();
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << wp as usize;
        let im = (&self.im * &o.re - &self.re * &o.im) << wp as usize;
        Some(CFix { re: re.div_floor(&den), im: im.div_floor(&den) })
    }

    fn one(wp: u32) -> Self {
        CFix { re: BigInt::one() << wp as usize, im: BigInt::zero() }
    }

    fn rescale(&self, from: u32, to: u32) -> Self {
        if to >= from {
            let s = (to - from) as usize;
            CFix { re: &self.re << s, im: &self.im << s }
        } else {
            let s = (from - to) as usize;
            CFix { re: &self.re >> s, im: &self.im >> s }
        }
    }

    fn from_c64(z: Complex64, wp: u32) -> Self {
        let conv = |x: f64| {
            let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
            (q.numer() << wp as usize).div_floor(q.denom())
        };
        CFix { re: conv(z.re), im: conv(z.im) }
    }
}

/// Disk `|z − center| ≤ radius` known to contain exactly one root.
#[derive(Clone, Debug)]
pub struct RootDisk {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
}

impl RootDisk {
    /// Interval enclosing the modulus of the isolated root.
    pub fn modulus(&self, prec: u32) -> Interval {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let m = Interval::from_rational(&n2, prec).sqrt();
        let r = Interval::from_rational(&self.radius, prec);
        let lo = &m - &r;
        let hi = &m + &r;
        lo.hull(&hi)
    }

    /// Interval enclosing log⁺ of the root's modulus.
    pub fn log_plus(&self, prec: u32) -> Interval {
        let m = self.modulus(prec);
        let one = BigRational::one();
        if m.hi_rational() <= one {
            return Interval::from_int(0, prec);
        }
        if m.lo_rational() > one {
            return m.ln();
        }
        let top = Interval::from_rational(&m.hi_rational(), prec).ln();
        Interval::from_int(0, prec).hull(&top)
    }

    /// Whether the disk lies entirely in the upper or lower half plane.
    pub fn is_nonreal(&self) -> bool {
        self.im.abs() > self.radius
    }
}

fn eval_f64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn initial_guesses(f: &IntPolynomial) -> Vec<Complex64> {
    let n = f.deg();
    let lead_bits = f.lead().bits() as f64;
    // Fujiwara-style radius from coefficient bit lengths.
    let mut r: f64 = 1.0;
    for (i, a) in f.coeffs().iter().enumerate().take(n) {
        if a.is_zero() {
            continue;
        }
        let ratio_log2 = a.bits() as f64 - lead_bits + 1.0;
        r = r.max(2.0 * (ratio_log2 / (n - i) as f64).exp2());
    }
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r * 0.5, t)
        })
        .collect()
}

fn aberth_f64(f: &IntPolynomial) -> Vec<Complex64> {
    let c: Vec<f64> = f.coeffs().iter().map(|a| a.to_f64().unwrap_or(f64::INFINITY)).collect();
    let mut z = initial_guesses(f);
    if c.iter().any(|x| !x.is_finite()) {
        return z;
    }
    let n = z.len();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_f64(&c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let corr = w / (1.0 - w * s);
            if corr.is_finite() {
                z[i] -= corr;
                moved = moved.max(corr.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn eval_fix(coeffs: &[BigInt], z: &CFix, wp: u32) -> (CFix, CFix) {
    let mut p = CFix::zero();
    let mut dp = CFix::zero();
    for a in coeffs.iter().rev() {
        dp = dp.mul(z, wp).add(&p);
        p = p.mul(z, wp);
        p.re += a << wp as usize;
    }
    (p, dp)
}

fn aberth_fix(f: &IntPolynomial, z: &mut [CFix], wp: u32, iters: usize) {
    let n = z.len();
    let coeffs = f.coeffs();
    let tol = BigInt::one() << 8usize;
    for _ in 0..iters {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = eval_fix(coeffs, &z[i], wp);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let Some(w) = p.div(&dp, wp) else { continue };
            let mut s = CFix::zero();
            for j in 0..n {
                if j != i {
                    if let Some(inv) = CFix::one(wp).div(&z[i].sub(&z[j]), wp) {
                        s = s.add(&inv);
                    }
                }
            }
            let denom = CFix::one(wp).sub(&w.mul(&s, wp));
            let Some(corr) = w.div(&denom, wp) else { continue };
            if corr.re.abs() > tol || corr.im.abs() > tol {
                converged = false;
            }
            z[i] = z[i].sub(&corr);
        }
        if converged {
            break;
        }
    }
}

/// Exact validation of approximations `z_i · 2^-wp`. Returns the radii in
/// units of `2^-wp` when the disks are pairwise disjoint and small enough.
fn validate_exact(f: &IntPolynomial, z: &[CFix], wp: u32, min_bits: u32) -> Option<Vec<BigInt>> {
    let n = z.len();
    let lead = f.lead();
    let coeffs = f.coeffs();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (zr, zi) = (&z[i].re, &z[i].im);
        // Homogeneous Horner: after processing a_n..a_k the accumulator is
        // Σ a_j Z^{j-k} 2^{wp(n-j)}, so each step multiplies by Z and adds
        // a_k 2^{wp(n-k)}.
        let (mut pr, mut pi) = (BigInt::zero(), BigInt::zero());
        for (k, a) in coeffs.iter().enumerate().rev() {
            let nr = &pr * zr - &pi * zi;
            let ni = &pr * zi + &pi * zr;
            pr = nr + (a << (wp as usize * (n - k)));
            pi = ni;
        }
        let (mut dr, mut di) = (BigInt::one(), BigInt::zero());
        for j in 0..n {
            if j == i {
                continue;
            }
            let er = zr - &z[j].re;
            let ei = zi - &z[j].im;
            if er.is_zero() && ei.is_zero() {
                return None;
            }
            let nr = &dr * &er - &di * &ei;
            let ni = &dr * &ei + &di * &er;
            dr = nr;
            di = ni;
        }
        // R_i^2 · 4^wp = n^2 |P_i|^2 / (a_n^2 |D_i|^2)
        let num = BigInt::from(n * n) * (&pr * &pr + &pi * &pi);
        let den = &lead * &lead * (&dr * &dr + &di * &di);
        let r2 = num.div_ceil(&den);
        let mut r = r2.sqrt();
        if &r * &r < r2 {
            r += 1;
        }
        if r.bits() as i64 > wp as i64 - min_bits as i64 {
            return None;
        }
        radii.push(r);
    }
    for i in 0..n {
        for j in i + 1..n {
            let dx = &z[i].re - &z[j].re;
            let dy = &z[i].im - &z[j].im;
            let s = &radii[i] + &radii[j];
            if &dx * &dx + &dy * &dy <= &s * &s {
                return None;
            }
        }
    }
    Some(radii)
}

/// Isolates every complex root of a squarefree integer polynomial in a disk
/// of radius below `2^-min_bits`.
pub fn isolate_roots(f: &IntPolynomial, min_bits: u32) -> Result<Vec<RootDisk>> {
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    if has_repeated_root(f) {
        return Err(Error::domain("numberfield", "root isolation needs a squarefree polynomial"));
    }
    let n = f.deg();
    let seeds = aberth_f64(f);
    let mut wp = (min_bits + 64).max(96);
    let mut z: Vec<CFix> = seeds.iter().map(|&s| CFix::from_c64(s, wp)).collect();
    let mut iters = 60;
    loop {
        aberth_fix(f, &mut z, wp, iters);
        if let Some(radii) = validate_exact(f, &z, wp, min_bits) {
            let scale = BigInt::one() << wp as usize;
            let mut disks: Vec<RootDisk> = z
                .iter()
                .zip(radii)
                .map(|(c, r)| RootDisk {
                    re: BigRational::new(c.re.clone(), scale.clone()),
                    im: BigRational::new(c.im.clone(), scale.clone()),
                    radius: BigRational::new(r, scale.clone()),
                })
                .collect();
            disks.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
            debug_assert_eq!(disks.len(), n);
            return Ok(disks);
        }
        if wp >= MAX_BITS {
            return Err(Error::PrecisionExhausted {
                module: "numberfield",
                message: format!("could not isolate the roots of {f} with {wp} bits"),
            });
        }
        let next = wp * 2;
        z = z.iter().map(|c| c.rescale(wp, next)).collect();
        // Restart from spread seeds if the approximations collapsed.
        if z.iter().enumerate().any(|(i, a)| z[i + 1..].iter().any(|b| a == b)) {
            z = initial_guesses(f).into_iter().map(|s| CFix::from_c64(s, next)).collect();
        }
        wp = next;
        iters = iters * 2;
    }
}

/// Enclosure of `log M(f) = log|a_n| + Σ log⁺|r_i|` with radius below
/// `2^-min_bits` (up to the final rounding).
pub fn log_mahler_measure(f: &IntPolynomial, min_bits: u32) -> Result<Interval> {
    let prec = min_bits + 32;
    let n = f.deg().max(1) as u32;
    let mut bits = min_bits + 8 + 32 - n.leading_zeros();
    loop {
        let disks = isolate_roots(f, bits)?;
        let mut acc = Interval::from_int(f.lead().abs(), prec).ln();
        for d in &disks {
            acc = &acc + &d.log_plus(prec);
        }
        if acc.radius_f64() < (-(min_bits as f64)).exp2() || bits >= MAX_BITS {
            return Ok(acc);
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn isolates_simple_roots() {
        let disks = isolate_roots(&p(&[-2, 0, 1]), 60).unwrap();
        assert_eq!(disks.len(), 2);
        let r: Vec<f64> = disks.iter().map(|d| d.re.to_f64().unwrap()).collect();
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-15 && (r[1] - 2f64.sqrt()).abs() < 1e-15);
        let i = isolate_roots(&p(&[1, 0, 1]), 60).unwrap();
        assert!(i.iter().all(|d| d.is_nonreal()));
    }

    #[test]
    fn golden_ratio_measure() {
        let m = log_mahler_measure(&p(&[-1, -1, 1]), 100).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((m.mid_f64() - golden.ln()).abs() < 1e-15);
        assert!(m.radius_f64() < 1e-29);
    }

    #[test]
    fn lehmer_polynomial_measure() {
        // Lehmer's degree-10 polynomial, M ≈ 1.17628081826.
        let f = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let m = log_mahler_measure(&f, 80).unwrap();
        assert!((m.mid_f64().exp() - 1.176_280_818_259_917).abs() < 1e-12);
    }

    #[test]
    fn cyclotomic_measure_is_zero_to_precision() {
        let f = p(&[1, 1, 1, 1, 1]);
        let m = log_mahler_measure(&f, 60).unwrap();
        assert!(m.mid_f64().abs() < 1e-15);
    }

    #[test]
    fn trinomial_roots() {
        let f = IntPolynomial::parse("x^12+x+1").unwrap();
        let disks = isolate_roots(&f, 80).unwrap();
        assert_eq!(disks.len(), 12);
        assert!(disks.iter().all(|d| d.is_nonreal()));
    }

    #[test]
    fn repeated_roots_are_rejected() {
        assert!(isolate_roots(&p(&[1, -2, 1]), 40).is_err());
    }
}
