//! Validated real intervals over fixed-point dyadic endpoints.
//!
//! An `Interval` is `[lo, hi] · 2^-prec` with integer `lo ≤ hi`. Every
//! operation rounds outward, so the true result of the corresponding real
//! operation on any points of the inputs lies inside the output.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(n: u64) -> BigInt {
    BigInt::one() << n
}

fn shr_floor(a: &BigInt, n: u64) -> BigInt {
    a.div_floor(&pow2(n))
}

fn shr_ceil(a: &BigInt, n: u64) -> BigInt {
    a.div_ceil(&pow2(n))
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r < *n {
        r + 1
    } else {
        r
    }
}

/// Bounds on atanh(t) for t = num/den in [0, 1/3], in units of 2^-g.
fn atanh_bounds(num: &BigInt, den: &BigInt, g: u64) -> (BigInt, BigInt) {
    let scale = pow2(g);
    let t_lo = (num * &scale).div_floor(den);
    let t_hi = (num * &scale).div_ceil(den);
    let t2_lo = shr_floor(&(&t_lo * &t_lo), g);
    let t2_hi = shr_ceil(&(&t_hi * &t_hi), g);
    let (mut pw_lo, mut pw_hi) = (t_lo, t_hi);
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    let four = BigInt::from(4);
    loop {
        let k = BigInt::from(2 * j + 1);
        s_lo += pw_lo.div_floor(&k);
        s_hi += pw_hi.div_ceil(&k);
        pw_lo = shr_floor(&(&pw_lo * &t2_lo), g);
        pw_hi = shr_ceil(&(&pw_hi * &t2_hi), g);
        j += 1;
        if pw_hi < four {
            break;
        }
    }
    // Remaining terms are bounded by a geometric series with ratio t^2 <= 1/9.
    s_hi += Integer::div_ceil(&(&pw_hi * BigInt::from(9)), &BigInt::from(8)) + 1;
    (s_lo, s_hi)
}

/// Bounds on ln(m · 2^-p) for m > 0, in units of 2^-wp.
fn ln_bounds(m: &BigInt, p: u32, wp: u64) -> (BigInt, BigInt) {
    debug_assert!(m.is_positive());
    let g = wp + 24;
    let k = m.bits() as i64 - 1;
    let base = pow2(k as u64);
    let (y_lo, y_hi) = atanh_bounds(&(m - &base), &(m + &base), g);
    let (l2_lo, l2_hi) = atanh_bounds(&BigInt::one(), &BigInt::from(3), g);
    let e = BigInt::from(k - p as i64);
    let (e_lo, e_hi) = if e.is_negative() {
        (&e * &l2_hi * 2, &e * &l2_lo * 2)
    } else {
        (&e * &l2_lo * 2, &e * &l2_hi * 2)
    };
    let lo = y_lo * 2 + e_lo;
    let hi = y_hi * 2 + e_hi;
    (shr_floor(&lo, g - wp), shr_ceil(&hi, g - wp))
}

/// Bounds on exp(m · 2^-p), in units of 2^-wp.
fn exp_bounds(m: &BigInt, p: u32, wp: u64) -> (BigInt, BigInt) {
    if m.is_negative() {
        let (l, u) = exp_bounds(&-m, p, wp);
        let num = pow2(2 * wp);
        return (num.div_floor(&u), num.div_ceil(&l));
    }
    let int_bits = (m.bits() as i64 - p as i64).max(0) as u64;
    assert!(int_bits < 40, "exponential argument out of range");
    let s = int_bits + 8;
    // exp(a) < 2^(2a), and a < 2^int_bits.
    let magnitude = if int_bits >= 1 { 2u64 << int_bits } else { 2 };
    let g = wp + 2 * s + 48 + magnitude;
    let shift = g as i64 - p as i64 - s as i64;
    let (r_lo, r_hi) = if shift >= 0 {
        let r = m << shift as u64;
        (r.clone(), r)
    } else {
        (shr_floor(m, (-shift) as u64), shr_ceil(m, (-shift) as u64))
    };
    let one = pow2(g);
    let (mut s_lo, mut s_hi) = (one.clone(), one.clone());
    let (mut t_lo, mut t_hi) = (one.clone(), one);
    let mut k: u64 = 1;
    let two = BigInt::from(2);
    loop {
        let kb = BigInt::from(k);
        t_lo = shr_floor(&(&t_lo * &r_lo), g).div_floor(&kb);
        t_hi = shr_ceil(&(&t_hi * &r_hi), g).div_ceil(&kb);
        s_lo += &t_lo;
        s_hi += &t_hi;
        k += 1;
        if t_hi < two {
            break;
        }
    }
    s_hi += &t_hi * 2 + 1;
    for _ in 0..s {
        s_lo = shr_floor(&(&s_lo * &s_lo), g);
        s_hi = shr_ceil(&(&s_hi * &s_hi), g);
    }
    (shr_floor(&s_lo, g - wp), shr_ceil(&s_hi, g - wp))
}

impl Interval {
    /// Builds `[lo, hi] · 2^-prec`.
    pub fn from_parts(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let v = n.into() << prec as u64;
        Interval { lo: v.clone(), hi: v, prec }
    }

    /// Tightest enclosure of a rational at the given precision.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let n = q.numer() << prec as u64;
        Interval {
            lo: n.div_floor(q.denom()),
            hi: n.div_ceil(q.denom()),
            prec,
        }
    }

    pub fn from_ratio(n: i64, d: i64, prec: u32) -> Self {
        Interval::from_rational(&BigRational::new(n.into(), d.into()), prec)
    }

    /// Encloses an `f64` (exact when representable at `prec`).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let q = BigRational::from_float(x).expect("finite float");
        Interval::from_rational(&q, prec)
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = align(self, other);
        Interval {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
            prec: a.prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec as u64))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec as u64))
    }

    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.prec as u64 + 1))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Half-width, rounded up to an `f64`.
    pub fn radius_f64(&self) -> f64 {
        let w = BigRational::new(&self.hi - &self.lo, pow2(self.prec as u64 + 1));
        let f = w.to_f64().unwrap_or(f64::INFINITY);
        if f == 0.0 {
            0.0
        } else {
            f * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
        }
    }

    /// Changes precision, rounding outward when it decreases.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (prec - self.prec) as u64;
                Interval { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
            Ordering::Less => {
                let s = (self.prec - prec) as u64;
                Interval { lo: shr_floor(&self.lo, s), hi: shr_ceil(&self.hi, s), prec }
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo_rational() <= *q && *q <= self.hi_rational()
    }

    /// Whether every point of `self` exceeds every point of `other`.
    pub fn certainly_gt(&self, other: &Self) -> bool {
        let (a, b) = align(self, other);
        a.lo > b.hi
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        other.certainly_gt(self)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.contains_zero(), "reciprocal of an interval containing zero");
        if self.is_negative() {
            return -(-self).recip();
        }
        let num = pow2(2 * self.prec as u64);
        Interval {
            lo: num.div_floor(&self.hi),
            hi: num.div_ceil(&self.lo),
            prec: self.prec,
        }
    }

    /// Square root; a slightly negative lower end is clamped to zero.
    pub fn sqrt(&self) -> Self {
        assert!(!self.hi.is_negative(), "square root of a negative interval");
        let s = self.prec as u64;
        let lo = if self.lo.is_negative() { BigInt::zero() } else { (&self.lo << s).sqrt() };
        let hi = isqrt_ceil(&(&self.hi << s));
        Interval { lo, hi, prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive interval");
        let wp = self.prec as u64;
        let (lo, _) = ln_bounds(&self.lo, self.prec, wp);
        let (_, hi) = ln_bounds(&self.hi, self.prec, wp);
        Interval { lo, hi, prec: self.prec }
    }

    pub fn exp(&self) -> Self {
        let wp = self.prec as u64;
        let (lo, _) = exp_bounds(&self.lo, self.prec, wp);
        let (_, hi) = exp_bounds(&self.hi, self.prec, wp);
        Interval { lo, hi, prec: self.prec }
    }

    /// `self^e` for positive `self`.
    pub fn powf(&self, e: &Self) -> Self {
        (e * &self.ln()).exp()
    }

    /// `self^q` for positive `self` and rational `q`.
    pub fn pow_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Interval::from_int(1, self.prec);
        }
        self.powf(&Interval::from_rational(q, self.prec))
    }

    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = align(self, other);
        Interval {
            lo: a.lo.clone().max(b.lo.clone()),
            hi: a.hi.max(b.hi),
            prec: a.prec,
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        let (a, b) = align(self, other);
        Interval {
            lo: a.lo.clone().min(b.lo.clone()),
            hi: a.hi.min(b.hi),
            prec: a.prec,
        }
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.mid_rational(), digits)
    }
}

/// Rounds a rational to `digits` fractional digits (half away from zero).
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let two = BigInt::from(2);
    let r = Integer::div_floor(&(a.numer() * &two + a.denom()), &(a.denom() * &two));
    let (ip, fp) = r.div_rem(&scale);
    let sign = if neg && !r.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{ip}");
    }
    format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
}

/// Formats an `f64` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let decimals = (14 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

fn align(a: &Interval, b: &Interval) -> (Interval, Interval) {
    let p = a.prec.max(b.prec);
    (a.with_prec(p), b.with_prec(p))
}

impl Add for &Interval {
    type Output = Interval;

    fn add(self, rhs: &Interval) -> Interval {
        let (a, b) = align(self, rhs);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: a.prec }
    }
}

impl Sub for &Interval {
    type Output = Interval;

    fn sub(self, rhs: &Interval) -> Interval {
        let (a, b) = align(self, rhs);
        Interval { lo: a.lo - b.hi, hi: a.hi - b.lo, prec: a.prec }
    }
}

impl Mul for &Interval {
    type Output = Interval;

    fn mul(self, rhs: &Interval) -> Interval {
        let (a, b) = align(self, rhs);
        let ps = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let mn = ps.iter().min().unwrap();
        let mx = ps.iter().max().unwrap();
        let s = a.prec as u64;
        Interval { lo: shr_floor(mn, s), hi: shr_ceil(mx, s), prec: a.prec }
    }
}

impl Div for &Interval {
    type Output = Interval;

    fn div(self, rhs: &Interval) -> Interval {
        let (a, b) = align(self, rhs);
        &a * &b.recip()
    }
}

impl Neg for &Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Interval {
            type Output = Interval;

            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        -&self
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo_f64(), self.hi_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", sig15(self.mid_f64()), self.radius_f64())
    }
}
