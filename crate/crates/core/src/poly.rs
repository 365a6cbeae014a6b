//! Dense univariate polynomials generic over the coefficient domain.
//!
//! Coefficients are stored constant term first with no trailing zeros, so the
//! zero polynomial is the empty vector. The same type serves integer,
//! rational and nested (bivariate) polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A commutative ring usable as polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

/// An integral domain with exact division: `a.div_exact(b)` is only called
/// when `b` divides `a`.
pub trait ExactDiv: Coefficient {
    fn div_exact(&self, rhs: &Self) -> Self;

    /// Whether `rhs` divides `self`.
    fn divides(rhs: &Self, lhs: &Self) -> bool;
}

impl Coefficient for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!((self % rhs).is_zero(), "inexact integer division");
        self / rhs
    }

    fn divides(rhs: &Self, lhs: &Self) -> bool {
        !rhs.is_zero() && lhs.is_multiple_of(rhs)
    }
}

impl Coefficient for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl ExactDiv for BigRational {
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn divides(rhs: &Self, _lhs: &Self) -> bool {
        !rhs.is_zero()
    }
}

impl Coefficient for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

/// Dense polynomial with coefficients in `T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    /// Builds a polynomial from coefficients, constant term first.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    /// `c * x^n`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Applies `f` to every coefficient.
    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![T::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * g) + &Poly::constant(c.clone()))
    }

    /// Pseudo-remainder `lead(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-remainder by zero");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut count = self.deg() - db + 1;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for c in r.iter_mut() {
                *c = c.clone() * lb.clone();
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = r[idx].clone() - lr.clone() * bc.clone();
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            count -= 1;
        }
        let mut out = Poly::new(r);
        for _ in 0..count {
            out = out.scale(&lb);
        }
        out
    }
}

impl<T: ExactDiv> Poly<T> {
    /// Division with remainder; requires the leading coefficient of `b` to
    /// divide every quotient step (always true over a field or for monic `b`).
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return (Poly::zero(), self.clone());
        }
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); self.deg() - db + 1];
        while r.len() > db {
            let k = r.len() - 1;
            if r[k].is_zero() {
                r.pop();
                continue;
            }
            let c = r[k].div_exact(&lb);
            for (i, bc) in b.coeffs.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = r[idx].clone() - c.clone() * bc.clone();
            }
            q[k - db] = c;
            r.pop();
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Exact division by a polynomial known to divide `self`.
    pub fn div_exact_poly(&self, b: &Self) -> Self {
        let (q, r) = self.div_rem(b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    /// Divides every coefficient by `c` exactly.
    pub fn div_scalar(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.div_exact(c)).collect())
    }
}

impl<T: Coefficient> Zero for Poly<T> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Coefficient> One for Poly<T> {
    fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }
}

impl<T: Coefficient> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Coefficient> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Coefficient> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coefficient> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coefficient> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coefficient> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Coefficient> Coefficient for Poly<T> {
    fn from_i64(n: i64) -> Self {
        Poly::constant(T::from_i64(n))
    }
}

impl<T: ExactDiv> ExactDiv for Poly<T> {
    fn div_exact(&self, rhs: &Self) -> Self {
        if rhs.is_constant() {
            return self.div_scalar(&rhs.lead());
        }
        self.div_exact_poly(rhs)
    }

    fn divides(rhs: &Self, lhs: &Self) -> bool {
        if rhs.is_zero() {
            return false;
        }
        let lb = rhs.lead();
        let mut r = lhs.clone();
        while !r.is_zero() && r.deg() >= rhs.deg() {
            if !T::divides(&lb, &r.lead()) {
                return false;
            }
            let c = r.lead().div_exact(&lb);
            r = &r - &(&Poly::monomial(c, r.deg() - rhs.deg()) * rhs);
        }
        r.is_zero()
    }
}

/// Integer-coefficient polynomial.
pub type IntPolynomial = Poly<BigInt>;
/// Rational-coefficient polynomial.
pub type RatPolynomial = Poly<BigRational>;

impl Poly<BigInt> {
    pub fn from_i64s(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Gcd of the coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let g = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.lead().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.div_scalar(&self.content())
    }

    pub fn to_rational(&self) -> RatPolynomial {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Reduces every coefficient into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        self.map(|c| c.mod_floor(m))
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Parses `x^2-x-1`-style text or a comma list of coefficients
    /// (constant term first).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if t.contains('x') {
            let q = parse_rational_poly(t)?;
            let den = q
                .coeffs()
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            if !den.is_one() {
                return Err(Error::Parse(format!("non-integer coefficients in {t}")));
            }
            return Ok(q.map(|c| c.numer().clone()));
        }
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let coeffs = inner
            .split(',')
            .map(|s| {
                s.trim()
                    .trim_matches('"')
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Poly<BigRational> {
    /// Clears denominators and returns the primitive integer polynomial
    /// with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> IntPolynomial {
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ip: IntPolynomial = self.map(|c| (c * &den).to_integer());
        ip.primitive_part()
    }

    pub fn monic(&self) -> Self {
        let l = self.lead();
        self.div_scalar(&l)
    }
}

fn parse_rational_poly(t: &str) -> Result<RatPolynomial> {
    let cleaned: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc: RatPolynomial = Poly::zero();
    for term in terms.into_iter().filter(|s| !s.is_empty() && s != "+") {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.trim_start_matches('+')),
        };
        let (coef_txt, pow) = match body.find('x') {
            None => (body.to_string(), 0usize),
            Some(pos) => {
                let coef = body[..pos].trim_end_matches('*').to_string();
                let rest = &body[pos + 1..];
                let pow = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad exponent in {term:?}: {e}")))?
                };
                (coef, pow)
            }
        };
        let c = if coef_txt.is_empty() {
            BigRational::one()
        } else {
            parse_rational(&coef_txt)?
        };
        let c = if sign < 0 { -c } else { c };
        acc = &acc + &Poly::monomial(c, pow);
    }
    Ok(acc)
}

/// Parses `a`, `a/b` or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim().trim_matches('"');
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d: BigInt = d.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(BigRational::from_integer(n))
}

/// Formats a rational as `num/den`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl<T: Coefficient + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coef = i == 0 || body != "1";
            if show_coef {
                write!(f, "{body}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coef { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coef { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Serialize for Poly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        Poly::from_i64s(c)
    }

    #[test]
    fn parse_and_display() {
        let f = IntPolynomial::parse("x^2 - x - 1").unwrap();
        assert_eq!(f, p(&[-1, -1, 1]));
        assert_eq!(f.to_string(), "x^2 - x - 1");
        assert_eq!(IntPolynomial::parse("x^12+x+1").unwrap().deg(), 12);
        assert_eq!(IntPolynomial::parse("[\"-2\", \"0\", \"1\"]").unwrap(), p(&[-2, 0, 1]));
        assert_eq!(IntPolynomial::parse("3*x^3-2").unwrap(), p(&[-2, 0, 0, 3]));
        assert!(IntPolynomial::parse("x/2").is_err());
    }

    #[test]
    fn division_and_pseudo_remainder() {
        let a = p(&[-1, 0, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        let c = p(&[1, 0, 3]);
        let d = p(&[1, 2]);
        // 4*(3x^2+1) = (2x+1)(6x-3) + 7
        assert_eq!(c.pseudo_rem(&d), p(&[7]));
    }

    #[test]
    fn nested_polynomials_divide_exactly() {
        let x: Poly<IntPolynomial> = Poly::x();
        let y = Poly::constant(p(&[0, 1]));
        let a = &(&x - &y) * &(&x + &y);
        let b = &x - &y;
        assert!(<Poly<IntPolynomial> as ExactDiv>::divides(&b, &a));
        assert_eq!(a.div_exact(&b), &x + &y);
    }
}
