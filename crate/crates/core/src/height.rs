//! Absolute logarithmic Weil height via the Mahler measure of the minimal
//! polynomial.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::totient;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::interval::Interval;
use crate::poly::IntPolynomial;
use crate::roots::log_mahler_measure;

pub const DEFAULT_DIGITS: usize = 30;

/// A validated enclosure of h(β).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Midpoint rounded to the requested number of fractional digits.
    pub decimal: String,
    pub digits: usize,
    pub is_zero: bool,
    #[serde(skip)]
    pub enclosure: Option<Interval>,
}

impl HeightEstimate {
    /// Multiplicative height H = exp h as an interval.
    pub fn multiplicative(&self) -> Interval {
        match &self.enclosure {
            Some(i) => i.exp(),
            None => Interval::from_int(1, 64),
        }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    let mut p = IntPolynomial::monomial(BigInt::one(), m as usize) - IntPolynomial::one();
    for d in 1..m {
        if m % d == 0 {
            p = p.div_exact_poly(&cyclotomic(d));
        }
    }
    p
}

/// Whether `f` is (up to sign) a cyclotomic polynomial. Every m with
/// φ(m) = n satisfies m ≤ 2n².
pub fn is_cyclotomic(f: &IntPolynomial) -> bool {
    cyclotomic_index(f).is_some()
}

/// The m with f = Φ_m, if any.
pub fn cyclotomic_index(f: &IntPolynomial) -> Option<u64> {
    let f = f.primitive_part();
    if !f.is_monic() || f.deg() == 0 || !f.coeff(0).abs().is_one() {
        return None;
    }
    let n = f.deg() as u64;
    (1..=2 * n * n).find(|&m| totient(m) == n && cyclotomic(m) == f)
}

/// Whether a minimal polynomial has Mahler measure 1 (x or cyclotomic).
pub fn has_zero_height(minpoly: &IntPolynomial) -> bool {
    *minpoly == IntPolynomial::x() || is_cyclotomic(minpoly)
}

/// h = log M(f) / deg f, enclosed to within 10^-digits.
pub fn height_of_minpoly(minpoly: &IntPolynomial, digits: usize) -> Result<HeightEstimate> {
    if minpoly.deg() == 0 {
        return Err(Error::domain("numberfield", "minimal polynomial must have positive degree"));
    }
    if has_zero_height(minpoly) {
        return Ok(HeightEstimate {
            value: 0.0,
            error_bound: 0.0,
            decimal: crate::interval::decimal_string(&Zero::zero(), digits),
            digits,
            is_zero: true,
            enclosure: Some(Interval::from_int(0, 64)),
        });
    }
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    let deg = minpoly.deg() as i64;
    let lm = log_mahler_measure(minpoly, bits)?;
    let h = &lm / &Interval::from_int(deg, lm.prec());
    let error_bound = h.radius_f64();
    if !(error_bound < 10f64.powi(-(digits as i32))) {
        return Err(Error::PrecisionExhausted {
            module: "numberfield",
            message: format!("height enclosure radius {error_bound:e} exceeds 1e-{digits}"),
        });
    }
    Ok(HeightEstimate {
        value: h.mid_f64(),
        error_bound,
        decimal: h.to_decimal(digits),
        digits,
        is_zero: false,
        enclosure: Some(h),
    })
}

/// h(β), with h(0) = 0 by convention.
pub fn height(beta: &FieldElement, digits: usize) -> Result<HeightEstimate> {
    height_of_minpoly(&beta.min_poly(), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn h(field: &str, elem: &str) -> HeightEstimate {
        let f = NumberField::parse(field).unwrap();
        height(&FieldElement::parse(&f, elem).unwrap(), DEFAULT_DIGITS).unwrap()
    }

    #[test]
    fn spec_examples() {
        let two = h("x", "2");
        assert!((two.value - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(&two.decimal[..12], "0.6931471805");
        let i = h("x^2+1", "0,1");
        assert!(i.is_zero);
        assert_eq!(i.value, 0.0);
        let g = h("x^2-x-1", "0,1");
        assert!((g.value - 0.5 * (0.5 + 1.25f64.sqrt()).ln()).abs() < 1e-12);
        assert!(g.error_bound < 1e-30);
        assert!(h("x^2+1", "0").is_zero);
    }

    #[test]
    fn rational_heights() {
        let q = h("x", "-3/7");
        assert!((q.value - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(12), IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]));
        assert!(is_cyclotomic(&IntPolynomial::from_i64s(&[1, -1, 1])));
        assert!(!is_cyclotomic(&IntPolynomial::from_i64s(&[1, -3, 1])));
        let zeta8 = h("x^4+1", "0,1");
        assert!(zeta8.is_zero);
    }
}
