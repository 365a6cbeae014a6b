//! Real scalar abstraction shared by the closed-form bound evaluators, so
//! the same formula runs in `f32`, `f64` or validated interval arithmetic.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use crate::interval::Interval;

pub trait RealScalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// The rational `n/d` at the precision of `like`.
    fn ratio(n: i64, d: i64, like: &Self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn powf(&self, e: &Self) -> Self {
        (e.clone() * self.ln()).exp()
    }
}

impl<F: Float> RealScalar for F {
    fn ratio(n: i64, d: i64, _like: &Self) -> Self {
        F::from(n).unwrap() / F::from(d).unwrap()
    }

    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }

    fn ln(&self) -> Self {
        Float::ln(*self)
    }

    fn exp(&self) -> Self {
        Float::exp(*self)
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn powf(&self, e: &Self) -> Self {
        Float::powf(*self, *e)
    }
}

impl RealScalar for Interval {
    fn ratio(n: i64, d: i64, like: &Self) -> Self {
        Interval::from_ratio(n, d, like.prec())
    }

    fn sqrt(&self) -> Self {
        Interval::sqrt(self)
    }

    fn ln(&self) -> Self {
        Interval::ln(self)
    }

    fn exp(&self) -> Self {
        Interval::exp(self)
    }

    fn to_f64(&self) -> f64 {
        self.mid_f64()
    }

    fn powf(&self, e: &Self) -> Self {
        Interval::powf(self, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schinzel<S: RealScalar>(like: &S) -> S {
        let half = S::ratio(1, 2, like);
        let five_quarters = S::ratio(5, 4, like);
        (half.clone() + five_quarters.sqrt()).powf(&half)
    }

    #[test]
    fn same_formula_in_every_scalar() {
        let a = schinzel(&0.0f32).to_f64();
        let b = schinzel(&0.0f64);
        let c = schinzel(&Interval::from_int(0, 128));
        assert!((a - 1.272_019_6).abs() < 1e-6);
        assert!((b - 1.272_019_649_514_069).abs() < 1e-14);
        assert!(c.radius_f64() < 1e-30);
        assert!((c.mid_f64() - b).abs() < 1e-15);
    }
}
