//! Resultants by subresultant pseudo-remainder sequences, discriminants,
//! and gcd / squarefree parts over ℤ[x].

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Coefficient, ExactDiv, IntPolynomial, Poly};

fn pow_t<T: Coefficient>(x: &T, n: usize) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

/// Res(a, b) over an integral domain with exact division.
///
/// Fails only when both inputs are zero. If exactly one input is zero the
/// resultant is zero.
pub fn resultant<T: ExactDiv>(a: &Poly<T>, b: &Poly<T>) -> Result<T> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("exactmath", "resultant of two zero polynomials"));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(T::zero());
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.deg() < b.deg() {
        if (a.deg() * b.deg()) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let sign = |v: T, neg: bool| if neg { -v } else { v };
    if b.deg() == 0 {
        return Ok(sign(pow_t(&b.lead(), a.deg()), negate));
    }
    let mut g = T::one();
    let mut h = T::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(T::zero());
        }
        let divisor = g.clone() * pow_t(&h, delta);
        a = b;
        b = r.div_scalar(&divisor);
        g = a.lead();
        if delta > 0 {
            h = pow_t(&g, delta).div_exact(&pow_t(&h, delta - 1));
        }
        if b.deg() == 0 {
            let da = a.deg();
            let res = pow_t(&b.lead(), da).div_exact(&pow_t(&h, da - 1));
            return Ok(sign(res, negate));
        }
    }
}

/// disc(f) = (−1)^{d(d−1)/2} Res(f, f′) / lead(f).
pub fn discriminant<T: ExactDiv>(f: &Poly<T>) -> Result<T> {
    if f.degree().map_or(true, |d| d < 2) {
        return Err(Error::domain("exactmath", "discriminant needs degree at least 2"));
    }
    let d = f.deg();
    let r = resultant(f, &f.derivative())?.div_exact(&f.lead());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Integer discriminant of an integer polynomial.
pub fn poly_discriminant(f: &IntPolynomial) -> Result<BigInt> {
    discriminant(f)
}

/// Gcd in ℤ[x] by primitive remainder sequences, primitive with positive
/// leading coefficient (content of the inputs is included).
pub fn gcd_int(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut u, mut v) = (a.primitive_part(), b.primitive_part());
    if u.deg() < v.deg() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        let r = u.pseudo_rem(&v);
        u = v;
        v = if r.is_zero() { r } else { r.primitive_part() };
    }
    u.primitive_part()
}

/// f / gcd(f, f′), primitive with positive leading coefficient.
pub fn squarefree_part(f: &IntPolynomial) -> Result<IntPolynomial> {
    if f.is_zero() {
        return Err(Error::domain("exactmath", "squarefree part of zero"));
    }
    if f.is_constant() {
        return Ok(Poly::one());
    }
    let g = gcd_int(f, &f.derivative());
    let fp = f.primitive_part();
    if g.is_constant() {
        return Ok(fp);
    }
    let (q, _) = fp.scale(&pow_t(&g.lead(), fp.deg())).div_rem(&g);
    Ok(q.primitive_part())
}

/// Whether `f` has a repeated complex root.
pub fn has_repeated_root(f: &IntPolynomial) -> bool {
    f.deg() >= 1 && !gcd_int(f, &f.derivative()).is_constant()
}
