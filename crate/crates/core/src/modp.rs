//! Polynomials over 𝔽_p for word-sized primes and their factorization:
//! squarefree split, distinct-degree split, then Cantor–Zassenhaus
//! equal-degree splitting driven by a seeded ChaCha stream.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{is_prime_u64, mod_inverse_u64};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Default seed for the equal-degree splitting stream.
pub const DEFAULT_SEED: u64 = 0x5eed_b060_ce47;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Sets the process-wide seed used by equal-degree splitting. Factor lists
/// are sorted canonically, so the seed only affects running time.
pub fn set_seed(seed: u64) {
    SEED.store(seed, AtomicOrdering::Relaxed);
}

pub fn seed() -> u64 {
    SEED.load(AtomicOrdering::Relaxed)
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Polynomial over 𝔽_p, coefficients in `[0, p)`, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    /// Reduces an integer polynomial modulo `p`.
    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        let m = BigInt::from(p);
        FpPoly::new(
            p,
            f.coeffs()
                .iter()
                .map(|a| a.mod_floor(&m).to_u64().unwrap())
                .collect(),
        )
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inverse_u64(self.lead(), self.p).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&a| mulm(a, s, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|v| v as u64).collect())
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        if self.c.len() < b.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = mod_inverse_u64(b.lead(), p).expect("nonzero lead");
        let db = b.deg();
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = mulm(r[k], inv, p);
            if c == 0 {
                continue;
            }
            q[k - db] = c;
            for (i, &bc) in b.c.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = (r[idx] + p - mulm(c, bc, p)) % p;
            }
        }
        r.truncate(db);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    pub fn div_exact(&self, b: &Self) -> Self {
        let (q, r) = self.div_rem(b);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·o = g, g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = mod_inverse_u64(r0.lead(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        FpPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mulm(a, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| (mulm(acc, x, self.p) + a) % self.p)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Self) -> Self {
        self.pow_mod(&BigUint::from(e), m)
    }

    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    fn cmp_coeffs(&self, o: &Self) -> Ordering {
        self.c.cmp(&o.c)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.to_int(), self.p)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int())
    }
}

/// Complete factorization modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPFactorization {
    pub modulus: u64,
    /// Leading coefficient of the input mod p.
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted by coefficient
    /// vector (constant term first).
    pub factors: Vec<(FpPoly, u32)>,
}

impl ModPFactorization {
    /// Multiplies the factorization back out.
    pub fn product(&self) -> FpPoly {
        let p = self.modulus;
        self.factors.iter().fold(FpPoly::new(p, vec![self.unit]), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        })
    }

    /// Factor degrees, one entry per factor (with repetition by multiplicity).
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat(g.deg()).take(*m as usize))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

fn squarefree_factorization(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree_factorization(&c.pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.deg() >= 2 * i {
        h = h.pow_mod_u64(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() >= 1 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, deg_below: usize) -> FpPoly {
    FpPoly::new(p, (0..deg_below).map(|_| rng.gen_range(0..p)).collect())
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    if f.deg() == d {
        out.push(f.clone());
        return;
    }
    let p = f.modulus();
    let exponent = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = random_poly(rng, p, f.deg());
        if a.deg() < 1 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            a.pow_mod(&exponent, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = f.div_exact(&g);
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Factors a polynomial modulo `p` into monic irreducibles.
pub fn factor_fp(f: &FpPoly) -> ModPFactorization {
    let p = f.modulus();
    let unit = f.lead();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ p.rotate_left(17) ^ monic.deg() as u64);
    let mut factors = Vec::new();
    if monic.deg() >= 1 {
        for (sf, mult) in squarefree_factorization(&monic) {
            for (block, d) in distinct_degree(&sf) {
                let mut parts = Vec::new();
                equal_degree(&block, d, &mut rng, &mut parts);
                factors.extend(parts.into_iter().map(|g| (g, mult)));
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp_coeffs(&b.0).then(a.1.cmp(&b.1)));
    ModPFactorization { modulus: p, unit, factors }
}

/// Factors an integer polynomial modulo the prime `p`.
pub fn factor_mod_p(f: &IntPolynomial, p: u64) -> Result<ModPFactorization> {
    if !is_prime_u64(p) {
        return Err(Error::domain("exactmath", format!("{p} is not prime")));
    }
    let fp = FpPoly::from_int(f, p);
    if fp.is_zero() {
        return Err(Error::domain("exactmath", format!("polynomial vanishes modulo {p}")));
    }
    Ok(factor_fp(&fp))
}

/// Whether `f` splits into distinct linear factors modulo `p`, with the
/// leading coefficient a unit.
pub fn splits_completely(f: &IntPolynomial, p: u64) -> bool {
    let fp = FpPoly::from_int(f, p);
    if fp.deg() != f.deg() {
        return false;
    }
    if fp.deg() <= 1 {
        return true;
    }
    let m = fp.monic();
    let x = FpPoly::x(p);
    let xp = x.pow_mod_u64(p, &m);
    if xp != x.rem(&m) {
        return false;
    }
    m.gcd(&m.derivative()).is_one()
}
