//! Primes over a rational prime ℓ in ℤ[θ]: Dedekind splitting, 𝔭-adic
//! valuations through Hensel-lifted local factors, uniformizers and CRT.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, mod_inverse, valuation};
use crate::error::{Error, Result};
use crate::field::{element_mod, mulmod, FieldElement, NumberField};
use crate::hensel::hensel_lift_blocks;
use crate::modp::{factor_fp, FpPoly};
use crate::poly::IntPolynomial;
use crate::resultant::resultant;

/// Initial lift precision in ℓ-adic digits.
pub const INITIAL_PRECISION: u32 = 32;
/// Largest lift precision tried before giving up.
pub const MAX_PRECISION: u32 = 4096;

/// One prime 𝔭 | ℓ with its residue factor and lifted local block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactor {
    pub ell: u64,
    /// Monic irreducible factor mod ℓ, coefficients in [0, ℓ).
    pub g: IntPolynomial,
    pub e: u32,
    pub f: u32,
    /// Monic lift of g^e modulo ℓ^precision.
    pub local_block: IntPolynomial,
    pub precision: u32,
}

/// Factorization of ℓ·O_F read off the minimal polynomial mod ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub field: IntPolynomial,
    pub ell: u64,
    pub dedekind_ok: bool,
    pub factors: Vec<PrimeFactor>,
}

impl SplittingReport {
    pub fn is_unramified(&self) -> bool {
        self.factors.iter().all(|p| p.e == 1)
    }

    pub fn is_totally_split(&self) -> bool {
        self.factors.iter().all(|p| p.e == 1 && p.f == 1)
    }
}

fn check_prime(ell: u64) -> Result<()> {
    if is_prime_u64(ell) {
        Ok(())
    } else {
        Err(Error::domain("idealtheory", format!("{ell} is not prime")))
    }
}

/// Dedekind criterion: true iff ℓ does not divide [O_F : ℤ[θ]].
pub fn dedekind_check(field: &NumberField, ell: u64) -> Result<bool> {
    check_prime(ell)?;
    let f = field.minpoly();
    let fac = factor_fp(&FpPoly::from_int(f, ell));
    let mut g = FpPoly::one(ell);
    let mut h = FpPoly::one(ell);
    for (q, m) in &fac.factors {
        g = g.mul(q);
        for _ in 1..*m {
            h = h.mul(q);
        }
    }
    let lifted = &g.to_int() * &h.to_int();
    let diff = f - &lifted;
    let big = (&diff).div_scalar(&BigInt::from(ell));
    let big = FpPoly::from_int(&big, ell);
    Ok(big.gcd(&g).gcd(&h).is_one())
}

fn residue_blocks(field: &NumberField, ell: u64) -> Vec<(FpPoly, u32)> {
    factor_fp(&FpPoly::from_int(field.minpoly(), ell)).factors
}

fn fp_pow(g: &FpPoly, e: u32) -> FpPoly {
    (0..e).fold(FpPoly::one(g.modulus()), |acc, _| acc.mul(g))
}

/// Splits ℓ in F. Errors when the Dedekind criterion fails at ℓ.
pub fn split_prime(field: &NumberField, ell: u64, k: u32) -> Result<SplittingReport> {
    if !dedekind_check(field, ell)? {
        return Err(Error::NotMaximalOrder { ell });
    }
    let k = k.max(1);
    let fac = residue_blocks(field, ell);
    let blocks: Vec<FpPoly> = fac.iter().map(|(g, e)| fp_pow(g, *e)).collect();
    let lifted = hensel_lift_blocks(field.minpoly(), &blocks, ell, k)?;
    let factors = fac
        .iter()
        .zip(lifted)
        .map(|((g, e), local_block)| PrimeFactor {
            ell,
            g: g.to_int(),
            e: *e,
            f: g.deg() as u32,
            local_block,
            precision: k,
        })
        .collect();
    Ok(SplittingReport { field: field.minpoly().clone(), ell, dedekind_ok: true, factors })
}

impl PrimeFactor {
    fn residue_block(&self) -> FpPoly {
        fp_pow(&FpPoly::from_int(&self.g, self.ell), self.e)
    }

    /// A fresh lift of the local block to precision `k`.
    pub fn block_at(&self, minpoly: &IntPolynomial, k: u32) -> Result<IntPolynomial> {
        if k == self.precision {
            return Ok(self.local_block.clone());
        }
        if k < self.precision {
            let m = num_traits::pow(BigInt::from(self.ell), k as usize);
            return Ok(self.local_block.reduce_mod(&m));
        }
        let b = self.residue_block();
        let rest = FpPoly::from_int(minpoly, self.ell).div_exact(&b);
        let blocks = if rest.deg() == 0 { vec![b] } else { vec![b, rest] };
        Ok(hensel_lift_blocks(minpoly, &blocks, self.ell, k)?.swap_remove(0))
    }

    /// The same prime with its block lifted to precision `k`.
    pub fn with_precision(&self, minpoly: &IntPolynomial, k: u32) -> Result<PrimeFactor> {
        Ok(PrimeFactor { local_block: self.block_at(minpoly, k)?, precision: k, ..self.clone() })
    }

    /// Size of O_F/𝔭^k, or `None` when it exceeds u64.
    pub fn quotient_size(&self, k: u32) -> Option<u64> {
        self.ell.checked_pow(self.f.checked_mul(k)?)
    }
}

/// v_𝔭 of an integral polynomial expression y(θ), capped at `cap`: returns
/// min(v_𝔭(y), cap). Exact whenever the result is below `cap`.
pub fn valuation_capped(y: &IntPolynomial, p: &PrimeFactor, minpoly: &IntPolynomial, cap: u32) -> Result<u32> {
    let k = (p.f * cap + 1).max(p.precision);
    let block = p.block_at(minpoly, k)?;
    let m = num_traits::pow(BigInt::from(p.ell), k as usize);
    let y = y.rem(&block).reduce_mod(&m);
    if y.is_zero() {
        return Ok(cap);
    }
    let r = resultant(&block, &y)?.mod_floor(&m);
    if r.is_zero() {
        return Ok(cap);
    }
    let v = valuation(&r, p.ell) / p.f;
    Ok(v.min(cap))
}

/// Exact v_𝔭 of an integral polynomial expression y(θ) ≠ 0.
fn valuation_integral(y: &IntPolynomial, p: &PrimeFactor, minpoly: &IntPolynomial) -> Result<u32> {
    let mut k = p.precision.max(INITIAL_PRECISION);
    while k <= MAX_PRECISION {
        let block = p.block_at(minpoly, k)?;
        let m = num_traits::pow(BigInt::from(p.ell), k as usize);
        let r = resultant(&block, &y.rem(&block).reduce_mod(&m))?.mod_floor(&m);
        if !r.is_zero() {
            let vl = valuation(&r, p.ell);
            if vl < k {
                return Ok(vl / p.f);
            }
        }
        k *= 2;
    }
    Err(Error::PrecisionExhausted {
        module: "idealtheory",
        message: format!("valuation at a prime over {} did not stabilize below precision {MAX_PRECISION}", p.ell),
    })
}

/// v_𝔭(β) for β ≠ 0, normalized so that v_𝔭(ℓ) = e.
pub fn valuation_of(beta: &FieldElement, p: &PrimeFactor) -> Result<i64> {
    if beta.is_zero() {
        return Err(Error::InfiniteValuation { module: "idealtheory" });
    }
    let (b, den) = beta.integer_numerator();
    let vb = valuation_integral(&b, p, beta.field().minpoly())? as i64;
    Ok(vb - p.e as i64 * valuation(&den, p.ell) as i64)
}

fn eval_at_theta(field: &Arc<NumberField>, g: &IntPolynomial) -> FieldElement {
    FieldElement::from_poly(field, &g.to_rational())
}

/// An element π with v_𝔭(π) = 1, searched as g(θ) + ℓ·j for j = 0..d².
pub fn uniformizer(field: &Arc<NumberField>, p: &PrimeFactor) -> Result<FieldElement> {
    let d = field.degree() as i64;
    let base = eval_at_theta(field, &p.g);
    for j in 0..=d * d {
        let cand = &base + &FieldElement::from_int(field, p.ell as i64 * j);
        if cand.is_zero() {
            continue;
        }
        if valuation_of(&cand, p)? == 1 {
            return Ok(cand);
        }
    }
    Err(Error::SearchExhausted {
        module: "idealtheory",
        message: format!("no uniformizer among g(θ) + {}·j for j <= {}", p.ell, d * d),
    })
}

/// Inverse of `c` modulo (g, ℓ^k) by lifting the inverse mod ℓ.
fn inverse_mod(c: &IntPolynomial, g: &IntPolynomial, ell: u64, k: u32) -> Result<IntPolynomial> {
    let gp = FpPoly::from_int(g, ell);
    let (h, s, _) = FpPoly::from_int(c, ell).rem(&gp).xgcd(&gp);
    if !h.is_one() {
        return Err(Error::internal("idealtheory", "CRT cofactor is not a unit"));
    }
    let target = num_traits::pow(BigInt::from(ell), k as usize);
    let mut u = s.to_int();
    let mut m = BigInt::from(ell);
    let two = IntPolynomial::constant(BigInt::from(2));
    while m < target {
        m = (&m * &m).min(target.clone());
        u = mulmod(&u, &(&two - &mulmod(c, &u, g, &m)), g, &m);
    }
    Ok(u)
}

/// α integral with v_{𝔭_i}(α − β_i) ≥ k_i for every target (𝔭_i, β_i, k_i).
/// Each β_i must be integral at ℓ_i.
pub fn crt_solve(field: &Arc<NumberField>, targets: &[(PrimeFactor, FieldElement, u32)]) -> Result<FieldElement> {
    if targets.is_empty() {
        return Err(Error::domain("idealtheory", "no CRT targets"));
    }
    for (i, (p, _, _)) in targets.iter().enumerate() {
        if targets[..i].iter().any(|(q, _, _)| q.ell == p.ell && q.g == p.g) {
            return Err(Error::domain("idealtheory", "CRT targets must be at distinct primes"));
        }
    }
    if targets.len() == 1 {
        return Ok(targets[0].1.clone());
    }
    let f = field.minpoly();
    let mut ells: Vec<u64> = targets.iter().map(|t| t.0.ell).collect();
    ells.sort_unstable();
    ells.dedup();
    let mut acc = IntPolynomial::zero();
    let mut acc_mod = BigInt::one();
    for &ell in &ells {
        let here: Vec<_> = targets.iter().filter(|t| t.0.ell == ell).collect();
        let kk = here.iter().map(|(p, _, k)| k.div_ceil(&p.e)).max().unwrap_or(1).max(1);
        let m = num_traits::pow(BigInt::from(ell), kk as usize);
        let mut local = IntPolynomial::zero();
        for (p, beta, _) in &here {
            let g = p.block_at(f, kk)?;
            let cof = f.div_rem(&g).0.reduce_mod(&m);
            let inv = inverse_mod(&cof, &g, ell, kk)?;
            let idem = mulmod(&cof, &inv, f, &m);
            let b = element_mod(beta, &m).ok_or_else(|| {
                Error::domain("idealtheory", format!("CRT target is not integral at {ell}"))
            })?;
            local = &local + &mulmod(&idem, &b, f, &m);
        }
        local = local.reduce_mod(&m);
        // Combine with the previous moduli coefficientwise.
        let inv = mod_inverse(&acc_mod, &m).expect("distinct primes");
        let diff = (&local - &acc).reduce_mod(&m);
        let t = diff.map(|c| (c * &inv).mod_floor(&m));
        acc = &acc + &t.scale(&acc_mod);
        acc_mod *= &m;
        acc = acc.reduce_mod(&acc_mod);
    }
    Ok(eval_at_theta(field, &acc))
}
