//! Multifactor Hensel lifting of coprime factor blocks from ℤ/ℓ to ℤ/ℓ^k,
//! by binary splitting and the quadratic two-factor lift.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::modp::FpPoly;
use crate::poly::IntPolynomial;

fn reduce(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    f.reduce_mod(m)
}

fn mul_mod(a: &IntPolynomial, b: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    reduce(&(a * b), m)
}

/// Division by a monic polynomial with coefficients reduced mod `m`.
fn div_rem_mod(a: &IntPolynomial, b: &IntPolynomial, m: &BigInt) -> (IntPolynomial, IntPolynomial) {
    let (q, r) = a.div_rem(b);
    (reduce(&q, m), reduce(&r, m))
}

/// One quadratic step: from `f ≡ g h`, `s g + t h ≡ 1 (mod m)` to the same
/// relations mod `m²`.
fn lift_step(
    f: &IntPolynomial,
    g: &IntPolynomial,
    h: &IntPolynomial,
    s: &IntPolynomial,
    t: &IntPolynomial,
    m: &BigInt,
) -> [IntPolynomial; 4] {
    let m2 = m * m;
    let e = reduce(&(f - &(g * h)), &m2);
    let (q, r) = div_rem_mod(&mul_mod(s, &e, &m2), h, &m2);
    let g2 = reduce(&(&(g + &(t * &e)) + &(&q * g)), &m2);
    let h2 = reduce(&(h + &r), &m2);
    let b = reduce(&(&(&(s * &g2) + &(t * &h2)) - &IntPolynomial::one()), &m2);
    let (c, d) = div_rem_mod(&mul_mod(s, &b, &m2), &h2, &m2);
    let s2 = reduce(&(s - &d), &m2);
    let t2 = reduce(&(&(t - &(t * &b)) - &(&c * &g2)), &m2);
    [g2, h2, s2, t2]
}

/// Lifts `f ≡ g·h (mod ℓ)` to monic `g*, h*` with `f ≡ g* h* (mod ℓ^k)`.
fn lift_pair(f: &IntPolynomial, g: &FpPoly, h: &FpPoly, ell: u64, k: u32) -> Result<(IntPolynomial, IntPolynomial)> {
    let (one, s, t) = g.xgcd(h);
    if !one.is_one() {
        return Err(Error::Lifting(format!("blocks {g} and {h} are not coprime modulo {ell}")));
    }
    let target = num_traits::pow(BigInt::from(ell), k as usize);
    let mut m = BigInt::from(ell);
    let (mut gi, mut hi, mut si, mut ti) = (g.to_int(), h.to_int(), s.to_int(), t.to_int());
    while m < target {
        [gi, hi, si, ti] = lift_step(f, &gi, &hi, &si, &ti, &m);
        m = &m * &m;
    }
    Ok((reduce(&gi, &target), reduce(&hi, &target)))
}

fn lift_rec(f: &IntPolynomial, blocks: &[FpPoly], ell: u64, k: u32, out: &mut Vec<IntPolynomial>) -> Result<()> {
    if blocks.len() == 1 {
        out.push(f.clone());
        return Ok(());
    }
    let mid = blocks.len() / 2;
    let prod = |bs: &[FpPoly]| bs.iter().fold(FpPoly::one(ell), |a, b| a.mul(b));
    let (g, h) = lift_pair(f, &prod(&blocks[..mid]), &prod(&blocks[mid..]), ell, k)?;
    lift_rec(&g, &blocks[..mid], ell, k, out)?;
    lift_rec(&h, &blocks[mid..], ell, k, out)
}

/// Lifts pairwise coprime monic blocks with product `f mod ℓ` to monic
/// blocks with product `f mod ℓ^k`, each congruent to its input mod ℓ.
/// Coefficients of the result lie in `[0, ℓ^k)`.
pub fn hensel_lift_blocks(f: &IntPolynomial, blocks: &[FpPoly], ell: u64, k: u32) -> Result<Vec<IntPolynomial>> {
    if !f.is_monic() {
        return Err(Error::precondition("exactmath", "hensel lifting needs a monic polynomial"));
    }
    if k == 0 || blocks.is_empty() {
        return Err(Error::precondition("exactmath", "need k >= 1 and at least one block"));
    }
    let prod = blocks.iter().fold(FpPoly::one(ell), |a, b| a.mul(b));
    if prod != FpPoly::from_int(f, ell) || blocks.iter().any(|b| b.lead() != 1) {
        return Err(Error::Lifting(format!("blocks do not multiply to {f} modulo {ell}")));
    }
    let modulus = num_traits::pow(BigInt::from(ell), k as usize);
    let mut out = Vec::with_capacity(blocks.len());
    lift_rec(&reduce(f, &modulus), blocks, ell, k, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::factor_mod_p;
    use proptest::prelude::*;

    fn int(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn gaussian_integers_mod_25() {
        let f = int(&[1, 0, 1]);
        let blocks = [FpPoly::new(5, vec![2, 1]), FpPoly::new(5, vec![3, 1])];
        let lifted = hensel_lift_blocks(&f, &blocks, 5, 2).unwrap();
        assert_eq!(lifted, vec![int(&[7, 1]), int(&[18, 1])]);
        let m = BigInt::from(25);
        assert_eq!((&lifted[0] * &lifted[1]).reduce_mod(&m), f.reduce_mod(&m));
    }

    #[test]
    fn base_precision_is_identity() {
        let f = int(&[1, 0, 1]);
        let blocks = [FpPoly::new(5, vec![2, 1]), FpPoly::new(5, vec![3, 1])];
        let lifted = hensel_lift_blocks(&f, &blocks, 5, 1).unwrap();
        assert_eq!(lifted, vec![int(&[2, 1]), int(&[3, 1])]);
    }

    #[test]
    fn single_inseparable_block() {
        let f = int(&[-2, 0, 0, 1]);
        let block = FpPoly::new(3, vec![1, 1]);
        let cube = block.mul(&block).mul(&block);
        let lifted = hensel_lift_blocks(&f, &[cube], 3, 4).unwrap();
        assert_eq!(lifted, vec![f.reduce_mod(&BigInt::from(81))]);
    }

    #[test]
    fn non_coprime_blocks_fail() {
        let f = int(&[1, 2, 1]);
        let b = FpPoly::new(5, vec![1, 1]);
        assert!(matches!(hensel_lift_blocks(&f, &[b.clone(), b], 5, 3), Err(Error::Lifting(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn lifted_blocks_multiply_back(
            c in prop::collection::vec(-20i64..=20, 2..8),
            p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
            k in 1u32..=64,
        ) {
            let mut c = c;
            c.push(1);
            let f = int(&c);
            let fac = factor_mod_p(&f, p).unwrap();
            let blocks: Vec<FpPoly> = fac
                .factors
                .iter()
                .map(|(g, e)| (1..*e).fold(g.clone(), |a, _| a.mul(g)))
                .collect();
            let lifted = hensel_lift_blocks(&f, &blocks, p, k).unwrap();
            let m = num_traits::pow(BigInt::from(p), k as usize);
            let prod = lifted.iter().fold(IntPolynomial::one(), |a, b| (&a * b).reduce_mod(&m));
            prop_assert_eq!(prod, f.reduce_mod(&m));
            for (l, b) in lifted.iter().zip(&blocks) {
                prop_assert!(l.is_monic());
                prop_assert_eq!(&FpPoly::from_int(l, p), b);
            }
        }
    }
}
