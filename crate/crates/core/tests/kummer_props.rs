use std::sync::Arc;

use bogocert_core::arith::valuation;
use bogocert_core::ideal::split_prime;
use bogocert_core::kummer::{a_invariant, a_invariant_brute_force, check_a1, check_acolem, AValue, Conclusion};
use bogocert_core::resultant::poly_discriminant;
use bogocert_core::{Error, FieldElement, IntPolynomial, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const FIELDS: &[&str] = &["x", "x^2+1", "x^2-2", "x^2+x+1", "x^2-3", "x^3-2", "x^2+5"];

fn field(i: usize) -> Arc<NumberField> {
    NumberField::parse(FIELDS[i]).unwrap()
}

/// a(ℓ) over ℚ by searching x^ℓ ≡ α mod ℓ^k directly in ℤ/ℓ^k; None once a
/// solution exists modulo ℓ^kmax.
fn a_over_q_oracle(alpha: i64, ell: u64, kmax: u32) -> Option<u32> {
    for k in 1..=kmax {
        let m = ell.pow(k) as i128;
        let t = (alpha as i128).rem_euclid(m);
        let solvable = (0..m).any(|x| {
            let mut p = 1i128;
            for _ in 0..ell {
                p = p * x % m;
            }
            p == t
        });
        if !solvable {
            return Some(k - 1);
        }
    }
    None
}

#[test]
fn a_over_rationals_matches_integer_search() {
    let q = NumberField::rationals();
    for ell in [2u64, 3, 5, 7] {
        let kmax = match ell {
            2 => 6,
            3 => 5,
            _ => 4,
        };
        let p = split_prime(&q, ell, 32).unwrap().factors[0].clone();
        for alpha in 2i64..=60 {
            if alpha % ell as i64 == 0 {
                continue;
            }
            let (a, _) = a_invariant(&q, &FieldElement::from_int(&q, alpha), ell, &p).unwrap();
            match a_over_q_oracle(alpha, ell, kmax) {
                Some(k) => assert_eq!(a, AValue::Finite(k), "α = {alpha}, ℓ = {ell}"),
                None => assert_eq!(a, AValue::Unbounded, "α = {alpha}, ℓ = {ell}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shortcut_agrees_with_brute_force(
        fi in 0..FIELDS.len(),
        li in 0usize..4,
        c in prop::collection::vec(-20i64..=20, 3),
    ) {
        let f = field(fi);
        let ell = [2u64, 3, 5, 7][li];
        let coords = (0..f.degree()).map(|i| BigRational::from_integer(BigInt::from(c[i]))).collect();
        let alpha = FieldElement::new(&f, coords).unwrap();
        prop_assume!(!alpha.is_zero());
        let report = match split_prime(&f, ell, 32) {
            Ok(r) => r,
            Err(Error::NotMaximalOrder { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for p in &report.factors {
            let (a, _) = match a_invariant(&f, &alpha, ell, p) {
                Ok(v) => v,
                Err(Error::Domain { .. }) => return Ok(()),
                Err(Error::SearchExhausted { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            if p.quotient_size(2 * p.e + 1).is_some_and(|s| s <= 1_000_000) {
                prop_assert_eq!(a_invariant_brute_force(&f, &alpha, p).unwrap(), a);
            }
            // a ≥ 1: α^{ℓ^{f−1}} solves the congruence modulo 𝔭
            prop_assert!(a != AValue::Finite(0));
        }
    }
}

#[test]
fn total_ramification_gives_full_discriminant_power() {
    let q = NumberField::rationals();
    let mut admissible = 0;
    for ell in [3u64, 5, 7] {
        for alpha in 2i64..=50 {
            if alpha % ell as i64 == 0 {
                continue;
            }
            let r = check_a1(&q, &FieldElement::from_int(&q, alpha), ell).unwrap();
            if !r.is_totally_ramified() {
                continue;
            }
            admissible += 1;
            let mut c = vec![BigInt::from(-alpha)];
            c.resize(ell as usize, BigInt::from(0));
            c.push(BigInt::from(1));
            let disc = poly_discriminant(&IntPolynomial::new(c)).unwrap();
            assert_eq!(valuation(&disc, ell), ell as u32, "α = {alpha}, ℓ = {ell}");
        }
    }
    assert!(admissible > 60);
}

#[test]
fn lemma_cases_divide_discriminant() {
    let q = NumberField::rationals();
    let mut cases = 0;
    let rhos = [(1, 2), (3, 5), (2, 3), (3, 4), (5, 6), (9, 10)];
    for ell in [2u64, 3, 5, 7] {
        for alpha in 2i64..=40 {
            if alpha % ell as i64 == 0 {
                continue;
            }
            for (n, d) in rhos {
                let rho = BigRational::new(n.into(), d.into());
                let r = check_acolem(&q, &FieldElement::from_int(&q, alpha), ell, &rho).unwrap();
                let Conclusion::Divides { exponent } = r.conclusion else { continue };
                let mut c = vec![BigInt::from(-alpha)];
                c.resize(ell as usize, BigInt::from(0));
                c.push(BigInt::from(1));
                let disc = poly_discriminant(&IntPolynomial::new(c)).unwrap();
                assert!(valuation(&disc, ell) >= exponent);
                cases += 1;
            }
        }
    }
    assert!(cases >= 20);
}
