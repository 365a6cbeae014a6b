use bogocert_core::construct::{construct_alpha, nonbog_witnesses, tower_bound_42, trinomial_step};
use bogocert_core::ideal::{dedekind_check, split_prime, uniformizer, valuation_of};
use bogocert_core::{Error, FieldElement, IntPolynomial, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn constructed_alpha_is_admissible_on_random_quadratics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 20 {
        let (a, b) = (rng.gen_range(-6i64..=6), rng.gen_range(-30i64..=30));
        let f = IntPolynomial::from_i64s(&[b, a, 1]);
        let Ok(field) = NumberField::new(f) else { continue };
        let ell = [3u64, 5, 7][rng.gen_range(0..3)];
        if !dedekind_check(&field, ell).unwrap() || !split_prime(&field, ell, 32).unwrap().is_unramified() {
            continue;
        }
        let c = construct_alpha(&field, ell).unwrap();
        assert!(c.kummer.irreducible_certified && c.kummer.is_totally_ramified());
        assert!(c.checks.iter().all(|k| k.valuation == 1));
        done += 1;
    }
}

#[test]
fn one_plus_uniformizer_is_an_ell_th_power_residue() {
    for (poly, ell) in [("x", 3u64), ("x", 5), ("x^2+1", 5), ("x^2+1", 3), ("x^2-2", 7), ("x^3-2", 5), ("x^2+x+1", 7)] {
        let field = NumberField::parse(poly).unwrap();
        for p in split_prime(&field, ell, 32).unwrap().factors {
            let pi = uniformizer(&field, &p).unwrap();
            let beta = &FieldElement::one(&field) + &pi;
            let y = &beta.pow(ell as i64).unwrap() - &FieldElement::one(&field);
            assert!(valuation_of(&y, &p).unwrap() >= 2, "{poly} at {ell}");
            // nontrivial modulo 𝔭²
            assert_eq!(valuation_of(&(&beta - &FieldElement::one(&field)), &p).unwrap(), 1);
        }
    }
}

#[test]
fn ramified_base_is_unsupported() {
    let f = NumberField::parse("x^2-3").unwrap();
    assert!(matches!(construct_alpha(&f, 3), Err(Error::Unsupported { .. })));
}

#[test]
fn witness_heights_agree_with_engine() {
    for b in [2i64, 3, 5, 6, 10] {
        let s = nonbog_witnesses(&BigRational::from_integer(BigInt::from(b)), 8, 1e-6).unwrap();
        let mut last = f64::INFINITY;
        for it in &s.items {
            assert!(it.height > 0.0 && it.height < last);
            last = it.height;
            if let Some(e) = it.engine_check {
                assert!((e - it.height).abs() < 1e-10, "b = {b}, k = {}", it.k);
            }
        }
    }
    let r = BigRational::new(BigInt::from(3), BigInt::from(2));
    let s = nonbog_witnesses(&r, 4, 1e-6).unwrap();
    assert!(s.items.iter().all(|i| (i.engine_check.unwrap() - i.height).abs() < 1e-10));
}

#[test]
fn tower_bounds_grow_with_p() {
    let mut last = 0.0;
    for p in [7u64, 11, 19, 23, 31, 43] {
        let v = tower_bound_42(p).unwrap().bound.to_f64();
        assert!((v - (p as f64 / 4.0).powf(0.25)).abs() < 1e-12);
        assert!(v > last);
        last = v;
    }
    assert!(matches!(tower_bound_42(13), Err(Error::Domain { .. })));
}

#[test]
fn trinomial_roots_have_positive_height() {
    for b in [12u64, 24, 36] {
        let s = trinomial_step(&[], b).unwrap();
        assert!(s.height > 0.0 && s.height <= s.height_upper);
        assert!(s.disc_matches_closed_form);
    }
}
