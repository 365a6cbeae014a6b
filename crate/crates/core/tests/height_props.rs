use std::sync::Arc;

use bogocert_core::field::certify_irreducible;
use bogocert_core::height::{has_zero_height, height, height_of_minpoly};
use bogocert_core::roots::isolate_roots;
use bogocert_core::{FieldElement, IntPolynomial, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

const FIELDS: &[&str] = &["x^2+1", "x^2-2", "x^2-x-1", "x^3-2", "x^4+1", "x^4-x-1", "x^5-x-1", "x^6+x+3"];

fn field(i: usize) -> Arc<NumberField> {
    NumberField::parse(FIELDS[i]).unwrap()
}

fn elem(f: &Arc<NumberField>, c: &[i64], den: i64) -> FieldElement {
    let coords = (0..f.degree())
        .map(|i| BigRational::new(BigInt::from(*c.get(i).unwrap_or(&0)), BigInt::from(den)))
        .collect();
    FieldElement::new(f, coords).unwrap()
}

fn element() -> impl Strategy<Value = (usize, Vec<i64>, i64)> {
    (0..FIELDS.len(), prop::collection::vec(-4i64..=4, 6), 1i64..=3)
        .prop_filter("nonzero", |(_, c, _)| c.iter().any(|&x| x != 0))
}

fn h(b: &FieldElement) -> (f64, f64) {
    let e = height(b, 30).unwrap();
    (e.value, e.error_bound)
}

// An independent oracle for rationals: h(p/q) = log max(|p|, |q|).
fn rational_height(q: &BigRational) -> f64 {
    let m = q.numer().abs().max(q.denom().abs());
    let digits = m.to_string();
    let lead: f64 = digits[..digits.len().min(15)].parse().unwrap();
    lead.ln() + (digits.len().saturating_sub(15)) as f64 * std::f64::consts::LN_10
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn powers_scale_height((fi, c, den) in element(), n in 2i64..=10) {
        let f = field(fi);
        prop_assume!(f.degree() * (n as usize) <= 40 || f.degree() <= 2);
        let b = elem(&f, &c, den);
        let (hb, eb) = h(&b);
        let (hn, en) = h(&b.pow(n).unwrap());
        prop_assert!((hn - n as f64 * hb).abs() <= 2.0 * (en + n as f64 * eb) + 1e-12);
    }

    #[test]
    fn roots_of_unity_preserve_height((fi, c, den) in element(), k in 1i64..4) {
        let f = field(fi);
        let zeta = match FIELDS[fi] {
            "x^2+1" => FieldElement::theta(&f),
            "x^4+1" => FieldElement::theta(&f).pow(k).unwrap(),
            _ => FieldElement::from_int(&f, -1),
        };
        let b = elem(&f, &c, den);
        let (h1, e1) = h(&b);
        let (h2, e2) = h(&(&zeta * &b));
        prop_assert!((h1 - h2).abs() <= 2.0 * (e1 + e2) + 1e-12);
    }

    #[test]
    fn sums_and_products((fi, c, den) in element(), (c2, den2) in (prop::collection::vec(-4i64..=4, 6), 1i64..=3)) {
        let f = field(fi);
        prop_assume!(f.degree() <= 4);
        let a = elem(&f, &c, den);
        let b = elem(&f, &c2, den2);
        let (ha, ea) = h(&a);
        let (hb, eb) = h(&b);
        let (hp, ep) = h(&(&a * &b));
        let (hs, es) = h(&(&a + &b));
        let tol = ea + eb + ep + es + 1e-12;
        prop_assert!(hp <= ha + hb + tol);
        prop_assert!(hs <= std::f64::consts::LN_2 + ha + hb + tol);
    }

    #[test]
    fn rational_heights_match_oracle(p in -100_000i64..100_000, q in 1i64..100_000) {
        prop_assume!(p != 0);
        let f = NumberField::rationals();
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let b = FieldElement::from_rational(&f, r.clone());
        prop_assert!((h(&b).0 - rational_height(&r)).abs() < 1e-10);
    }

    // Σ_{v∈S} log|β|_v ∈ [−h, h] for S a set of archimedean conjugates.
    #[test]
    fn liouville_inequality((fi, c, den) in element(), mask in 0u32..64) {
        let f = field(fi);
        let b = elem(&f, &c, den);
        let mp = b.min_poly();
        let (hb, eb) = h(&b);
        let n = mp.deg() as f64;
        let roots = isolate_roots(&mp, 120).unwrap();
        let mut total = 0.0;
        for (i, r) in roots.iter().enumerate() {
            if mask & (1 << (i % 6)) != 0 {
                total += r.modulus(120).ln().mid_f64() / n;
            }
        }
        prop_assert!(total.abs() <= hb + eb + 1e-9);
    }

    #[test]
    fn liouville_for_rationals(p in 1i64..10_000, q in 1i64..10_000, mask in 0u32..16) {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let hr = rational_height(&r);
        let mut total = 0.0;
        if mask & 1 != 0 {
            total += (r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()).ln();
        }
        for (j, ell) in [2u64, 3, 5, 7].iter().enumerate().skip(1) {
            if mask & (1 << j) != 0 {
                let v = bogocert_core::arith::valuation_rational(&r, *ell);
                total -= v as f64 * (*ell as f64).ln();
            }
        }
        prop_assert!(total.abs() <= hr + 1e-9);
    }
}

// Exhaustive Kronecker check: an irreducible primitive polynomial has
// Mahler measure 1 exactly when it is x or divides x^m − 1, and for
// degree ≤ 4 only m ≤ 12 can occur.
fn kronecker(f: &IntPolynomial) -> bool {
    if *f == IntPolynomial::x() {
        return true;
    }
    if !f.lead().is_one() {
        return false;
    }
    (1..=12usize).any(|m| {
        let xm = IntPolynomial::monomial(BigInt::one(), m) - IntPolynomial::one();
        xm.div_rem(f).1.is_zero()
    })
}

#[test]
fn zero_height_agrees_with_kronecker() {
    let mut checked = 0;
    let mut zeros = 0;
    for deg in 1..=4usize {
        let count = 7usize.pow(deg as u32);
        for lead in 1..=3i64 {
            for code in 0..count {
                let mut c: Vec<i64> = (0..deg).map(|i| (code / 7usize.pow(i as u32)) as i64 % 7 - 3).collect();
                c.push(lead);
                let f = IntPolynomial::from_i64s(&c);
                if f.primitive_part() != f || certify_irreducible(&f).is_err() {
                    continue;
                }
                checked += 1;
                let oracle = kronecker(&f);
                assert_eq!(has_zero_height(&f), oracle, "{f}");
                if oracle {
                    zeros += 1;
                    assert!(height_of_minpoly(&f, 20).unwrap().is_zero);
                }
            }
        }
    }
    assert!(checked > 1000);
    // x and Φ_m for φ(m) ≤ 4: m ∈ {1,2,3,4,5,6,8,10,12}
    assert_eq!(zeros, 10);
}

#[test]
fn nonzero_heights_are_positive_on_small_polynomials() {
    for c in [[1, 1, 0, 1], [-1, 1, 0, 1], [1, -3, 0, 1], [2, 0, 0, 1]] {
        let f = IntPolynomial::from_i64s(&c);
        let e = height_of_minpoly(&f, 20).unwrap();
        assert!(!e.is_zero && e.lo() > 0.0);
    }
}
