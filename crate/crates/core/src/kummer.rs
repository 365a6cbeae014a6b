//! Ramification of x^ℓ − α over a number field F: the congruence invariant
//! a(𝔭), the divisibility conclusions it yields for D_{F′/F}, and the
//! threshold prime beyond which the conclusion holds automatically.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_rational, is_prime_u64, primes};
use crate::error::{Error, Result};
use crate::field::{element_mod, mulmod, powmod, FieldElement, NumberField};
use crate::ideal::{split_prime, uniformizer, valuation_capped, PrimeFactor, INITIAL_PRECISION};
use crate::poly::{format_rational, IntPolynomial};

/// Largest quotient O_F/𝔭^k enumerated by the brute-force search.
pub const MAX_QUOTIENT: u64 = 1_000_000;

/// a(𝔭): the largest k with x^ℓ ≡ α (mod 𝔭^k) solvable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AValue {
    Finite(u32),
    /// Solvable modulo every power of 𝔭: α is a local ℓ-th power.
    Unbounded,
}

impl fmt::Display for AValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AValue::Finite(a) => write!(f, "{a}"),
            AValue::Unbounded => write!(f, "unbounded"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ValuationShortcut,
    BruteForce,
}

/// Analysis of one prime 𝔭 | ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub g: IntPolynomial,
    pub e: u32,
    pub f: u32,
    /// min(v_𝔭(α^{ℓ^f−1} − 1), w_cap).
    pub w: u32,
    pub w_cap: u32,
    pub a: AValue,
    pub branch: Branch,
    /// Whether the exhaustive residue search confirmed `a`.
    pub brute_force_checked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// ℓ^exponent · O_F divides D_{F′/F}.
    Divides { exponent: u32 },
    /// Every 𝔭 | ℓ is totally ramified and ℓ^ℓ divides D_{F′/F}.
    TotallyRamifiedAll { exponent: u32 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerAnalysis {
    pub field: IntPolynomial,
    pub alpha: Vec<String>,
    pub ell: u64,
    pub records: Vec<PrimeRecord>,
    pub rho_used: Option<String>,
    pub conclusion: Conclusion,
    pub irreducible_certified: bool,
}

impl KummerAnalysis {
    pub fn is_totally_ramified(&self) -> bool {
        matches!(self.conclusion, Conclusion::TotallyRamifiedAll { .. })
    }

    /// Exponent k with ℓ^k | D_{F′/F} when the analysis proves one.
    pub fn divides_exponent(&self) -> Option<u32> {
        match self.conclusion {
            Conclusion::Divides { exponent } | Conclusion::TotallyRamifiedAll { exponent } => Some(exponent),
            Conclusion::Inconclusive { .. } => None,
        }
    }
}

/// The prime 𝔭 with everything needed to work in O_F/𝔭^k.
struct LocalContext<'a> {
    field: &'a Arc<NumberField>,
    prime: PrimeFactor,
    modulus: BigInt,
    alpha: IntPolynomial,
}

impl LocalContext<'_> {
    fn new<'a>(field: &'a Arc<NumberField>, alpha: &FieldElement, p: &PrimeFactor, cap: u32) -> Result<LocalContext<'a>> {
        let k = (p.f * cap + 1).max(INITIAL_PRECISION);
        let prime = p.with_precision(field.minpoly(), k)?;
        let modulus = num_traits::pow(BigInt::from(p.ell), k as usize);
        let alpha = element_mod(alpha, &modulus)
            .ok_or_else(|| Error::domain("kummer", format!("α is not integral at {}", p.ell)))?;
        Ok(LocalContext { field, prime, modulus, alpha })
    }

    fn mul(&self, a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        mulmod(a, b, &self.prime.local_block, &self.modulus)
    }

    fn pow(&self, a: &IntPolynomial, e: u64) -> IntPolynomial {
        powmod(a, e, &self.prime.local_block, &self.modulus)
    }

    fn val(&self, y: &IntPolynomial, cap: u32) -> Result<u32> {
        valuation_capped(y, &self.prime, self.field.minpoly(), cap)
    }
}

fn residue_reps(ell: u64, f: u32) -> Vec<IntPolynomial> {
    let total = ell.pow(f);
    (0..total)
        .map(|mut n| {
            let mut c = Vec::with_capacity(f as usize);
            for _ in 0..f {
                c.push(BigInt::from(n % ell));
                n /= ell;
            }
            IntPolynomial::new(c)
        })
        .collect()
}

/// Exhaustive search for solutions of x^ℓ ≡ α modulo 𝔭^k, one level of
/// 𝔭-adic digits at a time. A solution modulo 𝔭^{2e+1} lifts to a 𝔭-adic
/// root by Hensel's lemma, so the search stops there.
fn brute_force_a(ctx: &LocalContext<'_>, pi: &IntPolynomial) -> Result<AValue> {
    let (ell, e, f) = (ctx.prime.ell, ctx.prime.e, ctx.prime.f);
    let kmax = 2 * e + 1;
    let reps = residue_reps(ell, f);
    let ok = |x: &IntPolynomial, k: u32| -> Result<bool> {
        let y = &ctx.pow(x, ell) - &ctx.alpha;
        Ok(ctx.val(&y, k)? >= k)
    };
    let mut level = Vec::new();
    for r in reps.iter().filter(|r| !r.is_zero()) {
        if ok(r, 1)? {
            level.push(r.clone());
        }
    }
    if level.is_empty() {
        return Ok(AValue::Finite(0));
    }
    let mut pij = pi.clone();
    for j in 1..kmax {
        let mut next = Vec::new();
        for x in &level {
            for r in &reps {
                let cand = (x + &ctx.mul(r, &pij)).reduce_mod(&ctx.modulus);
                if ok(&cand, j + 1)? {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return Ok(AValue::Finite(j));
        }
        level = next;
        pij = ctx.mul(&pij, pi);
    }
    Ok(AValue::Unbounded)
}

fn analyze_prime(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64, p: &PrimeFactor) -> Result<PrimeRecord> {
    let w_cap = (ell as u32 + 2).max(2 * p.e + 2);
    let ctx = LocalContext::new(field, alpha, p, w_cap)?;
    if ctx.val(&ctx.alpha, 1)? != 0 {
        return Err(Error::domain(
            "kummer",
            format!("ℓO_F and αO_F are not coprime: α lies in a prime over {ell}"),
        ));
    }
    let q = ell
        .checked_pow(p.f)
        .ok_or_else(|| Error::Unsupported { module: "kummer", message: "residue field too large".into() })?;
    let x1 = ctx.pow(&ctx.alpha, q - 1);
    let w = ctx.val(&(&x1 - &IntPolynomial::one()), w_cap)?;
    let shortcut = if w == 1 {
        Some(AValue::Finite(1))
    } else if p.e == 1 && ell != 2 {
        // U_1^ℓ = U_2 in an unramified completion with ℓ odd.
        Some(AValue::Unbounded)
    } else {
        None
    };
    let within = p.quotient_size(2 * p.e + 1).is_some_and(|s| s <= MAX_QUOTIENT);
    let brute = if within {
        let pi = uniformizer(field, p)?.integer_numerator().0;
        Some(brute_force_a(&ctx, &pi)?)
    } else {
        None
    };
    let (a, branch) = match (shortcut, brute) {
        (Some(s), Some(b)) if s != b => {
            return Err(Error::internal(
                "kummer",
                format!("a(𝔭) shortcut gave {s} but residue search gave {b} at a prime over {ell}"),
            ))
        }
        (Some(s), _) => (s, Branch::ValuationShortcut),
        (None, Some(b)) => (b, Branch::BruteForce),
        (None, None) => {
            return Err(Error::SearchExhausted {
                module: "kummer",
                message: format!("quotient O_F/𝔭^{} exceeds {MAX_QUOTIENT}", 2 * p.e + 1),
            })
        }
    };
    Ok(PrimeRecord { g: p.g.clone(), e: p.e, f: p.f, w, w_cap, a, branch, brute_force_checked: brute.is_some() })
}

fn records(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64) -> Result<Vec<PrimeRecord>> {
    if !is_prime_u64(ell) {
        return Err(Error::domain("kummer", format!("{ell} is not prime")));
    }
    if alpha.is_zero() {
        return Err(Error::domain("kummer", "α must be nonzero"));
    }
    let report = split_prime(field, ell, INITIAL_PRECISION)?;
    report.factors.iter().map(|p| analyze_prime(field, alpha, ell, p)).collect()
}

/// a(𝔭) and the branch that decided it.
pub fn a_invariant(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64, p: &PrimeFactor) -> Result<(AValue, Branch)> {
    if !is_prime_u64(ell) || p.ell != ell {
        return Err(Error::domain("kummer", format!("prime factor does not lie over {ell}")));
    }
    let r = analyze_prime(field, alpha, ell, p)?;
    Ok((r.a, r.branch))
}

/// Runs the exhaustive residue search regardless of the shortcut.
pub fn a_invariant_brute_force(field: &Arc<NumberField>, alpha: &FieldElement, p: &PrimeFactor) -> Result<AValue> {
    if p.quotient_size(2 * p.e + 1).map_or(true, |s| s > MAX_QUOTIENT) {
        return Err(Error::SearchExhausted {
            module: "kummer",
            message: format!("quotient O_F/𝔭^{} exceeds {MAX_QUOTIENT}", 2 * p.e + 1),
        });
    }
    let ctx = LocalContext::new(field, alpha, p, 2 * p.e + 2)?;
    let pi = uniformizer(field, p)?.integer_numerator().0;
    brute_force_a(&ctx, &pi)
}

fn base(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64, records: Vec<PrimeRecord>) -> KummerAnalysis {
    let irreducible_certified = !records.is_empty() && records.iter().all(|r| r.w == 1);
    KummerAnalysis {
        field: field.minpoly().clone(),
        alpha: alpha.to_strings(),
        ell,
        records,
        rho_used: None,
        conclusion: Conclusion::Inconclusive { reason: String::new() },
        irreducible_certified,
    }
}

/// Checks a(𝔭) ≤ 1 + ℓ(1 − ρ) and a(𝔭) < ℓe/(ℓ−1) at every 𝔭 | ℓ; when
/// both hold, ℓ^⌈ρℓ⌉ divides D_{F′/F}.
pub fn check_acolem(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64, rho: &BigRational) -> Result<KummerAnalysis> {
    let half = BigRational::new(1.into(), 2.into());
    if *rho < half || *rho >= BigRational::one() {
        return Err(Error::domain("kummer", format!("ρ = {} is outside [1/2, 1)", format_rational(rho))));
    }
    let recs = records(field, alpha, ell)?;
    let l = BigRational::from_integer(BigInt::from(ell));
    let bound = BigRational::one() + &l * (BigRational::one() - rho);
    let failing: Vec<String> = recs
        .iter()
        .filter(|r| match r.a {
            // a ≥ ℓe/(ℓ−1) is where 𝔭 can stay unramified (x^2 − 5 at 2)
            AValue::Finite(a) => {
                let a = BigRational::from_integer(BigInt::from(a));
                let unram = BigRational::new(BigInt::from(ell * r.e as u64), BigInt::from(ell - 1));
                a > bound || a >= unram
            }
            AValue::Unbounded => true,
        })
        .map(|r| format!("a = {} at the prime with residue factor {}", r.a, r.g))
        .collect();
    let mut out = base(field, alpha, ell, recs);
    out.rho_used = Some(format_rational(rho));
    out.conclusion = if failing.is_empty() {
        let exponent = ceil_rational(&(rho * &l));
        Conclusion::Divides { exponent: u32::try_from(exponent).expect("small exponent") }
    } else {
        Conclusion::Inconclusive {
            reason: format!("a(𝔭) > 1 + ℓ(1 − ρ) = {}: {}", format_rational(&bound), failing.join("; ")),
        }
    };
    Ok(out)
}

/// Checks v_𝔭(α^{ℓ^f−1} − 1) = 1 at every 𝔭 | ℓ; when it holds, every 𝔭 is
/// totally ramified in F′/F, ℓ^ℓ divides D_{F′/F}, and x^ℓ − α is
/// irreducible over F.
pub fn check_a1(field: &Arc<NumberField>, alpha: &FieldElement, ell: u64) -> Result<KummerAnalysis> {
    let recs = records(field, alpha, ell)?;
    let failing: Vec<String> = recs
        .iter()
        .filter(|r| r.w != 1)
        .map(|r| {
            let w = if r.w >= r.w_cap { format!(">= {}", r.w_cap) } else { r.w.to_string() };
            format!("v(α^(ℓ^f−1) − 1) = {w} at the prime with residue factor {}", r.g)
        })
        .collect();
    let mut out = base(field, alpha, ell, recs);
    out.conclusion = if failing.is_empty() {
        Conclusion::TotallyRamifiedAll { exponent: ell as u32 }
    } else {
        Conclusion::Inconclusive { reason: failing.join("; ") }
    };
    Ok(out)
}

/// v_𝔭(D_{F′/F}) = (ℓ−1)(ℓe/(ℓ−1) + 1 − a) for F containing ζ_ℓ, where
/// ℓ − 1 divides e.
pub fn hecke_valuation(e: u32, a: u32, ell: u64) -> Result<i64> {
    let l = ell as i64;
    if ell < 2 || e as i64 % (l - 1) != 0 {
        return Err(Error::domain("kummer", format!("ℓ − 1 = {} does not divide e = {e}", l - 1)));
    }
    Ok((l - 1) * (l * e as i64 / (l - 1) + 1 - a as i64))
}

/// Result of the threshold scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Smallest prime c with the inequality holding at every prime ℓ ≥ c.
    pub c: u64,
    /// Beyond this point the inequality holds analytically.
    pub analytic_bound: f64,
}

const THRESHOLD_SCAN_LIMIT: f64 = 1e8;

/// Left and right sides of d·log 2/log ℓ + (ℓ−1)·d·h/log ℓ ≤ 1 + ℓ(1 − ρ).
pub fn threshold_sides(d: usize, h_alpha: f64, rho: f64, ell: f64) -> (f64, f64) {
    let d = d as f64;
    let lhs = (d * std::f64::consts::LN_2 + (ell - 1.0) * d * h_alpha) / ell.ln();
    (lhs, 1.0 + ell * (1.0 - rho))
}

/// Smallest prime c such that the valuation inequality bounding a(𝔭) holds
/// for every prime ℓ ≥ c. Past ℓ = exp(max(d log 2, d·h/(1 − ρ))) both
/// terms of the left side are dominated, so the scan is finite.
pub fn corollary_v_threshold(d: usize, h_alpha: f64, rho: f64) -> Result<Threshold> {
    if !(0.5..1.0).contains(&rho) || !(h_alpha >= 0.0) || d == 0 {
        return Err(Error::domain("kummer", "need d >= 1, h(α) >= 0 and 1/2 <= ρ < 1"));
    }
    let dd = d as f64;
    let log_t = (dd * std::f64::consts::LN_2).max(dd * h_alpha / (1.0 - rho));
    let analytic_bound = log_t.exp().max(2.0);
    if analytic_bound > THRESHOLD_SCAN_LIMIT {
        return Err(Error::SearchExhausted {
            module: "kummer",
            message: format!("threshold scan would need primes up to {analytic_bound:e}"),
        });
    }
    let mut c = 2;
    for p in primes().take_while(|&p| (p as f64) <= analytic_bound) {
        let (l, r) = threshold_sides(d, h_alpha, rho, p as f64);
        if l > r {
            c = crate::arith::next_prime(p + 1);
        }
    }
    Ok(Threshold { c, analytic_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn qa(n: i64) -> FieldElement {
        FieldElement::from_int(&q(), n)
    }

    fn rho(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn a_over_q(alpha: i64, ell: u64) -> AValue {
        let f = q();
        let p = split_prime(&f, ell, 8).unwrap().factors[0].clone();
        a_invariant(&f, &qa(alpha), ell, &p).unwrap().0
    }

    #[test]
    fn a_invariant_examples() {
        assert_eq!(a_over_q(2, 3), AValue::Finite(1));
        assert_eq!(a_over_q(2, 5), AValue::Finite(1));
        // 7 ≡ 22^5 (mod 125) and 7 is a 5-adic fifth power.
        assert_eq!(a_over_q(7, 5), AValue::Unbounded);
        let f = q();
        let p = split_prime(&f, 5, 8).unwrap().factors[0].clone();
        assert_eq!(a_invariant_brute_force(&f, &qa(7), &p).unwrap(), AValue::Unbounded);
        assert!(a_invariant(&f, &qa(10), 5, &p).is_err());
    }

    #[test]
    fn a_invariant_at_two() {
        // Over Q_2: odd α is a square iff α ≡ 1 mod 8.
        assert_eq!(a_over_q(3, 2), AValue::Finite(1));
        assert_eq!(a_over_q(5, 2), AValue::Finite(2));
        assert_eq!(a_over_q(17, 2), AValue::Unbounded);
    }

    #[test]
    fn lemma_examples() {
        let r = check_acolem(&q(), &qa(2), 5, &rho(3, 4)).unwrap();
        assert_eq!(r.conclusion, Conclusion::Divides { exponent: 4 });
        let r = check_acolem(&q(), &qa(10), 3, &rho(3, 4)).unwrap();
        assert!(matches!(r.conclusion, Conclusion::Inconclusive { .. }));
        assert_eq!(r.records[0].w, 2);
        let r = check_acolem(&q(), &qa(2), 7, &rho(1, 2)).unwrap();
        assert_eq!(r.conclusion, Conclusion::Divides { exponent: 4 });
        assert!(check_acolem(&q(), &qa(2), 7, &rho(1, 1)).is_err());
        // a = 2 at 2 for α = 5 meets a ≤ 1 + 2(1 − 1/2), yet ℚ(√5) is unramified at 2
        let r = check_acolem(&q(), &qa(5), 2, &rho(1, 2)).unwrap();
        assert_eq!(r.records[0].a, AValue::Finite(2));
        assert!(matches!(r.conclusion, Conclusion::Inconclusive { .. }));
        let r = check_acolem(&q(), &qa(3), 2, &rho(1, 2)).unwrap();
        assert_eq!(r.conclusion, Conclusion::Divides { exponent: 1 });
    }

    #[test]
    fn a1_examples() {
        let r = check_a1(&q(), &qa(2), 5).unwrap();
        assert_eq!(r.conclusion, Conclusion::TotallyRamifiedAll { exponent: 5 });
        assert!(r.irreducible_certified);
        let r = check_a1(&q(), &qa(7), 5).unwrap();
        assert!(matches!(r.conclusion, Conclusion::Inconclusive { .. }));
        assert!(!r.irreducible_certified);
    }

    #[test]
    fn gaussian_field_records() {
        let gi = NumberField::parse("x^2+1").unwrap();
        let alpha = FieldElement::parse(&gi, "3,1").unwrap();
        let r = check_a1(&gi, &alpha, 3).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].f, 2);
        assert!(r.records[0].brute_force_checked);
    }

    #[test]
    fn ramified_base_uses_brute_force() {
        let gi = NumberField::parse("x^2+1").unwrap();
        let alpha = FieldElement::parse(&gi, "0,1").unwrap();
        let p = split_prime(&gi, 2, 8).unwrap().factors[0].clone();
        let (a, branch) = a_invariant(&gi, &alpha, 2, &p).unwrap();
        assert_eq!(branch, Branch::ValuationShortcut);
        assert_eq!(a, AValue::Finite(1));
        let three = FieldElement::from_int(&gi, 3);
        let (a, branch) = a_invariant(&gi, &three, 2, &p).unwrap();
        assert_eq!(branch, Branch::BruteForce);
        // -1 = i^2 and 3 = -1 + 4, so 3 is a square mod 𝔭^4 = (4).
        assert!(matches!(a, AValue::Finite(k) if k >= 2) || a == AValue::Unbounded);
    }

    #[test]
    fn hecke_formula() {
        assert_eq!(hecke_valuation(4, 1, 5).unwrap(), 20);
        assert_eq!(hecke_valuation(1, 1, 2).unwrap(), 2);
        assert!(hecke_valuation(3, 1, 5).is_err());
    }

    #[test]
    fn threshold_examples() {
        let t = corollary_v_threshold(1, 1e-9, 0.75).unwrap();
        assert_eq!(t.c, 2);
        for (d, h, r) in [(1, std::f64::consts::LN_2, 0.75), (2, 3f64.ln(), 0.5)] {
            let t = corollary_v_threshold(d, h, r).unwrap();
            let ps: Vec<u64> = primes().take_while(|&p| p < 10_000).collect();
            for &p in ps.iter().filter(|&&p| p >= t.c) {
                let (lhs, rhs) = threshold_sides(d, h, r, p as f64);
                assert!(lhs <= rhs, "fails at {p}");
            }
            let prev = ps.iter().rev().find(|&&p| p < t.c);
            if let Some(&p) = prev {
                let (lhs, rhs) = threshold_sides(d, h, r, p as f64);
                assert!(lhs > rhs);
            }
        }
    }
}
