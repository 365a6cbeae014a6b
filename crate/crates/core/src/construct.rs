//! Explicit constructions: admissible Kummer generators, small-height
//! witnesses, quadratic tower bounds and trinomial tower steps.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_root_rational, is_prime_u64, primes, valuation};
use crate::bounds::{excess_discriminant, prefall_bound, ExcessEvidence, ExcessInput, PowerProduct};
use crate::error::{Error, Result};
use crate::field::{certify_irreducible, FieldElement, IrreducibilityWitness, NumberField};
use crate::height::{height, height_of_minpoly, DEFAULT_DIGITS};
use crate::ideal::{crt_solve, split_prime, uniformizer, valuation_capped, INITIAL_PRECISION};
use crate::interval::{sig15, Interval};
use crate::kummer::{check_a1, KummerAnalysis};
use crate::modp::splits_completely;
use crate::poly::{format_rational, IntPolynomial};
use crate::resultant::poly_discriminant;

/// Per-prime record of v_𝔭(α^{ℓ^f−1} − 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaCheck {
    pub g: IntPolynomial,
    pub f: u32,
    pub uniformizer: Vec<String>,
    pub valuation: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaConstruction {
    pub field: IntPolynomial,
    pub ell: u64,
    pub alpha: Vec<String>,
    pub checks: Vec<AlphaCheck>,
    pub kummer: KummerAnalysis,
    #[serde(skip)]
    pub element: Option<FieldElement>,
}

/// α ≡ 1 + π_𝔭 (mod 𝔭²) at every 𝔭 | ℓ, so that v_𝔭(α^{ℓ^f−1} − 1) = 1.
pub fn construct_alpha(field: &Arc<NumberField>, ell: u64) -> Result<AlphaConstruction> {
    if !is_prime_u64(ell) {
        return Err(Error::domain("constructor", format!("{ell} is not prime")));
    }
    let report = split_prime(field, ell, INITIAL_PRECISION)?;
    if !report.is_unramified() {
        return Err(Error::Unsupported {
            module: "constructor",
            message: format!("{ell} ramifies in the base field"),
        });
    }
    let mut targets = Vec::new();
    let mut pis = Vec::new();
    for p in &report.factors {
        let pi = uniformizer(field, p)?;
        let beta = &FieldElement::one(field) + &pi;
        pis.push(pi);
        targets.push((p.clone(), beta, 2u32));
    }
    let alpha = crt_solve(field, &targets)?;
    let mut checks = Vec::new();
    for (p, pi) in report.factors.iter().zip(&pis) {
        let q = (ell as i64)
            .checked_pow(p.f)
            .ok_or_else(|| Error::Unsupported { module: "constructor", message: "residue field too large".into() })?;
        let y = &alpha.pow(q - 1)? - &FieldElement::one(field);
        let (num, _) = y.integer_numerator();
        let v = valuation_capped(&num, p, field.minpoly(), 3)?;
        checks.push(AlphaCheck { g: p.g.clone(), f: p.f, uniformizer: pi.to_strings(), valuation: v });
    }
    let kummer = check_a1(field, &alpha, ell)?;
    if checks.iter().any(|c| c.valuation != 1) || !kummer.is_totally_ramified() {
        return Err(Error::internal("constructor", "constructed α fails v(α^(ℓ^f−1) − 1) = 1"));
    }
    Ok(AlphaConstruction {
        field: field.minpoly().clone(),
        ell,
        alpha: alpha.to_strings(),
        checks,
        kummer,
        element: Some(alpha),
    })
}

/// b^{x} with x = −1/3 + 2^{−k}, whose height is 2^{−k}·h(b).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessItem {
    pub k: u32,
    pub x: String,
    pub element: String,
    pub formula: String,
    pub height: f64,
    pub decimal: String,
    pub below_target: bool,
    /// Height of b^{1/2^k} computed from its minimal polynomial, for k ≤ 4.
    pub engine_check: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSequence {
    pub description: String,
    pub b: String,
    pub target: f64,
    pub first_below_target: Option<u32>,
    pub items: Vec<WitnessItem>,
}

const ENGINE_CHECK_MAX_K: u32 = 4;

/// h(b^{1/n}) computed by the height engine on ℚ(b^{1/n}).
fn engine_root_height(b: &BigRational, n: usize) -> Result<f64> {
    let (p, q) = (b.numer().clone(), b.denom().clone());
    // θ = q·b^{1/n} is a root of x^n − p·q^{n−1}
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = -(&p * num_traits::pow(q.clone(), n - 1));
    c[n] = BigInt::one();
    let mono = IntPolynomial::new(c);
    match NumberField::new(mono) {
        Ok(field) => {
            let elem = FieldElement::theta(&field).div(&FieldElement::from_rational(&field, BigRational::from_integer(q.clone())))?;
            Ok(height(&elem, DEFAULT_DIGITS)?.value)
        }
        Err(Error::IrreducibilityNotCertified(_)) => {
            let mut c = vec![BigInt::zero(); n + 1];
            c[0] = -p;
            c[n] = q;
            Ok(height_of_minpoly(&IntPolynomial::new(c), DEFAULT_DIGITS)?.value)
        }
        Err(e) => Err(e),
    }
}

/// Elements b^{1/3}·b^{x} of heights (x + 1/3)·h(b) → 0.
pub fn nonbog_witnesses(b: &BigRational, k_max: u32, target: f64) -> Result<WitnessSequence> {
    if *b <= BigRational::one() {
        return Err(Error::domain("constructor", "b must exceed 1"));
    }
    if exact_root_rational(b, 2).is_some() {
        return Err(Error::domain("constructor", format!("{} is a square", format_rational(b))));
    }
    if k_max < 2 {
        return Err(Error::domain("constructor", "k_max must be at least 2"));
    }
    let big = b.numer().abs().max(b.denom().abs());
    let prec = 160;
    let hb = Interval::from_rational(&BigRational::from_integer(big.clone()), prec).ln();
    let bs = format_rational(b).trim_end_matches("/1").to_string();
    let mut items = Vec::new();
    let mut first = None;
    for k in 2..=k_max {
        let two_k = num_traits::pow(BigInt::from(2), k as usize);
        let x = BigRational::new(BigInt::one(), two_k.clone()) - BigRational::new(BigInt::one(), BigInt::from(3));
        let h = &hb / &Interval::from_rational(&BigRational::from_integer(two_k.clone()), prec);
        let below = h.hi_f64() < target;
        if below && first.is_none() {
            first = Some(k);
        }
        let engine_check = if k <= ENGINE_CHECK_MAX_K { Some(engine_root_height(b, 1 << k)?) } else { None };
        items.push(WitnessItem {
            k,
            x: format_rational(&x),
            element: format!("{bs}^(1/3) * {bs}^({})", format_rational(&x)),
            formula: format!("2^(-{k}) * log({big})"),
            height: h.mid_f64(),
            decimal: h.to_decimal(DEFAULT_DIGITS),
            below_target: below,
            engine_check,
        });
    }
    Ok(WitnessSequence {
        description: format!("b^(1/3) * b^x with x = -1/3 + 2^-k, b = {bs}; h = 2^-k * h(b)"),
        b: format_rational(b),
        target,
        first_below_target: first,
        items,
    })
}

/// The smallest prime q ≡ 3 (mod 4), q > 3, other than p.
fn companion_prime(p: u64) -> u64 {
    primes().find(|&q| q > 3 && q % 4 == 3 && q != p).expect("infinitely many primes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerBound {
    pub p: u64,
    pub excess: ExcessInput,
    pub excess_value: PowerProduct,
    pub bound: PowerProduct,
}

/// Lower bound for H(γ), γ ∈ K_n \ K_{n−1} with K_n = K_{n−1}(√p): the
/// relative discriminant 4p of ℚ(√p) loses its 2-part to the prime 2,
/// already ramified in ℚ(√q) ⊂ K_{n−1}, leaving excess p.
pub fn tower_bound_42(p: u64) -> Result<TowerBound> {
    if !is_prime_u64(p) || p % 4 != 3 || p <= 3 {
        return Err(Error::domain("constructor", format!("need a prime p ≡ 3 (mod 4) with p > 3, got {p}")));
    }
    let q = companion_prime(p);
    let excess = ExcessInput {
        norm_dc: BigInt::from(4 * p),
        s: 2,
        evidence: ExcessEvidence::FiniteFamily { family: vec![(1, BigInt::one()), (2, BigInt::from(4 * q))] },
    };
    let value = excess_discriminant(&excess)?.value;
    let bound = prefall_bound(2, 1, &BigRational::one(), &value)?;
    Ok(TowerBound { p, excess, excess_value: value, bound })
}

/// One field K_n = K_{n−1}(root of x^b + x + 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerStep {
    pub index: usize,
    pub b: u64,
    /// Discriminant computed by resultant.
    pub disc: String,
    /// The closed form b^b − (b−1)^{b−1}, valid for 4 | b.
    pub disc_closed_form: String,
    /// −(b^b + (b−1)^{b−1}) as quoted in the literature.
    pub disc_formula_value: String,
    pub disc_matches_closed_form: bool,
    pub disc_matches_formula: bool,
    pub split_prime: u64,
    pub height: f64,
    pub height_decimal: String,
    pub height_upper: f64,
    pub irreducibility: IrreducibilityWitness,
}

pub const SPLIT_SEARCH_BOUND: u64 = 1_000_000;
/// Largest degree whose root height is isolated numerically.
pub const MAX_TRINOMIAL_DEGREE: u64 = 240;

pub fn trinomial(b: u64) -> IntPolynomial {
    let mut c = vec![BigInt::zero(); b as usize + 1];
    c[0] = BigInt::one();
    c[1] = BigInt::one();
    c[b as usize] = BigInt::one();
    IntPolynomial::new(c)
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Appends x^b + x + 1 to a tower. ℓ_n is the least prime not used before,
/// unramified so far and split completely in every prior step; b must be
/// divisible by 12·ℓ_1⋯ℓ_n.
pub fn trinomial_step(prior: &[TowerStep], b: u64) -> Result<TowerStep> {
    if b == 0 || b % 12 != 0 {
        return Err(Error::domain("constructor", format!("b = {b} is not a positive multiple of 12")));
    }
    if b > MAX_TRINOMIAL_DEGREE {
        return Err(Error::Unsupported {
            module: "constructor",
            message: format!("degree {b} exceeds {MAX_TRINOMIAL_DEGREE}"),
        });
    }
    let f = trinomial(b);
    let disc = poly_discriminant(&f)?;
    let bb = num_traits::pow(BigInt::from(b), b as usize);
    let bm = num_traits::pow(BigInt::from(b - 1), b as usize - 1);
    let closed = &bb - &bm;
    let quoted = -(&bb + &bm);
    let mut prior_discs = Vec::new();
    for s in prior {
        let d = parse_int(&s.disc)?;
        let g = d.gcd(&disc);
        if !g.is_one() {
            return Err(Error::precondition(
                "constructor",
                format!("disc(x^{b}+x+1) shares the factor {g} with step {}", s.index),
            ));
        }
        prior_discs.push(d);
    }
    let prior_polys: Vec<IntPolynomial> = prior.iter().map(|s| trinomial(s.b)).collect();
    let used: Vec<u64> = prior.iter().map(|s| s.split_prime).collect();
    let ell = primes()
        .take_while(|&l| l <= SPLIT_SEARCH_BOUND)
        .find(|&l| {
            !used.contains(&l)
                && prior_discs.iter().all(|d| valuation(d, l) == 0)
                && prior_polys.iter().all(|g| splits_completely(g, l))
        })
        .ok_or_else(|| Error::SearchExhausted {
            module: "constructor",
            message: format!("no new prime <= {SPLIT_SEARCH_BOUND} splits completely in every prior step"),
        })?;
    let needed = used.iter().fold(12u64.lcm(&ell), |acc, &l| acc.lcm(&l));
    if b % needed != 0 {
        return Err(Error::precondition(
            "constructor",
            format!("b must be divisible by {needed} (12 times the split primes {used:?} and {ell})"),
        ));
    }
    if valuation(&disc, ell) != 0 {
        return Err(Error::internal("constructor", format!("{ell} divides disc(x^{b}+x+1)")));
    }
    let irreducibility = certify_irreducible(&f)?;
    let h = height_of_minpoly(&f, DEFAULT_DIGITS)?;
    let upper = std::f64::consts::LN_2 / (b - 1) as f64;
    if h.is_zero || h.lo() <= 0.0 || h.hi() > upper {
        return Err(Error::internal("constructor", format!("root height {} outside (0, log2/{}]", h.decimal, b - 1)));
    }
    Ok(TowerStep {
        index: prior.len() + 1,
        b,
        disc_matches_closed_form: disc == closed,
        disc_matches_formula: disc == quoted,
        disc: disc.to_string(),
        disc_closed_form: closed.to_string(),
        disc_formula_value: quoted.to_string(),
        split_prime: ell,
        height: h.value,
        height_decimal: h.decimal,
        height_upper: upper,
        irreducibility,
    })
}

/// CSV rows (index, formula value, decimal height) for a tower.
pub fn tower_csv(steps: &[TowerStep]) -> String {
    let mut out = String::from("index,b,disc,split_prime,height,height_upper\n");
    for s in steps {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.index,
            s.b,
            s.disc,
            s.split_prime,
            s.height_decimal,
            sig15(s.height_upper)
        ));
    }
    out
}

/// CSV rows for a witness sequence.
pub fn witnesses_csv(seq: &WitnessSequence) -> String {
    let mut out = String::from("k,x,formula,height\n");
    for it in &seq.items {
        out.push_str(&format!("{},{},{},{}\n", it.k, it.x, it.formula, it.decimal));
    }
    out
}
