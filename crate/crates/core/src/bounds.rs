//! Lower bounds for multiplicative heights: Silverman's discriminant bound,
//! Garza's archimedean bound, the norm excess discriminant, the relative
//! ramification criterion, and certificates for x^ℓ − α extensions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, trial_factor};
use crate::error::{Error, Result};
use crate::field::{ElementRecord, FieldElement, NumberField};
use crate::interval::{sig15, Interval};
use crate::kummer::{check_a1, KummerAnalysis};
use crate::poly::{format_rational, parse_rational, IntPolynomial};
use crate::scalar::RealScalar;

/// Working precision for symbolic comparisons (about 50 decimal digits).
pub const COMPARE_BITS: u32 = 170;
const MAX_COMPARE_BITS: u32 = 4096;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// An exact value Π bᵢ^{eᵢ} with positive rational bases and rational
/// exponents, kept with prime bases where trial division allows.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PowerProduct {
    factors: BTreeMap<BigRational, BigRational>,
}

const FACTOR_BOUND: u64 = 1 << 20;

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    /// base^exp for a positive rational base.
    pub fn power(base: BigRational, exp: BigRational) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::domain("bounds", "power product bases must be positive"));
        }
        let mut out = PowerProduct::one();
        out.absorb_integer(base.numer(), &exp);
        out.absorb_integer(base.denom(), &-exp);
        Ok(out)
    }

    pub fn int_power(base: u64, num: i64, den: i64) -> Self {
        PowerProduct::power(int(base), rat(num, den)).expect("positive base")
    }

    fn absorb_integer(&mut self, n: &BigInt, exp: &BigRational) {
        if n.is_one() || exp.is_zero() {
            return;
        }
        let fac = trial_factor(n.magnitude(), FACTOR_BOUND);
        for (p, k) in &fac.primes {
            self.add_exp(int(BigInt::from(p.clone())), exp * int(*k));
        }
        if !fac.cofactor.is_one() {
            self.add_exp(int(BigInt::from(fac.cofactor.clone())), exp.clone());
        }
    }

    fn add_exp(&mut self, base: BigRational, exp: BigRational) {
        let e = self.factors.entry(base.clone()).or_insert_with(BigRational::zero);
        *e += exp;
        if e.is_zero() {
            self.factors.remove(&base);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, e) in &other.factors {
            out.add_exp(b.clone(), e.clone());
        }
        out
    }

    pub fn pow(&self, q: &BigRational) -> Self {
        let mut out = PowerProduct::one();
        for (b, e) in &self.factors {
            out.add_exp(b.clone(), e * q);
        }
        out
    }

    pub fn recip(&self) -> Self {
        self.pow(&int(-1))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.factors.iter()
    }

    /// Enclosure of the natural logarithm.
    pub fn ln_interval(&self, prec: u32) -> Interval {
        let mut acc = Interval::from_int(0, prec);
        for (b, e) in &self.factors {
            acc = &acc + &(&Interval::from_rational(b, prec).ln() * &Interval::from_rational(e, prec));
        }
        acc
    }

    pub fn to_interval(&self, prec: u32) -> Interval {
        self.ln_interval(prec).exp()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_interval(COMPARE_BITS).mid_f64()
    }

    /// Exact comparison with 1. With prime bases the logarithm vanishes only
    /// for the empty product, so raising precision settles every case.
    pub fn cmp_one(&self) -> Ordering {
        if self.is_one() {
            return Ordering::Equal;
        }
        if self.factors.iter().all(|(b, e)| (b > &int(1)) == e.is_positive()) {
            return Ordering::Greater;
        }
        if self.factors.iter().all(|(b, e)| (b > &int(1)) != e.is_positive()) {
            return Ordering::Less;
        }
        let mut prec = COMPARE_BITS;
        loop {
            let l = self.ln_interval(prec);
            if l.is_positive() {
                return Ordering::Greater;
            }
            if l.is_negative() {
                return Ordering::Less;
            }
            if prec >= MAX_COMPARE_BITS {
                return Ordering::Equal;
            }
            prec *= 2;
        }
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        self.mul(&other.recip()).cmp_one()
    }

    /// Exponent records as ("base", "exp") strings.
    pub fn to_records(&self) -> Vec<PowerRecord> {
        self.factors
            .iter()
            .map(|(b, e)| PowerRecord { base: format_rational(b), exp: format_rational(e) })
            .collect()
    }

    pub fn from_records(records: &[PowerRecord]) -> Result<Self> {
        let mut out = PowerProduct::one();
        for r in records {
            out = out.mul(&PowerProduct::power(parse_rational(&r.base)?, parse_rational(&r.exp)?)?);
        }
        Ok(out)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                let b = format_rational(b).trim_end_matches("/1").to_string();
                if e.is_one() {
                    b
                } else {
                    format!("{b}^({})", format_rational(e))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRecord {
    pub base: String,
    pub exp: String,
}

impl Serialize for PowerProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs = Vec::<PowerRecord>::deserialize(d)?;
        PowerProduct::from_records(&recs).map_err(serde::de::Error::custom)
    }
}

/// Silverman: H(γ) ≥ s^{−δ(M)/(2d(s−1))} · N(D_{B/M})^{1/(2ds(s−1))} for γ
/// generating B/M with [B:M] = s and [B:ℚ] = d.
pub fn silverman_bound(s: u64, d_abs: u64, delta_m: u64, norm_rel_disc: &BigInt) -> Result<PowerProduct> {
    if s < 2 {
        return Err(Error::domain("bounds", "Silverman's bound needs s >= 2"));
    }
    if d_abs == 0 || delta_m == 0 || !norm_rel_disc.is_positive() {
        return Err(Error::domain("bounds", "need d >= 1, δ(M) >= 1 and N(D) >= 1"));
    }
    let (s_i, d, dm) = (s as i64, d_abs as i64, delta_m as i64);
    let a = PowerProduct::power(int(s), rat(-dm, 2 * d * (s_i - 1)))?;
    let b = PowerProduct::power(int(norm_rel_disc.clone()), rat(1, 2 * d * s_i * (s_i - 1)))?;
    Ok(a.mul(&b))
}

/// (2^{−x} + √(1 + 4^{−x}))^{1/(2x)}, the archimedean bound as a function
/// of x = d/r.
pub fn garza_from_ratio<S: RealScalar>(x: &S) -> S {
    let two = S::ratio(2, 1, x);
    let four = S::ratio(4, 1, x);
    let one = S::ratio(1, 1, x);
    let t = two.powf(&-x.clone()) + (one.clone() + four.powf(&-x.clone())).sqrt();
    t.powf(&(one / (S::ratio(2, 1, x) * x.clone())))
}

/// Garza: H(γ) ≥ (2^{−d/r} + √(1 + 4^{−d/r}))^{r/(2d)} when ℚ(γ) has degree
/// d and r ≥ 1 real places.
pub fn garza_bound<S: RealScalar>(d: usize, r: usize, like: &S) -> Result<S> {
    if r == 0 || r > d {
        return Err(Error::domain("bounds", format!("Garza's bound needs 1 <= r <= d, got r = {r}, d = {d}")));
    }
    Ok(garza_from_ratio(&S::ratio(d as i64, r as i64, like)))
}

/// Evidence about the interaction of C/F with ramification in K/F.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExcessEvidence {
    /// Primes ramified in C/F, attested unramified in K/F.
    Disjoint { primes: Vec<u64> },
    /// Finite subextensions M/F given by (e = [M:F], N(D_{M/F})).
    FiniteFamily {
        #[serde(with = "family_str")]
        family: Vec<(u64, BigInt)>,
    },
}

mod family_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(u64, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|(e, n)| (*e, n.to_string())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(u64, BigInt)>, D::Error> {
        Vec::<(u64, String)>::deserialize(d)?
            .into_iter()
            .map(|(e, n)| n.trim().parse().map(|n| (e, n)).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessInput {
    #[serde(with = "crate::arith::bigint_str")]
    pub norm_dc: BigInt,
    pub s: u64,
    pub evidence: ExcessEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessValue {
    pub value: PowerProduct,
    /// True only for disjoint evidence; a finite family gives an upper bound
    /// on the infimum.
    pub certified_lower_bound: bool,
    pub label: String,
}

/// The norm excess discriminant under the given evidence.
pub fn excess_discriminant(input: &ExcessInput) -> Result<ExcessValue> {
    if input.s < 2 || !input.norm_dc.is_positive() {
        return Err(Error::domain("bounds", "need s >= 2 and N(D_C) >= 1"));
    }
    match &input.evidence {
        ExcessEvidence::Disjoint { primes } => {
            let mut rest = input.norm_dc.clone();
            for &p in primes {
                if !is_prime_u64(p) {
                    return Err(Error::domain("bounds", format!("{p} is not prime")));
                }
                let pb = BigInt::from(p);
                while (&rest % &pb).is_zero() {
                    rest /= &pb;
                }
            }
            if !rest.is_one() {
                return Err(Error::domain(
                    "bounds",
                    format!("N(D_C) has prime factors outside the attested set (cofactor {rest})"),
                ));
            }
            Ok(ExcessValue {
                value: PowerProduct::power(int(input.norm_dc.clone()), int(1))?,
                certified_lower_bound: true,
                label: "certified: ramification of C/F disjoint from K/F".into(),
            })
        }
        ExcessEvidence::FiniteFamily { family } => {
            if family.is_empty() {
                return Err(Error::domain("bounds", "empty family"));
            }
            let mut best: Option<PowerProduct> = None;
            for (e, norm_dm) in family {
                if *e < 1 || !norm_dm.is_positive() {
                    return Err(Error::domain("bounds", "family entries need e >= 1 and N(D_M) >= 1"));
                }
                let dce = num_traits::pow(input.norm_dc.clone(), *e as usize);
                let dms = num_traits::pow(norm_dm.clone(), input.s as usize);
                let g = dce.gcd(&dms);
                let v = PowerProduct::power(int(&dce / &g), rat(1, *e as i64))?;
                if best.as_ref().map_or(true, |b| v.compare(b) == Ordering::Less) {
                    best = Some(v);
                }
            }
            Ok(ExcessValue {
                value: best.expect("nonempty family"),
                certified_lower_bound: false,
                label: "upper bound on the infimum over the supplied family".into(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelbocritResult {
    /// Whether 𝓔 > s^{ρs} for every datum.
    pub pass: bool,
    pub per_datum: Vec<bool>,
    /// min over data of (𝓔 · s^{−ρs})^{1/(2ds(s−1))}.
    pub bound: PowerProduct,
}

/// The relative ramification criterion with its explicit bound.
pub fn relbocrit_bound(d: u64, rho: &BigRational, data: &[(u64, PowerProduct)]) -> Result<RelbocritResult> {
    if data.is_empty() {
        return Err(Error::domain("bounds", "no subextension data"));
    }
    let dq = int(d);
    if d == 0 || *rho < &dq / int(2) || *rho > dq {
        return Err(Error::domain("bounds", format!("ρ = {} is outside [d/2, d]", format_rational(rho))));
    }
    let mut per_datum = Vec::new();
    let mut bound: Option<PowerProduct> = None;
    for (s, excess) in data {
        if *s < 2 {
            return Err(Error::domain("bounds", "subextension degrees must be >= 2"));
        }
        let threshold = PowerProduct::power(int(*s), rho * int(*s))?;
        let ratio = excess.mul(&threshold.recip());
        per_datum.push(ratio.cmp_one() == Ordering::Greater);
        let s_i = *s as i64;
        let b = ratio.pow(&(int(1) / (&dq * int(2 * s_i * (s_i - 1)))));
        if bound.as_ref().map_or(true, |x| b.compare(x) == Ordering::Less) {
            bound = Some(b);
        }
    }
    Ok(RelbocritResult { pass: per_datum.iter().all(|&p| p), per_datum, bound: bound.expect("nonempty") })
}

/// s^{−ρ(M/F)/(2d(s−1))} · 𝓔^{1/(2ds(s−1))} for a single subextension.
pub fn prefall_bound(s: u64, d: u64, rho_mf: &BigRational, excess: &PowerProduct) -> Result<PowerProduct> {
    if s < 2 || d == 0 {
        return Err(Error::domain("bounds", "need s >= 2 and d >= 1"));
    }
    let (s_i, d_i) = (s as i64, d as i64);
    let a = PowerProduct::power(int(s), -rho_mf / int(2 * d_i * (s_i - 1)))?;
    Ok(a.mul(&excess.pow(&rat(1, 2 * d_i * s_i * (s_i - 1)))))
}

/// ℓ^{(d−ρ)/(2d(ℓ−1))}, the bound when ρ(K/F) < d.
pub fn nonbound(ell: u64, d: u64, rho: &BigRational) -> PowerProduct {
    let e = (int(d) - rho) / int(2 * d as i64 * (ell as i64 - 1));
    PowerProduct::power(int(ell), e).expect("positive base")
}

/// ℓ^{(1−θ)/(2(ℓ−1))}.
pub fn nonbound2<S: RealScalar>(ell: u64, theta: &S) -> S {
    let l = S::ratio(ell as i64, 1, theta);
    let one = S::ratio(1, 1, theta);
    let den = S::ratio(2 * (ell as i64 - 1), 1, theta);
    l.powf(&((one - theta.clone()) / den))
}

/// Garza's bound at r/d = φ = 2θ − 1 − (ℓ−1)/ℓ.
pub fn archbound<S: RealScalar>(ell: u64, theta: &S) -> S {
    let phi = S::ratio(2, 1, theta) * theta.clone() - S::ratio(1, 1, theta) - S::ratio(ell as i64 - 1, ell as i64, theta);
    garza_from_ratio(&(S::ratio(1, 1, &phi) / phi))
}

/// min of the two θ branches.
pub fn theta_objective<S: RealScalar>(ell: u64, theta: &S) -> S {
    let a = nonbound2(ell, theta);
    let b = archbound(ell, theta);
    if a.to_f64() <= b.to_f64() {
        a
    } else {
        b
    }
}

/// Admissible θ range ((2ℓ−1)/(2ℓ), 1).
pub fn theta_range(ell: u64) -> (f64, f64) {
    ((2 * ell - 1) as f64 / (2 * ell) as f64, 1.0)
}

const GRID: usize = 10_000;

/// θ maximizing min(nonbound2, archbound): grid bracket then golden section.
pub fn optimize_theta(ell: u64) -> (f64, f64) {
    let (lo, hi) = theta_range(ell);
    let step = (hi - lo) / GRID as f64;
    let f = |t: f64| theta_objective(ell, &t);
    let (mut best_i, mut best) = (1, f64::NEG_INFINITY);
    for i in 1..GRID {
        let v = f(lo + step * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (lo + step * (best_i - 1) as f64, lo + step * (best_i + 1) as f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    let t = (a + b) / 2.0;
    let v = f(t);
    if v >= best {
        (t, v)
    } else {
        (lo + step * best_i as f64, best)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertBranch {
    Nonbound,
    Nonbound2,
    Archbound,
    Relbocrit,
}

impl fmt::Display for CertBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertBranch::Nonbound => "nonbound",
            CertBranch::Nonbound2 => "nonbound2",
            CertBranch::Archbound => "archbound",
            CertBranch::Relbocrit => "relbocrit",
        };
        write!(f, "{s}")
    }
}

/// A height-gap record for L = K(ℓ√α) over K ⊇ F.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub field: IntPolynomial,
    pub degree: usize,
    pub signature: (usize, usize),
    pub ell: u64,
    pub alpha: Vec<String>,
    pub rho_k: String,
    pub rho_provenance: String,
    pub branch: CertBranch,
    pub theta: Option<String>,
    /// Exact ε for the nonbound branch.
    pub epsilon_symbolic: Option<PowerProduct>,
    pub epsilon_expr: String,
    pub epsilon: String,
    pub branch_values: BTreeMap<String, String>,
    pub assumptions: Vec<String>,
    pub kummer: KummerAnalysis,
}

const EVAL_BITS: u32 = 200;

fn arch_values(ell: u64, theta: &BigRational) -> (Interval, Interval) {
    let t = Interval::from_rational(theta, EVAL_BITS);
    (nonbound2(ell, &t), archbound(ell, &t))
}

fn theta_rational(t: f64) -> BigRational {
    let scale = 1_000_000_000_000_000i64;
    BigRational::new(BigInt::from((t * scale as f64).round() as i64), BigInt::from(scale))
}

/// Assembles the height-gap certificate for F(ℓ√α) over any K ⊇ F in which
/// no prime over ℓ ramifies, given ρ(K/F) as a declared input.
pub fn finram_certificate(
    field: &Arc<NumberField>,
    alpha: &FieldElement,
    ell: u64,
    rho_k: &BigRational,
    rho_provenance: &str,
    attestations: &[String],
    want_arch: bool,
) -> Result<Certificate> {
    let d = field.degree() as u64;
    let dq = int(d);
    if *rho_k < &dq / int(2) || *rho_k > dq {
        return Err(Error::domain("bounds", format!("ρ(K/F) = {} is outside [d/2, d]", format_rational(rho_k))));
    }
    if attestations.iter().all(|a| a.trim().is_empty()) {
        return Err(Error::precondition("bounds", "an attestation that ℓ is unramified in K/F is required"));
    }
    let kummer = check_a1(field, alpha, ell)?;
    if !kummer.is_totally_ramified() {
        return Err(Error::precondition(
            "bounds",
            format!("x^{ell} − α is not certified totally ramified at every prime over {ell}"),
        ));
    }
    let mut assumptions: Vec<String> = attestations.iter().filter(|a| !a.trim().is_empty()).cloned().collect();
    assumptions.push(format!("ρ(K/F) = {} ({rho_provenance})", format_rational(rho_k)));
    assumptions.push("α satisfies v_p(α^(ℓ^f−1) − 1) = 1 at every prime p over ℓ".into());
    let mut branch_values = BTreeMap::new();
    let (branch, theta, epsilon_symbolic, epsilon_expr, eps) = if *rho_k < dq && !want_arch {
        let e = nonbound(ell, d, rho_k);
        let v = e.to_interval(EVAL_BITS);
        branch_values.insert("nonbound".to_string(), sig15(v.mid_f64()));
        (CertBranch::Nonbound, None, Some(e.clone()), e.to_string(), v)
    } else {
        let (t, _) = optimize_theta(ell);
        let theta = theta_rational(t);
        let (a, b) = arch_values(ell, &theta);
        branch_values.insert("nonbound2".to_string(), sig15(a.mid_f64()));
        branch_values.insert("archbound".to_string(), sig15(b.mid_f64()));
        let (br, v) = if a.mid_f64() <= b.mid_f64() { (CertBranch::Nonbound2, a) } else { (CertBranch::Archbound, b) };
        let th = format_rational(&theta);
        let expr = format!(
            "min({ell}^((1-θ)/{}), (2^(-1/φ) + sqrt(1 + 4^(-1/φ)))^(φ/2)) with θ = {th}, φ = 2θ - 1 - {}/{ell}",
            2 * (ell - 1),
            ell - 1
        );
        (br, Some(th), None, expr, v)
    };
    if !eps.certainly_gt(&Interval::from_int(1, EVAL_BITS)) {
        return Err(Error::internal("bounds", "ε is not certified above 1"));
    }
    Ok(Certificate {
        field: field.minpoly().clone(),
        degree: field.degree(),
        signature: field.signature(),
        ell,
        alpha: alpha.to_strings(),
        rho_k: format_rational(rho_k),
        rho_provenance: rho_provenance.to_string(),
        branch,
        theta,
        epsilon_symbolic,
        epsilon_expr,
        epsilon: sig15(eps.mid_f64()),
        branch_values,
        assumptions,
        kummer,
    })
}

impl Certificate {
    pub fn epsilon_f64(&self) -> f64 {
        self.epsilon.parse().unwrap_or(f64::NAN)
    }
}

/// Outcome of re-deriving a certificate from its recorded inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub recomputed_epsilon: String,
    pub mismatches: Vec<String>,
}

/// Recomputes ε and the ramification check from the recorded inputs.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    let mut mismatches = Vec::new();
    let alpha = ElementRecord { field: cert.field.clone(), coords: cert.alpha.clone() }.to_element()?;
    let field = alpha.field().clone();
    let d = field.degree() as u64;
    if d as usize != cert.degree || field.signature() != cert.signature {
        mismatches.push("field degree or signature differs".into());
    }
    let rho = parse_rational(&cert.rho_k)?;
    let kummer = check_a1(&field, &alpha, cert.ell)?;
    if !kummer.is_totally_ramified() {
        mismatches.push("ramification check no longer certifies total ramification".into());
    }
    if kummer != cert.kummer {
        mismatches.push("recorded ramification analysis differs".into());
    }
    let recomputed = match cert.branch {
        CertBranch::Nonbound => {
            let e = nonbound(cert.ell, d, &rho);
            if cert.epsilon_symbolic.as_ref() != Some(&e) {
                mismatches.push(format!("symbolic ε differs: recomputed {e}"));
            }
            e.to_interval(EVAL_BITS).mid_f64()
        }
        CertBranch::Nonbound2 | CertBranch::Archbound => {
            let theta = parse_rational(cert.theta.as_deref().unwrap_or(""))?;
            let (lo, hi) = theta_range(cert.ell);
            let tf = theta.to_f64().unwrap_or(f64::NAN);
            if !(tf > lo && tf < hi) {
                mismatches.push("θ outside its admissible range".into());
            }
            let (a, b) = arch_values(cert.ell, &theta);
            a.mid_f64().min(b.mid_f64())
        }
        CertBranch::Relbocrit => {
            mismatches.push("relbocrit certificates are not produced by this tool".into());
            f64::NAN
        }
    };
    let recorded = cert.epsilon_f64();
    if !((recomputed - recorded).abs() <= 1e-12 * recorded.abs().max(1.0)) {
        mismatches.push(format!("ε differs: recorded {recorded}, recomputed {recomputed}"));
    }
    if !(recomputed > 1.0) {
        mismatches.push("ε is not above 1".into());
    }
    Ok(VerifyReport { ok: mismatches.is_empty(), recomputed_epsilon: sig15(recomputed), mismatches })
}

/// ε as an exact value for the integer-norm relative discriminant of a
/// prime-degree step: ℓ^{dℓ} from ℓ^ℓ | D_{F′/F}.
pub fn prime_degree_excess(ell: u64, d: u64) -> PowerProduct {
    PowerProduct::power(int(ell), int(d * ell)).expect("positive base")
}

/// Bits needed to hold `n` as a natural number.
pub fn bits_of(n: &BigUint) -> u64 {
    n.bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn power_products_normalize() {
        let a = PowerProduct::power(int(8), rat(1, 8)).unwrap();
        let b = PowerProduct::power(int(2), rat(3, 8)).unwrap();
        assert_eq!(a, b);
        let q = PowerProduct::power(rat(7, 4), rat(1, 4)).unwrap();
        assert_eq!(q.to_string(), "2^(-1/2) * 7^(1/4)");
        assert_eq!(PowerProduct::power(int(5), int(5)).unwrap().compare(&PowerProduct::int_power(3125, 1, 1)), Ordering::Equal);
        assert_eq!(PowerProduct::int_power(2, 1, 2).compare(&PowerProduct::int_power(3, 1, 3)), Ordering::Less);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<PowerProduct>(&json).unwrap(), q);
    }

    #[test]
    fn silverman_examples() {
        let b = silverman_bound(2, 2, 1, &BigInt::from(8)).unwrap();
        assert_eq!(b, PowerProduct::int_power(2, 1, 8));
        assert!(close(b.to_f64(), 2f64.powf(0.125), 1e-15));
        assert!(silverman_bound(2, 2, 1, &BigInt::one()).unwrap().cmp_one() == Ordering::Less);
        assert!(silverman_bound(1, 2, 1, &BigInt::from(8)).is_err());
    }

    #[test]
    fn garza_examples() {
        let g: f64 = garza_bound(4, 4, &0.0).unwrap();
        assert!(close(g, ((1.0 + 5f64.sqrt()) / 2.0).sqrt(), 1e-14));
        let g2: f64 = garza_bound(4, 2, &0.0).unwrap();
        assert!(close(g2, (0.25 + (17f64 / 16.0).sqrt()).powf(0.25), 1e-14));
        assert!(garza_bound(3, 0, &0.0).is_err());
        let gi = garza_bound(7, 7, &Interval::from_int(0, 128)).unwrap();
        assert!(gi.radius_f64() < 1e-30);
        assert_eq!(&gi.to_decimal(12)[..14], "1.272019649514");
    }

    #[test]
    fn excess_examples() {
        let disjoint = ExcessInput {
            norm_dc: BigInt::from(50000),
            s: 5,
            evidence: ExcessEvidence::Disjoint { primes: vec![2, 5] },
        };
        let v = excess_discriminant(&disjoint).unwrap();
        assert!(v.certified_lower_bound);
        assert_eq!(v.value.compare(&PowerProduct::int_power(50000, 1, 1)), Ordering::Equal);
        let bad = ExcessInput { evidence: ExcessEvidence::Disjoint { primes: vec![5] }, ..disjoint.clone() };
        assert!(excess_discriminant(&bad).is_err());
        let trivial = ExcessInput {
            norm_dc: BigInt::from(28),
            s: 2,
            evidence: ExcessEvidence::FiniteFamily { family: vec![(1, BigInt::one())] },
        };
        assert_eq!(excess_discriminant(&trivial).unwrap().value, PowerProduct::int_power(28, 1, 1));
        let shared = ExcessInput {
            norm_dc: BigInt::from(28),
            s: 2,
            evidence: ExcessEvidence::FiniteFamily { family: vec![(1, BigInt::one()), (2, BigInt::from(8))] },
        };
        let v = excess_discriminant(&shared).unwrap();
        assert!(!v.certified_lower_bound);
        assert_eq!(v.value, PowerProduct::int_power(7, 1, 1));
    }

    #[test]
    fn relbocrit_examples() {
        let r = relbocrit_bound(1, &rat(1, 2), &[(5, PowerProduct::int_power(5, 5, 1))]).unwrap();
        assert!(r.pass);
        assert_eq!(r.bound, PowerProduct::int_power(5, 1, 16));
        assert!(close(r.bound.to_f64(), 1.105823017, 1e-9));
        let d = 2u64;
        let rho = int(1);
        let r = relbocrit_bound(d, &rho, &[(5, prime_degree_excess(5, d))]).unwrap();
        assert_eq!(r.bound, nonbound(5, d, &rho));
        let edge = relbocrit_bound(1, &int(1), &[(2, PowerProduct::int_power(4, 1, 1))]).unwrap();
        assert!(!edge.pass);
        assert!(relbocrit_bound(1, &int(1), &[]).is_err());
    }

    #[test]
    fn prefall_examples() {
        let b = prefall_bound(2, 1, &int(1), &PowerProduct::int_power(7, 1, 1)).unwrap();
        assert_eq!(b, PowerProduct::power(rat(7, 4), rat(1, 4)).unwrap());
        assert!(close(b.to_f64(), (7f64 / 4.0).powf(0.25), 1e-15));
        let vac = prefall_bound(2, 1, &int(1), &PowerProduct::one()).unwrap();
        assert_eq!(vac.cmp_one(), Ordering::Less);
    }

    #[test]
    fn theta_optimum_crosses_near_099() {
        let (t, v) = optimize_theta(5);
        assert!(t > 0.98 && t < 1.0);
        assert!(v > 1.0 && v < 1.01);
        let (lo, hi) = theta_range(5);
        let scan = (1..10_000)
            .map(|i| theta_objective(5, &(lo + (hi - lo) * i as f64 / 10_000.0)))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(v >= scan - 1e-12 && v - scan < 1e-6);
    }

    #[test]
    fn scalar_generic_branches() {
        let t = 0.99f64;
        let ti = Interval::from_f64(t, 128);
        assert!(close(nonbound2(5, &t), nonbound2(5, &ti).mid_f64(), 1e-14));
        assert!(close(archbound(5, &t), archbound(5, &ti).mid_f64(), 1e-14));
        assert!(close(nonbound2(5, &(t as f32)) as f64, nonbound2(5, &t), 1e-6));
    }

    #[test]
    fn certificates_round_trip() {
        let q = NumberField::rationals();
        let alpha = FieldElement::from_int(&q, 6);
        let att = vec!["5 unramified in K".to_string()];
        let c = finram_certificate(&q, &alpha, 5, &rat(1, 2), "declared", &att, false).unwrap();
        assert_eq!(c.branch, CertBranch::Nonbound);
        assert_eq!(c.epsilon_symbolic, Some(PowerProduct::int_power(5, 1, 16)));
        assert!(verify_certificate(&c).unwrap().ok);
        let a = finram_certificate(&q, &alpha, 5, &int(1), "declared", &att, false).unwrap();
        assert!(a.theta.is_some());
        let e = a.epsilon_f64();
        assert!(e > 1.0 && e < 1.01);
        let json = serde_json::to_string(&a).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert!(verify_certificate(&back).unwrap().ok);
        let mut bad = back.clone();
        bad.epsilon = "1.5".into();
        assert!(!verify_certificate(&bad).unwrap().ok);
        assert!(finram_certificate(&q, &alpha, 5, &int(1), "declared", &[], false).is_err());
        assert!(finram_certificate(&q, &FieldElement::from_int(&q, 7), 5, &int(1), "d", &att, false).is_err());
        assert!(finram_certificate(&q, &alpha, 5, &rat(1, 3), "d", &att, false).is_err());
    }
}
