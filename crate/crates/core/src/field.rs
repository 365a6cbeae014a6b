//! Number fields ℚ[x]/(f) and their elements in the power basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_root_rational, factor_u64, primes, trial_factor};
use crate::error::{Error, Result};
use crate::modp::{factor_fp, seed, FpPoly};
use crate::poly::{format_rational, parse_rational, IntPolynomial, Poly, RatPolynomial};
use crate::resultant::{poly_discriminant, resultant, squarefree_part};
use crate::sturm::count_real_roots;

const SCREEN_PRIMES: usize = 25;

/// A number field ℚ[x]/(f) for a monic irreducible integer polynomial f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    minpoly: IntPolynomial,
    r1: usize,
    r2: usize,
    disc: BigInt,
}

/// Why a polynomial was accepted as irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IrreducibilityWitness {
    Linear,
    /// Factor-degree patterns modulo these primes admit no proper subfactor.
    DegreePatterns { primes: Vec<u64> },
    /// Eisenstein at `prime` after substituting x → x + `shift`.
    Eisenstein {
        #[serde(with = "crate::arith::bigint_str")]
        prime: BigInt,
        shift: i64,
    },
    /// The m-th cyclotomic polynomial.
    Cyclotomic { m: u64 },
    /// No product of the `factors` Hensel-lifted factors modulo `prime`
    /// yields a factor over ℤ.
    Recombination { prime: u64, factors: usize },
}

fn has_integer_root(f: &IntPolynomial) -> bool {
    let a0 = f.coeff(0);
    if a0.is_zero() {
        return true;
    }
    let Some(a) = a0.abs().to_u64().filter(|&a| a <= 1_000_000_000_000) else {
        return false;
    };
    let mut divisors = vec![1u64];
    for (p, e) in factor_u64(a) {
        let base = divisors.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divisors.extend(base.iter().map(|d| d * pk));
        }
    }
    divisors.into_iter().any(|d| {
        let d = BigInt::from(d);
        f.eval(&d).is_zero() || f.eval(&-d).is_zero()
    })
}

fn degree_pattern_certificate(f: &IntPolynomial, disc: &BigInt) -> Option<Vec<u64>> {
    let d = f.deg();
    let mut possible = vec![true; d + 1];
    let mut used = Vec::new();
    let lead = f.lead();
    let good = |p: &u64| !(disc % BigInt::from(*p)).is_zero() && !(&lead % BigInt::from(*p)).is_zero();
    for p in primes().filter(good).take(SCREEN_PRIMES) {
        let fac = factor_fp(&FpPoly::from_int(f, p));
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for k in fac.degree_pattern() {
            for s in (k..=d).rev() {
                if sums[s - k] {
                    sums[s] = true;
                }
            }
        }
        for (a, b) in possible.iter_mut().zip(&sums) {
            *a &= *b;
        }
        used.push(p);
        if possible[1..d].iter().all(|x| !x) {
            return Some(used);
        }
    }
    None
}

fn eisenstein_certificate(f: &IntPolynomial) -> Option<(BigInt, i64)> {
    let d = f.deg();
    for shift in [0i64, 1, -1, 2, -2] {
        let g = f.compose(&IntPolynomial::from_i64s(&[shift, 1]));
        let content = g.coeffs()[..d].iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() || content.is_one() {
            continue;
        }
        let fac = trial_factor(&content.magnitude().clone(), 100_000);
        for (p, _) in &fac.primes {
            let p = BigInt::from(p.clone());
            if !(g.coeff(0) % (&p * &p)).is_zero() && !(g.lead() % &p).is_zero() {
                return Some((p, shift));
            }
        }
    }
    None
}

const MAX_RECOMBINATION_FACTORS: usize = 12;

/// a^{n−1} f(x/a) for f of leading coefficient a: monic, and irreducible
/// exactly when f is.
fn monic_transform(f: &IntPolynomial) -> IntPolynomial {
    let a = f.lead();
    let n = f.deg();
    let c = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| if i == n { BigInt::one() } else { c * num_traits::pow(a.clone(), n - 1 - i) })
        .collect();
    IntPolynomial::new(c)
}

/// Zassenhaus recombination: lift the factorization modulo a good prime
/// past the coefficient bound and test every product of at most half the
/// factors for exact division. Ok when none divides, Err on a true factor,
/// None when no usable prime is found.
fn recombination_certificate(f: &IntPolynomial) -> Option<std::result::Result<(u64, usize), ()>> {
    let g = monic_transform(f);
    let n = g.deg();
    let disc = poly_discriminant(&g).ok()?;
    if disc.is_zero() {
        return Some(Err(()));
    }
    let (p, fac) = primes()
        .filter(|&p| !(&disc % BigInt::from(p)).is_zero())
        .take(SCREEN_PRIMES)
        .map(|p| (p, factor_fp(&FpPoly::from_int(&g, p))))
        .min_by_key(|(_, fac)| fac.factors.len())?;
    let r = fac.factors.len();
    if r > MAX_RECOMBINATION_FACTORS {
        return None;
    }
    if r == 1 {
        return Some(Ok((p, 1)));
    }
    // monic factors h of g satisfy |h|_∞ ≤ 2^n |g|_1
    let norm1 = g.coeffs().iter().fold(BigInt::zero(), |acc, c| acc + c.abs());
    let bound = (norm1 << n) * 2u32;
    let mut k = 1u32;
    let mut m = BigInt::from(p);
    while m <= bound {
        m *= p;
        k += 1;
    }
    let blocks: Vec<FpPoly> = fac.factors.iter().map(|(q, _)| q.clone()).collect();
    let lifted = crate::hensel::hensel_lift_blocks(&g, &blocks, p, k).ok()?;
    for mask in 1u32..(1 << r) {
        let size = mask.count_ones() as usize;
        if 2 * size > r {
            continue;
        }
        let prod = (0..r)
            .filter(|i| mask & (1 << i) != 0)
            .fold(IntPolynomial::one(), |acc, i| (&acc * &lifted[i]).reduce_mod(&m));
        let h = prod.map(|c| crate::arith::symmetric_mod(c, &m));
        if h.deg() >= 1 && h.deg() < n && g.div_rem(&h).1.is_zero() {
            return Some(Err(()));
        }
    }
    Some(Ok((p, r)))
}

/// Screens `f` for irreducibility over ℚ. Errors when `f` is shown to be
/// reducible or when screening is inconclusive.
pub fn certify_irreducible(f: &IntPolynomial) -> Result<IrreducibilityWitness> {
    let d = f.deg();
    if d == 1 {
        return Ok(IrreducibilityWitness::Linear);
    }
    let disc = poly_discriminant(f)?;
    if disc.is_zero() || has_integer_root(f) {
        return Err(Error::Reducible(f.to_string()));
    }
    if let Some(ps) = degree_pattern_certificate(f, &disc) {
        return Ok(IrreducibilityWitness::DegreePatterns { primes: ps });
    }
    if let Some((prime, shift)) = eisenstein_certificate(f) {
        return Ok(IrreducibilityWitness::Eisenstein { prime, shift });
    }
    if let Some(m) = crate::height::cyclotomic_index(f) {
        return Ok(IrreducibilityWitness::Cyclotomic { m });
    }
    match recombination_certificate(f) {
        Some(Ok((prime, factors))) => return Ok(IrreducibilityWitness::Recombination { prime, factors }),
        Some(Err(())) => return Err(Error::Reducible(f.to_string())),
        None => {}
    }
    Err(Error::IrreducibilityNotCertified(f.to_string()))
}

impl NumberField {
    /// Builds ℚ[x]/(f) after irreducibility screening; the signature comes
    /// from Sturm real-root counting.
    pub fn new(f: IntPolynomial) -> Result<Arc<NumberField>> {
        if f.degree().map_or(true, |d| d < 1) {
            return Err(Error::precondition("numberfield", "defining polynomial must have degree >= 1"));
        }
        if !f.is_monic() {
            return Err(Error::precondition("numberfield", format!("defining polynomial {f} is not monic")));
        }
        certify_irreducible(&f)?;
        let d = f.deg();
        let r1 = count_real_roots(&f);
        let disc = if d == 1 { BigInt::one() } else { poly_discriminant(&f)? };
        Ok(Arc::new(NumberField { minpoly: f, r1, r2: (d - r1) / 2, disc }))
    }

    /// The field ℚ, presented as ℚ[x]/(x).
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(IntPolynomial::from_i64s(&[0, 1])).expect("x is irreducible")
    }

    pub fn parse(text: &str) -> Result<Arc<NumberField>> {
        NumberField::new(IntPolynomial::parse(text)?)
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    /// (r, r′): real embeddings and pairs of complex embeddings.
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    /// Number of archimedean places r + r′.
    pub fn delta(&self) -> usize {
        self.r1 + self.r2
    }

    /// Discriminant of the defining polynomial (1 for ℚ).
    pub fn poly_disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }
}

/// Element of a number field with rational power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.minpoly == other.field.minpoly && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    /// Builds an element from coordinates (padded with zeros to the degree).
    pub fn new(field: &Arc<NumberField>, mut coords: Vec<BigRational>) -> Result<Self> {
        let d = field.degree();
        if coords.len() > d {
            return Err(Error::domain(
                "numberfield",
                format!("{} coordinates given for a field of degree {d}", coords.len()),
            ));
        }
        coords.resize(d, BigRational::zero());
        Ok(FieldElement { field: field.clone(), coords })
    }

    /// Reduces a rational polynomial in the generator modulo the minpoly.
    pub fn from_poly(field: &Arc<NumberField>, p: &RatPolynomial) -> Self {
        let r = p.rem(&field.minpoly.to_rational());
        let mut coords = r.into_coeffs();
        coords.resize(field.degree(), BigRational::zero());
        FieldElement { field: field.clone(), coords }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        FieldElement::from_poly(field, &Poly::constant(q))
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        FieldElement::from_rational(field, rat(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        FieldElement::from_int(field, 1)
    }

    /// The generator θ (the class of x).
    pub fn theta(field: &Arc<NumberField>) -> Self {
        FieldElement::from_poly(field, &Poly::x())
    }

    /// Parses `"a,b,c"` coordinates (each `n`, `n/d` or a decimal) or a
    /// polynomial in `x` such as `"1+x"`.
    pub fn parse(field: &Arc<NumberField>, text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']');
        if t.contains('x') {
            let num = t.replace(' ', "");
            return parse_element_poly(&num).map(|p| FieldElement::from_poly(field, &p));
        }
        let coords = t
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        FieldElement::new(field, coords)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn to_poly(&self) -> RatPolynomial {
        Poly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    /// Whether every coordinate is an integer (membership in ℤ[θ]).
    pub fn is_integral_in_power_basis(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Numerator polynomial `den · β` with integer coefficients.
    pub fn integer_numerator(&self) -> (IntPolynomial, BigInt) {
        let den = self.denominator();
        let p = Poly::new(
            self.coords
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
        (p, den)
    }

    /// Coordinates as `"num/den"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }

    fn check_same(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.minpoly == other.field.minpoly,
            "elements of different fields"
        );
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = FieldElement::one(&self.field);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.minpoly.to_rational();
        let (mut r0, mut r1) = (f, self.to_poly());
        let (mut s0, mut s1) = (RatPolynomial::zero(), RatPolynomial::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because the minpoly is irreducible.
        let c = r0.lead();
        Ok(FieldElement::from_poly(&self.field, &s0.div_scalar(&c)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// N_{F/ℚ}(β) = Res(f, b).
    pub fn norm(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        resultant(&self.field.minpoly.to_rational(), &self.to_poly()).expect("minpoly is nonzero")
    }

    /// Characteristic polynomial of multiplication by β, scaled to integer
    /// coefficients: Res_y(f(y), den·x − b(y)).
    pub fn charpoly(&self) -> IntPolynomial {
        let (b, den) = self.integer_numerator();
        let f: Poly<IntPolynomial> = self.field.minpoly.map(|c| IntPolynomial::constant(c.clone()));
        let mut g = vec![IntPolynomial::new(vec![-b.coeff(0), den.clone()])];
        for i in 1..self.field.degree() {
            g.push(IntPolynomial::constant(-b.coeff(i)));
        }
        let g: Poly<IntPolynomial> = Poly::new(g);
        resultant(&f, &g).expect("minpoly is nonzero").primitive_part()
    }

    /// Minimal polynomial over ℚ as a primitive integer polynomial with
    /// positive leading coefficient (monic exactly when β is integral).
    pub fn min_poly(&self) -> IntPolynomial {
        if self.is_rational() {
            let q = &self.coords[0];
            return IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()]);
        }
        squarefree_part(&self.charpoly()).expect("charpoly is nonzero")
    }

    /// Decides whether β is an ℓ-th power in F.
    pub fn is_lth_power(&self, ell: u64) -> Result<LthPower> {
        is_lth_power(self, ell)
    }
}

fn parse_element_poly(text: &str) -> Result<RatPolynomial> {
    let mut acc = RatPolynomial::zero();
    let mut cur = String::new();
    let mut terms = Vec::new();
    for (i, ch) in text.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') && !cur.ends_with('/') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms.iter().filter(|t| !t.is_empty()) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.trim_start_matches('+')),
        };
        let (coef, pow) = match body.find('x') {
            None => (parse_rational(body)?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { BigRational::one() } else { parse_rational(c)? };
                let rest = &body[pos + 1..];
                let pow = if rest.is_empty() {
                    1
                } else {
                    rest.trim_start_matches('^')
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad exponent in {term:?}: {e}")))?
                };
                (c, pow)
            }
        };
        let coef = if neg { -coef } else { coef };
        acc = &acc + &Poly::monomial(coef, pow);
    }
    Ok(acc)
}

macro_rules! elem_op {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr for &FieldElement {
            type Output = FieldElement;

            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.check_same(rhs);
                let f: fn(&FieldElement, &FieldElement) -> FieldElement = $body;
                f(self, rhs)
            }
        }

        impl $tr for FieldElement {
            type Output = FieldElement;

            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}

elem_op!(Add, add, |a, b| FieldElement {
    field: a.field.clone(),
    coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
});
elem_op!(Sub, sub, |a, b| FieldElement {
    field: a.field.clone(),
    coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
});
elem_op!(Mul, mul, |a, b| FieldElement::from_poly(&a.field, &(&a.to_poly() * &b.to_poly())));

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_poly().to_string().replace('x', "t");
        write!(f, "{s}")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:?} in Q[t]/({}))", self.to_strings(), self.field.minpoly)
    }
}

/// Serialized form: field minpoly coefficients and `"num/den"` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub field: IntPolynomial,
    pub coords: Vec<String>,
}

impl From<&FieldElement> for ElementRecord {
    fn from(e: &FieldElement) -> Self {
        ElementRecord { field: e.field.minpoly.clone(), coords: e.to_strings() }
    }
}

impl ElementRecord {
    pub fn to_element(&self) -> Result<FieldElement> {
        let field = NumberField::new(self.field.clone())?;
        let coords = self.coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        FieldElement::new(&field, coords)
    }
}

/// Outcome of an ℓ-th power test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LthPower {
    Yes(FieldElement),
    No(NonPowerCertificate),
    Unknown,
}

/// Why β is not an ℓ-th power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonPowerCertificate {
    /// N(β) is not an ℓ-th power in ℚ.
    Norm(BigRational),
    /// x^ℓ = β has no solution in the residue field 𝔽_q[x]/(g).
    Local { q: u64, residue_factor: IntPolynomial },
}

/// Arithmetic in 𝔽_q[x]/(g) for an irreducible g.
struct ResidueField {
    g: FpPoly,
    order: BigUint,
}

impl ResidueField {
    fn new(g: FpPoly) -> Self {
        let order = BigUint::from(g.modulus()).pow(g.deg() as u32);
        ResidueField { g, order }
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        a.mul(b).rem(&self.g)
    }

    fn pow(&self, a: &FpPoly, e: &BigUint) -> FpPoly {
        a.pow_mod(e, &self.g)
    }

    fn is_one(&self, a: &FpPoly) -> bool {
        a.rem(&self.g).is_one()
    }

    /// All ℓ-th roots of `b` (b nonzero), or `None` when there are none.
    fn roots(&self, b: &FpPoly, ell: u64, rng: &mut ChaCha8Rng) -> Option<Vec<FpPoly>> {
        let n = &self.order - 1u32;
        let l = BigUint::from(ell);
        if !(&n % &l).is_zero() {
            let u = l.modinv(&n).expect("ℓ is a unit mod n");
            return Some(vec![self.pow(b, &u)]);
        }
        if !self.is_one(&self.pow(b, &(&n / &l))) {
            return None;
        }
        let mut s = 0u32;
        let mut t = n.clone();
        while (&t % &l).is_zero() {
            t /= &l;
            s += 1;
        }
        let p = self.g.modulus();
        let d = self.g.deg();
        let z = loop {
            let c = FpPoly::new(p, (0..d).map(|_| rng.gen_range(0..p)).collect());
            if !c.is_zero() && !self.is_one(&self.pow(&c, &(&n / &l))) {
                break c;
            }
        };
        let gen = self.pow(&z, &t);
        let u = if t.is_one() { BigUint::zero() } else { l.modinv(&t).expect("coprime") };
        let a0 = self.pow(b, &u);
        let a0l = self.pow(&a0, &l);
        let e = self.mul(b, &self.pow(&a0l, &(&n - 1u32)));
        // Discrete log of e in the cyclic ℓ-Sylow subgroup generated by gen.
        let zeta = self.pow(&gen, &l.pow(s - 1));
        let gen_inv = self.pow(&gen, &(&n - 1u32));
        let mut k = BigUint::zero();
        for i in 0..s {
            let cur = self.mul(&e, &self.pow(&gen_inv, &k));
            let h = self.pow(&cur, &l.pow(s - 1 - i));
            let mut acc = FpPoly::one(p);
            let mut digit = None;
            for dgt in 0..ell {
                if acc == h.rem(&self.g) {
                    digit = Some(dgt);
                    break;
                }
                acc = self.mul(&acc, &zeta);
            }
            k += BigUint::from(digit?) * l.pow(i);
        }
        if !(&k % &l).is_zero() {
            return None;
        }
        let y = self.pow(&gen, &(k / &l));
        let root = self.mul(&a0, &y);
        let mut out = Vec::with_capacity(ell as usize);
        let mut r = root;
        for _ in 0..ell {
            out.push(r.clone());
            r = self.mul(&r, &zeta);
        }
        Some(out)
    }
}

fn reduce_rational(q: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = crate::arith::mod_inverse(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

pub(crate) fn element_mod(beta: &FieldElement, m: &BigInt) -> Option<IntPolynomial> {
    beta.coords
        .iter()
        .map(|c| reduce_rational(c, m))
        .collect::<Option<Vec<_>>>()
        .map(IntPolynomial::new)
}

pub(crate) fn mulmod(a: &IntPolynomial, b: &IntPolynomial, f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    (a * b).rem(f).reduce_mod(m)
}

pub(crate) fn powmod(a: &IntPolynomial, e: u64, f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    let mut acc = IntPolynomial::one();
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, f, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(&base, &base, f, m);
        }
    }
    acc
}

/// Rational reconstruction of `a mod m` with numerator and denominator
/// bounded by sqrt(m/2).
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Lifts a root of x^ℓ = β mod q to q-adic precision and tries to
/// reconstruct an exact root.
fn lift_and_reconstruct(beta: &FieldElement, ell: u64, q: u64, root: &FpPoly) -> Option<FieldElement> {
    let f = beta.field.minpoly.clone();
    let fq = FpPoly::from_int(&f, q);
    let lb = BigInt::from(ell);
    let a = FpPoly::new(q, vec![ell % q]).mul(&root.pow_mod_u64(ell - 1, &fq));
    let (g, inv, _) = a.xgcd(&fq);
    if !g.is_one() {
        return None;
    }
    let mut m = BigInt::from(q);
    let mut gamma = root.to_int();
    let mut u = inv.to_int();
    let cap_bits = 16_384 + 64 * beta.denominator().bits();
    while m.bits() < cap_bits {
        let m2 = &m * &m;
        let b = element_mod(beta, &m2)?;
        let err = (&powmod(&gamma, ell, &f, &m2) - &b).reduce_mod(&m2);
        gamma = (&gamma - &mulmod(&u, &err, &f, &m2)).reduce_mod(&m2);
        let deriv = powmod(&gamma, ell - 1, &f, &m2).scale(&lb).reduce_mod(&m2);
        let two = IntPolynomial::constant(BigInt::from(2));
        u = mulmod(&u, &(&two - &mulmod(&deriv, &u, &f, &m2)), &f, &m2);
        m = m2;
        if m.bits() < 64 {
            continue;
        }
        let coords: Option<Vec<BigRational>> = (0..f.deg())
            .map(|i| rational_reconstruction(&gamma.coeff(i), &m))
            .collect();
        if let Some(c) = coords {
            let cand = FieldElement::new(&beta.field, c).ok()?;
            if cand.pow(ell as i64).ok()? == *beta {
                return Some(cand);
            }
        }
    }
    None
}

fn crt_fp(parts: &[(FpPoly, FpPoly)], q: u64) -> FpPoly {
    let mut acc = FpPoly::zero(q);
    let mut modulus = FpPoly::one(q);
    for (r, g) in parts {
        let (_, inv, _) = modulus.rem(g).xgcd(g);
        let t = r.sub(&acc).mul(&inv).rem(g);
        acc = acc.add(&modulus.mul(&t));
        modulus = modulus.mul(g);
    }
    acc.rem(&modulus)
}

const MAX_COMBINATIONS: usize = 512;

fn is_lth_power(beta: &FieldElement, ell: u64) -> Result<LthPower> {
    if !crate::arith::is_prime_u64(ell) {
        return Err(Error::domain("numberfield", format!("{ell} is not prime")));
    }
    if beta.is_zero() {
        return Ok(LthPower::Yes(beta.clone()));
    }
    let field = beta.field.clone();
    if field.is_rationals() {
        return Ok(match exact_root_rational(&beta.coords[0], ell as u32) {
            Some(r) => LthPower::Yes(FieldElement::from_rational(&field, r)),
            None => LthPower::No(NonPowerCertificate::Norm(beta.coords[0].clone())),
        });
    }
    let norm = beta.norm();
    if exact_root_rational(&norm, ell as u32).is_none() {
        return Ok(LthPower::No(NonPowerCertificate::Norm(norm)));
    }
    let den = beta.denominator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ ell);
    let mut best: Option<(usize, u64, Vec<(FpPoly, Vec<FpPoly>)>)> = None;
    let mut tried = 0;
    for q in primes().skip(1) {
        if tried >= 60 {
            break;
        }
        let qb = BigInt::from(q);
        if q == ell
            || (field.disc.clone() % &qb).is_zero()
            || (&den % &qb).is_zero()
            || (norm.numer() % &qb).is_zero()
        {
            continue;
        }
        tried += 1;
        let b = FpPoly::from_int(&element_mod(beta, &qb).expect("denominator is a unit"), q);
        let fac = factor_fp(&FpPoly::from_int(&field.minpoly, q));
        let mut per_factor = Vec::new();
        let mut combos = 1usize;
        for (g, _) in &fac.factors {
            let rf = ResidueField::new(g.clone());
            match rf.roots(&b.rem(g), ell, &mut rng) {
                None => {
                    return Ok(LthPower::No(NonPowerCertificate::Local {
                        q,
                        residue_factor: g.to_int(),
                    }))
                }
                Some(rs) => {
                    combos = combos.saturating_mul(rs.len());
                    per_factor.push((g.clone(), rs));
                }
            }
        }
        if best.as_ref().map_or(true, |(c, _, _)| combos < *c) {
            best = Some((combos, q, per_factor));
        }
    }
    let Some((combos, q, per_factor)) = best else {
        return Ok(LthPower::Unknown);
    };
    if combos > MAX_COMBINATIONS {
        return Ok(LthPower::Unknown);
    }
    let mut index = vec![0usize; per_factor.len()];
    loop {
        let parts: Vec<(FpPoly, FpPoly)> = per_factor
            .iter()
            .zip(&index)
            .map(|((g, rs), &i)| (rs[i].clone(), g.clone()))
            .collect();
        let root = crt_fp(&parts, q);
        if let Some(r) = lift_and_reconstruct(beta, ell, q, &root) {
            return Ok(LthPower::Yes(r));
        }
        let mut k = 0;
        loop {
            if k == index.len() {
                return Ok(LthPower::Unknown);
            }
            index[k] += 1;
            if index[k] < per_factor[k].1.len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> Arc<NumberField> {
        NumberField::parse(s).unwrap()
    }

    fn elem(f: &Arc<NumberField>, s: &str) -> FieldElement {
        FieldElement::parse(f, s).unwrap()
    }

    #[test]
    fn signatures() {
        let gi = field("x^2+1");
        assert_eq!((gi.degree(), gi.signature(), gi.delta()), (2, (0, 1), 1));
        let g = field("x^2-x-1");
        assert_eq!((g.degree(), g.signature(), g.delta()), (2, (2, 0), 2));
        let t = field("x^12+x+1");
        assert_eq!((t.signature(), t.delta()), ((0, 6), 6));
    }

    #[test]
    fn screening_rejects_and_certifies() {
        assert!(matches!(NumberField::parse("x^2-4"), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::parse("x^3-x^2"), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::parse("2*x^2+1"), Err(Error::Precondition { .. })));
        // (x^2+1)(x^2+2) has no integer roots and nonzero discriminant.
        assert!(matches!(NumberField::parse("x^4+3*x^2+2"), Err(Error::Reducible(_))));
        assert!(matches!(
            certify_irreducible(&IntPolynomial::parse("3*x^4-5*x^2+2*x+7").unwrap().primitive_part()),
            Ok(_)
        ));
        assert!(matches!(
            certify_irreducible(&IntPolynomial::parse("4*x^4-1").unwrap()),
            Err(Error::Reducible(_))
        ));
        assert!(matches!(
            certify_irreducible(&IntPolynomial::parse("x^4-10*x^2+1").unwrap()).unwrap(),
            IrreducibilityWitness::Recombination { .. }
        ));
        let w = certify_irreducible(&IntPolynomial::parse("x^4+1").unwrap()).unwrap();
        assert_eq!(w, IrreducibilityWitness::Eisenstein { prime: BigInt::from(2), shift: 1 });
        assert!(matches!(
            certify_irreducible(&IntPolynomial::parse("x^12+x+1").unwrap()).unwrap(),
            IrreducibilityWitness::DegreePatterns { .. }
        ));
    }

    #[test]
    fn witnesses_round_trip_through_json() {
        for f in ["x-3", "x^12+x+1", "x^4+1", "x^4-x^2+1", "x^4-10*x^2+1"] {
            let w = certify_irreducible(&IntPolynomial::parse(f).unwrap()).unwrap();
            let back: IrreducibilityWitness = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
            assert_eq!(back, w, "{f}");
        }
    }

    #[test]
    fn minimal_polynomials() {
        let f = field("x^2-2");
        assert_eq!(FieldElement::theta(&f).min_poly(), IntPolynomial::parse("x^2-2").unwrap());
        let gi = field("x^2+1");
        assert_eq!(elem(&gi, "1,1").min_poly(), IntPolynomial::parse("x^2-2*x+2").unwrap());
        assert_eq!(elem(&gi, "3").min_poly(), IntPolynomial::parse("x-3").unwrap());
        assert_eq!(elem(&gi, "1/2,0").min_poly(), IntPolynomial::parse("2*x-1").unwrap());
        let c = field("x^4+1");
        let t2 = FieldElement::theta(&c).pow(2).unwrap();
        assert_eq!(t2.min_poly(), IntPolynomial::parse("x^2+1").unwrap());
    }

    #[test]
    fn arithmetic_and_norm() {
        let gi = field("x^2+1");
        let a = elem(&gi, "2,1");
        let b = elem(&gi, "2,-1");
        assert_eq!(&a * &b, FieldElement::from_int(&gi, 5));
        assert_eq!(a.norm(), rat(5));
        assert_eq!(&a * &a.inv().unwrap(), FieldElement::one(&gi));
        assert_eq!(a.pow(-2).unwrap() * a.pow(2).unwrap(), FieldElement::one(&gi));
        assert!(FieldElement::zero(&gi).inv().is_err());
        assert_eq!(elem(&gi, "1+x"), elem(&gi, "1,1"));
        assert_eq!(elem(&gi, "1/2 - 3/4*x").to_strings(), vec!["1/2", "-3/4"]);
    }

    #[test]
    fn lth_powers() {
        let q = NumberField::rationals();
        assert_eq!(
            FieldElement::from_int(&q, 8).is_lth_power(3).unwrap(),
            LthPower::Yes(FieldElement::from_int(&q, 2))
        );
        assert!(matches!(
            FieldElement::from_int(&q, 2).is_lth_power(5).unwrap(),
            LthPower::No(NonPowerCertificate::Norm(_))
        ));
        let gi = field("x^2+1");
        match FieldElement::from_int(&gi, -4).is_lth_power(2).unwrap() {
            LthPower::Yes(r) => assert!(r == elem(&gi, "0,2") || r == elem(&gi, "0,-2")),
            other => panic!("expected a square root, got {other:?}"),
        }
        // 3 + 4i = (2 + i)^2
        match elem(&gi, "3,4").is_lth_power(2).unwrap() {
            LthPower::Yes(r) => assert_eq!(r.pow(2).unwrap(), elem(&gi, "3,4")),
            other => panic!("expected a square root, got {other:?}"),
        }
        // Norm 25 is a square but 5 is not a square in Q(i).
        assert!(matches!(
            FieldElement::from_int(&gi, 5).is_lth_power(2).unwrap(),
            LthPower::No(NonPowerCertificate::Local { .. })
        ));
        let cube = field("x^3-2");
        let b = elem(&cube, "1,1,1");
        let b3 = b.pow(3).unwrap();
        match b3.is_lth_power(3).unwrap() {
            LthPower::Yes(r) => assert_eq!(r.pow(3).unwrap(), b3),
            other => panic!("expected a cube root, got {other:?}"),
        }
        let half = elem(&cube, "1/2,0,3/5").pow(5).unwrap();
        match half.is_lth_power(5).unwrap() {
            LthPower::Yes(r) => assert_eq!(r.pow(5).unwrap(), half),
            other => panic!("expected a fifth root, got {other:?}"),
        }
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003u64);
        let a = reduce_rational(&BigRational::new(7.into(), 11.into()), &m).unwrap();
        assert_eq!(rational_reconstruction(&a, &m), Some(BigRational::new(7.into(), 11.into())));
    }
}
