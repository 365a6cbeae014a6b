//! Integer helpers: primality, small-prime iteration, trial factorization,
//! p-adic valuations and exact integer roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// Iterator over the primes starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    std::iter::successors(Some(2u64), |&p| Some(next_prime(p)))
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a nonzero rational.
pub fn valuation_rational(q: &BigRational, p: u64) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Result of trial-dividing an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFactorization {
    /// Prime factors found, ascending, with exponents.
    pub primes: Vec<(BigUint, u32)>,
    /// Unfactored cofactor (1 when the factorization is complete).
    pub cofactor: BigUint,
}

impl TrialFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Trial division by primes up to `bound`. A remaining cofactor below
/// `bound^2` is prime and is moved into `primes`.
pub fn trial_factor(n: &BigUint, bound: u64) -> TrialFactorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.clone();
    let mut primes = Vec::new();
    for p in primes_up_to(bound) {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            primes.push((bp, e));
        }
    }
    let b = BigUint::from(bound);
    if !m.is_one() && m < &b * &b {
        primes.push((m, 1));
        primes.sort();
        m = BigUint::one();
    }
    TrialFactorization { primes, cofactor: m }
}

/// Prime factorization of a nonzero `u64`.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let mut m = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Exact `n`-th root of an integer, if it exists (negative allowed for odd `n`).
pub fn exact_root(a: &BigInt, n: u32) -> Option<BigInt> {
    if n == 0 {
        return None;
    }
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if a.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_root(&-a, n).map(|r| -r);
    }
    let r = a.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *a {
        Some(r)
    } else {
        None
    }
}

/// Exact `n`-th root of a rational, if it exists.
pub fn exact_root_rational(q: &BigRational, n: u32) -> Option<BigRational> {
    let num = exact_root(q.numer(), n)?;
    let den = exact_root(q.denom(), n)?;
    Some(BigRational::new(num, den))
}

/// Modular inverse of `a` modulo `m` (any modulus), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

pub fn mod_inverse_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let r = BigInt::from(a).extended_gcd(&BigInt::from(p));
    if !r.gcd.is_one() {
        return None;
    }
    r.x.mod_floor(&BigInt::from(p)).to_u64()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Integer ceiling of a rational.
pub fn ceil_rational(q: &BigRational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

/// Symmetric residue of `a` modulo `m`, in (-m/2, m/2].
pub fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Sign of a big integer as -1, 0 or 1.
pub fn sign_of(a: &BigInt) -> i32 {
    match a.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Serde helpers storing a `BigInt` as a decimal string.
pub(crate) mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.trim().parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let by_test: Vec<u64> = (0..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, by_test);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn trial_factor_handles_large_prime_cofactor() {
        let n = BigUint::from(8_630_788_777_645u64);
        let f = trial_factor(&n, 1 << 20);
        assert!(f.is_complete());
        let ps: Vec<String> = f.primes.iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(ps, vec!["5", "89", "19395030961"]);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&BigInt::from(-8), 3), Some(BigInt::from(-2)));
        assert_eq!(exact_root(&BigInt::from(-4), 2), None);
        assert_eq!(exact_root(&BigInt::from(2), 5), None);
        assert_eq!(valuation(&BigInt::from(2400), 5), 2);
        assert_eq!(totient(12), 4);
        assert_eq!(symmetric_mod(&BigInt::from(18), &BigInt::from(25)), BigInt::from(-7));
    }
}
