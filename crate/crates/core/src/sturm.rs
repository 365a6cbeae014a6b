//! Exact real-root counting with Sturm sequences over ℚ.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::{IntPolynomial, RatPolynomial};
use crate::resultant::squarefree_part;

fn sturm_chain(f: &RatPolynomial) -> Vec<RatPolynomial> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let nz: Vec<i8> = signs.filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

fn changes_at_infinity(chain: &[RatPolynomial], positive: bool) -> usize {
    sign_changes(chain.iter().map(|p| {
        let s = sign(&p.lead());
        if !positive && p.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of a nonzero integer polynomial.
pub fn count_real_roots(f: &IntPolynomial) -> usize {
    let sf = squarefree_part(f).expect("nonzero polynomial");
    if sf.deg() == 0 {
        return 0;
    }
    let chain = sturm_chain(&sf.to_rational());
    changes_at_infinity(&chain, false) - changes_at_infinity(&chain, true)
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_real_roots_in(f: &IntPolynomial, a: &BigRational, b: &BigRational) -> usize {
    let sf = squarefree_part(f).expect("nonzero polynomial");
    if sf.deg() == 0 {
        return 0;
    }
    let chain = sturm_chain(&sf.to_rational());
    let at = |x: &BigRational| sign_changes(chain.iter().map(|p| sign(&p.eval(x))));
    at(a) - at(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn real_root_counts() {
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&p(&[-1, -1, 1])), 2);
        assert_eq!(count_real_roots(&p(&[-2, 0, 0, 1])), 1);
        assert_eq!(count_real_roots(&IntPolynomial::parse("x^12+x+1").unwrap()), 0);
        assert_eq!(count_real_roots(&IntPolynomial::parse("x^13+x+1").unwrap()), 1);
        // (x - 1)^2 (x + 2) has two distinct real roots.
        assert_eq!(count_real_roots(&p(&[2, -3, 0, 1])), 2);
    }

    #[test]
    fn counts_in_interval() {
        let f = p(&[-2, 0, 1]);
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(count_real_roots_in(&f, &q(0), &q(2)), 1);
        assert_eq!(count_real_roots_in(&f, &q(-2), &q(2)), 2);
        assert_eq!(count_real_roots_in(&f, &q(2), &q(5)), 0);
    }
}
