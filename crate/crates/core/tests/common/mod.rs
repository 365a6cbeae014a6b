#![allow(dead_code)]

use bogocert_core::IntPolynomial;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Roots of an integer polynomial by Durand–Kerner iteration in f64.
pub fn roots_f64(f: &IntPolynomial) -> Vec<Complex64> {
    let n = f.deg();
    let lead = f.lead().to_f64().unwrap();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap() / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// log M(f) from numerically computed roots.
pub fn log_mahler_f64(f: &IntPolynomial) -> f64 {
    let lead = f.lead().to_f64().unwrap().abs();
    lead.ln() + roots_f64(f).iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>()
}

/// h = log M(f) / deg f.
pub fn height_f64(f: &IntPolynomial) -> f64 {
    log_mahler_f64(f) / f.deg() as f64
}

/// Discriminant of ℚ(√m) for squarefree m ≠ 1.
pub fn quadratic_field_disc(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

pub fn squarefree_part(mut n: i64) -> i64 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * n
}
