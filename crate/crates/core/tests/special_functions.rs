//! Gegenbauer and terminating hypergeometric values against exact rational
//! arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use sphere_coherent::numerics::{gegenbauer, gegenbauer_hypergeometric, hyp2f1_terminating, log_factorial};

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite")
}

/// `C_n^alpha(x)` from the explicit sum
/// `sum_k (-1)^k (alpha)_{n-k} / (k! (n-2k)!) (2x)^{n-2k}`.
fn gegenbauer_exact(n: u32, alpha: &BigRational, x: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for k in 0..=n / 2 {
        let mut poch = BigRational::one();
        for i in 0..(n - k) {
            poch *= alpha + q(i as i64, 1);
        }
        let mut den = BigRational::one();
        for i in 1..=k {
            den *= q(i as i64, 1);
        }
        for i in 1..=(n - 2 * k) {
            den *= q(i as i64, 1);
        }
        let mut pow = BigRational::one();
        for _ in 0..(n - 2 * k) {
            pow *= x * q(2, 1);
        }
        let term = poch * pow / den;
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `2F1(-n, b; c; z)` term by term.
fn hyp2f1_exact(n: u32, b: &BigRational, c: &BigRational, z: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut total = term.clone();
    for s in 0..n {
        let s = q(s as i64, 1);
        term = term * (&s - q(n as i64, 1)) * (b + &s) / ((c + &s) * (&s + q(1, 1))) * z;
        total += &term;
    }
    total
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

#[test]
fn gegenbauer_matches_rational_sum() {
    let alphas = [(1, 2), (3, 2), (9, 2), (5, 1)];
    let xs = [(3, 10), (1, 1), (-7, 10), (5, 2)];
    for (an, ad) in alphas {
        for (xn, xd) in xs {
            for n in 0..=20 {
                let want = to_f64(&gegenbauer_exact(n, &q(an, ad), &q(xn, xd)));
                let x = Complex64::new(xn as f64 / xd as f64, 0.0);
                let alpha = an as f64 / ad as f64;
                let rec = gegenbauer(n, alpha, x).unwrap().to_complex();
                let hyp = gegenbauer_hypergeometric(n, alpha, x).unwrap().to_complex();
                // The recurrence accumulates rounding near polynomial roots;
                // compare against the scale of the largest term.
                let scale = to_f64(&gegenbauer_exact(n, &q(an, ad), &q(xn.abs().max(xd), xd))).abs().max(1.0);
                assert!((rec.re - want).abs() <= 1e-12 * scale.max(want.abs()), "n={n} a={alpha} x={x}: {rec} vs {want}");
                assert!(rec.im == 0.0);
                assert!(rel(hyp.re, want) <= 1e-12 || (hyp.re - want).abs() <= 1e-14 * scale, "n={n} a={alpha}");
            }
        }
    }
}

#[test]
fn hyp2f1_matches_rational_series() {
    for n in 0..=12 {
        for (b, c) in [((1, 1), (1, 1)), ((5, 1), (3, 1)), ((7, 2), (5, 2)), ((-3, 2), (9, 1))] {
            for z in [(-1, 2), (7, 10), (3, 1)] {
                let want = to_f64(&hyp2f1_exact(n, &q(b.0, b.1), &q(c.0, c.1), &q(z.0, z.1)));
                let got = hyp2f1_terminating(
                    n,
                    b.0 as f64 / b.1 as f64,
                    c.0 as f64 / c.1 as f64,
                    Complex64::new(z.0 as f64 / z.1 as f64, 0.0),
                )
                .unwrap()
                .to_complex();
                assert!(rel(got.re, want) <= 1e-13, "n={n} b={b:?} c={c:?} z={z:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn log_factorial_matches_big_integers() {
    let mut f = BigInt::one();
    for n in 1..=200u64 {
        f *= BigInt::from(n);
        let want = f.to_f64().map(f64::ln).unwrap_or_else(|| {
            // Beyond f64 range: split off a power of two.
            let bits = f.bits();
            let shift = bits - 60;
            let top = (&f >> shift).to_f64().unwrap();
            top.ln() + shift as f64 * std::f64::consts::LN_2
        });
        assert!((log_factorial(n) - want).abs() <= 1e-13 * want.max(1.0), "n={n}");
    }
}
