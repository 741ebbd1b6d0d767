//! Gamma-family helpers, Gegenbauer polynomials and terminating 2F1 series.

use num_complex::Complex64;

use super::hp::{hp_real, HpComplex, HpFloat};
use super::log_complex::LogComplex;
use super::scaled::ScaledComplex;
use crate::error::{Error, Result};

/// `ln n!`.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 20 {
        let p: u64 = (1..=n).product();
        (p as f64).ln()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `C_0 .. C_{n_max}` of `C_n^alpha(x)` by the three-term recurrence
/// `n C_n = 2x(n+alpha-1) C_{n-1} - (n+2alpha-2) C_{n-2}`.
pub fn gegenbauer_sequence(n_max: u32, alpha: f64, x: Complex64) -> Result<Vec<ScaledComplex>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(ScaledComplex::ONE);
    if n_max == 0 {
        return Ok(out);
    }
    out.push(ScaledComplex::new(x * (2.0 * alpha)));
    for n in 2..=n_max as usize {
        let nf = n as f64;
        let next = out[n - 1] * (x * (2.0 * (nf + alpha - 1.0))) - out[n - 2] * (nf + 2.0 * alpha - 2.0);
        out.push(next / nf);
    }
    Ok(out)
}

/// `C_n^alpha(x)`.
pub fn gegenbauer(n: u32, alpha: f64, x: Complex64) -> Result<LogComplex> {
    Ok(gegenbauer_sequence(n, alpha, x)?[n as usize].to_log_complex())
}

fn check_denominator(n: u32, c: f64) -> Result<()> {
    if c <= 0.0 && c.fract() == 0.0 && -c < n as f64 {
        return Err(Error::InvalidDenominator { c, n });
    }
    Ok(())
}

pub(crate) fn hyp2f1_terminating_hp(n: u32, b: f64, c: f64, z: &HpComplex) -> Result<HpComplex> {
    check_denominator(n, c)?;
    let (bh, ch) = (hp_real(b), hp_real(c));
    let mut term = HpComplex::from_real(hp_real(1.0));
    let mut acc = term.clone();
    for s in 0..n {
        let sh = hp_real(s as f64);
        let num = (&sh - &hp_real(n as f64)) * (&bh + &sh);
        let den = (&ch + &sh) * (&sh + &hp_real(1.0));
        term = term.scale(&(num / den)) * z.clone();
        acc = acc + term.clone();
    }
    Ok(acc)
}

/// `2F1(-n, b; c; z)`: a polynomial of degree `n` in `z`. Evaluated in
/// 256-bit arithmetic because the terms can cancel by many orders of magnitude.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, z: Complex64) -> Result<LogComplex> {
    Ok(hyp2f1_terminating_hp(n, b, c, &HpComplex::from_c64(z))?.to_log_complex())
}

/// `C_n^alpha(x)` from its hypergeometric form
/// `(2alpha)_n / n! * 2F1(-n, n+2alpha; alpha+1/2; (1-x)/2)`.
pub fn gegenbauer_hypergeometric(n: u32, alpha: f64, x: Complex64) -> Result<LogComplex> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let mut prefactor: HpFloat = hp_real(1.0);
    for k in 0..n {
        prefactor = prefactor * (hp_real(2.0 * alpha) + hp_real(k as f64)) / hp_real(k as f64 + 1.0);
    }
    let xh = HpComplex::from_c64(x);
    let half = hp_real(0.5);
    let t = HpComplex::new((hp_real(1.0) - xh.re) * &half, -(xh.im * &half));
    let f = hyp2f1_terminating_hp(n, n as f64 + 2.0 * alpha, alpha + 0.5, &t)?;
    Ok(f.scale(&prefactor).to_log_complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn factorials() {
        assert_eq!(log_factorial(0), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-15);
        let direct: f64 = (1..=170).map(|k| (k as f64).ln()).sum();
        assert!((log_factorial(170) - direct).abs() < 1e-12 * direct);
        assert!((log_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-15);
    }

    #[test]
    fn low_order_gegenbauer() {
        let x = c(0.3);
        let p2 = gegenbauer(2, 0.5, x).unwrap().to_complex().re;
        assert!((p2 - (3.0 * 0.09 - 1.0) / 2.0).abs() < 1e-15);
        let c1 = gegenbauer(1, 1.5, x).unwrap().to_complex().re;
        assert!((c1 - 0.9).abs() < 1e-15);
        assert_eq!(gegenbauer(0, 4.5, x).unwrap(), LogComplex::ONE);
        assert_eq!(gegenbauer(3, 0.0, x), Err(Error::InvalidAlpha(0.0)));
    }

    #[test]
    fn hypergeometric_validation_and_small_case() {
        assert!(matches!(hyp2f1_terminating(5, 1.0, -2.0, c(0.1)), Err(Error::InvalidDenominator { .. })));
        assert!(hyp2f1_terminating(2, 1.0, -2.0, c(0.1)).is_ok());
        // 2F1(-1, b; c; z) = 1 - b z / c
        let v = hyp2f1_terminating(1, 3.0, 2.0, c(0.5)).unwrap().to_complex().re;
        assert!((v - 0.25).abs() < 1e-15);
        let r = gegenbauer_hypergeometric(5, 1.5, c(0.3)).unwrap().to_complex().re;
        let s = gegenbauer(5, 1.5, c(0.3)).unwrap().to_complex().re;
        assert!((r - s).abs() < 1e-13 * s.abs());
    }
}
