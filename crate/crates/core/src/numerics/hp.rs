//! 256-bit binary floating-point complex numbers.
//!
//! Used for evaluation routes whose f64 rounding error is amplified by
//! factors like `e^{2j}` and for strongly cancelling series.

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;

use super::log_complex::LogComplex;

pub const HP_BITS: usize = 256;

pub type HpFloat = FBig<HalfEven, 2>;

/// Exact lift of an f64 into the working precision.
pub fn hp_real(x: f64) -> HpFloat {
    HpFloat::try_from(x).expect("finite f64").with_precision(HP_BITS).value()
}

fn cached(table: &OnceLock<Mutex<HashMap<(u64, u64), HpFloat>>>, key: (u64, u64), f: impl FnOnce() -> HpFloat) -> HpFloat {
    let map = table.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = f();
    map.lock().expect("cache lock").insert(key, v.clone());
    v
}

/// `exp(x)` at working precision; memoized since callers reuse a small set of arguments.
pub fn hp_exp(x: f64) -> HpFloat {
    static TABLE: OnceLock<Mutex<HashMap<(u64, u64), HpFloat>>> = OnceLock::new();
    cached(&TABLE, (x.to_bits(), 0), || hp_real(x).exp())
}

/// `sqrt(num / den)` at working precision, memoized.
pub fn hp_sqrt_ratio(num: f64, den: f64) -> HpFloat {
    static TABLE: OnceLock<Mutex<HashMap<(u64, u64), HpFloat>>> = OnceLock::new();
    cached(&TABLE, (num.to_bits(), den.to_bits()), || (hp_real(num) / hp_real(den)).sqrt())
}

fn is_zero(x: &HpFloat) -> bool {
    x.repr().significand().is_zero()
}

/// Split into (mantissa in [0.5, 1), binary exponent); zero gives (0, 0).
fn split(x: &HpFloat) -> (f64, i64) {
    if is_zero(x) {
        return (0.0, 0);
    }
    let sig = x.repr().significand().clone();
    let whole = HpFloat::from_parts(sig, 0).to_f64().value();
    let (m, e) = libm::frexp(whole);
    (m, x.repr().exponent() as i64 + e as i64)
}

#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: HpFloat,
    pub im: HpFloat,
}

impl HpComplex {
    pub fn new(re: HpFloat, im: HpFloat) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(hp_real(0.0), hp_real(0.0))
    }

    pub fn from_real(x: HpFloat) -> Self {
        Self::new(x, hp_real(0.0))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(hp_real(z.re), hp_real(z.im))
    }

    pub fn i() -> Self {
        Self::new(hp_real(0.0), hp_real(1.0))
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.re) && is_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, x: &HpFloat) -> Self {
        Self::new(&self.re * x, &self.im * x)
    }

    pub fn norm_sqr(&self) -> HpFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// Conversion without overflow: the common binary exponent is factored out
    /// before rounding to f64.
    pub fn to_log_complex(&self) -> LogComplex {
        let (mr, er) = split(&self.re);
        let (mi, ei) = split(&self.im);
        if mr == 0.0 && mi == 0.0 {
            return LogComplex::ZERO;
        }
        let e = match (mr == 0.0, mi == 0.0) {
            (true, _) => ei,
            (_, true) => er,
            _ => er.max(ei),
        };
        let shift = |m: f64, k: i64| if m == 0.0 { 0.0 } else { libm::ldexp(m, (k - e).max(-1100) as i32) };
        let z = Complex64::new(shift(mr, er), shift(mi, ei));
        LogComplex::from_polar(z.norm().ln() + e as f64 * std::f64::consts::LN_2, z.arg())
    }
}

impl Add for HpComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for HpComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for HpComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for HpComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &d;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &d;
        Self::new(re, im)
    }
}

impl Neg for HpComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = HpComplex::from_c64(Complex64::new(1.5, -2.0));
        let b = HpComplex::from_c64(Complex64::new(-0.25, 3.0));
        let q = (a.clone() * b.clone()) / b;
        assert!((q.to_c64() - Complex64::new(1.5, -2.0)).norm() < 1e-15);
        let e = hp_exp(1.0).to_f64().value();
        assert_eq!(e, std::f64::consts::E);
        assert_eq!(hp_sqrt_ratio(2.0, 1.0).to_f64().value(), std::f64::consts::SQRT_2);
    }

    #[test]
    fn log_conversion_beyond_f64_range() {
        let big = HpComplex::from_real(hp_exp(400.0));
        let w = big.clone() * big.clone() * HpComplex::i();
        let l = w.to_log_complex();
        assert!((l.log_mag - 800.0).abs() < 1e-12);
        assert!((l.phase - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(HpComplex::zero().to_log_complex().is_zero());
    }
}
