//! Complex mantissa with an explicit binary exponent.
//!
//! Rescaling by powers of two is exact, so products and sums keep full f64
//! relative precision over an unbounded exponent range. Used where log-domain
//! storage would cost accuracy (large unnormalized amplitudes).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::log_complex::LogComplex;

/// `mant * 2^exp2` with `max(|re|, |im|)` of `mant` in [0.5, 1) unless zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    mant: Complex64,
    exp2: i64,
}

fn ldexp(x: f64, e: i64) -> f64 {
    let e = e.clamp(-4000, 4000) as i32;
    if e > 1000 {
        libm::ldexp(libm::ldexp(x, 1000), e - 1000)
    } else if e < -1000 {
        libm::ldexp(libm::ldexp(x, -1000), e + 1000)
    } else {
        libm::ldexp(x, e)
    }
}

impl ScaledComplex {
    pub const ZERO: Self = Self { mant: Complex64::new(0.0, 0.0), exp2: 0 };
    pub const ONE: Self = Self { mant: Complex64::new(0.5, 0.0), exp2: 1 };

    fn normalized(mant: Complex64, exp2: i64) -> Self {
        let peak = mant.re.abs().max(mant.im.abs());
        if peak == 0.0 {
            return Self::ZERO;
        }
        let (_, e) = libm::frexp(peak);
        let e = e as i64;
        Self { mant: Complex64::new(ldexp(mant.re, -e), ldexp(mant.im, -e)), exp2: exp2 + e }
    }

    pub fn new(z: Complex64) -> Self {
        Self::normalized(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    /// `exp(x)` for real `x`, evaluated in chunks so that an exactly
    /// representable argument loses only a few ulps.
    pub fn exp_real(x: f64) -> Self {
        const CHUNK: f64 = 512.0;
        let n = (x / CHUNK).trunc();
        let rest = x - n * CHUNK;
        let step = Self::from_real((n.signum() * CHUNK).exp());
        let mut out = Self::from_real(rest.exp());
        for _ in 0..(n.abs() as u64) {
            out = out * step;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn conj(self) -> Self {
        Self { mant: self.mant.conj(), exp2: self.exp2 }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// `|w|^2` as a real scaled number.
    pub fn norm_sqr(self) -> Self {
        Self::normalized(Complex64::new(self.mant.norm_sqr(), 0.0), 2 * self.exp2)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        if self.exp2 % 2 == 0 {
            Self::normalized(self.mant.sqrt(), self.exp2 / 2)
        } else {
            Self::normalized((self.mant * 2.0).sqrt(), (self.exp2 - 1) / 2)
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(ldexp(self.mant.re, self.exp2), ldexp(self.mant.im, self.exp2))
    }

    pub fn to_log_complex(self) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::from_polar(
            self.mant.norm().ln() + self.exp2 as f64 * std::f64::consts::LN_2,
            self.mant.arg(),
        )
    }

    /// `ln |w|`.
    pub fn ln_abs(self) -> f64 {
        self.to_log_complex().log_mag
    }
}

impl Mul for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalized(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Mul<Complex64> for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        Self::normalized(self.mant * rhs, self.exp2)
    }
}

impl Mul<f64> for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::normalized(self.mant * rhs, self.exp2)
    }
}

impl Div for ScaledComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Self::normalized(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Div<f64> for ScaledComplex {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        Self::normalized(self.mant / rhs, self.exp2)
    }
}

impl Neg for ScaledComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { mant: -self.mant, exp2: self.exp2 }
    }
}

impl Add for ScaledComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let e = self.exp2.max(rhs.exp2);
        let a = self.mant.scale(ldexp(1.0, self.exp2 - e));
        let b = rhs.mant.scale(ldexp(1.0, rhs.exp2 - e));
        Self::normalized(a + b, e)
    }
}

impl Sub for ScaledComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::iter::Sum for ScaledComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_precision() {
        let a = ScaledComplex::exp_real(2000.0);
        assert!((a.ln_abs() - 2000.0).abs() < 1e-12);
        let b = ScaledComplex::exp_real(-2000.5);
        let p = a * b;
        assert!((p.to_complex().re - (-0.5f64).exp()).abs() < 1e-14);
        let s = ScaledComplex::new(Complex64::new(3.0, -4.0));
        assert_eq!(s.norm_sqr().to_complex().re, 25.0);
        assert_eq!((s.conj() * s).to_complex().re, 25.0);
        let r = ScaledComplex::from_real(8.0).powi(101).sqrt();
        assert!((r.ln_abs() - 101.0 * 1.5 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn addition_aligns_exponents() {
        let big = ScaledComplex::exp_real(1000.0);
        let x = big + ScaledComplex::ONE;
        assert_eq!(x, big);
        let y = ScaledComplex::from_real(1.5) + ScaledComplex::from_real(0.25);
        assert_eq!(y.to_complex().re, 1.75);
        assert!((big - big).is_zero());
    }
}
