//! Amplitude arithmetic shared by the f64 log-domain type and the 256-bit type.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::hp::{hp_exp, hp_real, hp_sqrt_ratio, HpComplex};
use super::log_complex::{sum_iter, LogComplex};

pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Smallest level-to-level magnitude ratio that identity checks resolve
    /// separately; see `repspace::identity_defect`.
    const RESOLUTION: f64;

    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_c64(z: Complex64) -> Self;
    /// `sqrt(num / den)` for non-negative arguments.
    fn sqrt_ratio(num: f64, den: f64) -> Self;
    /// `exp(x)` for real `x`.
    fn exp_real(x: f64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_log_complex(&self) -> LogComplex;

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn i() -> Self {
        Self::from_c64(Complex64::i())
    }

    fn ln_abs(&self) -> f64 {
        self.to_log_complex().log_mag
    }

    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |a, b| a + b)
    }
}

impl Scalar for LogComplex {
    const RESOLUTION: f64 = 1.0;
    fn zero() -> Self {
        LogComplex::ZERO
    }
    fn from_f64(x: f64) -> Self {
        LogComplex::from_real(x)
    }
    fn from_c64(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
    fn sqrt_ratio(num: f64, den: f64) -> Self {
        LogComplex::from_real((num / den).sqrt())
    }
    fn exp_real(x: f64) -> Self {
        LogComplex::exp_real(x)
    }
    fn conj(&self) -> Self {
        LogComplex::conj(*self)
    }
    fn is_zero(&self) -> bool {
        LogComplex::is_zero(self)
    }
    fn to_log_complex(&self) -> LogComplex {
        *self
    }
    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        sum_iter(terms)
    }
}

impl Scalar for HpComplex {
    const RESOLUTION: f64 = 1e-30;
    fn zero() -> Self {
        HpComplex::zero()
    }
    fn from_f64(x: f64) -> Self {
        HpComplex::from_real(hp_real(x))
    }
    fn from_c64(z: Complex64) -> Self {
        HpComplex::from_c64(z)
    }
    fn sqrt_ratio(num: f64, den: f64) -> Self {
        HpComplex::from_real(hp_sqrt_ratio(num, den))
    }
    fn exp_real(x: f64) -> Self {
        HpComplex::from_real(hp_exp(x))
    }
    fn conj(&self) -> Self {
        HpComplex::conj(self)
    }
    fn is_zero(&self) -> bool {
        HpComplex::is_zero(self)
    }
    fn to_log_complex(&self) -> LogComplex {
        HpComplex::to_log_complex(self)
    }
}
