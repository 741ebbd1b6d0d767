//! Complex numbers stored as (ln|w|, arg w).
//!
//! Products are exact in the log domain. Sums are evaluated by factoring out
//! the largest magnitude, so values far outside the f64 range stay finite.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Map an angle to (-pi, pi].
pub fn wrap_phase(theta: f64) -> f64 {
    if !theta.is_finite() {
        return theta;
    }
    let mut t = theta % (2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    } else if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// `e^{i theta}`, exact on the axes so that `w + (-w)` cancels to zero.
fn unit(theta: f64) -> Complex64 {
    use std::f64::consts::FRAC_PI_2;
    if theta == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if theta == PI || theta == -PI {
        Complex64::new(-1.0, 0.0)
    } else if theta == FRAC_PI_2 {
        Complex64::new(0.0, 1.0)
    } else if theta == -FRAC_PI_2 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(theta.cos(), theta.sin())
    }
}

/// A complex number `exp(log_mag + i phase)`. Zero has `log_mag = -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl Default for LogComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl LogComplex {
    pub const ZERO: Self = Self { log_mag: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: Self = Self { log_mag: 0.0, phase: 0.0 };

    pub fn from_polar(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self { log_mag, phase: wrap_phase(phase) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self { log_mag: z.norm().ln(), phase: z.arg() }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// `exp(x)` for real `x`.
    pub fn exp_real(x: f64) -> Self {
        Self::from_polar(x, 0.0)
    }

    /// Lossy conversion back to rectangular form; overflows to infinity.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        unit(self.phase) * self.log_mag.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn conj(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self { log_mag: self.log_mag, phase: wrap_phase(-self.phase) }
    }

    pub fn recip(self) -> Self {
        Self { log_mag: -self.log_mag, phase: wrap_phase(-self.phase) }
    }

    /// Integer power. `0^0 = 1`.
    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return if n > 0 { Self::ZERO } else { Self::from_polar(f64::INFINITY, 0.0) };
        }
        Self::from_polar(self.log_mag * n as f64, self.phase * n as f64)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self { log_mag: 0.5 * self.log_mag, phase: 0.5 * self.phase }
    }

    /// `ln |w|^2`.
    pub fn ln_norm_sqr(self) -> f64 {
        2.0 * self.log_mag
    }
}

/// Product in the log domain.
pub fn log_complex_mul(a: LogComplex, b: LogComplex) -> LogComplex {
    if a.is_zero() || b.is_zero() {
        return LogComplex::ZERO;
    }
    LogComplex::from_polar(a.log_mag + b.log_mag, a.phase + b.phase)
}

/// Sum of many terms with the largest magnitude factored out.
pub fn log_complex_sum(terms: &[LogComplex]) -> LogComplex {
    sum_iter(terms.iter().copied())
}

pub(crate) fn sum_iter<I: IntoIterator<Item = LogComplex>>(terms: I) -> LogComplex {
    let terms: Vec<LogComplex> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    let Some(peak) = terms.iter().map(|t| t.log_mag).reduce(f64::max) else {
        return LogComplex::ZERO;
    };
    if !peak.is_finite() {
        return LogComplex::from_polar(peak, terms[0].phase);
    }
    let acc: Complex64 = terms
        .iter()
        .map(|t| unit(t.phase) * (t.log_mag - peak).exp())
        .sum();
    let s = LogComplex::from_complex(acc);
    if s.is_zero() {
        return s;
    }
    LogComplex { log_mag: s.log_mag + peak, phase: s.phase }
}

impl Mul for LogComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        log_complex_mul(self, rhs)
    }
}

impl Div for LogComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        log_complex_mul(self, rhs.recip())
    }
}

impl Neg for LogComplex {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::from_polar(self.log_mag, self.phase + PI)
    }
}

impl Add for LogComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        log_complex_sum(&[self, rhs])
    }
}

impl Sub for LogComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        log_complex_sum(&[self, -rhs])
    }
}
