//! Numerical kernels: log-domain complex numbers, extended-range and
//! extended-precision carriers, special functions.

pub mod hp;
pub mod log_complex;
pub mod scalar;
pub mod scaled;
pub mod special;

pub use hp::HpComplex;
pub use log_complex::{log_complex_mul, log_complex_sum, wrap_phase, LogComplex};
pub use scalar::Scalar;
pub use scaled::ScaledComplex;
pub use special::{
    gegenbauer, gegenbauer_hypergeometric, gegenbauer_sequence, hyp2f1_terminating, log_factorial,
    log_gamma,
};
