//! Truncated zero-helicity representation of e(3) on the basis `|j, m>`.
//!
//! Operators act sparsely and exactly. Amplitudes raised above `j_cut` are
//! dropped and their squared magnitude is added to a loss counter.

mod ops;
mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use ops::{defect_from_levels, level_norms};
pub use ops::{
    apply, apply_j, apply_x, apply_z, apply_z_composed, expectation, identity_defect, inner,
    z_scalar_functions, Angular, Position, Generator,
};
pub use state::StateVector;

/// Basis label `|j, m>` with `|m| <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub j: u32,
    pub m: i32,
}

impl BasisIndex {
    pub fn new(j: u32, m: i32) -> Option<Self> {
        (m.unsigned_abs() <= j).then_some(Self { j, m })
    }

    /// All labels with `j <= j_max`, ordered by `(j, m)`.
    pub fn all(j_max: u32) -> impl Iterator<Item = Self> {
        (0..=j_max).flat_map(|j| (-(j as i32)..=j as i32).map(move |m| Self { j, m }))
    }
}

/// Radius of the sphere and the helicity, which is fixed at zero here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepParams {
    r: f64,
}

impl RepParams {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self { r })
        } else {
            Err(Error::InvalidPhasePoint(format!("radius must be positive, got {r}")))
        }
    }

    pub fn unit() -> Self {
        Self { r: 1.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn zeta(&self) -> i32 {
        0
    }
}

impl Default for RepParams {
    fn default() -> Self {
        Self::unit()
    }
}

/// Every operator the library can apply to a `StateVector`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLabel {
    J1,
    J2,
    J3,
    Jplus,
    Jminus,
    Jsq,
    X1,
    X2,
    X3,
    Xplus,
    Xminus,
    Z1,
    Z2,
    Z3,
}
