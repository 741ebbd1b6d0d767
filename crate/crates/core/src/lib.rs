//! Coherent states for a quantum particle on a circle and on the two-sphere.
//!
//! The sphere construction works in the irreducible representation of the
//! Euclidean group E(3) with zero helicity, realised on the basis `|j, m>`.

pub mod circle;
pub mod error;
pub mod numerics;
pub mod repspace;
pub mod rotator;
pub mod sphere;
pub mod spinor;
pub mod verify;

pub use error::{Error, Result};
