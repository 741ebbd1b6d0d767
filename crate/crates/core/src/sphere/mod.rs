//! Coherent states on the sphere.
//!
//! A classical phase point `(x, l)` with `|x| = r`, `l . x = 0` maps to the
//! complex label `z = cosh|l| x/r + i sinh|l|/|l| l x x/r` with `z . z = 1`.
//! The state `|z>` is the common eigenvector of `Z_1, Z_2, Z_3`.

mod construct;
mod observables;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use construct::{
    coherent_closed_form, coherent_ladder_generated, coherent_ladder_generated_in, coherent_triple_sum,
    coherent_triple_sum_in, multiplet_deviation, north_pole_state, rotate_state, GaussRotation,
};
pub use observables::{
    build_coherent, eigen_residual, expect_j, expect_x, relative_x, uncertainty_j, CoherentState, Truncation,
    UncertaintyJ, DEFAULT_TAIL_TOL,
};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scaled(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

const POINT_TOL: f64 = 1e-9;

/// Position on the sphere of radius `r` and tangent angular momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePhasePoint {
    x: Vec3,
    l: Vec3,
    r: f64,
}

impl SpherePhasePoint {
    /// Validates `|x.x - r^2| / r^2 <= 1e-9` and `|l.x| / (|l| r) <= 1e-9`.
    pub fn new(x: Vec3, l: Vec3, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidPhasePoint(format!("radius must be positive, got {r}")));
        }
        if x.iter().chain(l.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPhasePoint("non-finite component".into()));
        }
        let radial = (dot(x, x) - r * r).abs() / (r * r);
        if radial > POINT_TOL {
            return Err(Error::InvalidPhasePoint(format!(
                "|x|^2 = {} differs from r^2 = {} (relative {radial:e})",
                dot(x, x),
                r * r
            )));
        }
        let ln = norm(l);
        if ln > 0.0 {
            let tangency = dot(l, x).abs() / (ln * r);
            if tangency > POINT_TOL {
                return Err(Error::InvalidPhasePoint(format!("l is not tangent to x: |l.x|/(|l| r) = {tangency:e}")));
            }
        }
        Ok(Self { x, l, r })
    }

    /// Repairs slightly inconsistent input: `x` is rescaled onto the sphere of
    /// radius `r` and `l` is projected onto the tangent plane at `x`.
    pub fn projected(x: Vec3, l: Vec3, r: f64) -> Result<Self> {
        let nx = norm(x);
        if !(nx > 0.0 && nx.is_finite()) {
            return Err(Error::InvalidPhasePoint("x must be a nonzero finite vector".into()));
        }
        let u = scaled(x, 1.0 / nx);
        let along = dot(l, u);
        let lt = [l[0] - along * u[0], l[1] - along * u[1], l[2] - along * u[2]];
        Self::new(scaled(u, r), lt, r)
    }

    pub fn x(&self) -> Vec3 {
        self.x
    }

    pub fn l(&self) -> Vec3 {
        self.l
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn l_norm(&self) -> f64 {
        norm(self.l)
    }

    /// Default truncation `max(ceil(2|l|) + 20, 40)`.
    pub fn default_j_cut(&self) -> u32 {
        ((2.0 * self.l_norm()).ceil() as u32 + 20).max(40)
    }
}

/// A point with `x` uniform on the sphere of radius `r` and `l` of length
/// `l_norm` in a uniformly random tangent direction.
pub fn random_tangent_point<R: rand::Rng + ?Sized>(rng: &mut R, l_norm: f64, r: f64) -> Result<SpherePhasePoint> {
    let c: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let s = (1.0 - c * c).sqrt();
    let u = [s * phi.cos(), s * phi.sin(), c];
    let e1 = if u[2].abs() < 0.9 { cross(u, [0.0, 0.0, 1.0]) } else { cross(u, [1.0, 0.0, 0.0]) };
    let e1 = scaled(e1, 1.0 / norm(e1));
    let e2 = cross(u, e1);
    let psi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let l = [0, 1, 2].map(|i| l_norm * (psi.cos() * e1[i] + psi.sin() * e2[i]));
    SpherePhasePoint::projected(scaled(u, r), l, r)
}

/// Complex label with `z . z = 1` (bilinear).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZLabel {
    z: [Complex64; 3],
}

impl ZLabel {
    /// The bilinear constraint is checked relative to `max(1, sum |z_i|^2)`,
    /// the scale of the rounding error of `z . z` in f64.
    pub fn new(z: [Complex64; 3]) -> Result<Self> {
        let tol = 1e-9;
        let defect = Self::defect_of(&z);
        if !(defect <= tol) {
            return Err(Error::NotOnComplexSphere { defect, tol });
        }
        Ok(Self { z })
    }

    fn defect_of(z: &[Complex64; 3]) -> f64 {
        let zz = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
        let herm: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        (zz - 1.0).norm() / herm.max(1.0)
    }

    /// `|z . z - 1| / max(1, sum |z_i|^2)`.
    pub fn defect(&self) -> f64 {
        Self::defect_of(&self.z)
    }

    pub fn north_pole() -> Self {
        Self { z: [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    pub fn z(&self) -> [Complex64; 3] {
        self.z
    }
}

pub fn phase_to_z(p: &SpherePhasePoint) -> Result<ZLabel> {
    let ln = p.l_norm();
    let u = scaled(p.x, 1.0 / p.r);
    let (c, s) = if ln == 0.0 { (1.0, 0.0) } else { (ln.cosh(), ln.sinh() / ln) };
    let t = cross(p.l, u);
    ZLabel::new([0, 1, 2].map(|i| Complex64::new(c * u[i], s * t[i])))
}

/// `mu`, `nu`, `gamma` of `|z> = e^{mu J-} e^{gamma J3} e^{nu J+} |n3>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub mu: Complex64,
    pub nu: Complex64,
    /// Principal `ln((1 + z3)/2)`; powers `e^{gamma m}` are evaluated as
    /// integer powers of `(1 + z3)/2`.
    pub gamma: Complex64,
    pub half_one_plus_z3: Complex64,
}

impl GenerationParams {
    pub fn from_label(zl: &ZLabel) -> Result<Self> {
        let [z1, z2, z3] = zl.z;
        let d = z3 + 1.0;
        if d.norm() <= 1e-12 * (1.0 + z3.norm()) {
            return Err(Error::SingularLabel);
        }
        let i = Complex64::i();
        let h = d / 2.0;
        Ok(Self { mu: (z1 + i * z2) / d, nu: (-z1 + i * z2) / d, gamma: h.ln(), half_one_plus_z3: h })
    }
}
