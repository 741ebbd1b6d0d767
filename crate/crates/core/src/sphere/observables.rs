use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::construct::closed_form_amplitudes;
use super::{cross, dot, norm, phase_to_z, scaled, SpherePhasePoint, Vec3, ZLabel};
use crate::error::{Error, Result};
use crate::numerics::{LogComplex, ScaledComplex};
use crate::repspace::{apply_z, expectation, Generator, OperatorLabel, RepParams, StateVector};

pub const DEFAULT_TAIL_TOL: f64 = 1e-24;
const J_CUT_LIMIT: u32 = 4096;

/// How the basis is truncated for a state built from a phase point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    Fixed(u32),
    /// Start from the default cutoff and double it until the squared-norm
    /// fraction in the top three levels is below `tail_tol`.
    Auto { tail_tol: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto { tail_tol: DEFAULT_TAIL_TOL }
    }
}

/// A normalized coherent state together with its label and truncation data.
#[derive(Clone, Debug)]
pub struct CoherentState {
    pub point: SpherePhasePoint,
    pub label: ZLabel,
    pub state: StateVector,
    pub ln_tail_fraction: f64,
}

impl CoherentState {
    pub fn j_cut(&self) -> u32 {
        self.state.j_cut()
    }

    pub fn tail_fraction(&self) -> f64 {
        self.ln_tail_fraction.exp()
    }
}

/// Closed-form state normalized before leaving the extended-range carrier.
fn normalized_closed_form(zl: &ZLabel, rep: RepParams, j_cut: u32) -> StateVector {
    let amps = closed_form_amplitudes(zl, j_cut);
    let total: ScaledComplex = amps.iter().map(|(_, a)| a.norm_sqr()).sum();
    let inv = ScaledComplex::ONE / total.sqrt();
    StateVector::from_amplitudes(rep, j_cut, amps.into_iter().map(|(k, a)| (k, (a * inv).to_log_complex())))
}

pub fn build_coherent(p: &SpherePhasePoint, truncation: Truncation) -> Result<CoherentState> {
    let label = phase_to_z(p)?;
    let rep = RepParams::new(p.r())?;
    let make = |j_cut: u32| {
        let state = normalized_closed_form(&label, rep, j_cut);
        let ln_tail_fraction = state.ln_tail_fraction();
        CoherentState { point: *p, label, state, ln_tail_fraction }
    };
    match truncation {
        Truncation::Fixed(j_cut) => {
            if j_cut < 2 {
                return Err(Error::TruncationTooSmall(j_cut, 2));
            }
            Ok(make(j_cut))
        }
        Truncation::Auto { tail_tol } => {
            if !(tail_tol > 0.0 && tail_tol < 0.1) {
                return Err(Error::InvalidTailTolerance(tail_tol));
            }
            let mut j_cut = p.default_j_cut();
            loop {
                let s = make(j_cut);
                if s.ln_tail_fraction < tail_tol.ln() {
                    return Ok(s);
                }
                if j_cut >= J_CUT_LIMIT {
                    return Err(Error::TruncationNotConverged { tol: tail_tol, limit: J_CUT_LIMIT });
                }
                j_cut = (2 * j_cut).min(J_CUT_LIMIT);
            }
        }
    }
}

/// `max_i || (Z_i - z_i) s ||` over levels `j <= j_cut - 2`, for normalized `s`.
pub fn eigen_residual(s: &StateVector, zl: &ZLabel) -> f64 {
    let j_max = s.j_cut().saturating_sub(2);
    [Generator::Z1, Generator::Z2, Generator::Z3]
        .iter()
        .zip(zl.z())
        .map(|(&g, zi)| {
            let d = apply_z(g, s).sub(&s.scale(&LogComplex::from_complex(zi))).expect("same space");
            (0.5 * d.restricted(j_max).ln_norm_sqr()).exp()
        })
        .fold(0.0, f64::max)
}

fn real_triplet(s: &StateVector, ops: [OperatorLabel; 3]) -> Result<Vec3> {
    let mut out = [0.0; 3];
    for (o, op) in out.iter_mut().zip(ops) {
        let v: Complex64 = expectation(op, s)?;
        debug_assert!(v.im.abs() <= 1e-9 * v.re.abs().max(1.0), "{op:?} expectation {v} not real");
        *o = v.re;
    }
    Ok(out)
}

/// `<J_1>, <J_2>, <J_3>`.
pub fn expect_j(s: &StateVector) -> Result<Vec3> {
    real_triplet(s, [OperatorLabel::J1, OperatorLabel::J2, OperatorLabel::J3])
}

/// `<X_1>, <X_2>, <X_3>`.
pub fn expect_x(s: &StateVector) -> Result<Vec3> {
    real_triplet(s, [OperatorLabel::X1, OperatorLabel::X2, OperatorLabel::X3])
}

/// Angular momentum for the reference point on axis `n`: same magnitude as
/// `l`, direction of the part of `l` tangent at `n`.
fn reference_momentum(l: Vec3, n: Vec3) -> Vec3 {
    let ln = norm(l);
    if ln == 0.0 {
        return [0.0; 3];
    }
    let along = dot(l, n);
    let mut t = [l[0] - along * n[0], l[1] - along * n[1], l[2] - along * n[2]];
    if norm(t) <= 1e-12 * ln {
        let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        t = cross(n, helper);
    }
    scaled(t, ln / norm(t))
}

/// `<X_k>_z / <X_k>_{w_k}` where `w_k` is the label of the phase point on
/// the axis `n_k` with the same `|l|`. Components whose reference value is
/// below `1e-6 r` are `None`.
pub fn relative_x(c: &CoherentState) -> Result<[Option<f64>; 3]> {
    let p = c.point;
    let x = expect_x(&c.state)?;
    let mut out = [None; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut n = [0.0; 3];
        n[k] = 1.0;
        let q = SpherePhasePoint::new(scaled(n, p.r()), reference_momentum(p.l(), n), p.r())?;
        let reference = build_coherent(&q, Truncation::Fixed(c.j_cut()))?;
        let xr = expect_x(&reference.state)?[k];
        if xr.abs() >= 1e-6 * p.r() {
            *o = Some(x[k] / xr);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyJ {
    pub var_j: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `(Delta J)^2 = <J^2> - <J>.<J>` against `t/(2(1-t))`, `t = |<X>|^2 / r^2`.
pub fn uncertainty_j(s: &StateVector) -> Result<UncertaintyJ> {
    let j = expect_j(s)?;
    let j2 = expectation(OperatorLabel::Jsq, s)?.re;
    let x = expect_x(s)?;
    let r = s.rep().r();
    let t = dot(x, x) / (r * r);
    let var_j = j2 - dot(j, j);
    let bound = if t >= 1.0 { f64::INFINITY } else { 0.5 * t / (1.0 - t) };
    Ok(UncertaintyJ { var_j, bound, holds: var_j >= bound - 1e-12 })
}
