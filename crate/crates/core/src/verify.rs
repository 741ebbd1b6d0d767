//! The invariant suite behind the `verify` command: each check reports its
//! measured worst case against a tolerance.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::numerics::{gegenbauer, gegenbauer_hypergeometric, hyp2f1_terminating, HpComplex, LogComplex, Scalar};
use crate::repspace::{
    apply, apply_z, apply_z_composed, identity_defect, BasisIndex, Generator, OperatorLabel as Op, RepParams,
    StateVector,
};
use crate::sphere::{
    build_coherent, coherent_closed_form, coherent_ladder_generated, coherent_triple_sum, eigen_residual,
    multiplet_deviation, phase_to_z, random_tangent_point, SpherePhasePoint, Truncation, DEFAULT_TAIL_TOL,
};
use crate::spinor::{apply_k, apply_v, apply_zmatrix, kv_trace, spinor_identity_defect, z_component, z_trace, SpinorState};

/// Basis cutoff for the operator identities; identities are read on `j <= IDENTITY_J_CUT - 2`.
pub const IDENTITY_J_CUT: u32 = 30;
const PATH_J_CUT: u32 = 25;

pub const CHECKS: &[(&str, f64)] = &[
    ("algebra_closure", 1e-12),
    ("casimirs", 1e-12),
    ("v_squared", 1e-12),
    ("kv_anticommutator", 1e-12),
    ("z_commute", 1e-12),
    ("z_square_sum", 1e-12),
    ("z_routes", 1e-12),
    ("hyp2f1_identity", 1e-12),
    ("gegenbauer_series", 1e-10),
    ("three_path", 1e-10),
    ("eigen_residual", 1e-8),
    ("truncation_tail", DEFAULT_TAIL_TOL),
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// `None` selects adaptive truncation with `tail_tol`.
    pub j_cut: Option<u32>,
    pub tail_tol: f64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, j_cut: None, tail_tol: DEFAULT_TAIL_TOL, tolerances: BTreeMap::new() }
    }
}

impl VerifyConfig {
    fn truncation(&self) -> Truncation {
        match self.j_cut {
            Some(n) => Truncation::Fixed(n),
            None => Truncation::Auto { tail_tol: self.tail_tol },
        }
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        if name == "truncation_tail" && !self.tolerances.contains_key(name) {
            return self.tail_tol;
        }
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn basis<A: Scalar>(k: BasisIndex) -> StateVector<A> {
    StateVector::basis(RepParams::unit(), IDENTITY_J_CUT, k)
}

fn interior_worst(f: impl Fn(BasisIndex) -> f64) -> f64 {
    BasisIndex::all(IDENTITY_J_CUT - 2).map(f).fold(0.0, f64::max)
}

fn ab<A: Scalar>(a: Op, b: Op, s: &StateVector<A>) -> StateVector<A> {
    apply(a, &apply(b, s))
}

/// Defect of `[a, b] = k op` (or `= 0`).
fn commutator<A: Scalar>(a: Op, b: Op, rhs: Option<(A, Op)>, s: &StateVector<A>) -> f64 {
    let mut terms = vec![ab(a, b, s), ab(b, a, s).scale(&-A::one())];
    if let Some((k, op)) = rhs {
        terms.push(apply(op, s).scale(&-k));
    }
    identity_defect(&terms, IDENTITY_J_CUT)
}

const J: [Op; 3] = [Op::J1, Op::J2, Op::J3];
const X: [Op; 3] = [Op::X1, Op::X2, Op::X3];
const Z: [Op; 3] = [Op::Z1, Op::Z2, Op::Z3];
const G: [Generator; 3] = [Generator::Z1, Generator::Z2, Generator::Z3];

/// `e_{ijk}` as `(sign, k)`.
fn levi(i: usize, j: usize) -> Option<(f64, usize)> {
    if i == j {
        return None;
    }
    let k = 3 - i - j;
    let sign = if (j + 3 - i) % 3 == 1 { 1.0 } else { -1.0 };
    Some((sign, k))
}

fn ic(sign: f64) -> LogComplex {
    LogComplex::from_complex(Complex64::new(0.0, sign))
}

pub fn algebra_closure() -> f64 {
    interior_worst(|k| {
        let s = basis::<LogComplex>(k);
        let mut w = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let rhs_j = levi(i, j).map(|(sg, kk)| (ic(sg), J[kk]));
                let rhs_x = levi(i, j).map(|(sg, kk)| (ic(sg), X[kk]));
                w = w.max(commutator(J[i], J[j], rhs_j, &s));
                w = w.max(commutator(J[i], X[j], rhs_x, &s));
                w = w.max(commutator(X[i], X[j], None, &s));
            }
        }
        w
    })
}

/// `X.X = r^2` and `J.X = 0`.
pub fn casimirs() -> f64 {
    interior_worst(|k| {
        let s = basis::<LogComplex>(k);
        let r = s.rep().r();
        let mut x2: Vec<_> = X.iter().map(|&x| ab(x, x, &s)).collect();
        x2.push(s.scale(&LogComplex::from_real(-r * r)));
        let jx: Vec<_> = (0..3).map(|i| ab(J[i], X[i], &s)).collect();
        identity_defect(&x2, IDENTITY_J_CUT).max(identity_defect(&jx, IDENTITY_J_CUT))
    })
}

fn spinor_worst(f: impl Fn(&SpinorState) -> f64) -> f64 {
    interior_worst(|k| {
        let b = basis::<LogComplex>(k);
        f(&SpinorState::spin_up(b.clone())).max(f(&SpinorState::spin_down(b)))
    })
}

pub fn v_squared() -> f64 {
    spinor_worst(|s| spinor_identity_defect(&[apply_v(&apply_v(s)), s.scale(&LogComplex::from_real(-1.0))], IDENTITY_J_CUT))
}

/// `KV + VK = 0`, plus the scalar trace `Tr KV = 0` on each basis vector.
pub fn kv_anticommutator() -> f64 {
    let d = spinor_worst(|s| spinor_identity_defect(&[apply_k(&apply_v(s)), apply_v(&apply_k(s))], IDENTITY_J_CUT));
    d.max(interior_worst(|k| identity_defect(&kv_trace(&basis::<LogComplex>(k)), IDENTITY_J_CUT)))
}

pub fn z_commute() -> f64 {
    interior_worst(|k| {
        let s = basis::<LogComplex>(k);
        let mut w = 0.0f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                w = w.max(commutator(Z[i], Z[j], None, &s));
            }
        }
        w
    })
}

pub fn z_square_sum() -> f64 {
    interior_worst(|k| {
        let s = basis::<LogComplex>(k);
        let mut sq: Vec<_> = Z.iter().map(|&z| ab(z, z, &s)).collect();
        sq.push(s.scale(&LogComplex::from_real(-1.0)));
        identity_defect(&sq, IDENTITY_J_CUT)
    })
}

/// Direct action, scalar-function composition and the matrix route
/// `(1/2) Tr(sigma_i e^{-K} V)` agree; the matrix generator is a traceless
/// involution. Evaluated in 256-bit arithmetic.
pub fn z_routes() -> f64 {
    interior_worst(|k| {
        let s = basis::<HpComplex>(k);
        let mut w = identity_defect(&z_trace(&s), IDENTITY_J_CUT);
        for g in G {
            let neg = apply_z(g, &s).scale(&-HpComplex::one());
            w = w.max(identity_defect(&[apply_z_composed(g, &s), neg.clone()], IDENTITY_J_CUT));
            w = w.max(identity_defect(&[z_component(g, &s), neg], IDENTITY_J_CUT));
        }
        for sp in [SpinorState::spin_up(s.clone()), SpinorState::spin_down(s)] {
            let zz = apply_zmatrix(&apply_zmatrix(&sp));
            w = w.max(spinor_identity_defect(&[zz, sp.scale(&-HpComplex::one())], IDENTITY_J_CUT - 2));
        }
        w
    })
}

fn hp_factorial(n: u32) -> HpComplex {
    (1..=n).fold(HpComplex::one(), |acc, k| acc * HpComplex::from_f64(k as f64))
}

/// `sum_{s=0}^n (s+k)! / ((s+m)! s! (n-s)!) z^s` summed term by term in
/// 256-bit arithmetic, with the sum of the term magnitudes.
pub fn factorial_sum(n: u32, k: u32, m: u32, z: Complex64) -> (LogComplex, LogComplex) {
    let zh = HpComplex::from_c64(z);
    let mut pow = HpComplex::one();
    let mut acc = HpComplex::zero();
    let mut abs = LogComplex::ZERO;
    for s in 0..=n {
        let den = hp_factorial(s + m) * hp_factorial(s) * hp_factorial(n - s);
        let term = hp_factorial(s + k) * pow.clone() / den;
        abs = abs + LogComplex::exp_real(term.ln_abs());
        acc = acc + term;
        pow = pow * zh.clone();
    }
    (acc.to_log_complex(), abs)
}

/// `|a - b| / max(|a|, |b|, floor)`.
fn rel_log(a: LogComplex, b: LogComplex, ln_floor: f64) -> f64 {
    let top = a.log_mag.max(b.log_mag).max(ln_floor);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    let unit = LogComplex::exp_real(-top);
    ((a * unit).to_complex() - (b * unit).to_complex()).norm()
}

/// Sums that vanish exactly (the series has roots at some of the grid
/// points, e.g. `n = k = 4, m = 3, z = -1/2`) are compared against this
/// fraction of the summed term magnitudes, far below f64 resolution.
const EXACT_ZERO_FRACTION: f64 = 1e-40;

/// Worst relative gap between [`factorial_sum`] and
/// `k!/(m! n!) 2F1(-n, k+1; m+1; -z)` for `n, k, m <= 8`.
pub fn hyp2f1_identity() -> Result<f64> {
    let zs = [Complex64::new(-0.5, 0.0), Complex64::new(0.7, 0.0), Complex64::new(1.0, 1.0)];
    let mut w = 0.0f64;
    for n in 0..=8 {
        for k in 0..=8 {
            for m in 0..=8 {
                for &z in &zs {
                    let pre = hp_factorial(k) / (hp_factorial(m) * hp_factorial(n));
                    let rhs = pre.to_log_complex() * hyp2f1_terminating(n, (k + 1) as f64, (m + 1) as f64, -z)?;
                    let (lhs, abs) = factorial_sum(n, k, m, z);
                    w = w.max(rel_log(lhs, rhs, abs.log_mag + EXACT_ZERO_FRACTION.ln()));
                }
            }
        }
    }
    Ok(w)
}

/// Recurrence against the hypergeometric form for `n <= 20`,
/// `alpha in {1/2, 3/2, 9/2}`, `x in {0.3, 1, 2+5i}`.
pub fn gegenbauer_series() -> Result<f64> {
    let xs = [Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 5.0)];
    let mut w = 0.0f64;
    for n in 0..=20 {
        for alpha in [0.5, 1.5, 4.5] {
            for &x in &xs {
                w = w.max(rel_log(gegenbauer(n, alpha, x)?, gegenbauer_hypergeometric(n, alpha, x)?, f64::NEG_INFINITY));
            }
        }
    }
    Ok(w)
}

/// Closed form against the triple sum and the ladder generation for random
/// orientations at `|l| in {0, 1, 5, 10, 12}`.
pub fn three_path(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut w = 0.0f64;
    for l in [0.0, 1.0, 5.0, 10.0, 12.0] {
        for _ in 0..2 {
            let p = random_tangent_point(rng, l, 1.0)?;
            let zl = phase_to_z(&p)?;
            let cf = coherent_closed_form(&zl, RepParams::unit(), PATH_J_CUT);
            w = w.max(multiplet_deviation(&cf, &coherent_triple_sum(&zl, RepParams::unit(), PATH_J_CUT)?));
            w = w.max(multiplet_deviation(&cf, &coherent_ladder_generated(&zl, RepParams::unit(), PATH_J_CUT)?));
        }
    }
    Ok(w)
}

/// The tilted reference phase point after tangent repair.
pub fn tilted_point() -> SpherePhasePoint {
    SpherePhasePoint::projected([0.412, 0.412, 0.812], [8.124, -8.124, 0.0], 1.0).expect("valid point")
}

/// Eigen-residual and tail fraction, maximized over the north pole at rest,
/// the tilted reference point and random points with `|l| in [10, 13]`.
fn coherent_checks(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    use rand::Rng;
    let mut points = vec![SpherePhasePoint::new([0.0, 0.0, 1.0], [0.0; 3], 1.0)?, tilted_point()];
    for _ in 0..10 {
        let l = rng.gen_range(10.0..=13.0);
        points.push(random_tangent_point(rng, l, 1.0)?);
    }
    let (mut res, mut tail) = (0.0f64, 0.0f64);
    for p in &points {
        let c = build_coherent(p, cfg.truncation())?;
        res = res.max(eigen_residual(&c.state, &c.label));
        tail = tail.max(c.tail_fraction());
    }
    Ok((res, tail))
}

pub fn run(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let path = three_path(&mut rng)?;
    let (residual, tail) = coherent_checks(cfg, &mut rng)?;
    let mut measured: BTreeMap<&str, f64> = BTreeMap::new();
    measured.insert("algebra_closure", algebra_closure());
    measured.insert("casimirs", casimirs());
    measured.insert("v_squared", v_squared());
    measured.insert("kv_anticommutator", kv_anticommutator());
    measured.insert("z_commute", z_commute());
    measured.insert("z_square_sum", z_square_sum());
    measured.insert("z_routes", z_routes());
    measured.insert("hyp2f1_identity", hyp2f1_identity()?);
    measured.insert("gegenbauer_series", gegenbauer_series()?);
    measured.insert("three_path", path);
    measured.insert("eigen_residual", residual);
    measured.insert("truncation_tail", tail);
    Ok(CHECKS
        .iter()
        .map(|&(name, default)| {
            let tolerance = cfg.tolerance(name, default);
            let m = measured[name];
            CheckResult { check: name.to_string(), measured: m, tolerance, pass: m <= tolerance }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi(0, 1), Some((1.0, 2)));
        assert_eq!(levi(1, 2), Some((1.0, 0)));
        assert_eq!(levi(2, 0), Some((1.0, 1)));
        assert_eq!(levi(1, 0), Some((-1.0, 2)));
        assert_eq!(levi(0, 2), Some((-1.0, 1)));
        assert_eq!(levi(2, 1), Some((-1.0, 0)));
        assert_eq!(levi(1, 1), None);
    }

    #[test]
    fn factorial_sum_example() {
        // n = 4, k = 2, m = 1, z = 0.7 by hand: sum_s (s+2)!/((s+1)! s! (4-s)!) 0.7^s
        let direct: f64 = (0..=4)
            .map(|s: i32| {
                let f = |n: i32| (1..=n).map(|x| x as f64).product::<f64>();
                f(s + 2) / (f(s + 1) * f(s) * f(4 - s)) * 0.7f64.powi(s)
            })
            .sum();
        let v = factorial_sum(4, 2, 1, Complex64::new(0.7, 0.0)).0.to_complex();
        assert!((v.re - direct).abs() < 1e-14 * direct);
    }

    #[test]
    fn tolerance_overrides() {
        let mut cfg = VerifyConfig::default();
        assert_eq!(cfg.tolerance("three_path", 1e-10), 1e-10);
        cfg.tolerances.insert("three_path".into(), 1e-6);
        assert_eq!(cfg.tolerance("three_path", 1e-10), 1e-6);
        cfg.tail_tol = 1e-20;
        assert_eq!(cfg.tolerance("truncation_tail", DEFAULT_TAIL_TOL), 1e-20);
    }
}
