use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{GenerationParams, Vec3, ZLabel};
use crate::error::{Error, Result};
use crate::numerics::{gegenbauer_sequence, HpComplex, LogComplex, Scalar, ScaledComplex};
use crate::repspace::{apply_j, Angular, BasisIndex, RepParams, StateVector};

/// `sum_j e^{-j(j+1)/2} sqrt(2j+1) |j, 0>`, unnormalized.
pub fn north_pole_state(rep: RepParams, j_cut: u32) -> StateVector {
    north_pole_in(rep, j_cut)
}

/// Closed-form amplitudes in extended-range f64:
/// `e^{-j(j+1)/2} sqrt(2j+1) (2|m|)!/|m|! sqrt((j-|m|)!/(j+|m|)!)
///  ((-sgn(m) z1 + i z2)/2)^{|m|} C^{|m|+1/2}_{j-|m|}(z3)`.
pub(crate) fn closed_form_amplitudes(zl: &ZLabel, j_cut: u32) -> Vec<(BasisIndex, ScaledComplex)> {
    let [z1, z2, z3] = zl.z();
    let i = Complex64::i();
    let mut out = Vec::with_capacity(((j_cut + 1) * (j_cut + 1)) as usize);
    let gauss: Vec<ScaledComplex> = (0..=j_cut)
        .map(|j| {
            let jf = j as f64;
            ScaledComplex::exp_real(-0.5 * jf * (jf + 1.0)) * (2.0 * jf + 1.0).sqrt()
        })
        .collect();
    for a in 0..=j_cut {
        let af = a as f64;
        let geg = gegenbauer_sequence(j_cut - a, af + 0.5, z3).expect("alpha > 0");
        // (2a)!/a!
        let mut fact = ScaledComplex::ONE;
        for k in (a + 1)..=(2 * a) {
            fact = fact * k as f64;
        }
        // (j+a)!/(j-a)! at j = a
        let mut ratio = ScaledComplex::ONE;
        for k in 1..=(2 * a) {
            ratio = ratio * k as f64;
        }
        let signs: &[f64] = if a == 0 { &[1.0] } else { &[1.0, -1.0] };
        let bases: Vec<(i32, ScaledComplex)> = signs
            .iter()
            .map(|&sgn| {
                let m = sgn as i32 * a as i32;
                let base = (-sgn * z1 + i * z2) / 2.0;
                (m, ScaledComplex::new(base).powi(a))
            })
            .collect();
        for j in a..=j_cut {
            if j > a {
                ratio = ratio * ((j + a) as f64) / ((j - a) as f64);
            }
            let common = gauss[j as usize] * fact / ratio.sqrt() * geg[(j - a) as usize];
            for &(m, pow) in &bases {
                out.push((BasisIndex { j, m }, common * pow));
            }
        }
    }
    out
}

/// `<j, m|z>` from the Gegenbauer closed form (unnormalized).
pub fn coherent_closed_form(zl: &ZLabel, rep: RepParams, j_cut: u32) -> StateVector {
    StateVector::from_amplitudes(
        rep,
        j_cut,
        closed_form_amplitudes(zl, j_cut).into_iter().map(|(k, a)| (k, a.to_log_complex())),
    )
}

/// `mu`, `nu` and `(1 + z3)/2` evaluated in the target arithmetic.
fn generation_scalars<A: Scalar>(zl: &ZLabel) -> Result<(A, A, A)> {
    GenerationParams::from_label(zl)?;
    let [z1, z2, z3] = zl.z().map(A::from_c64);
    let d = A::one() + z3;
    let iz2 = A::i() * z2;
    let mu = (z1.clone() + iz2.clone()) / d.clone();
    let nu = (iz2 - z1) / d.clone();
    Ok((mu, nu, d / A::from_f64(2.0)))
}

fn int_pow<A: Scalar>(base: &A, n: i64) -> A {
    let mut out = A::one();
    for _ in 0..n.unsigned_abs() {
        out = out * base.clone();
    }
    if n < 0 {
        A::one() / out
    } else {
        out
    }
}

/// `sqrt(a! / b!)` as a product of integer square roots.
fn sqrt_factorial_ratio<A: Scalar>(a: u32, b: u32) -> A {
    let (hi, lo) = (a.max(b), a.min(b));
    let p = ((lo + 1)..=hi).fold(A::one(), |acc, n| acc * A::sqrt_ratio(n as f64, 1.0));
    if a >= b {
        p
    } else {
        A::one() / p
    }
}

fn north_pole_in<A: Scalar>(rep: RepParams, j_cut: u32) -> StateVector<A> {
    StateVector::from_amplitudes(
        rep,
        j_cut,
        (0..=j_cut).map(|j| {
            let jf = j as f64;
            (BasisIndex { j, m: 0 }, A::exp_real(-0.5 * jf * (jf + 1.0)) * A::sqrt_ratio(2.0 * jf + 1.0, 1.0))
        }),
    )
}

/// The triple sum over `(j, m, k)` obtained by expanding the three ladder
/// exponentials, accumulated per basis label.
pub fn coherent_triple_sum_in<A: Scalar>(zl: &ZLabel, rep: RepParams, j_cut: u32) -> Result<StateVector<A>> {
    let (mu, nu, h) = generation_scalars::<A>(zl)?;
    let nu_h = nu * h;
    let mut acc: BTreeMap<BasisIndex, Vec<A>> = BTreeMap::new();
    for j in 0..=j_cut {
        let jf = j as f64;
        let pre = A::exp_real(-0.5 * jf * (jf + 1.0)) * A::sqrt_ratio(2.0 * jf + 1.0, 1.0);
        // pre * (nu h)^m (j+m)! / (m! (j-m)!)
        let mut outer = pre;
        for m in 0..=j {
            if m > 0 {
                let f = ((j + m) as f64) * ((j - m + 1) as f64);
                outer = outer * nu_h.clone() * A::from_f64(f) / A::from_f64(m as f64);
            }
            if outer.is_zero() {
                break;
            }
            // mu^k / k! * sqrt((j-m+k)! / (j+m-k)!)
            let mut inner = outer.clone() * sqrt_factorial_ratio::<A>(j - m, j + m);
            for k in 0..=(j + m) {
                if k > 0 {
                    let up = A::sqrt_ratio(((j - m + k) as f64) * ((j + m - k + 1) as f64), 1.0);
                    inner = inner * mu.clone() * up / A::from_f64(k as f64);
                }
                if inner.is_zero() {
                    break;
                }
                acc.entry(BasisIndex { j, m: m as i32 - k as i32 }).or_default().push(inner.clone());
            }
        }
    }
    Ok(StateVector::from_amplitudes(rep, j_cut, acc.into_iter().map(|(k, v)| (k, A::sum(v)))))
}

/// [`coherent_triple_sum_in`] evaluated in 256-bit arithmetic and returned
/// in the log domain. The alternating inner sums cancel by many orders of
/// magnitude, so f64 accumulation loses up to ~1e-5 of the multiplet scale
/// even at `l = 0`.
pub fn coherent_triple_sum(zl: &ZLabel, rep: RepParams, j_cut: u32) -> Result<StateVector> {
    Ok(coherent_triple_sum_in::<HpComplex>(zl, rep, j_cut)?.to_log())
}

/// `exp(t * op) s` by its Taylor series. The series stops when every new
/// contribution is below `1e-18` of the accumulated amplitude; ladder
/// operators are nilpotent within a multiplet, so it also terminates exactly.
fn exp_series<A: Scalar>(s: &StateVector<A>, op: Angular, t: &A) -> StateVector<A> {
    let ln_cut = 1e-18f64.ln();
    let mut sum = s.clone();
    let mut term = s.clone();
    for k in 1..=(2 * s.j_cut() as u64 + 2) {
        term = apply_j(op, &term).scale(&(t.clone() / A::from_f64(k as f64)));
        if term.is_empty() {
            break;
        }
        let negligible = term.iter().all(|(idx, a)| {
            let b = sum.get(*idx);
            !b.is_zero() && a.ln_abs() - b.ln_abs() < ln_cut
        });
        sum = sum.add(&term).expect("same space");
        if negligible {
            break;
        }
    }
    sum
}

/// Multiply each `|j, m>` amplitude by `base^(p m)`.
fn diagonal_m<A: Scalar>(s: &StateVector<A>, base: &A, p: i64) -> StateVector<A> {
    let mut out =
        StateVector::from_amplitudes(s.rep(), s.j_cut(), s.iter().map(|(k, a)| (*k, a.clone() * int_pow(base, p * k.m as i64))));
    out.record_loss(s.ln_truncation_loss());
    out
}

/// `e^{mu J-} e^{gamma J3} e^{nu J+} |n3>` applied as ladder series.
pub fn coherent_ladder_generated_in<A: Scalar>(zl: &ZLabel, rep: RepParams, j_cut: u32) -> Result<StateVector<A>> {
    let (mu, nu, h) = generation_scalars::<A>(zl)?;
    let s = north_pole_in::<A>(rep, j_cut);
    let s = exp_series(&s, Angular::Plus, &nu);
    let s = diagonal_m(&s, &h, 1);
    Ok(exp_series(&s, Angular::Minus, &mu))
}

/// [`coherent_ladder_generated_in`] evaluated in 256-bit arithmetic, for the
/// same cancellation reason as [`coherent_triple_sum`].
pub fn coherent_ladder_generated(zl: &ZLabel, rep: RepParams, j_cut: u32) -> Result<StateVector> {
    Ok(coherent_ladder_generated_in::<HpComplex>(zl, rep, j_cut)?.to_log())
}

/// Gauss decomposition `e^{mu J-} e^{gamma J3} e^{nu J+}` of the rotation
/// by `angle` about `axis`, read off the spin-1/2 matrix
/// `U = [[a, b], [c, d]] = exp(-i angle n.sigma/2)`: `e^{gamma/2} = a`,
/// `nu = b/a`, `mu = c/a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussRotation {
    pub a: Complex64,
    pub mu: Complex64,
    pub nu: Complex64,
}

impl GaussRotation {
    pub fn new(axis: Vec3, angle: f64) -> Result<Self> {
        let n = super::norm(axis);
        if !(n > 0.0 && n.is_finite() && angle.is_finite()) {
            return Err(Error::InvalidPhasePoint("rotation axis must be a nonzero finite vector".into()));
        }
        let [n1, n2, n3] = super::scaled(axis, 1.0 / n);
        let (c, s) = ((0.5 * angle).cos(), (0.5 * angle).sin());
        let a = Complex64::new(c, -s * n3);
        let b = Complex64::new(-s * n2, -s * n1);
        let cc = Complex64::new(s * n2, -s * n1);
        if a.norm() < 1e-8 {
            return Err(Error::SingularRotation);
        }
        Ok(Self { a, mu: cc / a, nu: b / a })
    }
}

/// Apply the angular-momentum rotation `D(R) = exp(-i angle n.J)`.
pub fn rotate_state(s: &StateVector, axis: Vec3, angle: f64) -> Result<StateVector> {
    let g = GaussRotation::new(axis, angle)?;
    let t = exp_series(s, Angular::Plus, &LogComplex::from_complex(g.nu));
    let t = diagonal_m(&t, &LogComplex::from_complex(g.a), 2);
    Ok(exp_series(&t, Angular::Minus, &LogComplex::from_complex(g.mu)))
}

/// Amplitude-wise deviation `max_{j,m} |a_{jm} - b_{jm}| / P_j`, where `P_j`
/// is the largest magnitude in multiplet `j` of either state. Measuring
/// against the multiplet scale keeps exact zeros (parity at `z3 = 0`) and
/// near-roots of the Gegenbauer factor from dominating the comparison.
pub fn multiplet_deviation(a: &StateVector, b: &StateVector) -> f64 {
    let mut peak: BTreeMap<u32, f64> = BTreeMap::new();
    for (k, v) in a.iter().chain(b.iter()) {
        let e = peak.entry(k.j).or_insert(f64::NEG_INFINITY);
        *e = e.max(v.log_mag);
    }
    let keys: std::collections::BTreeSet<BasisIndex> = a.iter().chain(b.iter()).map(|(k, _)| *k).collect();
    keys.into_iter()
        .map(|k| {
            let unit = LogComplex::exp_real(-peak[&k.j]);
            ((a.get(k) * unit).to_complex() - (b.get(k) * unit).to_complex()).norm()
        })
        .fold(0.0, f64::max)
}
