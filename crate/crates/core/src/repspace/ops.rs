use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{BasisIndex, OperatorLabel, StateVector};
use crate::error::{Error, Result};
use crate::numerics::{LogComplex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Angular {
    J1,
    J2,
    J3,
    Plus,
    Minus,
    Sq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    X1,
    X2,
    X3,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Z1,
    Z2,
    Z3,
}

/// Apply a sparse transition rule `|k> -> sum_t c_t |t>` to every stored amplitude.
fn transform<A: Scalar>(s: &StateVector<A>, rule: impl Fn(BasisIndex) -> Vec<(BasisIndex, A)>) -> StateVector<A> {
    let mut out = StateVector::zero(s.rep(), s.j_cut());
    out.record_loss(s.ln_truncation_loss());
    let mut acc: BTreeMap<BasisIndex, Vec<A>> = BTreeMap::new();
    for (k, a) in s.iter() {
        for (t, c) in rule(*k) {
            let v = a.clone() * c;
            if t.j > s.j_cut() {
                out.record_loss(2.0 * v.ln_abs());
            } else {
                acc.entry(t).or_default().push(v);
            }
        }
    }
    for (t, vs) in acc {
        out.set(t, A::sum(vs));
    }
    out
}

fn combine<A: Scalar>(a: &StateVector<A>, ca: A, b: &StateVector<A>, cb: A) -> StateVector<A> {
    a.scale(&ca).add(&b.scale(&cb)).expect("same space")
}

fn ladder<A: Scalar>(idx: BasisIndex, dm: i32) -> Option<(BasisIndex, A)> {
    let (j, m) = (idx.j as f64, idx.m as f64);
    let num = match dm {
        1 => (j - m) * (j + m + 1.0),
        -1 => (j + m) * (j - m + 1.0),
        _ => unreachable!(),
    };
    if num == 0.0 {
        return None;
    }
    Some((BasisIndex::new(idx.j, idx.m + dm)?, A::sqrt_ratio(num, 1.0)))
}

/// Unit-radius position matrix elements: (raising to j+1, lowering to j-1).
fn position_terms<A: Scalar>(idx: BasisIndex, dm: i32) -> [Option<(BasisIndex, A)>; 2] {
    let (j, m) = (idx.j as f64, idx.m as f64);
    let (up_num, up_sign, down_num, down_sign) = match dm {
        0 => ((j - m + 1.0) * (j + m + 1.0), 1.0, (j - m) * (j + m), 1.0),
        1 => ((j + m + 1.0) * (j + m + 2.0), -1.0, (j - m - 1.0) * (j - m), 1.0),
        -1 => ((j - m + 1.0) * (j - m + 2.0), 1.0, (j + m - 1.0) * (j + m), -1.0),
        _ => unreachable!(),
    };
    let up = BasisIndex::new(idx.j + 1, idx.m + dm)
        .map(|t| (t, A::from_f64(up_sign) * A::sqrt_ratio(up_num, (2.0 * j + 1.0) * (2.0 * j + 3.0))));
    let down = if idx.j == 0 || down_num == 0.0 {
        None
    } else {
        BasisIndex::new(idx.j - 1, idx.m + dm)
            .map(|t| (t, A::from_f64(down_sign) * A::sqrt_ratio(down_num, (2.0 * j - 1.0) * (2.0 * j + 1.0))))
    };
    [up, down]
}

fn apply_position_ladder<A: Scalar>(s: &StateVector<A>, dm: i32, up_weight: impl Fn(u32) -> A, down_weight: impl Fn(u32) -> A) -> StateVector<A> {
    transform(s, |k| {
        let [up, down] = position_terms::<A>(k, dm);
        let mut v = Vec::with_capacity(2);
        if let Some((t, c)) = up {
            v.push((t, c * up_weight(k.j)));
        }
        if let Some((t, c)) = down {
            v.push((t, c * down_weight(k.j)));
        }
        v
    })
}

fn half<A: Scalar>() -> A {
    A::from_f64(0.5)
}

fn minus_half_i<A: Scalar>() -> A {
    A::from_c64(Complex64::new(0.0, -0.5))
}

pub fn apply_j<A: Scalar>(which: Angular, s: &StateVector<A>) -> StateVector<A> {
    match which {
        Angular::J3 => transform(s, |k| vec![(k, A::from_f64(k.m as f64))]),
        Angular::Sq => transform(s, |k| vec![(k, A::from_f64(k.j as f64 * (k.j as f64 + 1.0)))]),
        Angular::Plus => transform(s, |k| ladder(k, 1).into_iter().collect()),
        Angular::Minus => transform(s, |k| ladder(k, -1).into_iter().collect()),
        Angular::J1 => combine(&apply_j(Angular::Plus, s), half(), &apply_j(Angular::Minus, s), half()),
        Angular::J2 => combine(&apply_j(Angular::Plus, s), minus_half_i(), &apply_j(Angular::Minus, s), -minus_half_i::<A>()),
    }
}

pub fn apply_x<A: Scalar>(which: Position, s: &StateVector<A>) -> StateVector<A> {
    let r = s.rep().r();
    let w = |_: u32| A::from_f64(r);
    match which {
        Position::X3 => apply_position_ladder(s, 0, w, w),
        Position::Plus => apply_position_ladder(s, 1, w, w),
        Position::Minus => apply_position_ladder(s, -1, w, w),
        Position::X1 => combine(&apply_x(Position::Plus, s), half(), &apply_x(Position::Minus, s), half()),
        Position::X2 => combine(&apply_x(Position::Plus, s), minus_half_i(), &apply_x(Position::Minus, s), -minus_half_i::<A>()),
    }
}

/// Coherent-state generators: `X/r` with the raising part weighted by
/// `e^{-j-1}` and the lowering part by `e^{j}` (`j` of the source vector).
pub fn apply_z<A: Scalar>(which: Generator, s: &StateVector<A>) -> StateVector<A> {
    let up = |j: u32| A::exp_real(-(j as f64) - 1.0);
    let down = |j: u32| A::exp_real(j as f64);
    let zp = || apply_position_ladder(s, 1, up, down);
    let zm = || apply_position_ladder(s, -1, up, down);
    match which {
        Generator::Z3 => apply_position_ladder(s, 0, up, down),
        Generator::Z1 => combine(&zp(), half(), &zm(), half()),
        Generator::Z2 => combine(&zp(), minus_half_i(), &zm(), -minus_half_i::<A>()),
    }
}

/// `(a, b)` with `Z = a(J^2) X/r + i b(J^2) (J x X)/r`, evaluated on the
/// `J^2 = j(j+1)` eigenspace where `sqrt(1 + 4J^2) = 2j+1`.
pub fn z_scalar_functions<A: Scalar>(j: u32) -> (A, A) {
    let s = 2.0 * j as f64 + 1.0;
    let hi = A::exp_real(j as f64 + 1.0);
    let lo = A::exp_real(-(j as f64));
    let sinh_part = (hi.clone() - lo.clone()) * A::from_f64(0.5);
    let cosh_part = (hi + lo) * A::from_f64(0.5);
    let inv_s = A::one() / A::from_f64(s);
    let a = sinh_part.clone() * inv_s.clone() + cosh_part;
    let b = A::from_f64(2.0) * sinh_part * inv_s;
    (a, b)
}

/// `Z_i` assembled from `J`, `X` and the two scalar functions of `J^2`,
/// with the vector product ordered as `J_j X_k`.
pub fn apply_z_composed<A: Scalar>(which: Generator, s: &StateVector<A>) -> StateVector<A> {
    let inv_r = A::one() / A::from_f64(s.rep().r());
    let (i, j, k) = match which {
        Generator::Z1 => (Position::X1, (Angular::J2, Position::X3), (Angular::J3, Position::X2)),
        Generator::Z2 => (Position::X2, (Angular::J3, Position::X1), (Angular::J1, Position::X3)),
        Generator::Z3 => (Position::X3, (Angular::J1, Position::X2), (Angular::J2, Position::X1)),
    };
    let xi = apply_x(i, s);
    let cross = apply_j(j.0, &apply_x(j.1, s))
        .sub(&apply_j(k.0, &apply_x(k.1, s)))
        .expect("same space");
    let by_a = transform(&xi, |t| vec![(t, z_scalar_functions::<A>(t.j).0)]);
    let by_b = transform(&cross, |t| vec![(t, z_scalar_functions::<A>(t.j).1)]);
    combine(&by_a, inv_r.clone(), &by_b, A::i() * inv_r)
}

pub fn apply<A: Scalar>(op: OperatorLabel, s: &StateVector<A>) -> StateVector<A> {
    use OperatorLabel::*;
    match op {
        J1 => apply_j(Angular::J1, s),
        J2 => apply_j(Angular::J2, s),
        J3 => apply_j(Angular::J3, s),
        Jplus => apply_j(Angular::Plus, s),
        Jminus => apply_j(Angular::Minus, s),
        Jsq => apply_j(Angular::Sq, s),
        X1 => apply_x(Position::X1, s),
        X2 => apply_x(Position::X2, s),
        X3 => apply_x(Position::X3, s),
        Xplus => apply_x(Position::Plus, s),
        Xminus => apply_x(Position::Minus, s),
        Z1 => apply_z(Generator::Z1, s),
        Z2 => apply_z(Generator::Z2, s),
        Z3 => apply_z(Generator::Z3, s),
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner<A: Scalar>(a: &StateVector<A>, b: &StateVector<A>) -> Result<A> {
    a.compatible(b)?;
    Ok(A::sum(a.iter().filter_map(|(k, x)| {
        let y = b.get(*k);
        (!y.is_zero()).then(|| x.conj() * y)
    })))
}

/// `<s|O|s> / <s|s>`.
pub fn expectation<A: Scalar>(op: OperatorLabel, s: &StateVector<A>) -> Result<Complex64> {
    let norm = inner(s, s)?;
    if norm.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let v = inner(s, &apply(op, s))?;
    Ok((v / norm).to_log_complex().to_complex())
}

/// Cancellation defect of an identity `sum_t v_t = 0`, measured per output
/// level `j <= j_max` as `||sum_t v_t|_j|| / max(sum_t ||v_t|_j||, R * S)`
/// and maximized over levels, where `S` is the largest level scale and
/// `R = A::RESOLUTION`. Levels are compared separately because generator
/// matrix elements differ by `e^{2j}` between neighbouring levels; levels
/// whose true content is zero carry only rounding residue, so they are
/// measured against the floor `R * S`. With `R = 1` (f64) the defect is the
/// largest level residue relative to the largest level norm.
pub fn identity_defect<A: Scalar>(terms: &[StateVector<A>], j_max: u32) -> f64 {
    defect_from_levels::<A>(&level_norms(terms, j_max))
}

/// `(ln ||sum_t v_t|_j||, ln sum_t ||v_t|_j||)` for every populated level `j <= j_max`.
pub(crate) fn level_norms<A: Scalar>(terms: &[StateVector<A>], j_max: u32) -> Vec<(f64, f64)> {
    let ln_sq = |v: &A| LogComplex::from_polar(2.0 * v.ln_abs(), 0.0);
    let mut levels: Vec<u32> = terms.iter().flat_map(|t| t.iter().map(|(k, _)| k.j)).collect();
    levels.sort_unstable();
    levels.dedup();
    levels.retain(|&j| j <= j_max);
    let mut rows = Vec::with_capacity(levels.len());
    for &j in &levels {
        let keys: Vec<BasisIndex> = (-(j as i32)..=j as i32).map(|m| BasisIndex { j, m }).collect();
        let norms: Vec<LogComplex> = terms
            .iter()
            .map(|t| {
                let v: Vec<LogComplex> = keys.iter().map(|k| ln_sq(&t.get(*k))).collect();
                crate::numerics::log_complex_sum(&v).sqrt()
            })
            .collect();
        let scale = crate::numerics::log_complex_sum(&norms).log_mag;
        let net: Vec<LogComplex> = keys
            .iter()
            .map(|k| ln_sq(&A::sum(terms.iter().map(|t| t.get(*k)))))
            .collect();
        rows.push((crate::numerics::log_complex_sum(&net).sqrt().log_mag, scale));
    }
    rows
}

pub(crate) fn defect_from_levels<A: Scalar>(rows: &[(f64, f64)]) -> f64 {
    let top = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    let floor = top + A::RESOLUTION.ln();
    rows.iter()
        .map(|&(net, scale)| (net - scale.max(floor)).exp())
        .fold(0.0, f64::max)
}
