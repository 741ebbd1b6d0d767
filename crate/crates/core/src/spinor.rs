//! Two-component states and the matrix operators `V = sigma.X / r`,
//! `K = -(sigma.J + 1)`, `e^{-K}` and `Z = e^{-K} V`.

use crate::error::Result;
use crate::numerics::{LogComplex, Scalar};
use crate::repspace::{apply_j, apply_x, defect_from_levels, inner, level_norms, Angular, Generator, Position, StateVector};

#[derive(Clone, Debug)]
pub struct SpinorState<A = LogComplex> {
    pub up: StateVector<A>,
    pub down: StateVector<A>,
}

impl<A: Scalar> SpinorState<A> {
    pub fn new(up: StateVector<A>, down: StateVector<A>) -> Result<Self> {
        up.compatible(&down)?;
        Ok(Self { up, down })
    }

    pub fn spin_up(up: StateVector<A>) -> Self {
        let down = StateVector::zero(up.rep(), up.j_cut());
        Self { up, down }
    }

    pub fn spin_down(down: StateVector<A>) -> Self {
        let up = StateVector::zero(down.rep(), down.j_cut());
        Self { up, down }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Self { up: self.up.add(&o.up)?, down: self.down.add(&o.down)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(Self { up: self.up.sub(&o.up)?, down: self.down.sub(&o.down)? })
    }

    pub fn scale(&self, c: &A) -> Self {
        Self { up: self.up.scale(c), down: self.down.scale(c) }
    }

    pub fn restricted(&self, j_max: u32) -> Self {
        Self { up: self.up.restricted(j_max), down: self.down.restricted(j_max) }
    }
}

fn sum2<A: Scalar>(a: &StateVector<A>, b: &StateVector<A>) -> StateVector<A> {
    a.add(b).expect("same space")
}

fn diff2<A: Scalar>(a: &StateVector<A>, b: &StateVector<A>) -> StateVector<A> {
    a.sub(b).expect("same space")
}

/// `<a|b>` summed over both components.
pub fn spinor_inner<A: Scalar>(a: &SpinorState<A>, b: &SpinorState<A>) -> Result<A> {
    Ok(inner(&a.up, &b.up)? + inner(&a.down, &b.down)?)
}

/// Cancellation defect of `sum_t s_t = 0`, worst over both components.
pub fn spinor_identity_defect<A: Scalar>(terms: &[SpinorState<A>], j_max: u32) -> f64 {
    let ups: Vec<_> = terms.iter().map(|t| t.up.clone()).collect();
    let downs: Vec<_> = terms.iter().map(|t| t.down.clone()).collect();
    let mut rows = level_norms(&ups, j_max);
    rows.extend(level_norms(&downs, j_max));
    defect_from_levels::<A>(&rows)
}

/// `(1/r) [[X3, X-], [X+, -X3]]`.
pub fn apply_v<A: Scalar>(s: &SpinorState<A>) -> SpinorState<A> {
    let inv_r = A::one() / A::from_f64(s.up.rep().r());
    let up = sum2(&apply_x(Position::X3, &s.up), &apply_x(Position::Minus, &s.down));
    let down = diff2(&apply_x(Position::Plus, &s.up), &apply_x(Position::X3, &s.down));
    SpinorState { up: up.scale(&inv_r), down: down.scale(&inv_r) }
}

/// `-[[J3 + 1, J-], [J+, 1 - J3]]`.
pub fn apply_k<A: Scalar>(s: &SpinorState<A>) -> SpinorState<A> {
    let up = sum2(&sum2(&apply_j(Angular::J3, &s.up), &s.up), &apply_j(Angular::Minus, &s.down));
    let down = sum2(&apply_j(Angular::Plus, &s.up), &diff2(&s.down, &apply_j(Angular::J3, &s.down)));
    let minus = -A::one();
    SpinorState { up: up.scale(&minus), down: down.scale(&minus) }
}

/// `e^{-K} = e * e^{sigma.J}`, exponentiated exactly on the invariant blocks
/// spanned by `|j, m> up` and `|j, m+1> down`, where `sigma.J` has the
/// eigenvalues `j` and `-(j+1)`.
pub fn apply_exp_k_neg<A: Scalar>(s: &SpinorState<A>) -> SpinorState<A> {
    let (rep, j_cut) = (s.up.rep(), s.up.j_cut());
    let mut up = StateVector::zero(rep, j_cut);
    let mut down = StateVector::zero(rep, j_cut);
    up.record_loss(s.up.ln_truncation_loss());
    down.record_loss(s.down.ln_truncation_loss());
    let mut levels: Vec<u32> = s.up.iter().chain(s.down.iter()).map(|(k, _)| k.j).collect();
    levels.sort_unstable();
    levels.dedup();
    for j in levels {
        let jf = j as f64;
        let ji = j as i32;
        let lift = A::exp_real(jf + 1.0);
        let damp = A::exp_real(-2.0 * jf - 1.0);
        let inv = A::one() / A::from_f64(2.0 * jf + 1.0);
        for ma in (-ji - 1)..=ji {
            let ia = crate::repspace::BasisIndex::new(j, ma);
            let ib = crate::repspace::BasisIndex::new(j, ma + 1);
            let a = ia.map(|i| s.up.get(i)).unwrap_or_else(A::zero);
            let b = ib.map(|i| s.down.get(i)).unwrap_or_else(A::zero);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let m = ma as f64;
            let c = (jf - m) * (jf + m + 1.0);
            let e_aa = (A::from_f64(m + jf + 1.0) + damp.clone() * A::from_f64(jf - m)) * lift.clone() * inv.clone();
            let e_bb = (A::from_f64(jf - m) + damp.clone() * A::from_f64(jf + m + 1.0)) * lift.clone() * inv.clone();
            let e_ab = A::sqrt_ratio(c, 1.0) * (A::one() - damp.clone()) * lift.clone() * inv.clone();
            if let Some(i) = ia {
                up.set(i, A::sum([e_aa * a.clone(), e_ab.clone() * b.clone()]));
            }
            if let Some(i) = ib {
                down.set(i, A::sum([e_ab * a, e_bb * b]));
            }
        }
    }
    SpinorState { up, down }
}

/// `Z = e^{-K} V`.
pub fn apply_zmatrix<A: Scalar>(s: &SpinorState<A>) -> SpinorState<A> {
    apply_exp_k_neg(&apply_v(s))
}

/// The four scalar-operator images `Z_ab psi` (component `a` of `Z` applied
/// to `psi` placed in slot `b`), as `[[Z11, Z12], [Z21, Z22]]`.
pub fn zmatrix_entries<A: Scalar>(psi: &StateVector<A>) -> [[StateVector<A>; 2]; 2] {
    let first = apply_zmatrix(&SpinorState::spin_up(psi.clone()));
    let second = apply_zmatrix(&SpinorState::spin_down(psi.clone()));
    [[first.up, second.up], [first.down, second.down]]
}

/// `Z_i psi` obtained as `(1/2) Tr(sigma_i Z)` from the matrix route.
pub fn z_component<A: Scalar>(which: Generator, psi: &StateVector<A>) -> StateVector<A> {
    let [[z11, z12], [z21, z22]] = zmatrix_entries(psi);
    let half = A::from_f64(0.5);
    match which {
        Generator::Z1 => sum2(&z21, &z12).scale(&half),
        Generator::Z2 => diff2(&z12, &z21).scale(&(A::i() * half)),
        Generator::Z3 => diff2(&z11, &z22).scale(&half),
    }
}

/// `(Tr Z) psi = Z11 psi + Z22 psi`.
pub fn z_trace<A: Scalar>(psi: &StateVector<A>) -> [StateVector<A>; 2] {
    let [[z11, _], [_, z22]] = zmatrix_entries(psi);
    [z11, z22]
}

/// `(KV)_11 psi` and `(KV)_22 psi`, whose sum is the trace of `KV`.
pub fn kv_trace<A: Scalar>(psi: &StateVector<A>) -> [StateVector<A>; 2] {
    let first = apply_k(&apply_v(&SpinorState::spin_up(psi.clone())));
    let second = apply_k(&apply_v(&SpinorState::spin_down(psi.clone())));
    [first.up, second.down]
}
