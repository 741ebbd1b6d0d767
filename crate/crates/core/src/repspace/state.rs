use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{BasisIndex, RepParams};
use crate::error::{Error, Result};
use crate::numerics::{HpComplex, LogComplex, Scalar};

/// Sparse amplitudes over `|j, m>` with `j <= j_cut`.
#[derive(Clone, Debug)]
pub struct StateVector<A = LogComplex> {
    amps: BTreeMap<BasisIndex, A>,
    j_cut: u32,
    rep: RepParams,
    ln_loss: f64,
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

impl<A: Scalar> StateVector<A> {
    pub fn zero(rep: RepParams, j_cut: u32) -> Self {
        Self { amps: BTreeMap::new(), j_cut, rep, ln_loss: f64::NEG_INFINITY }
    }

    /// `|j, m>`. Labels above `j_cut` give the zero vector.
    pub fn basis(rep: RepParams, j_cut: u32, idx: BasisIndex) -> Self {
        let mut s = Self::zero(rep, j_cut);
        s.set(idx, A::one());
        s
    }

    pub fn from_amplitudes<I: IntoIterator<Item = (BasisIndex, A)>>(rep: RepParams, j_cut: u32, amps: I) -> Self {
        let mut s = Self::zero(rep, j_cut);
        for (k, a) in amps {
            s.set(k, a);
        }
        s
    }

    /// Store an amplitude; zero amplitudes and labels above `j_cut` are not stored.
    pub fn set(&mut self, idx: BasisIndex, a: A) {
        if idx.j > self.j_cut || a.is_zero() {
            self.amps.remove(&idx);
        } else {
            self.amps.insert(idx, a);
        }
    }

    pub fn get(&self, idx: BasisIndex) -> A {
        self.amps.get(&idx).cloned().unwrap_or_else(A::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &A)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn j_cut(&self) -> u32 {
        self.j_cut
    }

    pub fn rep(&self) -> RepParams {
        self.rep
    }

    /// `ln` of the squared magnitude dropped above `j_cut` by the operators
    /// that produced this state (cumulative; `-inf` if nothing was dropped).
    pub fn ln_truncation_loss(&self) -> f64 {
        self.ln_loss
    }

    pub(crate) fn record_loss(&mut self, ln_sqr: f64) {
        self.ln_loss = ln_add(self.ln_loss, ln_sqr);
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.rep != other.rep || self.j_cut != other.j_cut {
            return Err(Error::RepresentationMismatch);
        }
        Ok(())
    }

    /// `ln <s|s>`.
    pub fn ln_norm_sqr(&self) -> f64 {
        let terms: Vec<LogComplex> = self
            .amps
            .values()
            .map(|a| LogComplex::from_polar(2.0 * a.ln_abs(), 0.0))
            .collect();
        crate::numerics::log_complex_sum(&terms).log_mag
    }

    pub fn scale(&self, c: &A) -> Self {
        let mut out = Self { amps: BTreeMap::new(), ..self.clone() };
        for (k, a) in &self.amps {
            out.set(*k, a.clone() * c.clone());
        }
        out.ln_loss = self.ln_loss + 2.0 * c.ln_abs();
        out
    }

    /// Unit-norm copy.
    pub fn normalized(&self) -> Result<Self> {
        let ln = self.ln_norm_sqr();
        if ln == f64::NEG_INFINITY {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(&A::exp_real(-0.5 * ln)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.combine(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.combine(other, |a, b| a - b))
    }

    fn combine(&self, other: &Self, f: impl Fn(A, A) -> A) -> Self {
        let mut out = Self::zero(self.rep, self.j_cut);
        for k in self.amps.keys().chain(other.amps.keys()) {
            if !out.amps.contains_key(k) {
                out.set(*k, f(self.get(*k), other.get(*k)));
            }
        }
        out.ln_loss = ln_add(self.ln_loss, other.ln_loss);
        out
    }

    /// Drop every component with `j > j_max`.
    pub fn restricted(&self, j_max: u32) -> Self {
        let mut out = self.clone();
        out.amps.retain(|k, _| k.j <= j_max);
        out
    }

    /// Same amplitudes in a different scalar type.
    pub fn map<B: Scalar>(&self, f: impl Fn(&A) -> B) -> StateVector<B> {
        let mut out = StateVector::zero(self.rep, self.j_cut);
        for (k, a) in &self.amps {
            out.set(*k, f(a));
        }
        out.ln_loss = self.ln_loss;
        out
    }

    pub fn to_log(&self) -> StateVector<LogComplex> {
        self.map(|a| a.to_log_complex())
    }

    /// `ln` of the fraction of `<s|s>` carried by the bands `j_cut-2 <= j <= j_cut`.
    pub fn ln_tail_fraction(&self) -> f64 {
        let lo = self.j_cut.saturating_sub(2);
        let tail: Vec<LogComplex> = self
            .amps
            .iter()
            .filter(|(k, _)| k.j >= lo)
            .map(|(_, a)| LogComplex::from_polar(2.0 * a.ln_abs(), 0.0))
            .collect();
        crate::numerics::log_complex_sum(&tail).log_mag - self.ln_norm_sqr()
    }
}

impl StateVector<LogComplex> {
    /// Amplitudes as f64 complex numbers (may overflow for unnormalized states).
    pub fn amplitude(&self, idx: BasisIndex) -> Complex64 {
        self.get(idx).to_complex()
    }

    pub fn to_hp(&self) -> StateVector<HpComplex> {
        self.map(|a| {
            let u = LogComplex::from_polar(0.0, a.phase).to_complex();
            HpComplex::from_c64(u) * HpComplex::exp_real(a.log_mag)
        })
    }
}
