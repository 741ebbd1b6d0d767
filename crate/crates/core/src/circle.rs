//! Coherent states of a particle on a circle.
//!
//! The state labelled by `xi = e^{-l + i phi}` has coefficients
//! `c_j = xi^{-j} e^{-j^2/2}` on the angular momentum basis `|j>`, `j` integer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_complex_sum, wrap_phase, LogComplex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CirclePhasePoint {
    phi: f64,
    l: f64,
}

impl CirclePhasePoint {
    pub fn new(phi: f64, l: f64) -> Result<Self> {
        if !phi.is_finite() || !l.is_finite() {
            return Err(Error::InvalidPhasePoint(format!("non-finite circle point ({phi}, {l})")));
        }
        Ok(Self { phi: wrap_phase(phi), l })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// `ln xi = -l + i phi`.
    pub fn ln_xi(&self) -> LogComplex {
        LogComplex::from_polar(-self.l, self.phi)
    }

    /// Smallest accepted cutoff.
    pub fn min_cutoff(&self) -> u32 {
        self.l.abs().ceil() as u32 + 15
    }

    /// Default cutoff: the Gaussian tail beyond it is below `e^{-300}`.
    pub fn default_cutoff(&self) -> u32 {
        self.l.abs().ceil() as u32 + 25
    }
}

/// Coefficients on `|j>` for `-j_cut <= j <= j_cut`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleState {
    j_cut: u32,
    coeffs: Vec<LogComplex>,
}

impl CircleState {
    pub fn eigenstate(j: i64, j_cut: u32) -> Result<Self> {
        if j.unsigned_abs() > j_cut as u64 {
            return Err(Error::TruncationTooSmall(j_cut, j.unsigned_abs() as u32));
        }
        let mut coeffs = vec![LogComplex::ZERO; 2 * j_cut as usize + 1];
        coeffs[(j + j_cut as i64) as usize] = LogComplex::ONE;
        Ok(Self { j_cut, coeffs })
    }

    pub fn j_cut(&self) -> u32 {
        self.j_cut
    }

    pub fn coeff(&self, j: i64) -> LogComplex {
        let k = j + self.j_cut as i64;
        if k < 0 || k >= self.coeffs.len() as i64 {
            return LogComplex::ZERO;
        }
        self.coeffs[k as usize]
    }

    fn js(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.j_cut as i64;
        -n..=n
    }

    fn ln_norm_sqr(&self) -> f64 {
        let w: Vec<_> = self.coeffs.iter().map(|c| LogComplex::from_polar(2.0 * c.log_mag, 0.0)).collect();
        log_complex_sum(&w).log_mag
    }

    /// `sum_j conj(c_{j+k}) c_j / sum_j |c_j|^2`, i.e. `<U^k>`.
    fn shift_moment(&self, k: i64) -> Complex64 {
        let terms: Vec<_> = self.js().map(|j| self.coeff(j + k).conj() * self.coeff(j)).collect();
        let v = log_complex_sum(&terms);
        LogComplex::from_polar(v.log_mag - self.ln_norm_sqr(), v.phase).to_complex()
    }

    /// `sum_j j^p |c_j|^2 / sum_j |c_j|^2`.
    fn power_moment(&self, p: i32) -> f64 {
        let ln_n = self.ln_norm_sqr();
        self.js()
            .map(|j| (j as f64).powi(p) * (2.0 * self.coeff(j).log_mag - ln_n).exp())
            .sum()
    }

    /// `<J>`.
    pub fn expect_j(&self) -> f64 {
        self.power_moment(1)
    }

    /// `<J^2> - <J>^2`, evaluated around the mean to avoid cancellation.
    pub fn var_j(&self) -> f64 {
        let mean = self.expect_j();
        let ln_n = self.ln_norm_sqr();
        self.js()
            .map(|j| (j as f64 - mean).powi(2) * (2.0 * self.coeff(j).log_mag - ln_n).exp())
            .sum()
    }

    /// `<U>`, with `U|j> = |j+1>`.
    pub fn expect_u(&self) -> Complex64 {
        self.shift_moment(1)
    }

    pub fn expect_u2(&self) -> Complex64 {
        self.shift_moment(2)
    }

    /// Fraction of the squared norm at `|j| = j_cut`.
    pub fn tail_fraction(&self) -> f64 {
        let n = self.j_cut as i64;
        let ln_n = self.ln_norm_sqr();
        [-n, n].iter().map(|&j| (2.0 * self.coeff(j).log_mag - ln_n).exp()).sum()
    }

    /// `||Z c - xi c|| / ||xi c||` with `(Z c)_j = e^{-j+1/2} c_{j-1}`.
    pub fn eigen_residual(&self, p: &CirclePhasePoint) -> f64 {
        let ln_xi = p.ln_xi();
        let ln_n = self.ln_norm_sqr() + 2.0 * ln_xi.log_mag;
        let sq: Vec<_> = self
            .js()
            .map(|j| {
                let shifted = LogComplex::exp_real(-(j as f64) + 0.5) * self.coeff(j - 1);
                let d = shifted - ln_xi * self.coeff(j);
                LogComplex::from_polar(2.0 * d.log_mag, 0.0)
            })
            .collect();
        (0.5 * (log_complex_sum(&sq).log_mag - ln_n)).exp()
    }
}

pub fn circle_coherent(p: &CirclePhasePoint, j_cut: u32) -> Result<CircleState> {
    if j_cut < p.min_cutoff() {
        return Err(Error::TruncationTooSmall(j_cut, p.min_cutoff()));
    }
    let n = j_cut as i64;
    let coeffs = (-n..=n)
        .map(|j| {
            let jf = j as f64;
            LogComplex::from_polar(p.l * jf - 0.5 * jf * jf, -jf * p.phi)
        })
        .collect();
    Ok(CircleState { j_cut, coeffs })
}

/// `<U>_p / <U>_reference`, both evaluated with the same cutoff.
pub fn circle_relative_u(p: &CirclePhasePoint, reference: &CirclePhasePoint, j_cut: u32) -> Result<Complex64> {
    let num = circle_coherent(p, j_cut)?.expect_u();
    let den = circle_coherent(reference, j_cut)?.expect_u();
    if den.norm() < 1e-300 {
        return Err(Error::InvalidPhasePoint("reference <U> vanishes".into()));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleUncertainty {
    pub var_j: f64,
    /// `|<U>|^2 / (4 (1 - |<U>|^2))`.
    pub bound: f64,
    pub ratio_u2: Complex64,
    pub holds: bool,
}

pub fn circle_uncertainty_report(s: &CircleState) -> CircleUncertainty {
    let u = s.expect_u();
    let u2 = u.norm_sqr();
    let var_j = s.var_j();
    let bound = if u2 >= 1.0 { f64::INFINITY } else { 0.25 * u2 / (1.0 - u2) };
    let ratio_u2 = if u2 == 0.0 { Complex64::new(f64::NAN, f64::NAN) } else { s.expect_u2() / (u * u) };
    CircleUncertainty { var_j, bound, ratio_u2, holds: var_j >= bound - 1e-12 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(phi: f64, l: f64) -> CircleState {
        let p = CirclePhasePoint::new(phi, l).unwrap();
        circle_coherent(&p, p.default_cutoff()).unwrap()
    }

    #[test]
    fn vacuum_coefficients_are_gaussian_and_symmetric() {
        let s = state(0.0, 0.0);
        for j in -10..=10i64 {
            assert!((s.coeff(j).to_complex().re - (-0.5 * (j * j) as f64).exp()).abs() < 1e-15);
            assert_eq!(s.coeff(j), s.coeff(-j));
        }
        assert!(s.expect_j().abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_equation() {
        let p = CirclePhasePoint::new(1.0, 2.5).unwrap();
        let s = circle_coherent(&p, 40).unwrap();
        assert!(s.eigen_residual(&p) < 1e-12);
        assert!(circle_coherent(&p, 10).is_err());
    }

    #[test]
    fn angular_momentum_mean() {
        assert!((state(0.3, 2.0).expect_j() - 2.0).abs() < 1e-12);
        assert!((state(0.3, -1.5).expect_j() + 1.5).abs() < 1e-12);
        assert!((state(0.0, 0.25).expect_j() - 0.25).abs() < 1e-3);
    }

    #[test]
    fn mean_of_u() {
        let u = state(0.0, 0.0).expect_u();
        let num: f64 = (-40..=40).map(|j: i64| (-0.5 * ((j + 1) * (j + 1) + j * j) as f64).exp()).sum();
        let den: f64 = (-40..=40).map(|j: i64| (-((j * j) as f64)).exp()).sum();
        assert!((u.re - num / den).abs() < 1e-15 && u.im == 0.0);
        assert!((u.re - (-0.25f64).exp()).abs() < 1e-3);
        let u = state(2.1, 3.7).expect_u();
        assert!((u.arg() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn relative_u() {
        let p = CirclePhasePoint::new(0.7, 0.0).unwrap();
        let r0 = CirclePhasePoint::new(0.0, 0.0).unwrap();
        let w = circle_relative_u(&p, &r0, 40).unwrap();
        assert!((w - Complex64::from_polar(1.0, 0.7)).norm() < 1e-12);
        assert!((circle_relative_u(&p, &p, 40).unwrap() - 1.0).norm() < 1e-15);
        let q = CirclePhasePoint::new(-2.0, 1.3).unwrap();
        let q0 = CirclePhasePoint::new(0.4, 1.3).unwrap();
        assert!((circle_relative_u(&q, &q0, 40).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uncertainty() {
        let e = circle_uncertainty_report(&CircleState::eigenstate(3, 30).unwrap());
        assert_eq!((e.var_j, e.bound), (0.0, 0.0));
        assert!(e.holds);
        let c = circle_uncertainty_report(&state(0.0, 0.0));
        assert!(c.var_j > c.bound);
        let vars: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0].iter().map(|&l| circle_uncertainty_report(&state(0.0, l)).var_j).collect();
        let (lo, hi) = vars.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        assert!((hi - lo) / lo < 0.01);
    }

    proptest! {
        #[test]
        fn eigen_residual_small(phi in -3.1f64..3.1, l in -6.0f64..6.0) {
            let p = CirclePhasePoint::new(phi, l).unwrap();
            let s = circle_coherent(&p, p.default_cutoff()).unwrap();
            prop_assert!(s.eigen_residual(&p) < 1e-12);
        }

        #[test]
        fn integer_translation(phi in -3.1f64..3.1, l in -4.0f64..4.0) {
            prop_assert!((state(phi, l + 1.0).expect_j() - state(phi, l).expect_j() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn u2_ratio_flat(phi in -3.1f64..3.1, l in 0.0f64..2.0) {
            let r = circle_uncertainty_report(&state(phi, l)).ratio_u2;
            let r0 = circle_uncertainty_report(&state(0.0, 0.0)).ratio_u2;
            prop_assert!((r - r0).norm() / r0.norm() < 0.01);
        }

        #[test]
        fn shifts_move_one_step(j in -20i64..20) {
            let s = CircleState::eigenstate(j, 25).unwrap();
            prop_assert_eq!(s.expect_u(), Complex64::new(0.0, 0.0));
            prop_assert!((s.expect_j() - j as f64).abs() < 1e-15);
        }
    }
}
