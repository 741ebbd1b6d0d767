//! The free rotator `H = J^2 / 2` and the energy distribution of a coherent
//! state over its eigenstates `|j, m>`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::sphere::{build_coherent, SpherePhasePoint, Truncation};

/// Probabilities below this are tabled as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

pub fn rotator_energy(j: u32) -> f64 {
    let j = j as f64;
    0.5 * j * (j + 1.0)
}

/// Positive root of `j (j + 1) = lsq`.
pub fn energy_root(lsq: f64) -> f64 {
    0.5 * (-1.0 + (1.0 + 4.0 * lsq).sqrt())
}

/// Integer nearest to `x >= 0`, halves rounded down.
pub fn nearest_integer_half_down(x: f64) -> u32 {
    (x - 0.5).ceil().max(0.0) as u32
}

/// `p_{j,m} = |<j,m|z>|^2 / <z|z>`.
#[derive(Clone, Debug, Serialize)]
pub struct DistributionTable {
    pub phase_point: SpherePhasePoint,
    pub j_cut: u32,
    pub ln_tail_fraction: f64,
    entries: BTreeMap<(u32, i32), f64>,
    ln_entries: BTreeMap<(u32, i32), f64>,
}

impl DistributionTable {
    pub fn get(&self, j: u32, m: i32) -> f64 {
        self.entries.get(&(j, m)).copied().unwrap_or(0.0)
    }

    /// `ln p_{j,m}`, finite even where `p` underflows the table floor.
    pub fn ln_get(&self, j: u32, m: i32) -> f64 {
        self.ln_entries.get(&(j, m)).copied().unwrap_or(f64::NEG_INFINITY)
    }

    /// `(j, m, p, ln p)` in `(j, m)` order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, i32, f64, f64)> + '_ {
        self.ln_entries.iter().map(|(&(j, m), &lp)| (j, m, self.get(j, m), lp))
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// `j` maximizing `p_{j, m}`; ties go to the smaller `j`. `None` when
    /// no level carries `m`.
    pub fn argmax_j(&self, m: i32) -> Option<u32> {
        let mut best: Option<(u32, f64)> = None;
        for (&(j, mm), &lp) in &self.ln_entries {
            if mm == m && best.is_none_or(|(_, b)| lp > b) {
                best = Some((j, lp));
            }
        }
        best.map(|(j, _)| j)
    }

    /// `m` maximizing `p_{j, m}`; ties go to the smaller `|m|`, then to the
    /// smaller `m`.
    pub fn argmax_m(&self, j: u32) -> Option<i32> {
        let mut best: Option<(i32, f64)> = None;
        for (&(jj, m), &lp) in &self.ln_entries {
            if jj != j {
                continue;
            }
            let better = match best {
                None => true,
                Some((bm, b)) => lp > b || (lp == b && m.abs() < bm.abs()),
            };
            if better {
                best = Some((m, lp));
            }
        }
        best.map(|(m, _)| m)
    }
}

pub fn distribution(p: &SpherePhasePoint, truncation: Truncation) -> Result<DistributionTable> {
    let c = build_coherent(p, truncation)?;
    let mut entries = BTreeMap::new();
    let mut ln_entries = BTreeMap::new();
    for (k, a) in c.state.iter() {
        let lp = a.ln_norm_sqr();
        ln_entries.insert((k.j, k.m), lp);
        let prob = lp.exp();
        if prob >= PROBABILITY_FLOOR {
            entries.insert((k.j, k.m), prob);
        }
    }
    Ok(DistributionTable { phase_point: *p, j_cut: c.j_cut(), ln_tail_fraction: c.ln_tail_fraction, entries, ln_entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at_rest() -> SpherePhasePoint {
        SpherePhasePoint::new([0.0, 0.0, 1.0], [0.0; 3], 1.0).unwrap()
    }

    #[test]
    fn energies_and_roots() {
        assert_eq!(rotator_energy(0), 0.0);
        assert_eq!(rotator_energy(1), 1.0);
        assert_eq!(rotator_energy(21), 231.0);
        assert_eq!(energy_root(132.0), 11.0);
        assert_eq!(energy_root(462.0), 21.0);
        assert_eq!(energy_root(0.0), 0.0);
        assert_eq!(nearest_integer_half_down(10.5), 10);
        assert_eq!(nearest_integer_half_down(10.51), 11);
        assert_eq!(nearest_integer_half_down(0.2), 0);
    }

    #[test]
    fn north_pole_distribution() {
        let t = distribution(&at_rest(), Truncation::default()).unwrap();
        let norm: f64 = (0..60).map(|j| ((2 * j + 1) as f64) * (-((j * (j + 1)) as f64)).exp()).sum();
        assert!((t.get(0, 0) - 1.0 / norm).abs() < 1e-14);
        assert!((t.get(0, 0) - 0.70500).abs() < 5e-6);
        assert!(t.iter().all(|(_, m, p, _)| m == 0 || p == 0.0));
        assert_eq!(t.argmax_j(0), Some(0));
        assert_eq!(t.argmax_m(0), Some(0));
        assert!((t.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn root_of_six() {
        let l = 6f64.sqrt();
        let p = SpherePhasePoint::new([1.0, 0.0, 0.0], [0.0, 0.0, l], 1.0).unwrap();
        let t = distribution(&p, Truncation::default()).unwrap();
        assert_eq!(t.argmax_m(2), Some(2));
        let q = SpherePhasePoint::new([0.0, 0.0, 1.0], [0.0, l, 0.0], 1.0).unwrap();
        assert_eq!(distribution(&q, Truncation::default()).unwrap().argmax_j(0), Some(2));
    }

    #[test]
    fn aligned_momentum_maximizes_m() {
        let p = SpherePhasePoint::new([1.0, 0.0, 0.0], [0.0, 0.0, 5.0], 1.0).unwrap();
        let t = distribution(&p, Truncation::default()).unwrap();
        assert_eq!(t.argmax_m(5), Some(5));
        assert!(t.iter().all(|(_, _, p, _)| p >= 0.0));
        assert!((t.total() - 1.0).abs() < 1e-6);
    }

    /// The only tangent directions with `l3 = 0` are along `x cross e3`.
    fn tangent_l3_zero(theta: f64, phi: f64, flip: bool, mag: f64) -> SpherePhasePoint {
        let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let h = [x[1], -x[0], 0.0];
        let hn = (h[0] * h[0] + h[1] * h[1]).sqrt();
        let s = if flip { -1.0 } else { 1.0 };
        SpherePhasePoint::new(x, [s * mag * h[0] / hn, s * mag * h[1] / hn, 0.0], 1.0).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn l3_zero_distribution_is_m_symmetric(
            theta in 0.3f64..2.8, phi in -3.1f64..3.1, flip in any::<bool>(), mag in 5.0f64..13.0,
        ) {
            let p = tangent_l3_zero(theta, phi, flip, mag);
            let t = distribution(&p, Truncation::default()).unwrap();
            prop_assert!((t.total() - 1.0).abs() < 1e-6);
            for (j, m, _, lp) in t.iter().filter(|e| e.1 > 0 && e.0 <= 40) {
                let lq = t.ln_get(j, -m);
                prop_assert!((lp - lq).abs() < 1e-10, "({j},{m}): {lp} vs {lq}");
            }
        }
    }
}
