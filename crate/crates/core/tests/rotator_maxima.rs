//! The most probable level of the `m = 0` slice follows the positive root of
//! `j(j+1) = l^2` when `l3 = 0`.

use proptest::prelude::*;
use sphere_coherent::rotator::{distribution, energy_root, nearest_integer_half_down};
use sphere_coherent::sphere::{SpherePhasePoint, Truncation};

fn l3_zero_point(theta: f64, phi: f64, mag: f64) -> SpherePhasePoint {
    let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let h = [x[1], -x[0], 0.0];
    let hn = (h[0] * h[0] + h[1] * h[1]).sqrt();
    SpherePhasePoint::new(x, [mag * h[0] / hn, mag * h[1] / hn, 0.0], 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn ground_slice_maximum_tracks_energy_root(theta in 0.2f64..2.9, phi in -3.1f64..3.1, mag in 5.0f64..13.0) {
        let p = l3_zero_point(theta, phi, mag);
        let root = energy_root(mag * mag);
        let arg = distribution(&p, Truncation::default()).unwrap().argmax_j(0).unwrap();
        let near_half = (root - root.floor() - 0.5).abs() < 0.05;
        if near_half {
            prop_assert!(arg == root.floor() as u32 || arg == root.ceil() as u32, "root {root}, argmax {arg}");
        } else {
            prop_assert_eq!(arg, nearest_integer_half_down(root), "root {}", root);
        }
    }
}
