use proptest::prelude::*;

use qdiv_core::matcore::{max_abs, schatten_norm, trace_product, Tolerances};
use qdiv_core::quantum::{random_channel, random_state, RecoveryMap};
use qdiv_core::sampling::{gaussian_matrix, rng_from_seed};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn channel_shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=4, 1usize..=4, 1usize..=3).prop_filter("isometry exists", |&(n, k, m)| m * k >= n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channels_preserve_trace_and_positivity((n, k, m) in channel_shape(), seed in any::<u64>()) {
        let ch = random_channel(n, k, m, seed).unwrap();
        prop_assert!(ch.completeness_residual() <= 1e-9);
        let rho = random_state(n, 1 + (seed as usize % n), seed.wrapping_add(1)).unwrap();
        let out = ch.apply_state(&rho, &tol()).unwrap();
        prop_assert_eq!(out.dim(), k);
        prop_assert!(out.spectrum().eigenvalues.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn stinespring_matches_kraus((n, k, m) in channel_shape(), seed in any::<u64>()) {
        let ch = random_channel(n, k, m, seed).unwrap();
        let x = gaussian_matrix(&mut rng_from_seed(seed ^ 1), n, n);
        let dil = ch.stinespring();
        prop_assert!(dil.isometry_residual() <= 1e-9);
        let a = ch.apply(&x).unwrap();
        let b = dil.apply(&x).unwrap();
        prop_assert!(max_abs(&(a - b)) <= 1e-10 * (1.0 + max_abs(&x)));
    }

    #[test]
    fn adjoint_is_dual((n, k, m) in channel_shape(), seed in any::<u64>()) {
        let ch = random_channel(n, k, m, seed).unwrap();
        let mut rng = rng_from_seed(seed ^ 2);
        let x = gaussian_matrix(&mut rng, n, n);
        let y = gaussian_matrix(&mut rng, k, k);
        let lhs = trace_product(&ch.apply(&x).unwrap(), &y);
        let rhs = trace_product(&x, &ch.adjoint_apply(&y).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn petz_recovers_reference(n in 2usize..=4, k in 2usize..=4, seed in any::<u64>()) {
        let m = n.div_ceil(k).max(2);
        let ch = random_channel(n, k, m, seed).unwrap();
        let b = random_state(n, n, seed.wrapping_add(7)).unwrap();
        let map = RecoveryMap::new(&ch, &b, &tol()).unwrap();
        let image = ch.apply_hermitian(b.hermitian()).unwrap();
        let back = map.petz(&image).unwrap();
        prop_assert!(schatten_norm(&(back.as_matrix() - b.matrix()), 1.0).unwrap() <= 1e-9);
        for t in [-2.0, 0.7] {
            let rot = map.rotated(t, &image).unwrap();
            prop_assert!(schatten_norm(&(rot.as_matrix() - b.matrix()), 1.0).unwrap() <= 1e-9);
        }
    }
}
