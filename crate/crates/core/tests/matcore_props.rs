use proptest::prelude::*;

use qdiv_core::matcore::{
    c64, hermitian_eig, kron, mat_power, mat_power_real, max_abs, partial_trace, pinch, schatten_norm, CMatrix, Factor,
    Hermitian, Tolerances,
};
use qdiv_core::quantum::random_state;
use qdiv_core::sampling::{gaussian_matrix, haar_unitary, rng_from_seed};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn random_hermitian(seed: u64, n: usize) -> Hermitian {
    let g = gaussian_matrix(&mut rng_from_seed(seed), n, n);
    Hermitian::hermitize(&g + g.adjoint())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 2usize..=8) {
        let m = random_hermitian(seed, n);
        let sd = hermitian_eig(&m);
        prop_assert!(sd.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(max_abs(&(sd.reconstruct() - m.as_matrix())) <= tol().recon_tol * (1.0 + max_abs(m.as_matrix())));
    }

    #[test]
    fn real_powers_add(seed in any::<u64>(), n in 2usize..=6, rank in 1usize..=6, a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let rank = rank.min(n);
        let rho = random_state(n, rank, seed).unwrap();
        let pa = mat_power_real(rho.hermitian(), a, &tol()).unwrap();
        let pb = mat_power_real(rho.hermitian(), b, &tol()).unwrap();
        let pab = mat_power_real(rho.hermitian(), a + b, &tol()).unwrap();
        let lhs = pa.as_matrix() * pb.as_matrix();
        let scale = 1.0 + max_abs(pab.as_matrix());
        prop_assert!(max_abs(&(lhs - pab.as_matrix())) <= 1e-9 * scale);
    }

    #[test]
    fn imaginary_powers_are_unitary(seed in any::<u64>(), n in 2usize..=6, t in -5.0f64..5.0) {
        let rho = random_state(n, n, seed).unwrap();
        let u = mat_power(rho.hermitian(), c64(0.0, t), &tol()).unwrap();
        prop_assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(n, n))) <= 1e-9);
    }

    #[test]
    fn schatten_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..=6, p in 0.3f64..6.0) {
        let mut rng = rng_from_seed(seed);
        let m = gaussian_matrix(&mut rng, n, n);
        let u = haar_unitary(&mut rng, n);
        let w = haar_unitary(&mut rng, n);
        let a = schatten_norm(&m, p).unwrap();
        let b = schatten_norm(&(&u * &m * &w), p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn pinch_is_trace_preserving_and_idempotent(seed in any::<u64>(), n in 2usize..=6) {
        let m = random_hermitian(seed, n);
        let basis = haar_unitary(&mut rng_from_seed(seed ^ 0xabcd), n);
        let p = pinch(&m, &basis, &tol()).unwrap();
        let pp = pinch(&p, &basis, &tol()).unwrap();
        prop_assert!((p.trace() - m.trace()).abs() <= 1e-10 * (1.0 + m.trace().abs()));
        prop_assert!(max_abs(&(pp.as_matrix() - p.as_matrix())) <= 1e-10);
    }

    #[test]
    fn partial_trace_of_product_factorizes(seed in any::<u64>(), m in 1usize..=4, k in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let x = gaussian_matrix(&mut rng, m, m);
        let y = gaussian_matrix(&mut rng, k, k);
        let xy = kron(&x, &y);
        let tr_x = x.trace();
        let tr_y = y.trace();
        let first = partial_trace(&xy, m, k, Factor::First).unwrap();
        let second = partial_trace(&xy, m, k, Factor::Second).unwrap();
        prop_assert!(max_abs(&(first - y * tr_x)) <= 1e-10 * (1.0 + max_abs(&xy)) * (m * k) as f64);
        prop_assert!(max_abs(&(second - x * tr_y)) <= 1e-10 * (1.0 + max_abs(&xy)) * (m * k) as f64);
    }
}
