use bound_ent::linalg::random::{random_hermitian, random_matrix, random_psd};
use bound_ent::linalg::{
    eigenvalues, hermitian_eigen, kron, partial_trace, partial_transpose, realign, realign_inverse,
    sym_isometry, sym_projector_by_averaging, trace_norm, CMatrix, Subsystem, TensorIndex, C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a + b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(seed in any::<u64>(), n in 1usize..=16) {
        let a = random_hermitian(&mut rng(seed), n);
        let eig = hermitian_eigen(&a).unwrap();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        let ev_t = eigenvalues(&a.transpose()).unwrap();
        for (x, y) in eig.values.iter().zip(&ev_t) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn partial_transpose_and_realign_are_linear(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4, s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let n = da * db;
        let a = random_matrix(&mut r, n, n);
        let b = random_matrix(&mut r, n, n);
        let sum = add(&a.scale(s), &b);
        for which in [Subsystem::A, Subsystem::B] {
            let lhs = partial_transpose(&sum, da, db, which).unwrap();
            let rhs = add(&partial_transpose(&a, da, db, which).unwrap().scale(s), &partial_transpose(&b, da, db, which).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
        let lhs = realign(&sum, da, db).unwrap();
        let rhs = add(&realign(&a, da, db).unwrap().scale(s), &realign(&b, da, db).unwrap());
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(realign_inverse(&lhs, da, db).unwrap(), sum);
    }

    #[test]
    fn trace_norm_is_a_norm(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n + 1);
        let b = random_matrix(&mut r, n, n + 1);
        let (na, nb, nab) = (trace_norm(&a).unwrap(), trace_norm(&b).unwrap(), trace_norm(&add(&a, &b)).unwrap());
        prop_assert!(na > 0.0 && nb > 0.0);
        prop_assert!(nab <= na + nb + 1e-12 * (na + nb));
        prop_assert!((trace_norm(&a.scale(-2.5)).unwrap() - 2.5 * na).abs() <= 1e-12 * na);
    }

    #[test]
    fn partial_trace_of_kron(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, da, da);
        let b = random_matrix(&mut r, db, db);
        let ab = kron(&a, &b);
        let idx = TensorIndex::new(vec![da, db]);
        let keep_a = partial_trace(&ab, &idx, &[0]).unwrap();
        let keep_b = partial_trace(&ab, &idx, &[1]).unwrap();
        prop_assert!(keep_a.max_abs_diff(&a.scale_c(b.trace())) <= 1e-14 * (1.0 + a.max_abs() * b.max_abs() * db as f64));
        prop_assert!(keep_b.max_abs_diff(&b.scale_c(a.trace())) <= 1e-14 * (1.0 + a.max_abs() * b.max_abs() * da as f64));
    }
}

#[test]
fn trace_norm_vanishes_only_at_zero() {
    assert!(trace_norm(&CMatrix::zeros(4, 3)).unwrap() <= 1e-12);
    let mut m = CMatrix::zeros(4, 4);
    m[(2, 1)] = C64::new(0.0, 1e-6);
    assert!((trace_norm(&m).unwrap() - 1e-6).abs() < 1e-18);
}

#[test]
fn symmetric_subspace_operators() {
    for (d, k) in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)] {
        let v = sym_isometry(d, k);
        let n = v.cols();
        assert!(v.adjoint().matmul(&v).max_abs_diff(&CMatrix::identity(n)) <= 1e-13);
        let p = sym_projector_by_averaging(d, k);
        assert!(p.matmul(&p).max_abs_diff(&p) <= 1e-12);
        assert!(v.matmul(&v.adjoint()).max_abs_diff(&p) <= 1e-12);
    }
}

#[test]
fn psd_inputs_have_nonnegative_spectrum() {
    let mut r = rng(3);
    for n in [1, 5, 12] {
        let a = random_psd(&mut r, n);
        assert!(eigenvalues(&a).unwrap()[0] >= -1e-12);
    }
}
