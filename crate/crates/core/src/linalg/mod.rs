//! Dense complex linear algebra.

mod eigen;
mod matrix;
mod svd;
mod symmetric;
mod tensor;

pub use eigen::{eigenvalues, hermitian_eigen, min_eigenvalue, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{basis_vec, kron_vec, vec_norm, CMatrix, C64};
pub use svd::{numerical_rank, singular_values, trace_norm, SV_CUTOFF};
pub use symmetric::{
    all_permutations, binomial, multisets, permutation_operator, sym_dim, sym_isometry,
    sym_projector_by_averaging,
};
pub use tensor::{
    kron, kron_all, partial_trace, partial_transpose, partial_transpose_mask, realign,
    realign_inverse, Subsystem, TensorIndex,
};

pub(crate) use matrix::{ONE, ZERO};

/// Projector onto `(1/sqrt d) Σ |ii>`.
pub fn max_entangled(d: usize) -> CMatrix {
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    CMatrix::projector(&v)
}

/// Random matrices and vectors drawn from Gaussian ensembles.
pub mod random {
    use super::*;
    use rand::Rng;

    /// Standard normal by Box-Muller.
    fn normal<R: Rng>(rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), normal(rng)))
    }

    pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
        random_matrix(rng, n, n).hermitian_part()
    }

    /// Random density matrix (trace 1).
    pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
        let g = random_matrix(rng, n, n);
        let p = g.matmul(&g.adjoint()).hermitian_part();
        let t = p.trace().re;
        p.scale(1.0 / t)
    }

    /// Unitary from the eigenbasis of a random Hermitian matrix.
    pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
        hermitian_eigen(&random_hermitian(rng, n))
            .expect("Gaussian Hermitian matrices diagonalize")
            .vectors
    }

    /// Uniformly distributed unit vector in `C^n`.
    pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..n).map(|_| C64::new(normal(rng), normal(rng))).collect();
        let nv = vec_norm(&v);
        v.into_iter().map(|z| z / nv).collect()
    }
}
