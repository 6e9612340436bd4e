//! Orthonormal Hermitian basis and the complex-to-real embedding.
//!
//! Basis order for `n x n` Hermitian matrices: the `n` diagonal units
//! `E_jj`, then for each pair `j < k` in lexicographic order the symmetric
//! element `(E_jk + E_kj)/√2` followed by the antisymmetric element
//! `(-i E_jk + i E_kj)/√2`. The basis is orthonormal for `tr(XY)`.

use nalgebra::DMatrix;

use crate::linalg::{CMatrix, C64};

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Index of the symmetric element for the pair `(j, k)`, `j < k`; the
/// antisymmetric one follows it.
pub fn pair_slot(n: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < n);
    // Pairs preceding row j: Σ_{r<j} (n-1-r).
    let before = j * (2 * n - j - 1) / 2;
    n + 2 * (before + (k - j - 1))
}

/// `tr(H_α X)` for every basis element, assuming `X` Hermitian.
pub fn hermitian_coordinates(x: &CMatrix) -> Vec<f64> {
    let n = x.rows();
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        out[j] = x[(j, j)].re;
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut slot = n;
    for j in 0..n {
        for k in j + 1..n {
            let z = 0.5 * (x[(j, k)] + x[(k, j)].conj());
            out[slot] = sqrt2 * z.re;
            out[slot + 1] = -sqrt2 * z.im;
            slot += 2;
        }
    }
    out
}

/// `Σ_α c_α H_α`.
pub fn hermitian_from_coordinates(coords: &[f64], n: usize) -> CMatrix {
    assert_eq!(coords.len(), n * n, "expected {} coordinates", n * n);
    let mut x = CMatrix::zeros(n, n);
    for j in 0..n {
        x[(j, j)] = C64::new(coords[j], 0.0);
    }
    let mut slot = n;
    for j in 0..n {
        for k in j + 1..n {
            let z = C64::new(coords[slot] * INV_SQRT2, -coords[slot + 1] * INV_SQRT2);
            x[(j, k)] = z;
            x[(k, j)] = z.conj();
            slot += 2;
        }
    }
    x
}

pub fn hermitian_basis_element(n: usize, alpha: usize) -> CMatrix {
    let mut c = vec![0.0; n * n];
    c[alpha] = 1.0;
    hermitian_from_coordinates(&c, n)
}

/// `H ↦ [[Re H, -Im H], [Im H, Re H]]`, symmetrized.
pub fn real_embedding(h: &CMatrix) -> DMatrix<f64> {
    let n = h.rows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    m
}

/// `(Z11 + Z22) + i (Z21 - Z12)`, the Hermitian matrix with
/// `Re tr(H Z_c) = ⟨embed(H), Z⟩` for every Hermitian `H`. It is PSD when `Z` is.
pub fn complexify(z: &DMatrix<f64>) -> CMatrix {
    let n = z.nrows() / 2;
    let zc = CMatrix::from_fn(n, n, |i, j| {
        C64::new(
            z[(i, j)] + z[(i + n, j + n)],
            z[(i + n, j)] - z[(i, j + n)],
        )
    });
    zc.hermitian_part()
}
