//! Singular values through the Hermitian eigendecomposition of `A^H A`.
//!
//! Each singular value is recovered as the column norm `|A v_i|` rather than
//! `sqrt(lambda_i)`, which keeps null singular values at rounding level of
//! `|A|` instead of `sqrt(eps) |A|`.

use super::eigen::hermitian_eigen;
use super::matrix::{vec_norm, CMatrix};
use crate::error::Result;

/// Relative cutoff below which singular values are reported as exactly 0.
pub const SV_CUTOFF: f64 = 1e-12;

/// Singular values, nonincreasing.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    // Work with the smaller Gram matrix.
    let m = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    let gram = m.adjoint().matmul(&m).hermitian_part();
    let eig = hermitian_eigen(&gram)?;
    let n = gram.rows();
    let mut sv: Vec<f64> = (0..n)
        .map(|j| vec_norm(&m.matvec(&eig.vectors.column(j))))
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let top = sv.first().copied().unwrap_or(0.0);
    for s in sv.iter_mut() {
        if *s < SV_CUTOFF * top {
            *s = 0.0;
        }
    }
    Ok(sv)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> Result<usize> {
    let sv = singular_values(a)?;
    let top = sv.first().copied().unwrap_or(0.0);
    Ok(sv.iter().filter(|&&s| s > rel_tol * top && s > 0.0).count())
}
