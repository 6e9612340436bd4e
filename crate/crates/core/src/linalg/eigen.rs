//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Inputs further than this from Hermitian are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `j` belongs to `values[j]`.
    pub vectors: CMatrix,
    /// `max |A - A^H|` of the input before re-symmetrization.
    pub symmetrization_correction: f64,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `V diag(values) V^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.vectors;
        let n = v.rows();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within [`HERMITIAN_TOL`]; it is replaced by
/// `(A + A^H)/2` before rotating and the correction size is recorded.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermitian_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian { defect });
    }
    let mut m = a.hermitian_part();
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = OFF_DIAGONAL_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= target || scale == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen {
        values,
        vectors,
        symmetrization_correction: defect,
        sweeps,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a)?.values)
}

pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigen(a)?.min())
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `m[p][q]` with a unitary rotation acting on columns/rows p, q.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Phase that makes the pivot real, then a real symmetric Jacobi rotation.
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // R = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p, q) plane.
    let rpp = C64::new(c, 0.0);
    let rpq = C64::new(s, 0.0);
    let rqp = -phase.conj() * s;
    let rqq = phase.conj() * c;

    let n = m.rows();
    // A <- A R
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * rpp + akq * rqp;
        m[(k, q)] = akp * rpq + akq * rqq;
    }
    // A <- R^H A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = rpp.conj() * apk + rqp.conj() * aqk;
        m[(q, k)] = rpq.conj() * apk + rqq.conj() * aqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * rpp + vkq * rqp;
        v[(k, q)] = vkp * rpq + vkq * rqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_input_is_sorted() {
        let e = hermitian_eigen(&CMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_b_plus_minus_c() {
        // a = 0: b = c = 1/2
        let m = CMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_12x12() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_hermitian(&mut rng, 12);
        let e = hermitian_eigen(&a).unwrap();
        let scale = a.max_abs();
        assert!(e.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        let av = a.matmul(&e.vectors);
        let vl = CMatrix::from_fn(12, 12, |i, j| e.vectors[(i, j)] * e.values[j]);
        assert!(av.max_abs_diff(&vl) <= 1e-10 * scale);
        let vhv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vhv.max_abs_diff(&CMatrix::identity(12)) <= 1e-10);
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
        let r = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&r), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn records_small_symmetrization_correction() {
        let mut m = CMatrix::diag_real(&[1.0, 2.0]);
        m[(0, 1)] = C64::new(1e-13, 0.0);
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.symmetrization_correction > 0.0 && e.symmetrization_correction <= HERMITIAN_TOL);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eigen(&CMatrix::zeros(4, 4)).unwrap();
        assert!(e.values.iter().all(|&x| x == 0.0));
    }
}
