//! Tensor-product index bookkeeping and the reshuffles built on it:
//! Kronecker products, partial transposes, partial traces and realignment.

use super::matrix::{CMatrix, ZERO};
use crate::error::{Error, Result};

/// Local dimensions `(d_1, ..., d_m)` of a multipartite space, flattened
/// with the last factor varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorIndex {
    dims: Vec<usize>,
}

impl TensorIndex {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(
            !dims.is_empty() && dims.iter().all(|&d| d >= 1),
            "tensor dimensions must be positive"
        );
        Self { dims }
    }

    /// `k` copies of a `d`-dimensional factor.
    pub fn uniform(d: usize, k: usize) -> Self {
        Self::new(vec![d; k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| {
                debug_assert!(i < d);
                acc * d + i
            })
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for k in 0..ca {
            let x = a[(i, k)];
            if x == ZERO {
                continue;
            }
            for j in 0..rb {
                for l in 0..cb {
                    out[(i * rb + j, k * cb + l)] = x * b[(j, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let (first, rest) = factors.split_first().expect("kron_all of nothing");
    rest.iter().fold((*first).clone(), |acc, f| kron(&acc, f))
}

fn check_square(m: &CMatrix, dims: &TensorIndex) -> Result<()> {
    let n = dims.total();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on a space of dimension {} ({:?})",
            m.rows(),
            m.cols(),
            n,
            dims.dims()
        )));
    }
    Ok(())
}

/// Transposes every factor flagged in `mask`:
/// `<i|M^Γ|j> = <i'|M|j'>` where `i', j'` swap the flagged digits of `i, j`.
pub fn partial_transpose_mask(m: &CMatrix, dims: &TensorIndex, mask: &[bool]) -> Result<CMatrix> {
    check_square(m, dims)?;
    if mask.len() != dims.parties() {
        return Err(Error::DimensionMismatch(format!(
            "transpose mask of length {} for {} parties",
            mask.len(),
            dims.parties()
        )));
    }
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        let ri = dims.unflatten(r);
        for c in 0..n {
            let ci = dims.unflatten(c);
            let mut src_r = ri.clone();
            let mut src_c = ci.clone();
            for (p, &flag) in mask.iter().enumerate() {
                if flag {
                    src_r[p] = ci[p];
                    src_c[p] = ri[p];
                }
            }
            out[(r, c)] = m[(dims.flatten(&src_r), dims.flatten(&src_c))];
        }
    }
    Ok(out)
}

/// Bipartite partial transpose; for `B`, `<ij|M^Γ|kl> = <il|M|kj>`.
pub fn partial_transpose(m: &CMatrix, d_a: usize, d_b: usize, which: Subsystem) -> Result<CMatrix> {
    let mask = match which {
        Subsystem::A => [true, false],
        Subsystem::B => [false, true],
    };
    partial_transpose_mask(m, &TensorIndex::new(vec![d_a, d_b]), &mask)
}

/// Traces out every factor not listed in `keep`; kept factors stay in order.
pub fn partial_trace(m: &CMatrix, dims: &TensorIndex, keep: &[usize]) -> Result<CMatrix> {
    check_square(m, dims)?;
    let parties = dims.parties();
    if keep.iter().any(|&p| p >= parties) || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DimensionMismatch(format!(
            "keep list {keep:?} for {parties} parties (must be increasing)"
        )));
    }
    let traced: Vec<usize> = (0..parties).filter(|p| !keep.contains(p)).collect();
    let kept_dims = TensorIndex::new(if keep.is_empty() {
        vec![1]
    } else {
        keep.iter().map(|&p| dims.dims()[p]).collect()
    });
    let traced_dims = TensorIndex::new(if traced.is_empty() {
        vec![1]
    } else {
        traced.iter().map(|&p| dims.dims()[p]).collect()
    });
    let nk = kept_dims.total();
    let mut out = CMatrix::zeros(nk, nk);
    let mut full_r = vec![0; parties];
    let mut full_c = vec![0; parties];
    for r in 0..nk {
        let kr = kept_dims.unflatten(r);
        for c in 0..nk {
            let kc = kept_dims.unflatten(c);
            for (slot, &p) in keep.iter().enumerate() {
                full_r[p] = kr[slot];
                full_c[p] = kc[slot];
            }
            let mut acc = ZERO;
            for t in 0..traced_dims.total() {
                let ti = traced_dims.unflatten(t);
                for (slot, &p) in traced.iter().enumerate() {
                    full_r[p] = ti[slot];
                    full_c[p] = ti[slot];
                }
                acc += m[(dims.flatten(&full_r), dims.flatten(&full_c))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Realignment `<ik|R(M)|jl> = <ij|M|kl>`, a `d_A^2 x d_B^2` matrix.
pub fn realign(m: &CMatrix, d_a: usize, d_b: usize) -> Result<CMatrix> {
    check_square(m, &TensorIndex::new(vec![d_a, d_b]))?;
    let mut out = CMatrix::zeros(d_a * d_a, d_b * d_b);
    for i in 0..d_a {
        for j in 0..d_b {
            for k in 0..d_a {
                for l in 0..d_b {
                    out[(i * d_a + k, j * d_b + l)] = m[(i * d_b + j, k * d_b + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Inverse of [`realign`].
pub fn realign_inverse(r: &CMatrix, d_a: usize, d_b: usize) -> Result<CMatrix> {
    if r.shape() != (d_a * d_a, d_b * d_b) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not a realigned {}x{} operator",
            r.rows(),
            r.cols(),
            d_a,
            d_b
        )));
    }
    let n = d_a * d_b;
    let mut out = CMatrix::zeros(n, n);
    for i in 0..d_a {
        for j in 0..d_b {
            for k in 0..d_a {
                for l in 0..d_b {
                    out[(i * d_b + j, k * d_b + l)] = r[(i * d_a + k, j * d_b + l)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::min_eigenvalue;
    use crate::linalg::matrix::C64;
    use crate::linalg::svd::trace_norm;
    use crate::linalg::max_entangled;
    use crate::linalg::random::{random_hermitian, random_matrix, random_psd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli_x() -> CMatrix {
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn flatten_roundtrip() {
        let t = TensorIndex::new(vec![2, 3, 4]);
        for f in 0..t.total() {
            assert_eq!(t.flatten(&t.unflatten(f)), f);
        }
        assert_eq!(t.flatten(&[1, 2, 3]), 1 * 12 + 2 * 4 + 3);
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(2)), CMatrix::identity(4));
        let xi = kron(&pauli_x(), &CMatrix::identity(2));
        let expected = CMatrix::from_real_rows(&[
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(xi, expected);
    }

    #[test]
    fn kron_trace_against_entrywise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(&mut rng, 3);
        let b = random_hermitian(&mut rng, 3);
        // oracle: build A⊗B by quadruple loop
        let mut oracle = CMatrix::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        oracle[(3 * i + j, 3 * k + l)] = a[(i, k)] * b[(j, l)];
                    }
                }
            }
        }
        let ab = kron(&a, &b);
        assert_eq!(ab, oracle);
        assert!((ab.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let ab = kron(&a, &b);
        let pt = partial_transpose(&ab, 2, 2, Subsystem::B).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) == 0.0);
        let pta = partial_transpose(&ab, 2, 2, Subsystem::A).unwrap();
        assert!(pta.max_abs_diff(&kron(&a.transpose(), &b)) == 0.0);
        let twice = partial_transpose(&pt, 2, 2, Subsystem::B).unwrap();
        assert_eq!(twice, ab);
    }

    #[test]
    fn max_entangled_partial_transpose_spectrum() {
        // (P+_3)^Γ = SWAP/3, spectrum {+1/3 (x6), -1/3 (x3)}
        let p = max_entangled(3);
        let pt = partial_transpose(&p, 3, 3, Subsystem::B).unwrap();
        assert!((min_eigenvalue(&pt).unwrap() + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 3, 3);
        let b = random_matrix(&mut rng, 3, 3);
        let ab = kron(&a, &b);
        let dims = TensorIndex::new(vec![3, 3]);
        let tb = partial_trace(&ab, &dims, &[0]).unwrap();
        assert!(tb.max_abs_diff(&a.scale_c(b.trace())) < 1e-14);
        let ta = partial_trace(&ab, &dims, &[1]).unwrap();
        assert!(ta.max_abs_diff(&b.scale_c(a.trace())) < 1e-14);
        let all = partial_trace(&ab, &dims, &[]).unwrap();
        assert!((all[(0, 0)] - ab.trace()).norm() < 1e-13);

        let marg = partial_trace(&max_entangled(3), &dims, &[0]).unwrap();
        assert!(marg.max_abs_diff(&CMatrix::identity(3).scale(1.0 / 3.0)) < 1e-15);

        let rho = random_psd(&mut rng, 9);
        let red = partial_trace(&rho, &dims, &[0]).unwrap();
        assert!((red.trace() - rho.trace()).norm() < 1e-13);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let dims = TensorIndex::new(vec![2, 2]);
        let m = CMatrix::identity(4);
        assert!(partial_trace(&m, &dims, &[2]).is_err());
        assert!(partial_trace(&m, &dims, &[1, 0]).is_err());
        assert!(partial_trace(&CMatrix::identity(3), &dims, &[0]).is_err());
    }

    #[test]
    fn realign_max_entangled_and_products() {
        for d in 2..=4 {
            let r = realign(&max_entangled(d), d, d).unwrap();
            assert!((trace_norm(&r).unwrap() - d as f64).abs() < 1e-12);
        }
        // pure product state -> rank-one reshuffle with trace norm 1
        let x: Vec<C64> = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let y: Vec<C64> = vec![C64::new(0.0, 0.0), C64::new(1.0, 1.0).unscale(2f64.sqrt()), C64::new(0.0, 0.0)];
        let prod = kron(&CMatrix::projector(&x), &CMatrix::projector(&y));
        let r = realign(&prod, 3, 3).unwrap();
        assert!((trace_norm(&r).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn realign_roundtrip_and_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_matrix(&mut rng, 9, 9);
        let r = realign(&m, 3, 3).unwrap();
        assert_eq!(realign_inverse(&r, 3, 3).unwrap(), m);
        let m6 = random_matrix(&mut rng, 6, 6);
        let r6 = realign(&m6, 2, 3).unwrap();
        assert_eq!(r6.shape(), (4, 9));
        assert_eq!(realign_inverse(&r6, 2, 3).unwrap(), m6);
        assert!(realign(&m, 2, 3).is_err());
    }
}
