//! The state family itself, the matrices it is assembled from, and its
//! separable + entangled decomposition.

use super::{BipartiteState, FamilyParams};
use crate::error::{Error, Result};
use crate::linalg::{basis_vec, kron, kron_vec, max_entangled, CMatrix, C64, ONE, ZERO};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Index of `|i j>` (0-based labels) in `C^d ⊗ C^d`.
#[inline]
pub fn pair_index(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

/// The unnormalized operator `Σ_ij |i><j| ⊗ ρ_ij`, assembled entry by entry
/// so every structural zero is an exact zero.
pub fn unnormalized_state(p: &FamilyParams) -> CMatrix {
    let d = p.d;
    let a = p.a;
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        let next = (i + 1) % d;
        let bi = p.b_k(i + 1);
        let ci = p.c_k(i + 1);
        for l in 0..d {
            let diag = if l == i || l == next { bi } else { a };
            m[(pair_index(d, i, l), pair_index(d, i, l))] = real(diag);
        }
        m[(pair_index(d, i, i), pair_index(d, i, next))] = real(ci);
        m[(pair_index(d, i, next), pair_index(d, i, i))] = real(ci);
        for j in 0..d {
            if j != i {
                m[(pair_index(d, i, i), pair_index(d, j, j))] = real(a);
            }
        }
    }
    m
}

/// The normalized family member `ρ_d = N_d Σ_ij |i><j| ⊗ ρ_ij`.
pub fn make_state(p: &FamilyParams) -> Result<BipartiteState> {
    p.validate()?;
    let m = unnormalized_state(p).scale(p.normalization());
    Ok(BipartiteState::from_parts_unchecked(m, p.d, p.d))
}

/// `X(λ)`: `b(λ)` on `|1>,|d>`, `c(λ)` coupling them, `a` elsewhere on the diagonal.
pub fn x_lambda(d: usize, a: f64, lambda: f64) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("d = {d}")));
    }
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParams(format!("a = {a}, lambda = {lambda}")));
    }
    let b = (1.0 + a) / 2.0;
    let c = (1.0 - a * a).sqrt() / 2.0;
    let bl = a + lambda * (b - a);
    let cl = lambda * c;
    let mut x = CMatrix::zeros(d, d);
    for k in 1..d - 1 {
        x[(k, k)] = real(a);
    }
    x[(0, 0)] = real(bl);
    x[(d - 1, d - 1)] = real(bl);
    x[(0, d - 1)] = real(cl);
    x[(d - 1, 0)] = real(cl);
    Ok(x)
}

/// Cyclic shift `S|k> = |k+1 mod d>`.
pub fn shift(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d, d);
    for k in 0..d {
        s[((k + 1) % d, k)] = ONE;
    }
    s
}

/// `X_k = S^k X(λ_k) S^{k†}` for `k` in `1..=d`.
pub fn shifted_block(p: &FamilyParams, k: usize) -> Result<CMatrix> {
    p.validate()?;
    if !(1..=p.d).contains(&k) {
        return Err(Error::InvalidParams(format!("block index {k} outside 1..={}", p.d)));
    }
    let sk = shift(p.d).pow(k as u32);
    Ok(sk.sandwich(&x_lambda(p.d, p.a, p.lambda(k))?))
}

/// `Σ_ij |i><j| ⊗ ρ_ij` built from the shifted blocks `X_i` and `a |i><j|`
/// with matrix products, as an independent route to [`unnormalized_state`].
pub fn assemble_from_blocks(p: &FamilyParams) -> Result<CMatrix> {
    let d = p.d;
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let block = if i == j {
                shifted_block(p, i + 1)?
            } else {
                CMatrix::outer(&basis_vec(d, i), &basis_vec(d, j)).scale(p.a)
            };
            let eij = CMatrix::outer(&basis_vec(d, i), &basis_vec(d, j));
            out = &out + &kron(&eij, &block);
        }
    }
    Ok(out)
}

/// `ψ_k = |k> ⊗ (sqrt((1-a)/2) |k> + sqrt((1+a)/2) |k+1>)`, `k` in `1..=d`.
pub fn product_vector(p: &FamilyParams, k: usize) -> Result<Vec<C64>> {
    let (left, right) = product_vector_factors(p, k)?;
    Ok(kron_vec(&left, &right))
}

/// The two factors of [`product_vector`].
pub fn product_vector_factors(p: &FamilyParams, k: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    p.validate()?;
    if !(1..=p.d).contains(&k) {
        return Err(Error::InvalidParams(format!("product vector index {k} outside 1..={}", p.d)));
    }
    let d = p.d;
    let i = k - 1;
    let mut right = vec![ZERO; d];
    right[i] = real(((1.0 - p.a) / 2.0).sqrt());
    right[(i + 1) % d] = real(((1.0 + p.a) / 2.0).sqrt());
    Ok((basis_vec(d, i), right))
}

/// `ρ_d = N_d (X_ent + X_sep)`.
#[derive(Debug, Clone)]
pub struct EntSepSplit {
    /// `a (d P^+ + Q_d)`.
    pub x_ent: CMatrix,
    /// `Σ_k λ_k |ψ_k><ψ_k|`.
    pub x_sep: CMatrix,
    pub normalization: f64,
}

impl EntSepSplit {
    pub fn recombine(&self) -> CMatrix {
        (&self.x_ent + &self.x_sep).scale(self.normalization)
    }
}

/// `Q_d = I ⊗ I - Σ_k (P_k ⊗ P_k + λ_k P_k ⊗ P_{k+1})`.
pub fn q_operator(p: &FamilyParams) -> CMatrix {
    let d = p.d;
    let mut q = CMatrix::identity(d * d);
    for i in 0..d {
        let next = (i + 1) % d;
        q[(pair_index(d, i, i), pair_index(d, i, i))] -= ONE;
        q[(pair_index(d, i, next), pair_index(d, i, next))] -= real(p.lambda(i + 1));
    }
    q
}

pub fn ent_sep_split(p: &FamilyParams) -> Result<EntSepSplit> {
    p.validate()?;
    let d = p.d;
    let mut x_sep = CMatrix::zeros(d * d, d * d);
    for k in 1..=d {
        let psi = product_vector(p, k)?;
        x_sep = &x_sep + &CMatrix::projector(&psi).scale(p.lambda(k));
    }
    let dp = max_entangled(d).scale(d as f64);
    let x_ent = (&dp + &q_operator(p)).scale(p.a);
    Ok(EntSepSplit {
        x_ent,
        x_sep,
        normalization: p.normalization(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, hermitian_eigen, partial_transpose, vec_norm, Subsystem};

    fn params(d: usize, a: f64, l: &[f64]) -> FamilyParams {
        FamilyParams::new(d, a, l.to_vec()).unwrap()
    }

    #[test]
    fn x_lambda_endpoints() {
        let x0 = x_lambda(4, 0.3, 0.0).unwrap();
        assert_eq!(x0, CMatrix::identity(4).scale(0.3));
        let x1 = x_lambda(5, 0.0, 1.0).unwrap();
        let ev = eigenvalues(&x1).unwrap();
        let expected = [0.0, 0.0, 0.0, 0.0, 1.0];
        for (e, x) in ev.iter().zip(expected) {
            assert!((e - x).abs() < 1e-15);
        }
    }

    #[test]
    fn x_lambda_spectrum_d5() {
        // oracle: b(λ) ± c(λ) from the 2x2 block, a with multiplicity d - 2
        let (a, l): (f64, f64) = (0.4, 0.7);
        let b = (1.0 + a) / 2.0;
        let c = (1.0 - a * a).sqrt() / 2.0;
        let (bl, cl) = (a + l * (b - a), l * c);
        let mut expected = vec![bl - cl, bl + cl, a, a, a];
        expected.sort_by(f64::total_cmp);
        let ev = eigenvalues(&x_lambda(5, a, l).unwrap()).unwrap();
        for (e, x) in ev.iter().zip(&expected) {
            assert!((e - x).abs() < 1e-14);
            assert!(*e >= 0.0);
        }
        assert!(x_lambda(3, 1.1, 0.5).is_err());
    }

    #[test]
    fn shift_properties() {
        let s = shift(3);
        // S|3> = |1>
        assert_eq!(s.matvec(&basis_vec(3, 2)), basis_vec(3, 0));
        for d in 3..=5 {
            assert_eq!(shift(d).pow(d as u32), CMatrix::identity(d));
            let s = shift(d);
            assert_eq!(s.adjoint().matmul(&s), CMatrix::identity(d));
        }
    }

    #[test]
    fn shifted_block_matches_display_block() {
        let p = params(3, 0.6, &[0.4, 0.9]);
        let x1 = shifted_block(&p, 1).unwrap();
        let mut expected = CMatrix::zeros(3, 3);
        expected[(0, 0)] = real(p.b_k(1));
        expected[(1, 1)] = real(p.b_k(1));
        expected[(0, 1)] = real(p.c_k(1));
        expected[(1, 0)] = real(p.c_k(1));
        expected[(2, 2)] = real(p.a);
        assert!(x1.max_abs_diff(&expected) < 1e-15);
        for k in 1..=3 {
            let xk = shifted_block(&p, k).unwrap();
            let base = eigenvalues(&x_lambda(3, p.a, p.lambda(k)).unwrap()).unwrap();
            let ev = eigenvalues(&xk).unwrap();
            for (x, y) in base.iter().zip(&ev) {
                assert!((x - y).abs() < 1e-14);
            }
            assert!(xk.is_hermitian(0.0));
        }
    }

    #[test]
    fn direct_and_block_assembly_agree() {
        for p in [params(3, 0.5, &[0.3, 0.7]), params(5, 0.25, &[0.1, 0.0, 1.0, 0.6])] {
            let direct = unnormalized_state(&p);
            let blocks = assemble_from_blocks(&p).unwrap();
            assert!(direct.max_abs_diff(&blocks) < 1e-15);
        }
    }

    #[test]
    fn product_vectors() {
        let p = params(3, 0.5, &[0.2, 0.3]);
        for k in 1..=3 {
            assert!((vec_norm(&product_vector(&p, k).unwrap()) - 1.0).abs() < 1e-15);
        }
        // k = 3 wraps: |3> ⊗ (0.5|3> + sqrt(0.75)|1>)
        let psi3 = product_vector(&p, 3).unwrap();
        assert!((psi3[pair_index(3, 2, 2)].re - 0.5).abs() < 1e-15);
        assert!((psi3[pair_index(3, 2, 0)].re - 0.75f64.sqrt()).abs() < 1e-15);
        let p1 = params(4, 1.0, &[0.2, 0.3, 0.4]);
        for k in 1..=4 {
            let psi = product_vector(&p1, k).unwrap();
            assert_eq!(psi, kron_vec(&basis_vec(4, k - 1), &basis_vec(4, k % 4)));
        }
        assert!(product_vector(&p, 0).is_err());
        assert!(product_vector(&p, 4).is_err());
    }

    #[test]
    fn split_reconstructs_state() {
        let p = params(3, 0.5, &[0.3, 0.7]);
        let split = ent_sep_split(&p).unwrap();
        let rho = make_state(&p).unwrap();
        assert!(split.recombine().max_abs_diff(rho.matrix()) <= 1e-13);
    }

    #[test]
    fn split_at_a_zero() {
        let p = params(4, 0.0, &[0.2, 0.5, 0.9]);
        let split = ent_sep_split(&p).unwrap();
        assert!(split.x_ent.is_zero());
        let sum: f64 = (1..=4).map(|k| p.lambda(k)).sum();
        assert!((p.inverse_normalization() - sum).abs() < 1e-15);
        let rho = make_state(&p).unwrap();
        assert!(split.x_sep.scale(1.0 / sum).max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn entangled_part_is_npt() {
        let p = params(3, 0.5, &[0.5, 0.5]);
        let split = ent_sep_split(&p).unwrap();
        let pt = partial_transpose(&split.x_ent, 3, 3, Subsystem::B).unwrap();
        let min = hermitian_eigen(&pt).unwrap().min();
        assert!(min < -1e-3, "min eig of X_ent^Γ = {min}");
        // separable part is PSD
        assert!(eigenvalues(&split.x_sep).unwrap()[0] >= -1e-14);
    }
}
