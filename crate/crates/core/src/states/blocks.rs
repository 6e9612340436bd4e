//! Direct-sum structure of `ρ_d` and `ρ_d^Γ`.
//!
//! `ρ_d` splits into a `2d`-dimensional block on
//! `H_0 = span{|ii>, |i,i+1>}` plus one-dimensional blocks `|kl>`;
//! `ρ_d^Γ` splits into `d` three-dimensional blocks on
//! `span{|ii>, |i,i+1>, |i+1,i>}` plus two-dimensional blocks on
//! `span{|kl>, |lk>}`. All labels here are 1-based `(k, l)` pairs, matching
//! how the index conditions are usually written; flat indices are 0-based.

use super::family::pair_index;
use super::FamilyParams;
use crate::linalg::{CMatrix, C64};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `k + 1 (mod d)` on labels `1..=d`.
pub fn succ(d: usize, k: usize) -> usize {
    k % d + 1
}

/// Pairs `(k, l)` with `k ≠ l`, `l ≠ k+1 (mod d)`: the one-dimensional
/// blocks of `ρ_d`. Lexicographic order.
pub fn one_dim_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=d {
        for l in 1..=d {
            if k != l && l != succ(d, k) {
                out.push((k, l));
            }
        }
    }
    out
}

/// Pairs `(k, l)` with `k < l`, `l ≠ k+1`, `k ≠ l+1 (mod d)`: the
/// two-dimensional blocks of `ρ_d^Γ`, by direct enumeration.
pub fn two_dim_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=d {
        for l in (k + 1)..=d {
            if l != succ(d, k) && k != succ(d, l) {
                out.push((k, l));
            }
        }
    }
    out
}

/// The same set via explicit bounds: for `k = 1`, `l = 3..=d-1`; for
/// `k = 2..=d-2`, `l = k+2..=d`.
pub fn two_dim_pairs_by_bounds(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=d.saturating_sub(2) {
        let upper = if k == 1 { d - 1 } else { d };
        for l in (k + 2)..=upper {
            out.push((k, l));
        }
    }
    out
}

/// Flat indices spanning `H_0` in the order used by [`BlockForm::m_d`]:
/// `(|i,i>, |i,i+1>)` for `i < d`, then `(|d,1>, |d,d>)`.
pub fn h0_basis(d: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d - 1 {
        out.push(pair_index(d, i, i));
        out.push(pair_index(d, i, i + 1));
    }
    out.push(pair_index(d, d - 1, 0));
    out.push(pair_index(d, d - 1, d - 1));
    out
}

/// Flat indices of `(|kk>, |k,k+1>, |k+1,k>)` for label `k` in `1..=d`.
pub fn pt_triple_basis(d: usize, k: usize) -> [usize; 3] {
    let i = k - 1;
    let j = succ(d, k) - 1;
    [pair_index(d, i, i), pair_index(d, i, j), pair_index(d, j, i)]
}

/// Flat indices of `(|kl>, |lk>)`.
pub fn pt_pair_basis(d: usize, (k, l): (usize, usize)) -> [usize; 2] {
    [pair_index(d, k - 1, l - 1), pair_index(d, l - 1, k - 1)]
}

/// Analytic block matrices, all for the unnormalized operator
/// `N_d^{-1} ρ_d` (resp. its partial transpose).
#[derive(Debug, Clone)]
pub struct BlockForm {
    /// `2d x 2d` block of `ρ_d` on `H_0`, basis [`h0_basis`].
    pub m_d: CMatrix,
    /// Block-diagonal part with `M_d = M'_d + a |φ_d><φ_d|`.
    pub m_prime: CMatrix,
    /// The `2x2` diagonal blocks of `m_prime`.
    pub m_prime_blocks: Vec<CMatrix>,
    /// `φ_d = Σ_i |ii>` written in the `H_0` basis.
    pub phi: Vec<C64>,
    /// `3x3` blocks of `ρ_d^Γ`, one per `k = 1..=d`.
    pub m_tilde: Vec<CMatrix>,
    /// `2x2` blocks of `ρ_d^Γ` on `span{|kl>, |lk>}`.
    pub pair_blocks: Vec<((usize, usize), CMatrix)>,
}

/// `[[b_k, c_k], [c_k, b_k]]`.
pub fn b_block(p: &FamilyParams, k: usize) -> CMatrix {
    let (b, c) = (p.b_k(k), p.c_k(k));
    CMatrix::from_real_rows(&[vec![b, c], vec![c, b]]).unwrap()
}

/// Diagonal block `k` of `M'_d`.
///
/// For `k < d` this is `λ_k [[b-a, c], [c, b]] + a (1 - λ_k) |e_2><e_2|`;
/// the second term comes from the `|k,k+1>` diagonal entry `b_k = a + λ_k (b - a)`.
/// For `k = d` (basis `|d,1>, |d,d>`) it is `[[b, c], [c, b-a]]`.
pub fn m_prime_block(p: &FamilyParams, k: usize) -> CMatrix {
    let (a, b, c) = (p.a, p.b(), p.c());
    if k == p.d {
        return CMatrix::from_real_rows(&[vec![b, c], vec![c, b - a]]).unwrap();
    }
    let l = p.lambda(k);
    CMatrix::from_real_rows(&[
        vec![l * (b - a), l * c],
        vec![l * c, l * b + a * (1.0 - l)],
    ])
    .unwrap()
}

/// `λ_k [[b-a, c], [c, b]]`, the remainder block when the `a (1 - λ_k)`
/// correction is dropped. Exact only for `λ_k = 1` or `a = 0`.
pub fn scaled_b_tilde(p: &FamilyParams, k: usize) -> CMatrix {
    let (a, b, c) = (p.a, p.b(), p.c());
    CMatrix::from_real_rows(&[vec![b - a, c], vec![c, b]])
        .unwrap()
        .scale(p.lambda(k))
}

/// `[[b_k, c_k, 0], [c_k, b_k, a], [0, a, a]]`.
pub fn m_tilde_block(p: &FamilyParams, k: usize) -> CMatrix {
    let (a, b, c) = (p.a, p.b_k(k), p.c_k(k));
    CMatrix::from_real_rows(&[vec![b, c, 0.0], vec![c, b, a], vec![0.0, a, a]]).unwrap()
}

pub fn block_form(p: &FamilyParams) -> BlockForm {
    let d = p.d;
    let a = p.a;
    let a_block = CMatrix::from_real_rows(&[vec![a, 0.0], vec![0.0, 0.0]]).unwrap();
    let a_prime = CMatrix::from_real_rows(&[vec![0.0, a], vec![0.0, 0.0]]).unwrap();

    // 1-based block labels
    let block_at = |i: usize, j: usize| -> CMatrix {
        if i == j {
            return b_block(p, i);
        }
        let upper = if i.max(j) < d { &a_block } else { &a_prime };
        if i < j {
            upper.clone()
        } else {
            upper.transpose()
        }
    };
    let mut m_d = CMatrix::zeros(2 * d, 2 * d);
    for i in 1..=d {
        for j in 1..=d {
            let blk = block_at(i, j);
            for r in 0..2 {
                for s in 0..2 {
                    m_d[(2 * (i - 1) + r, 2 * (j - 1) + s)] = blk[(r, s)];
                }
            }
        }
    }

    let m_prime_blocks: Vec<CMatrix> = (1..=d).map(|k| m_prime_block(p, k)).collect();
    let mut m_prime = CMatrix::zeros(2 * d, 2 * d);
    for (k, blk) in m_prime_blocks.iter().enumerate() {
        for r in 0..2 {
            for s in 0..2 {
                m_prime[(2 * k + r, 2 * k + s)] = blk[(r, s)];
            }
        }
    }

    let mut phi = vec![real(0.0); 2 * d];
    for i in 0..d - 1 {
        phi[2 * i] = real(1.0);
    }
    phi[2 * d - 1] = real(1.0);

    let m_tilde = (1..=d).map(|k| m_tilde_block(p, k)).collect();
    let pair_blocks = two_dim_pairs(d)
        .into_iter()
        .map(|kl| (kl, CMatrix::from_real_rows(&[vec![a, a], vec![a, a]]).unwrap()))
        .collect();

    BlockForm {
        m_d,
        m_prime,
        m_prime_blocks,
        phi,
        m_tilde,
        pair_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;

    fn params(d: usize, a: f64, l: &[f64]) -> FamilyParams {
        FamilyParams::new(d, a, l.to_vec()).unwrap()
    }

    #[test]
    fn index_set_sizes() {
        for d in 3..=8 {
            assert_eq!(one_dim_pairs(d).len(), d * (d - 2));
            assert_eq!(two_dim_pairs(d).len(), d * (d - 3) / 2);
            assert_eq!(two_dim_pairs(d), two_dim_pairs_by_bounds(d));
            let one = one_dim_pairs(d);
            assert!(two_dim_pairs(d).iter().all(|kl| one.contains(kl)));
        }
        assert_eq!(one_dim_pairs(3), vec![(1, 3), (2, 1), (3, 2)]);
        assert!(two_dim_pairs(3).is_empty());
        assert_eq!(two_dim_pairs(4), vec![(1, 3), (2, 4)]);
    }

    #[test]
    fn m3_layout() {
        let p = params(3, 0.4, &[0.3, 0.6]);
        let bf = block_form(&p);
        let a = p.a;
        // B_1 | A | A'
        assert_eq!(bf.m_d[(0, 0)].re, p.b_k(1));
        assert_eq!(bf.m_d[(0, 1)].re, p.c_k(1));
        assert_eq!(bf.m_d[(0, 2)].re, a);
        assert_eq!(bf.m_d[(0, 3)].re, 0.0);
        assert_eq!(bf.m_d[(0, 4)].re, 0.0);
        assert_eq!(bf.m_d[(0, 5)].re, a);
        // A^T | B_2 | A'
        assert_eq!(bf.m_d[(2, 0)].re, a);
        assert_eq!(bf.m_d[(2, 5)].re, a);
        assert_eq!(bf.m_d[(3, 5)].re, 0.0);
        // A'^T A'^T B_3
        assert_eq!(bf.m_d[(5, 0)].re, a);
        assert_eq!(bf.m_d[(5, 2)].re, a);
        assert_eq!(bf.m_d[(4, 4)].re, p.b());
        assert_eq!(bf.m_d[(4, 5)].re, p.c());
        assert!(bf.m_d.is_hermitian(0.0));
    }

    #[test]
    fn rank_one_correction() {
        for p in [params(3, 0.5, &[0.2, 0.9]), params(5, 0.7, &[0.1, 0.4, 0.9, 0.0])] {
            let bf = block_form(&p);
            let rebuilt = &bf.m_prime + &CMatrix::projector(&bf.phi).scale(p.a);
            assert!(rebuilt.max_abs_diff(&bf.m_d) <= 1e-15);
        }
    }

    #[test]
    fn uncorrected_remainder_misses_a_one_minus_lambda() {
        let p = params(4, 0.6, &[0.25, 1.0, 0.0]);
        for k in 1..4 {
            let diff = &m_prime_block(&p, k) - &scaled_b_tilde(&p, k);
            let expected = p.a * (1.0 - p.lambda(k));
            assert!((diff[(1, 1)].re - expected).abs() < 1e-15);
            assert_eq!(diff[(0, 0)].re, 0.0);
            assert_eq!(diff[(0, 1)].re, 0.0);
        }
        // a = 0, all λ = 1: both forms give [[1/2, 1/2], [1/2, 1/2]]
        let p0 = params(3, 0.0, &[1.0, 1.0]);
        let half = CMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        for k in 1..=2 {
            assert!(m_prime_block(&p0, k).max_abs_diff(&half) < 1e-16);
            assert!(scaled_b_tilde(&p0, k).max_abs_diff(&half) < 1e-16);
        }
    }

    #[test]
    fn blocks_are_psd() {
        for &a in &[0.0, 0.3, 1.0] {
            let p = params(4, a, &[0.0, 0.5, 1.0]);
            let bf = block_form(&p);
            assert!(hermitian_eigen(&bf.m_d).unwrap().min() >= -1e-12);
            for blk in bf.m_prime_blocks.iter().chain(&bf.m_tilde) {
                assert!(hermitian_eigen(blk).unwrap().min() >= -1e-12);
            }
        }
    }

    #[test]
    fn m_tilde_at_a_one() {
        let p = params(5, 1.0, &[0.3, 0.1, 0.9, 0.5]);
        let expected =
            CMatrix::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]])
                .unwrap();
        for m in block_form(&p).m_tilde {
            assert_eq!(m, expected);
        }
    }

    #[test]
    fn bases_partition_the_space() {
        for d in 3..=6 {
            let mut seen = vec![0u8; d * d];
            for i in h0_basis(d) {
                seen[i] += 1;
            }
            for (k, l) in one_dim_pairs(d) {
                seen[pair_index(d, k - 1, l - 1)] += 1;
            }
            assert!(seen.iter().all(|&c| c == 1));

            let mut seen = vec![0u8; d * d];
            for k in 1..=d {
                for i in pt_triple_basis(d, k) {
                    seen[i] += 1;
                }
            }
            for kl in two_dim_pairs(d) {
                for i in pt_pair_basis(d, kl) {
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
