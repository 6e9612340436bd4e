//! Permutation operators on `(C^d)^{⊗k}` and the isometry onto its
//! symmetric subspace.

use super::matrix::{CMatrix, C64, ONE};
use super::tensor::TensorIndex;
use crate::error::{Error, Result};

/// `C(n, r)`.
pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of `Sym^k(C^d)`.
pub fn sym_dim(d: usize, k: usize) -> usize {
    binomial(d + k - 1, k)
}

/// Nondecreasing `k`-tuples over `0..d` in lexicographic order; these label
/// the columns of [`sym_isometry`].
pub fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(d, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Isometry `V: Sym^k(C^d) -> (C^d)^{⊗k}` whose columns are the normalized
/// symmetrized basis states. `V^H V = I` and `V V^H` is the symmetric projector.
/// `k = 0` gives the `1x1` identity.
pub fn sym_isometry(d: usize, k: usize) -> CMatrix {
    assert!(d >= 1);
    if k == 0 {
        return CMatrix::identity(1);
    }
    let idx = TensorIndex::uniform(d, k);
    let sets = multisets(d, k);
    let mut v = CMatrix::zeros(idx.total(), sets.len());
    let mut orbit_rows: Vec<Vec<usize>> = vec![Vec::new(); sets.len()];
    let lookup: std::collections::HashMap<&Vec<usize>, usize> =
        sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    for flat in 0..idx.total() {
        let mut digits = idx.unflatten(flat);
        digits.sort_unstable();
        orbit_rows[lookup[&digits]].push(flat);
    }
    for (col, rows) in orbit_rows.iter().enumerate() {
        let amp = C64::new(1.0 / (rows.len() as f64).sqrt(), 0.0);
        for &r in rows {
            v[(r, col)] = amp;
        }
    }
    v
}

fn validate_permutation(k: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// `P_π |i_1 ... i_k> = |i_{π^{-1}(1)} ... i_{π^{-1}(k)}>`: the factor in
/// slot `m` moves to slot `π(m)`. `perm` is 0-based, `perm[m] = π(m)`.
/// Composition follows `P_π P_σ = P_{π∘σ}`.
pub fn permutation_operator(d: usize, k: usize, perm: &[usize]) -> Result<CMatrix> {
    validate_permutation(k, perm)?;
    let idx = TensorIndex::uniform(d, k);
    let n = idx.total();
    let mut p = CMatrix::zeros(n, n);
    let mut out_digits = vec![0; k];
    for col in 0..n {
        let digits = idx.unflatten(col);
        for (m, &target) in perm.iter().enumerate() {
            out_digits[target] = digits[m];
        }
        p[(idx.flatten(&out_digits), col)] = ONE;
    }
    Ok(p)
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

/// `(1/k!) Σ_π P_π`.
pub fn sym_projector_by_averaging(d: usize, k: usize) -> CMatrix {
    let perms = all_permutations(k);
    let n = d.pow(k as u32);
    let mut acc = CMatrix::zeros(n, n);
    for p in &perms {
        acc = &acc + &permutation_operator(d, k, p).expect("valid permutation");
    }
    acc.scale(1.0 / perms.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compose(p: &[usize], s: &[usize]) -> Vec<usize> {
        s.iter().map(|&x| p[x]).collect()
    }

    #[test]
    fn dimensions() {
        assert_eq!(sym_isometry(3, 2).cols(), 6);
        assert_eq!(sym_dim(3, 3), 10);
        assert_eq!(sym_isometry(3, 1), CMatrix::identity(3));
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn qubit_pair_projector_is_half_identity_plus_swap() {
        let v = sym_isometry(2, 2);
        let swap = permutation_operator(2, 2, &[1, 0]).unwrap();
        let expected = (&CMatrix::identity(4) + &swap).scale(0.5);
        assert!(v.matmul(&v.adjoint()).max_abs_diff(&expected) < 1e-15);
        let explicit = CMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(swap, explicit);
    }

    #[test]
    fn isometry_and_idempotence() {
        for (d, k) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let v = sym_isometry(d, k);
            let vhv = v.adjoint().matmul(&v);
            assert!(vhv.max_abs_diff(&CMatrix::identity(v.cols())) < 1e-13);
            let p = v.matmul(&v.adjoint());
            assert!(p.matmul(&p).max_abs_diff(&p) < 1e-12);
            assert!(p.max_abs_diff(&sym_projector_by_averaging(d, k)) < 1e-13);
        }
    }

    #[test]
    fn composition_law_all_permutations_k3() {
        let perms = all_permutations(3);
        assert_eq!(perms.len(), 6);
        let id = permutation_operator(2, 3, &[0, 1, 2]).unwrap();
        assert_eq!(id, CMatrix::identity(8));
        for p in &perms {
            let pp = permutation_operator(2, 3, p).unwrap();
            let pu = pp.adjoint().matmul(&pp);
            assert_eq!(pu, CMatrix::identity(8));
            for s in &perms {
                let ps = permutation_operator(2, 3, s).unwrap();
                let lhs = pp.matmul(&ps);
                let rhs = permutation_operator(2, 3, &compose(p, s)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn moves_slot_contents() {
        // cyclic π: 0->1, 1->2, 2->0 sends |a b c> to |c a b>
        let idx = TensorIndex::uniform(3, 3);
        let p = permutation_operator(3, 3, &[1, 2, 0]).unwrap();
        let src = idx.flatten(&[0, 1, 2]);
        let dst = idx.flatten(&[2, 0, 1]);
        assert_eq!(p[(dst, src)], ONE);
    }

    #[test]
    fn invalid_permutations() {
        assert!(permutation_operator(2, 2, &[0, 0]).is_err());
        assert!(permutation_operator(2, 2, &[0, 2]).is_err());
        assert!(permutation_operator(2, 3, &[0, 1]).is_err());
    }
}
