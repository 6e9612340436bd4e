//! Diagonal unitaries commuting with `ρ_d` and with `ρ_d^Γ`.

use super::blocks::{h0_basis, one_dim_pairs, pt_pair_basis, pt_triple_basis, two_dim_pairs};
use super::family::pair_index;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// `U = Π_0 + Σ e^{iα_kl} Π_kl`, one phase per pair of
/// [`one_dim_pairs`] (in that order), so `d(d-2)` phases.
pub fn symmetry_unitary(d: usize, phases: &[f64]) -> Result<CMatrix> {
    let pairs = one_dim_pairs(d);
    if phases.len() != pairs.len() {
        return Err(Error::PhaseCount {
            expected: pairs.len(),
            got: phases.len(),
        });
    }
    let mut u = CMatrix::zeros(d * d, d * d);
    for i in h0_basis(d) {
        u[(i, i)] = C64::new(1.0, 0.0);
    }
    for (&(k, l), &alpha) in pairs.iter().zip(phases) {
        let i = pair_index(d, k - 1, l - 1);
        u[(i, i)] = C64::from_polar(1.0, alpha);
    }
    Ok(u)
}

/// `Ũ = Σ_m e^{iβ_m} Π̃_m + Σ e^{iγ_kl} Π̃_kl` with `d` phases `β` and one
/// phase `γ` per pair of [`two_dim_pairs`], so `d(d-3)/2` of them.
pub fn pt_symmetry_unitary(d: usize, betas: &[f64], gammas: &[f64]) -> Result<CMatrix> {
    if betas.len() != d {
        return Err(Error::PhaseCount {
            expected: d,
            got: betas.len(),
        });
    }
    let pairs = two_dim_pairs(d);
    if gammas.len() != pairs.len() {
        return Err(Error::PhaseCount {
            expected: pairs.len(),
            got: gammas.len(),
        });
    }
    let mut u = CMatrix::zeros(d * d, d * d);
    for (m, &beta) in betas.iter().enumerate() {
        for i in pt_triple_basis(d, m + 1) {
            u[(i, i)] = C64::from_polar(1.0, beta);
        }
    }
    for (&kl, &gamma) in pairs.iter().zip(gammas) {
        for i in pt_pair_basis(d, kl) {
            u[(i, i)] = C64::from_polar(1.0, gamma);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_phases_give_identity() {
        for d in 3..=6 {
            let u = symmetry_unitary(d, &vec![0.0; d * (d - 2)]).unwrap();
            assert_eq!(u, CMatrix::identity(d * d));
            let ut = pt_symmetry_unitary(d, &vec![0.0; d], &vec![0.0; d * (d - 3) / 2]).unwrap();
            assert_eq!(ut, CMatrix::identity(d * d));
        }
    }

    #[test]
    fn phase_counts_are_checked() {
        assert!(matches!(
            symmetry_unitary(3, &[0.1, 0.2]),
            Err(Error::PhaseCount { expected: 3, got: 2 })
        ));
        assert!(pt_symmetry_unitary(3, &[0.0; 3], &[0.1]).is_err());
        assert!(pt_symmetry_unitary(4, &[0.0; 3], &[0.1, 0.2]).is_err());
        assert!(pt_symmetry_unitary(4, &[0.0; 4], &[0.1, 0.2]).is_ok());
    }

    #[test]
    fn unitary() {
        let u = symmetry_unitary(4, &[0.3, 1.1, -0.7, 2.0, 0.5, 0.9, -2.2, 3.0]).unwrap();
        assert!(u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(16)) < 1e-15);
    }
}
