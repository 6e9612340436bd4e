use serde::{Deserialize, Serialize};

use super::ExtensionSpec;
use crate::criteria::CheckResult;
use crate::error::{Error, Result};
use crate::linalg::{
    kron, min_eigenvalue, partial_trace, partial_transpose_mask, permutation_operator, sym_dim,
    sym_isometry, CMatrix, TensorIndex,
};
use crate::states::BipartiteState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub checks: Vec<CheckResult>,
}

impl ExtensionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks a candidate extension `σ` on `A ⊗ Sym^k(B)` against `ρ` without
/// any solver data. The lifted operator is `Σ = (I ⊗ V) σ (I ⊗ V)^H`.
///
/// Checks, each with its residual: `hermiticity`, `positivity`,
/// `partial_trace` (max-entry distance of `Tr_{B_2..B_k} Σ` to `ρ`),
/// `permutation_invariance` under adjacent swaps of the `B` copies, and
/// `cut_m` for every cut: `-λ_min` of `Σ` transposed on the last `m` copies.
pub fn verify_extension(
    sigma: &CMatrix,
    rho: &BipartiteState,
    spec: &ExtensionSpec,
    tol: f64,
) -> Result<ExtensionReport> {
    spec.validate()?;
    let (d_a, d_b) = rho.dims();
    let k = spec.level;
    let n = d_a * sym_dim(d_b, k);
    if sigma.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "extension is {}x{}, expected {n}x{n}",
            sigma.rows(),
            sigma.cols()
        )));
    }
    let mut checks = Vec::new();
    let mut push = |name: String, residual: f64| {
        checks.push(CheckResult {
            name,
            passed: residual <= tol,
            residual,
            tol,
        })
    };

    push("hermiticity".into(), sigma.hermitian_defect());
    let herm = sigma.hermitian_part();
    push("positivity".into(), (-min_eigenvalue(&herm)?).max(0.0));

    let v = kron(&CMatrix::identity(d_a), &sym_isometry(d_b, k));
    let lifted = v.sandwich(sigma);
    let mut dims = vec![d_a];
    dims.extend(std::iter::repeat_n(d_b, k));
    let idx = TensorIndex::new(dims);

    let marginal = partial_trace(&lifted, &idx, &[0, 1])?;
    push("partial_trace".into(), marginal.max_abs_diff(rho.matrix()));

    let mut perm_defect = 0.0f64;
    for i in 0..k - 1 {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(i, i + 1);
        let p = kron(&CMatrix::identity(d_a), &permutation_operator(d_b, k, &perm)?);
        perm_defect = perm_defect
            .max(p.matmul(&lifted).max_abs_diff(&lifted))
            .max(lifted.matmul(&p).max_abs_diff(&lifted));
    }
    push("permutation_invariance".into(), perm_defect);

    let lifted_herm = lifted.hermitian_part();
    for &m in spec.active_cuts() {
        let mask: Vec<bool> = (0..=k).map(|p| p > k - m).collect();
        let pt = partial_transpose_mask(&lifted_herm, &idx, &mask)?;
        push(format!("cut_{m}"), (-min_eigenvalue(&pt)?).max(0.0));
    }
    Ok(ExtensionReport { checks })
}
