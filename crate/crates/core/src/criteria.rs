//! Separability criteria with uniform verdict reporting.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eigenvalues, min_eigenvalue, partial_transpose, realign, trace_norm, CMatrix, Subsystem};
use crate::states::blocks::{h0_basis, pt_pair_basis, pt_triple_basis};
use crate::states::family::{pair_index, unnormalized_state};
use crate::states::{block_form, one_dim_pairs, two_dim_pairs, two_dim_pairs_by_bounds, BipartiteState, FamilyParams};

/// Default tolerance for the PPT and realignment criteria.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Entangled,
    NotDetected,
    SeparableConsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub outcome: Outcome,
    pub evidence: f64,
    pub tol: f64,
}

impl Verdict {
    pub fn is_entangled(&self) -> bool {
        self.outcome == Outcome::Entangled
    }
}

/// Entangled iff the smallest eigenvalue of `ρ^{Γ_B}` is below `-tol`.
pub fn ppt_check(rho: &BipartiteState, tol: f64) -> Result<Verdict> {
    let min = min_eigenvalue(&rho.partial_transpose(Subsystem::B))?;
    Ok(Verdict {
        criterion: "ppt".into(),
        outcome: if min < -tol {
            Outcome::Entangled
        } else {
            Outcome::NotDetected
        },
        evidence: min,
        tol,
    })
}

/// `|R(ρ)|_1`.
pub fn realignment_value(rho: &BipartiteState) -> Result<f64> {
    let (da, db) = rho.dims();
    trace_norm(&realign(rho.matrix(), da, db)?)
}

/// Entangled iff `|R(ρ)|_1 > 1 + tol`. The raw value is always reported.
pub fn realignment_check(rho: &BipartiteState, tol: f64) -> Result<Verdict> {
    let value = realignment_value(rho)?;
    Ok(Verdict {
        criterion: "realignment".into(),
        outcome: if value > 1.0 + tol {
            Outcome::Entangled
        } else {
            Outcome::NotDetected
        },
        evidence: value,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub checks: Vec<CheckResult>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Tolerances used by [`structure_check`].
pub mod structure_tol {
    pub const SPARSITY: f64 = 0.0;
    pub const BLOCK_MATCH: f64 = 1e-14;
    pub const PSD: f64 = 1e-10;
    pub const RANK_ONE: f64 = 1e-13;
    pub const SPECTRUM: f64 = 1e-11;
}

/// Largest entry of `m` that couples two different blocks of `labels`.
fn off_block_mass(m: &CMatrix, labels: &[usize]) -> f64 {
    let n = m.rows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            if labels[r] != labels[c] {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_pairwise_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Verifies the direct-sum structure of `ρ_d` and `ρ_d^Γ` and the
/// positivity of every block, on the unnormalized operators.
pub fn structure_check(p: &FamilyParams) -> Result<StructureReport> {
    p.validate()?;
    let d = p.d;
    let a = p.a;
    let rho = unnormalized_state(p);
    let rho_pt = partial_transpose(&rho, d, d, Subsystem::B)?;
    let bf = block_form(p);
    let mut checks = Vec::new();
    let mut push = |name: &str, residual: f64, tol: f64| {
        checks.push(CheckResult {
            name: name.into(),
            passed: residual <= tol,
            residual,
            tol,
        })
    };

    // Block labels: 0 for H_0, then one label per one-dimensional pair.
    let h0 = h0_basis(d);
    let mut labels = vec![usize::MAX; d * d];
    for &i in &h0 {
        labels[i] = 0;
    }
    for (n, &(k, l)) in one_dim_pairs(d).iter().enumerate() {
        labels[pair_index(d, k - 1, l - 1)] = n + 1;
    }
    push("rho_sparsity", off_block_mass(&rho, &labels), structure_tol::SPARSITY);

    let mut pt_labels = vec![usize::MAX; d * d];
    for k in 1..=d {
        for i in pt_triple_basis(d, k) {
            pt_labels[i] = k - 1;
        }
    }
    for (n, &kl) in two_dim_pairs(d).iter().enumerate() {
        for i in pt_pair_basis(d, kl) {
            pt_labels[i] = d + n;
        }
    }
    push("rho_pt_sparsity", off_block_mass(&rho_pt, &pt_labels), structure_tol::SPARSITY);

    let one_dim_gap = one_dim_pairs(d)
        .iter()
        .map(|&(k, l)| {
            let i = pair_index(d, k - 1, l - 1);
            (rho[(i, i)].re - a).abs()
        })
        .fold(0.0, f64::max);
    let m_d_gap = rho.select(&h0, &h0).max_abs_diff(&bf.m_d).max(one_dim_gap);
    push("m_d_matches_state", m_d_gap, structure_tol::BLOCK_MATCH);

    let mut tilde_gap = 0.0f64;
    for (k, mt) in bf.m_tilde.iter().enumerate() {
        let idx = pt_triple_basis(d, k + 1);
        tilde_gap = tilde_gap.max(rho_pt.select(&idx, &idx).max_abs_diff(mt));
    }
    for (kl, blk) in &bf.pair_blocks {
        let idx = pt_pair_basis(d, *kl);
        tilde_gap = tilde_gap.max(rho_pt.select(&idx, &idx).max_abs_diff(blk));
    }
    push("m_tilde_matches_state", tilde_gap, structure_tol::BLOCK_MATCH);

    let m_d_min = min_eigenvalue(&bf.m_d)?;
    push("m_d_psd", (-m_d_min).max(0.0), structure_tol::PSD);

    let mut tilde_min = f64::INFINITY;
    for blk in bf.m_tilde.iter().chain(bf.pair_blocks.iter().map(|(_, b)| b)) {
        tilde_min = tilde_min.min(min_eigenvalue(blk)?);
    }
    push("m_tilde_psd", (-tilde_min).max(0.0), structure_tol::PSD);

    let mut prime_min = f64::INFINITY;
    for blk in &bf.m_prime_blocks {
        prime_min = prime_min.min(min_eigenvalue(blk)?);
    }
    push("m_prime_psd", (-prime_min).max(0.0), structure_tol::PSD);

    let rank_one = &bf.m_prime + &CMatrix::projector(&bf.phi).scale(a);
    push("rank_one_identity", rank_one.max_abs_diff(&bf.m_d), structure_tol::RANK_ONE);

    // Spectrum of the full operator is the union of the block spectra.
    let mut expected = eigenvalues(&bf.m_d)?;
    expected.extend(std::iter::repeat_n(a, d * (d - 2)));
    let full = eigenvalues(&rho)?;
    push(
        "h0_spectrum",
        max_pairwise_gap(&full, &sorted(expected)),
        structure_tol::SPECTRUM,
    );

    let mut expected_pt = Vec::new();
    for blk in bf.m_tilde.iter().chain(bf.pair_blocks.iter().map(|(_, b)| b)) {
        expected_pt.extend(eigenvalues(blk)?);
    }
    let full_pt = eigenvalues(&rho_pt)?;
    push(
        "pt_spectrum",
        max_pairwise_gap(&full_pt, &sorted(expected_pt)),
        structure_tol::SPECTRUM,
    );

    let one = one_dim_pairs(d);
    let two = two_dim_pairs(d);
    let index_ok = one.len() == d * (d - 2)
        && two.len() == d * (d - 3) / 2
        && two == two_dim_pairs_by_bounds(d)
        && two.iter().all(|kl| one.contains(kl));
    push("index_sets", if index_ok { 0.0 } else { 1.0 }, 0.0);

    Ok(StructureReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_entangled;
    use crate::states::make_state;

    fn state(d: usize, a: f64, l: &[f64]) -> BipartiteState {
        make_state(&FamilyParams::new(d, a, l.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn ppt_examples() {
        let v = ppt_check(&state(3, 0.5, &[0.5, 0.5]), DEFAULT_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::NotDetected);
        let pplus = BipartiteState::new(max_entangled(3), 3, 3).unwrap();
        let v = ppt_check(&pplus, DEFAULT_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::Entangled);
        assert!((v.evidence + 1.0 / 3.0).abs() < 1e-12);
        let v = ppt_check(&BipartiteState::maximally_mixed(3, 3), DEFAULT_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::NotDetected);
        assert!((v.evidence - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn realignment_corners_and_centre() {
        for l in [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]] {
            let v = realignment_check(&state(3, 0.8, &l), DEFAULT_TOL).unwrap();
            assert!(v.is_entangled(), "corner {l:?}: {}", v.evidence);
        }
        let v = realignment_check(&state(3, 0.8, &[0.5, 0.5]), DEFAULT_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::NotDetected);
        assert!(v.evidence < 1.0);
    }

    #[test]
    fn verdict_json() {
        let v = Verdict {
            criterion: "realignment".into(),
            outcome: Outcome::Entangled,
            evidence: 1.0234,
            tol: 1e-9,
        };
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"criterion":"realignment","outcome":"Entangled","evidence":1.0234,"tol":1e-9}"#
        );
        assert_eq!(serde_json::from_str::<Verdict>(&s).unwrap(), v);
    }

    #[test]
    fn structure_passes() {
        let p = FamilyParams::new(3, 0.5, vec![0.2, 0.9]).unwrap();
        let r = structure_check(&p).unwrap();
        assert!(r.all_passed(), "{r:#?}");
        assert_eq!(r.get("rho_sparsity").unwrap().residual, 0.0);
        let p0 = FamilyParams::new(4, 0.0, vec![0.3, 0.6, 0.1]).unwrap();
        let r0 = structure_check(&p0).unwrap();
        assert!(r0.all_passed(), "{r0:#?}");
        let p1 = FamilyParams::new(5, 1.0, vec![0.3, 0.6, 0.1, 0.8]).unwrap();
        assert!(structure_check(&p1).unwrap().all_passed());
    }
}
