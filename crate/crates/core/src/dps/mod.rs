//! PPT symmetric extensions of bipartite states.
//!
//! An extension of `ρ` at level `k` is a state `σ` on `A ⊗ Sym^k(B)` whose
//! lift `(I ⊗ V) σ (I ⊗ V)^H` reduces to `ρ` on `A ⊗ B_1` and stays PSD
//! after transposing the last `m` copies of `B` for each cut `m`. The search
//! is the LMI "maximize `t` with every block `⪰ t I`": a negative optimum
//! proves that no extension exists, hence that `ρ` is entangled, and the
//! dual solution yields a witness.

pub mod basis;
mod maps;
mod verify;
mod witness;

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use maps::{ExtensionMaps, CONSISTENCY_TOL, NULL_SPACE_CUTOFF};
pub use verify::{verify_extension, ExtensionReport};
pub use witness::{extract_witness, extract_witness_with, Witness, WitnessOptions, SAMPLE_TOL};

use crate::criteria::{Outcome, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{kron, kron_vec, sym_isometry, CMatrix, C64};
use crate::sdp::{solve, LmiProblem, SdpSolution, SdpStatus, SolverOptions};
use crate::states::{product_vector_factors, BipartiteState, FamilyParams};

/// `t*` below `-EPS_ENT` certifies that no extension exists.
pub const EPS_ENT: f64 = 1e-6;
/// `t*` at or above `-EPS_FEAS` is accepted as an extension after verification.
pub const EPS_FEAS: f64 = 1e-7;
pub const MAX_LEVEL: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub level: usize,
    pub with_ppt: bool,
    /// Numbers of trailing `B` copies transposed, each in `1..=level`.
    pub cuts: Vec<usize>,
}

impl ExtensionSpec {
    /// Level `k` with every cut `1..=k`.
    pub fn new(level: usize) -> Self {
        Self {
            level,
            with_ppt: true,
            cuts: (1..=level).collect(),
        }
    }

    pub fn symmetric_only(level: usize) -> Self {
        Self {
            level,
            with_ppt: false,
            cuts: Vec::new(),
        }
    }

    pub fn with_cuts(level: usize, mut cuts: Vec<usize>) -> Result<Self> {
        cuts.sort_unstable();
        cuts.dedup();
        let spec = Self {
            level,
            with_ppt: true,
            cuts,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_LEVEL).contains(&self.level) {
            return Err(Error::InvalidParams(format!(
                "extension level {} outside 2..={MAX_LEVEL}",
                self.level
            )));
        }
        if self.with_ppt {
            if self.cuts.is_empty() {
                return Err(Error::InvalidParams("PPT extension without cuts".into()));
            }
            if self.cuts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParams(format!("cuts {:?} not increasing", self.cuts)));
            }
            if self.cuts.iter().any(|&m| m == 0 || m > self.level) {
                return Err(Error::InvalidParams(format!(
                    "cuts {:?} outside 1..={}",
                    self.cuts, self.level
                )));
            }
        }
        Ok(())
    }

    pub fn active_cuts(&self) -> &[usize] {
        if self.with_ppt {
            &self.cuts
        } else {
            &[]
        }
    }

    /// Same cuts restricted to `1..=level`, at that level.
    pub fn restricted(&self, level: usize) -> Result<Self> {
        if !self.with_ppt {
            return Ok(Self::symmetric_only(level));
        }
        Self::with_cuts(level, self.cuts.iter().copied().filter(|&m| m <= level).collect())
    }
}

impl Default for ExtensionSpec {
    fn default() -> Self {
        Self::new(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionStatus {
    ExtensionFound,
    NoExtension,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub status: ExtensionStatus,
    pub spec: ExtensionSpec,
    /// `t*`, the largest common lower bound on the block spectra.
    pub objective: f64,
    pub extension: Option<CMatrix>,
    pub report: Option<ExtensionReport>,
    pub solution: SdpSolution,
    maps: Arc<ExtensionMaps>,
}

/// Serializable digest of an [`ExtensionResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSummary {
    pub status: ExtensionStatus,
    pub level: usize,
    pub cuts: Vec<usize>,
    pub objective: f64,
    pub dual_objective: f64,
    pub solver_status: SdpStatus,
    pub iterations: usize,
    pub residuals: crate::sdp::Residuals,
}

impl ExtensionResult {
    pub fn maps(&self) -> &ExtensionMaps {
        &self.maps
    }

    /// Dual blocks, the certificate behind a `NoExtension` result.
    pub fn dual_blocks(&self) -> Option<&[DMatrix<f64>]> {
        (self.status == ExtensionStatus::NoExtension).then_some(self.solution.z.as_slice())
    }

    pub fn verdict(&self) -> Verdict {
        Verdict {
            criterion: "dps".into(),
            outcome: match self.status {
                ExtensionStatus::NoExtension => Outcome::Entangled,
                ExtensionStatus::ExtensionFound => Outcome::SeparableConsistent,
                ExtensionStatus::NumericalFailure => Outcome::NotDetected,
            },
            evidence: self.objective,
            tol: EPS_ENT,
        }
    }

    pub fn summary(&self) -> ExtensionSummary {
        ExtensionSummary {
            status: self.status,
            level: self.spec.level,
            cuts: self.spec.active_cuts().to_vec(),
            objective: self.objective,
            dual_objective: self.solution.dual_objective,
            solver_status: self.solution.status,
            iterations: self.solution.iterations,
            residuals: self.solution.residuals,
        }
    }
}

/// The equality-free LMI for `ρ` at the given spec.
pub fn build_extension_problem(rho: &BipartiteState, spec: &ExtensionSpec) -> Result<LmiProblem> {
    let maps = ExtensionMaps::new(rho.d_a(), rho.d_b(), spec)?;
    Ok(maps.problem(rho)?.0)
}

pub fn run_dps(rho: &BipartiteState, spec: &ExtensionSpec) -> Result<ExtensionResult> {
    let maps = Arc::new(ExtensionMaps::new(rho.d_a(), rho.d_b(), spec)?);
    run_dps_with(&maps, rho, &SolverOptions::default())
}

/// Solves with prebuilt maps, so scans can share them across states.
pub fn run_dps_with(maps: &Arc<ExtensionMaps>, rho: &BipartiteState, opts: &SolverOptions) -> Result<ExtensionResult> {
    let (problem, yp) = maps.problem(rho)?;
    let solution = solve(&problem, opts)?;
    let t = *solution.x.last().expect("t is always a variable");
    let mut result = ExtensionResult {
        status: ExtensionStatus::NumericalFailure,
        spec: maps.spec().clone(),
        objective: t,
        extension: None,
        report: None,
        solution,
        maps: Arc::clone(maps),
    };
    if result.solution.status == SdpStatus::Optimal && t < -EPS_ENT {
        result.status = ExtensionStatus::NoExtension;
    } else if t >= -EPS_FEAS {
        let sigma = maps.reconstruct(&yp, &result.solution.x);
        let report = verify_extension(&sigma, rho, maps.spec(), EPS_FEAS)?;
        if report.all_passed() {
            result.status = ExtensionStatus::ExtensionFound;
        }
        result.extension = Some(sigma);
        result.report = Some(report);
    }
    Ok(result)
}

/// `Σ_i w_i |u_i⟩⟨u_i| ⊗ V^H (|v_i⟩⟨v_i|)^{⊗k} V`, the Bose-symmetric
/// extension of the separable state `Σ_i w_i |u_i v_i⟩⟨u_i v_i|`.
pub fn product_extension(terms: &[(f64, Vec<C64>, Vec<C64>)], level: usize) -> Result<CMatrix> {
    let Some((_, u0, v0)) = terms.first() else {
        return Err(Error::InvalidParams("empty decomposition".into()));
    };
    let (d_a, d_b) = (u0.len(), v0.len());
    let v_adj = sym_isometry(d_b, level).adjoint();
    let mut out: Option<CMatrix> = None;
    for (w, u, v) in terms {
        if u.len() != d_a || v.len() != d_b {
            return Err(Error::DimensionMismatch("inconsistent product vectors".into()));
        }
        let mut power = v.clone();
        for _ in 1..level {
            power = kron_vec(&power, v);
        }
        let s = v_adj.matvec(&power);
        let term = kron(&CMatrix::projector(u), &CMatrix::projector(&s)).scale(*w);
        out = Some(match out {
            Some(acc) => &acc + &term,
            None => term,
        });
    }
    Ok(out.expect("nonempty"))
}

/// Analytic extension of the family state at `a = 0`, where it is the
/// mixture `N Σ_k λ_k |ψ_k⟩⟨ψ_k|` of product vectors.
pub fn family_extension(p: &FamilyParams, level: usize) -> Result<CMatrix> {
    p.validate()?;
    if p.a != 0.0 {
        return Err(Error::InvalidParams(format!("analytic extension needs a = 0, got {}", p.a)));
    }
    let n = p.normalization();
    let terms = (1..=p.d)
        .map(|k| {
            let (u, v) = product_vector_factors(p, k)?;
            Ok((n * p.lambda(k), u, v))
        })
        .collect::<Result<Vec<_>>>()?;
    product_extension(&terms, level)
}
