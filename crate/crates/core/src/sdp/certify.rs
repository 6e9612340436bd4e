use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::problem::LmiProblem;
use crate::error::{Error, Result};

/// Residuals of a primal-dual pair, all nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max(0, -λ_min F(x))` over all blocks.
    pub primal: f64,
    /// `|(⟨F_i, Z⟩ + c_i)_i|_2`.
    pub dual: f64,
    /// `max(0, -λ_min Z)` over all blocks.
    pub dual_cone: f64,
    /// `|⟨F_0, Z⟩ - c·x|`.
    pub gap: f64,
}

/// Independent re-evaluation of a candidate `(x, Z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub min_eig_primal: Vec<f64>,
    pub min_eig_dual: Vec<f64>,
}

pub(crate) fn min_sym_eig(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Recomputes objectives, residuals and per-block minimum eigenvalues of
/// `F(x)` and `Z` from scratch.
pub fn certify(problem: &LmiProblem, x: &[f64], z: &[DMatrix<f64>]) -> Result<Certificate> {
    if x.len() != problem.n_vars() {
        return Err(Error::DimensionMismatch(format!(
            "x has length {}, problem has {} variables",
            x.len(),
            problem.n_vars()
        )));
    }
    if z.len() != problem.blocks.len()
        || z.iter().zip(&problem.blocks).any(|(zb, b)| zb.shape() != (b.size(), b.size()))
    {
        return Err(Error::DimensionMismatch("dual blocks do not match the problem".into()));
    }
    let primal_objective: f64 = problem.objective.iter().zip(x).map(|(c, x)| c * x).sum();
    let dual_objective: f64 = problem.blocks.iter().zip(z).map(|(b, zb)| dot(&b.f0, zb)).sum();

    let min_eig_primal: Vec<f64> = problem.blocks.iter().map(|b| min_sym_eig(&b.evaluate(x))).collect();
    let min_eig_dual: Vec<f64> = z
        .iter()
        .map(|zb| min_sym_eig(&((zb + zb.transpose()) * 0.5)))
        .collect();

    let dual = problem
        .objective
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r: f64 = problem.blocks.iter().zip(z).map(|(b, zb)| dot(&b.fi[i], zb)).sum::<f64>() + c;
            r * r
        })
        .sum::<f64>()
        .sqrt();

    let neg = |v: &[f64]| v.iter().fold(0.0f64, |m, &e| m.max(-e));
    Ok(Certificate {
        primal_objective,
        dual_objective,
        residuals: Residuals {
            primal: neg(&min_eig_primal),
            dual,
            dual_cone: neg(&min_eig_dual),
            gap: (dual_objective - primal_objective).abs(),
        },
        min_eig_primal,
        min_eig_dual,
    })
}
