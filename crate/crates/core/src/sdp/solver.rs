use nalgebra::{Cholesky, DMatrix, DMatrixView, DVector, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::certify::{certify, dot, Residuals};
use super::problem::LmiProblem;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Relative duality gap `|dual - primal| / (1 + |primal|)`.
    pub gap_tol: f64,
    /// Absolute primal and dual feasibility.
    pub feas_tol: f64,
    /// Largest accepted negative eigenvalue of the dual blocks.
    pub cone_tol: f64,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
    /// Relative Tikhonov shift used once when the Schur complement is not
    /// numerically positive definite.
    pub regularization: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            cone_tol: 1e-9,
            step_fraction: 0.98,
            regularization: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    LinearAlgebraFailure,
}

/// State of the iteration at the start of one interior-point step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Largest Frobenius norm of `F(x) - S` over blocks.
    pub primal_infeasibility: f64,
    /// `|-c - A*(Z)|_2`.
    pub dual_infeasibility: f64,
    /// `Σ_b ⟨S_b, Z_b⟩`.
    pub complementarity: f64,
    /// `Σ_b ⟨F(x)_b - S_b, Z_b⟩ + x·(-c - A*(Z))`, so that
    /// `dual - primal = complementarity + infeasibility_term` exactly.
    pub infeasibility_term: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: Vec<f64>,
    #[serde(with = "crate::io::real_matrices")]
    pub z: Vec<DMatrix<f64>>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
}

/// Per-block data fixed for the whole solve.
struct Block {
    size: usize,
    f0: DMatrix<f64>,
    /// Column `i` holds `vec(F_i)`.
    stack: DMatrix<f64>,
    stack_t: DMatrix<f64>,
}

impl Block {
    fn apply(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let v = &self.stack * x;
        DMatrix::from_column_slice(self.size, self.size, v.as_slice())
    }

    fn adjoint(&self, m: &DMatrix<f64>) -> DVector<f64> {
        &self.stack_t * DVector::from_column_slice(m.as_slice())
    }
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(m.clone()).map(|c| sym(c.inverse()))
}

/// Largest `α` with `X + α ΔX ⪰ 0`, infinite when `ΔX ⪰ 0`.
fn max_step(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let l = Cholesky::new(x.clone())?.l();
    let y = l.solve_lower_triangular(dx)?;
    let w = l.solve_lower_triangular(&y.transpose())?;
    let min = SymmetricEigen::new(sym(w))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Some(if min >= 0.0 { f64::INFINITY } else { -1.0 / min })
}

struct Direction {
    dx: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
    dz: Vec<DMatrix<f64>>,
}

struct Iterate<'a> {
    blocks: &'a [Block],
    s_inv: Vec<DMatrix<f64>>,
    z: &'a [DMatrix<f64>],
    rp: &'a [DMatrix<f64>],
    rd: &'a DVector<f64>,
    schur: Cholesky<f64, Dyn>,
}

impl Iterate<'_> {
    /// HKM direction with target `σμ` and an optional second-order term
    /// `ΔS_a ΔZ_a` from the predictor.
    fn direction(&self, sigma_mu: f64, corr: Option<&Direction>) -> Direction {
        let nb = self.blocks.len();
        let mut base = Vec::with_capacity(nb);
        let mut rhs = -self.rd.clone();
        for b in 0..nb {
            let si = &self.s_inv[b];
            let z = &self.z[b];
            let mut t = si * sigma_mu - z;
            if let Some(c) = corr {
                t -= si * (&c.ds[b] * &c.dz[b]);
            }
            let r = &t - si * &self.rp[b] * z;
            rhs += self.blocks[b].adjoint(&r);
            base.push(t);
        }
        let dx = self.schur.solve(&rhs);
        let mut ds = Vec::with_capacity(nb);
        let mut dz = Vec::with_capacity(nb);
        for (b, t) in base.into_iter().enumerate() {
            let s = &self.rp[b] + self.blocks[b].apply(&dx);
            dz.push(sym(t - &self.s_inv[b] * &s * &self.z[b]));
            ds.push(s);
        }
        Direction { dx, ds, dz }
    }
}

fn step_lengths(s: &[DMatrix<f64>], z: &[DMatrix<f64>], dir: &Direction, frac: f64) -> Option<(f64, f64)> {
    let mut ap = f64::INFINITY;
    let mut ad = f64::INFINITY;
    for b in 0..s.len() {
        ap = ap.min(max_step(&s[b], &dir.ds[b])?);
        ad = ad.min(max_step(&z[b], &dir.dz[b])?);
    }
    Some(((frac * ap).min(1.0), (frac * ad).min(1.0)))
}

fn finish(
    problem: &LmiProblem,
    status: SdpStatus,
    x: &DVector<f64>,
    z: Vec<DMatrix<f64>>,
    iterations: usize,
    history: Vec<IterationRecord>,
) -> Result<SdpSolution> {
    let x: Vec<f64> = x.iter().copied().collect();
    let cert = certify(problem, &x, &z)?;
    Ok(SdpSolution {
        status,
        x,
        z,
        primal_objective: cert.primal_objective,
        dual_objective: cert.dual_objective,
        residuals: cert.residuals,
        iterations,
        history,
    })
}

fn converged(r: &Residuals, primal_objective: f64, opts: &SolverOptions) -> bool {
    r.primal <= opts.feas_tol
        && r.dual <= opts.feas_tol
        && r.dual_cone <= opts.cone_tol
        && r.gap <= opts.gap_tol * (1.0 + primal_objective.abs())
}

/// Infeasible-start primal-dual interior point method (HKM direction with
/// Mehrotra predictor-corrector) for
///
/// ```text
/// maximize c·x  s.t.  F_0 + Σ x_i F_i ⪰ 0,
/// minimize ⟨F_0, Z⟩  s.t.  ⟨F_i, Z⟩ = -c_i,  Z ⪰ 0.
/// ```
///
/// Starts from `x = 0`, `S = Z = (1 + max_b |F_0^(b)|_F) I`. Deterministic:
/// identical input gives bit-identical output.
pub fn solve(problem: &LmiProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let n = problem.n_vars();
    let c = DVector::from_column_slice(&problem.objective);
    let blocks: Vec<Block> = problem
        .blocks
        .iter()
        .map(|b| {
            let s = b.size();
            let mut stack = DMatrix::zeros(s * s, n);
            for (i, f) in b.fi.iter().enumerate() {
                stack.column_mut(i).copy_from_slice(f.as_slice());
            }
            Block {
                size: s,
                f0: b.f0.clone(),
                stack_t: stack.transpose(),
                stack,
            }
        })
        .collect();
    let total: usize = blocks.iter().map(|b| b.size).sum();
    let start = 1.0 + blocks.iter().map(|b| b.f0.norm()).fold(0.0, f64::max);

    let mut x = DVector::zeros(n);
    let mut s: Vec<DMatrix<f64>> = blocks.iter().map(|b| DMatrix::identity(b.size, b.size) * start).collect();
    let mut z = s.clone();
    let mut history = Vec::new();
    let mut best: Option<(f64, DVector<f64>, Vec<DMatrix<f64>>)> = None;

    for iter in 0..=opts.max_iter {
        let rp: Vec<DMatrix<f64>> = blocks
            .iter()
            .zip(&s)
            .map(|(b, sb)| &b.f0 + b.apply(&x) - sb)
            .collect();
        let mut rd = -c.clone();
        for (b, zb) in blocks.iter().zip(&z) {
            rd -= b.adjoint(zb);
        }
        let pobj = c.dot(&x);
        let dobj: f64 = blocks.iter().zip(&z).map(|(b, zb)| dot(&b.f0, zb)).sum();
        let comp: f64 = s.iter().zip(&z).map(|(a, b)| dot(a, b)).sum();
        let mu = comp / total as f64;
        let pinf = rp.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let dinf = rd.norm();
        if !(mu.is_finite() && pinf.is_finite() && dinf.is_finite()) {
            let (_, bx, bz) = best.unwrap_or((f64::INFINITY, x, z));
            return finish(problem, SdpStatus::LinearAlgebraFailure, &bx, bz, iter, history);
        }
        let infeas_term = rp.iter().zip(&z).map(|(a, b)| dot(a, b)).sum::<f64>() + x.dot(&rd);
        history.push(IterationRecord {
            iteration: iter,
            primal_objective: pobj,
            dual_objective: dobj,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            complementarity: comp,
            infeasibility_term: infeas_term,
            step_primal: 0.0,
            step_dual: 0.0,
        });

        let rel_gap = (dobj - pobj).abs() / (1.0 + pobj.abs());
        let merit = pinf.max(dinf).max(rel_gap);
        if best.as_ref().is_none_or(|(m, _, _)| merit < *m) {
            best = Some((merit, x.clone(), z.clone()));
        }
        if pinf <= opts.feas_tol && dinf <= opts.feas_tol && rel_gap <= opts.gap_tol {
            let xv: Vec<f64> = x.iter().copied().collect();
            let cert = certify(problem, &xv, &z)?;
            if converged(&cert.residuals, pobj, opts) {
                return finish(problem, SdpStatus::Optimal, &x, z, iter, history);
            }
        }
        if iter == opts.max_iter {
            break;
        }

        let Some(s_inv) = s.iter().map(spd_inverse).collect::<Option<Vec<_>>>() else {
            let (_, bx, bz) = best.expect("recorded above");
            return finish(problem, SdpStatus::LinearAlgebraFailure, &bx, bz, iter, history);
        };
        let mut m = DMatrix::zeros(n, n);
        for (b, blk) in blocks.iter().enumerate() {
            let sz = blk.size;
            let mut g = DMatrix::zeros(sz * sz, n);
            for j in 0..n {
                let col = blk.stack.column(j);
                let f = DMatrixView::from_slice(col.as_slice(), sz, sz);
                let prod = &s_inv[b] * f * &z[b];
                g.column_mut(j).copy_from_slice(prod.as_slice());
            }
            m += &blk.stack_t * &g;
        }
        let m = sym(m);
        let schur = match Cholesky::new(m.clone()) {
            Some(ch) => ch,
            None => {
                let shift = opts.regularization * m.diagonal().amax().max(1.0);
                let reg = &m + DMatrix::identity(n, n) * shift;
                match Cholesky::new(reg) {
                    Some(ch) => ch,
                    None => {
                        let (_, bx, bz) = best.expect("recorded above");
                        return finish(problem, SdpStatus::LinearAlgebraFailure, &bx, bz, iter, history);
                    }
                }
            }
        };
        let it = Iterate {
            blocks: &blocks,
            s_inv,
            z: &z,
            rp: &rp,
            rd: &rd,
            schur,
        };

        let affine = it.direction(0.0, None);
        let Some((ap, ad)) = step_lengths(&s, &z, &affine, 1.0) else {
            let (_, bx, bz) = best.expect("recorded above");
            return finish(problem, SdpStatus::LinearAlgebraFailure, &bx, bz, iter, history);
        };
        let mu_aff: f64 = s
            .iter()
            .zip(&z)
            .enumerate()
            .map(|(b, (sb, zb))| dot(&(sb + &affine.ds[b] * ap), &(zb + &affine.dz[b] * ad)))
            .sum::<f64>()
            / total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let dir = it.direction(sigma * mu, Some(&affine));
        let Some((ap, ad)) = step_lengths(&s, &z, &dir, opts.step_fraction) else {
            let (_, bx, bz) = best.expect("recorded above");
            return finish(problem, SdpStatus::LinearAlgebraFailure, &bx, bz, iter, history);
        };
        if let Some(rec) = history.last_mut() {
            rec.step_primal = ap;
            rec.step_dual = ad;
        }
        x += &dir.dx * ap;
        for b in 0..blocks.len() {
            s[b] = sym(&s[b] + &dir.ds[b] * ap);
            z[b] = sym(&z[b] + &dir.dz[b] * ad);
        }
    }
    let (_, bx, bz) = best.expect("at least one iteration recorded");
    finish(problem, SdpStatus::MaxIterations, &bx, bz, opts.max_iter, history)
}
