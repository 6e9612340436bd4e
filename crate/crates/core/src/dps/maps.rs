use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use super::basis::{hermitian_coordinates, hermitian_from_coordinates, real_embedding};
use super::ExtensionSpec;
use crate::error::{Error, Result};
use crate::linalg::{kron, sym_dim, sym_isometry, CMatrix, TensorIndex, C64};
use crate::sdp::{LmiBlock, LmiProblem};
use crate::states::BipartiteState;

/// Relative singular-value cutoff deciding the rank of the matching constraints.
pub const NULL_SPACE_CUTOFF: f64 = 1e-10;
/// Relative residual above which `ρ` is declared inconsistent with the constraints.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Entry gather `out[i] = in[table[i]]` on the lifted space, transposing
/// the last `m` copies of `B`; compressed afterwards by
/// `K = I_A ⊗ V_{k-m} ⊗ V_m`.
#[derive(Debug, Clone)]
pub(crate) struct CutMap {
    pub m: usize,
    pub table: Vec<usize>,
    pub iso: CMatrix,
    pub iso_adj: CMatrix,
}

/// Everything about the level-`k` problem that does not depend on `ρ`:
/// the lift `I_A ⊗ V`, the cut maps, the matching constraints `E y = r`,
/// their null space, and the coefficient matrices of the real LMI.
#[derive(Debug, Clone)]
pub struct ExtensionMaps {
    spec: ExtensionSpec,
    d_a: usize,
    d_b: usize,
    dim: usize,
    lift: CMatrix,
    lift_adj: CMatrix,
    trace_table: Vec<(usize, usize)>,
    cuts: Vec<CutMap>,
    constraint: DMatrix<f64>,
    pinv: DMatrix<f64>,
    rank: usize,
    null_basis: DMatrix<f64>,
    coefficients: Vec<Vec<DMatrix<f64>>>,
}

fn gather(m: &CMatrix, table: &[usize]) -> CMatrix {
    let src = m.as_slice();
    let data = table.iter().map(|&i| src[i]).collect();
    CMatrix::from_vec(m.rows(), m.cols(), data).expect("table matches shape")
}

/// `A X A^H` evaluated as `A (A X^H)^H`, which keeps the sparse `A` on the left.
fn conjugate_by(a: &CMatrix, x: &CMatrix) -> CMatrix {
    a.matmul(&a.matmul(&x.adjoint()).adjoint())
}

fn pt_table(dims: &TensorIndex, mask: &[bool]) -> Vec<usize> {
    let n = dims.total();
    let mut table = Vec::with_capacity(n * n);
    for r in 0..n {
        let ri = dims.unflatten(r);
        for c in 0..n {
            let ci = dims.unflatten(c);
            let (mut sr, mut sc) = (ri.clone(), ci.clone());
            for (p, &flag) in mask.iter().enumerate() {
                if flag {
                    sr[p] = ci[p];
                    sc[p] = ri[p];
                }
            }
            table.push(dims.flatten(&sr) * n + dims.flatten(&sc));
        }
    }
    table
}

/// `(out, in)` pairs summing the lifted operator down to `A ⊗ B_1`.
fn trace_table(d_a: usize, d_b: usize, k: usize) -> Vec<(usize, usize)> {
    let rest = d_b.pow(k as u32 - 1);
    let n = d_a * d_b * rest;
    let nk = d_a * d_b;
    let mut out = Vec::with_capacity(nk * nk * rest);
    for r in 0..nk {
        for c in 0..nk {
            for t in 0..rest {
                out.push((r * nk + c, (r * rest + t) * n + c * rest + t));
            }
        }
    }
    out
}

fn pair_images(y: &CMatrix) -> (CMatrix, CMatrix) {
    let ya = y.adjoint();
    let s = (y + &ya).scale(std::f64::consts::FRAC_1_SQRT_2);
    let i = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let a = &ya.scale_c(i) - &y.scale_c(i);
    (s, a)
}

impl ExtensionMaps {
    pub fn new(d_a: usize, d_b: usize, spec: &ExtensionSpec) -> Result<Self> {
        spec.validate()?;
        if d_a < 1 || d_b < 2 {
            return Err(Error::DimensionMismatch(format!("dimensions ({d_a}, {d_b})")));
        }
        let k = spec.level;
        let s = sym_dim(d_b, k);
        let dim = d_a * s;
        let id_a = CMatrix::identity(d_a);
        let lift = kron(&id_a, &sym_isometry(d_b, k));
        let lift_adj = lift.adjoint();
        let mut party_dims = vec![d_a];
        party_dims.extend(std::iter::repeat_n(d_b, k));
        let lifted = TensorIndex::new(party_dims);

        let cuts = spec
            .active_cuts()
            .iter()
            .map(|&m| {
                let mask: Vec<bool> = (0..=k).map(|p| p > k - m).collect();
                let iso = kron(&kron(&id_a, &sym_isometry(d_b, k - m)), &sym_isometry(d_b, m));
                CutMap {
                    m,
                    table: pt_table(&lifted, &mask),
                    iso_adj: iso.adjoint(),
                    iso,
                }
            })
            .collect();

        let mut maps = Self {
            spec: spec.clone(),
            d_a,
            d_b,
            dim,
            lift,
            lift_adj,
            trace_table: trace_table(d_a, d_b, k),
            cuts,
            constraint: DMatrix::zeros(0, 0),
            pinv: DMatrix::zeros(0, 0),
            rank: 0,
            null_basis: DMatrix::zeros(0, 0),
            coefficients: Vec::new(),
        };
        maps.build_constraints()?;
        maps.build_coefficients();
        Ok(maps)
    }

    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    /// Dimension of `A ⊗ Sym^k(B)`.
    pub fn extension_dim(&self) -> usize {
        self.dim
    }

    /// Complex sizes of the PSD blocks: `σ`, then one per cut.
    pub fn block_sizes(&self) -> Vec<usize> {
        std::iter::once(self.dim)
            .chain(self.cuts.iter().map(|c| c.iso.cols()))
            .collect()
    }

    /// The cut sizes `m`, in block order.
    pub fn cut_levels(&self) -> Vec<usize> {
        self.cuts.iter().map(|c| c.m).collect()
    }

    pub fn equality_rows(&self) -> usize {
        self.constraint.nrows()
    }

    pub fn constraint_rank(&self) -> usize {
        self.rank
    }

    /// Variables of the reduced LMI, including `t`.
    pub fn n_vars(&self) -> usize {
        self.null_basis.ncols() + 1
    }

    pub fn constraint_matrix(&self) -> &DMatrix<f64> {
        &self.constraint
    }

    /// Lifted operator `(I_A ⊗ V) X (I_A ⊗ V)^H`.
    pub fn lift(&self, x: &CMatrix) -> CMatrix {
        conjugate_by(&self.lift, x)
    }

    /// Partial trace of a lifted operator over `B_2 .. B_k`.
    pub fn trace_lifted(&self, m: &CMatrix) -> CMatrix {
        let nk = self.d_a * self.d_b;
        let mut out = CMatrix::zeros(nk, nk);
        let (src, dst) = (m.as_slice(), out.as_mut_slice());
        for &(o, i) in &self.trace_table {
            dst[o] += src[i];
        }
        out
    }

    /// The marginal map `σ ↦ Tr_{B_2..B_k}[(I ⊗ V) σ (I ⊗ V)^H]`.
    pub fn marginal(&self, sigma: &CMatrix) -> CMatrix {
        self.trace_lifted(&self.lift(sigma))
    }

    /// Complex block `b` for an operator on `A ⊗ Sym^k(B)`.
    pub fn block_image(&self, b: usize, x: &CMatrix) -> CMatrix {
        if b == 0 {
            return x.clone();
        }
        let cut = &self.cuts[b - 1];
        let pt = gather(&self.lift(x), &cut.table);
        conjugate_by(&cut.iso_adj, &pt)
    }

    fn block_image_of_unit(&self, b: usize, j: usize, l: usize) -> CMatrix {
        if b == 0 {
            let mut e = CMatrix::zeros(self.dim, self.dim);
            e[(j, l)] = C64::new(1.0, 0.0);
            return e;
        }
        let cut = &self.cuts[b - 1];
        let outer = CMatrix::outer(&self.lift.column(j), &self.lift.column(l));
        conjugate_by(&cut.iso_adj, &gather(&outer, &cut.table))
    }

    /// Adjoint of [`Self::block_image`] for the trace pairing.
    pub fn block_adjoint(&self, b: usize, y: &CMatrix) -> CMatrix {
        if b == 0 {
            return y.clone();
        }
        let cut = &self.cuts[b - 1];
        let pt = gather(&conjugate_by(&cut.iso, y), &cut.table);
        conjugate_by(&self.lift_adj, &pt)
    }

    /// Calls `f(α, image of H_α)` over the Hermitian basis, using
    /// linearity over the matrix units.
    fn for_each_basis_image(&self, image: impl Fn(usize, usize) -> CMatrix, mut f: impl FnMut(usize, CMatrix)) {
        let n = self.dim;
        for j in 0..n {
            f(j, image(j, j).hermitian_part());
        }
        let mut slot = n;
        for j in 0..n {
            for l in j + 1..n {
                let (s, a) = pair_images(&image(j, l));
                f(slot, s);
                f(slot + 1, a);
                slot += 2;
            }
        }
    }

    fn build_constraints(&mut self) -> Result<()> {
        let n2 = self.dim * self.dim;
        let rows = (self.d_a * self.d_b).pow(2);
        let mut e = DMatrix::zeros(rows, n2);
        self.for_each_basis_image(
            |j, l| self.trace_lifted(&CMatrix::outer(&self.lift.column(j), &self.lift.column(l))),
            |alpha, img| {
                e.column_mut(alpha).copy_from_slice(&hermitian_coordinates(&img));
            },
        );
        let svd = SVD::new(e.clone(), true, true);
        let u = svd.u.as_ref().expect("requested");
        let v_t = svd.v_t.as_ref().expect("requested");
        let smax = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > NULL_SPACE_CUTOFF * smax)
            .collect();
        let mut pinv = DMatrix::zeros(n2, rows);
        let mut row_proj = DMatrix::identity(n2, n2);
        for &i in &keep {
            let v = v_t.row(i).transpose();
            pinv += &v * (u.column(i).transpose() / svd.singular_values[i]);
            row_proj -= &v * v.transpose();
        }
        let eig = SymmetricEigen::new((&row_proj + row_proj.transpose()) * 0.5);
        let cols: Vec<usize> = (0..n2).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        if cols.len() != n2 - keep.len() {
            return Err(Error::NumericalFailure(format!(
                "null space of dimension {} for rank {}",
                cols.len(),
                keep.len()
            )));
        }
        self.null_basis = eig.eigenvectors.select_columns(&cols);
        self.constraint = e;
        self.pinv = pinv;
        self.rank = keep.len();
        Ok(())
    }

    fn build_coefficients(&mut self) {
        let n2 = self.dim * self.dim;
        let nfree = self.null_basis.ncols();
        let sizes = self.block_sizes();
        let mut coefficients = Vec::with_capacity(sizes.len());
        for (b, &s) in sizes.iter().enumerate() {
            let len = 4 * s * s;
            let mut images = DMatrix::zeros(len, n2);
            self.for_each_basis_image(
                |j, l| self.block_image_of_unit(b, j, l),
                |alpha, img| {
                    images.column_mut(alpha).copy_from_slice(real_embedding(&img).as_slice());
                },
            );
            let reduced = images * &self.null_basis;
            let mut fi: Vec<DMatrix<f64>> = (0..nfree)
                .map(|j| {
                    let f = DMatrix::from_column_slice(2 * s, 2 * s, reduced.column(j).as_slice());
                    (&f + f.transpose()) * 0.5
                })
                .collect();
            fi.push(-DMatrix::identity(2 * s, 2 * s));
            coefficients.push(fi);
        }
        self.coefficients = coefficients;
    }

    /// Minimum-norm coordinates `y_p` with `E y_p = r(ρ)`.
    pub fn particular_solution(&self, rho: &BipartiteState) -> Result<Vec<f64>> {
        if rho.dims() != (self.d_a, self.d_b) {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?}, problem built for ({}, {})",
                rho.dims(),
                self.d_a,
                self.d_b
            )));
        }
        let r = DVector::from_vec(hermitian_coordinates(rho.matrix()));
        let y = &self.pinv * &r;
        let residual = (&self.constraint * &y - &r).norm();
        if residual > CONSISTENCY_TOL * r.norm().max(1.0) {
            return Err(Error::InfeasibleConstruction { residual });
        }
        Ok(y.iter().copied().collect())
    }

    /// Equality-free LMI: variables `(z, t)`, maximize `t` with every block
    /// of `σ(z) = y_p + N z` dominating `t I`.
    pub fn problem(&self, rho: &BipartiteState) -> Result<(LmiProblem, Vec<f64>)> {
        let yp = self.particular_solution(rho)?;
        let sigma_p = hermitian_from_coordinates(&yp, self.dim);
        let blocks = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(b, fi)| LmiBlock {
                f0: real_embedding(&self.block_image(b, &sigma_p)),
                fi: fi.clone(),
            })
            .collect();
        let mut objective = vec![0.0; self.n_vars()];
        objective[self.n_vars() - 1] = 1.0;
        Ok((LmiProblem::new(blocks, objective)?, yp))
    }

    /// `σ = Σ_α (y_p + N z)_α H_α` from the LMI variables `x = (z, t)`.
    pub fn reconstruct(&self, yp: &[f64], x: &[f64]) -> CMatrix {
        let z = DVector::from_column_slice(&x[..self.null_basis.ncols()]);
        let y = DVector::from_column_slice(yp) + &self.null_basis * z;
        hermitian_from_coordinates(y.as_slice(), self.dim)
    }

    /// Coordinates `w` minimizing `|E^T w - φ|`, and that residual.
    pub fn pull_back(&self, phi: &[f64]) -> (Vec<f64>, f64) {
        let phi = DVector::from_column_slice(phi);
        let w = self.pinv.tr_mul(&phi);
        let residual = (self.constraint.tr_mul(&w) - phi).norm();
        (w.iter().copied().collect(), residual)
    }
}
