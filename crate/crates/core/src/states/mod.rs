//! A multi-parameter family of PPT states and the objects built from it.

pub mod blocks;
pub mod family;
mod params;
pub mod symmetry;

pub use blocks::{block_form, one_dim_pairs, two_dim_pairs, two_dim_pairs_by_bounds, BlockForm};
pub use family::{
    ent_sep_split, make_state, product_vector, product_vector_factors, shift, shifted_block,
    x_lambda, EntSepSplit,
};
pub use params::FamilyParams;
pub use symmetry::{pt_symmetry_unitary, symmetry_unitary};

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, partial_transpose, CMatrix, Subsystem, HERMITIAN_TOL};

/// Tolerance on `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-10;

/// A density matrix on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    matrix: CMatrix,
    d_a: usize,
    d_b: usize,
}

impl BipartiteState {
    /// Validates dimensions, Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        let n = d_a * d_b;
        if matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims ({d_a}, {d_b})",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidParams(format!("trace {tr} is not 1")));
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -PSD_TOL {
            return Err(Error::InvalidParams(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { matrix, d_a, d_b })
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, d_a: usize, d_b: usize) -> Self {
        debug_assert_eq!(matrix.shape(), (d_a * d_b, d_a * d_b));
        Self { matrix, d_a, d_b }
    }

    /// Maximally mixed state `I / (d_A d_B)`.
    pub fn maximally_mixed(d_a: usize, d_b: usize) -> Self {
        let n = d_a * d_b;
        Self::from_parts_unchecked(CMatrix::identity(n).scale(1.0 / n as f64), d_a, d_b)
    }

    /// `|ψ><ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[crate::linalg::C64], d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(CMatrix::projector(psi), d_a, d_b)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn partial_transpose(&self, which: Subsystem) -> CMatrix {
        partial_transpose(&self.matrix, self.d_a, self.d_b, which)
            .expect("state dimensions are consistent")
    }

    /// `U ρ U^H`, still a state for unitary `U`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch("unitary does not match state".into()));
        }
        Ok(Self::from_parts_unchecked(
            u.sandwich(&self.matrix).hermitian_part(),
            self.d_a,
            self.d_b,
        ))
    }
}
