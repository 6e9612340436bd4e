use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basis::{complexify, hermitian_coordinates, hermitian_from_coordinates};
use super::{ExtensionResult, ExtensionStatus};
use crate::error::{Error, Result};
use crate::linalg::random::random_unit_vector;
use crate::linalg::{kron_vec, min_eigenvalue, CMatrix};
use crate::states::BipartiteState;

/// Most negative value accepted on a sampled product state.
pub const SAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 20_240_601,
        }
    }
}

/// A Hermitian `W` on `A ⊗ B` with `tr(Wρ) < 0` and nonnegative value on
/// every state admitting the extension tested by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub matrix: CMatrix,
    /// `tr(Wρ)`.
    pub value_on_state: f64,
    /// Identity shift absorbing dual infeasibility, before normalization.
    pub shift: f64,
    /// `|E^T w - φ|` of the least-squares pull-back.
    pub pullback_residual: f64,
    pub samples: usize,
    pub seed: u64,
    /// Smallest `⟨xy|W|xy⟩` over the sampled product states.
    pub min_sampled: f64,
}

pub fn extract_witness(result: &ExtensionResult, rho: &BipartiteState) -> Result<Witness> {
    extract_witness_with(result, rho, &WitnessOptions::default())
}

/// Builds `W` from the dual blocks `Z_b`: the functional
/// `σ ↦ Σ_b Re tr(block_b(σ) Z_b)` is pulled back through the matching
/// constraints, shifted by the worst-case infeasibility, normalized to unit
/// trace, then checked on `ρ` and on random product states.
pub fn extract_witness_with(
    result: &ExtensionResult,
    rho: &BipartiteState,
    opts: &WitnessOptions,
) -> Result<Witness> {
    if result.status != ExtensionStatus::NoExtension {
        return Err(Error::NumericalFailure(format!(
            "no dual certificate for status {:?}",
            result.status
        )));
    }
    let maps = result.maps();
    if rho.dims() != maps.dims() {
        return Err(Error::DimensionMismatch("state does not match the extension problem".into()));
    }
    let n = maps.extension_dim();
    let mut functional = CMatrix::zeros(n, n);
    let mut cone_defect = 0.0;
    for (b, z) in result.solution.z.iter().enumerate() {
        let zc = complexify(z);
        cone_defect += (-min_eigenvalue(&zc)?).max(0.0);
        functional = &functional + &maps.block_adjoint(b, &zc);
    }
    let (w, pullback_residual) = maps.pull_back(&hermitian_coordinates(&functional.hermitian_part()));
    let (d_a, d_b) = rho.dims();
    let shift = cone_defect + pullback_residual;
    let mut matrix = &hermitian_from_coordinates(&w, d_a * d_b) + &CMatrix::identity(d_a * d_b).scale(shift);
    let tr = matrix.trace().re;
    if tr.abs() > f64::MIN_POSITIVE {
        matrix = matrix.scale(1.0 / tr.abs());
    }

    let value_on_state = matrix.trace_of_product(rho.matrix()).re;
    if !(value_on_state < 0.0) {
        return Err(Error::NumericalFailure(format!(
            "witness value {value_on_state:e} on the state is not negative"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut min_sampled = f64::INFINITY;
    for _ in 0..opts.samples {
        let x = random_unit_vector(&mut rng, d_a);
        let y = random_unit_vector(&mut rng, d_b);
        let v = kron_vec(&x, &y);
        min_sampled = min_sampled.min(matrix.expectation(&v, &v).re);
    }
    if min_sampled < -SAMPLE_TOL {
        return Err(Error::NumericalFailure(format!(
            "witness takes value {min_sampled:e} on a product state"
        )));
    }
    Ok(Witness {
        matrix,
        value_on_state,
        shift,
        pullback_residual,
        samples: opts.samples,
        seed: opts.seed,
        min_sampled,
    })
}
