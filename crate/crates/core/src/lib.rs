//! A multi-parameter family of PPT states in `C^d ⊗ C^d` and the numerical
//! machinery needed to decide their entanglement.
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, SVD, tensor
//!   reshuffles (partial trace, partial transpose, realignment) and
//!   symmetric-subspace isometries.
//! * [`states`]: the multi-parameter state family, its block structure,
//!   separable/entangled split and symmetry unitaries.
//! * [`criteria`]: PPT, realignment and block-structure checks reported as
//!   [`criteria::Verdict`]s.
//! * [`sdp`]: a dense primal-dual interior-point solver for block LMIs.
//! * [`dps`]: level-k PPT symmetric extension test with witness extraction.
//! * [`scan`] and [`io`]: parameter scans and JSON file formats used by the CLI.

pub mod criteria;
pub mod dps;
pub mod error;
pub mod io;
pub mod linalg;
pub mod scan;
pub mod sdp;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, TensorIndex, C64};
pub use states::{BipartiteState, FamilyParams};
