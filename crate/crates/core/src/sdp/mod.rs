//! Dense linear matrix inequality solver.

mod certify;
mod problem;
mod solver;

pub use certify::{certify, Certificate, Residuals};
pub use problem::{LmiBlock, LmiProblem, SYMMETRY_TOL};
pub use solver::{solve, IterationRecord, SdpSolution, SdpStatus, SolverOptions};
