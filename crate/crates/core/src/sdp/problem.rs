use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::MatrixJson;

/// Symmetry tolerance on every `F` matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// One LMI block `F_0 + Σ_i x_i F_i ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmiBlock {
    pub f0: DMatrix<f64>,
    pub fi: Vec<DMatrix<f64>>,
}

impl LmiBlock {
    pub fn size(&self) -> usize {
        self.f0.nrows()
    }

    /// `F_0 + Σ x_i F_i`.
    pub fn evaluate(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = self.f0.clone();
        for (f, &xi) in self.fi.iter().zip(x) {
            if xi != 0.0 {
                m += f * xi;
            }
        }
        m
    }
}

/// maximize `c·x` subject to `F_0^(b) + Σ_i x_i F_i^(b) ⪰ 0` for every block `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "LmiProblemJson", try_from = "LmiProblemJson")]
pub struct LmiProblem {
    pub blocks: Vec<LmiBlock>,
    pub objective: Vec<f64>,
}

impl LmiProblem {
    pub fn new(blocks: Vec<LmiBlock>, objective: Vec<f64>) -> Result<Self> {
        let p = Self { blocks, objective };
        p.validate()?;
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(LmiBlock::size).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::DimensionMismatch("LMI problem without blocks".into()));
        }
        let n = self.n_vars();
        for (b, blk) in self.blocks.iter().enumerate() {
            let s = blk.size();
            if s == 0 {
                return Err(Error::DimensionMismatch(format!("block {b} has size 0")));
            }
            if blk.fi.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block {b} has {} coefficient matrices, objective has {n}",
                    blk.fi.len()
                )));
            }
            for (i, f) in std::iter::once(&blk.f0).chain(&blk.fi).enumerate() {
                if f.shape() != (s, s) {
                    return Err(Error::DimensionMismatch(format!(
                        "block {b} matrix {i} is {:?}, expected {s}x{s}",
                        f.shape()
                    )));
                }
                let defect = (f - f.transpose()).amax();
                if defect > SYMMETRY_TOL {
                    return Err(Error::NotHermitian { defect });
                }
            }
        }
        Ok(())
    }

    /// Every matrix and the objective multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| LmiBlock {
                    f0: &b.f0 * s,
                    fi: b.fi.iter().map(|f| f * s).collect(),
                })
                .collect(),
            objective: self.objective.iter().map(|c| c * s).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LmiBlockJson {
    size: usize,
    #[serde(rename = "F0")]
    f0: MatrixJson,
    #[serde(rename = "Fi")]
    fi: Vec<MatrixJson>,
}

#[derive(Serialize, Deserialize)]
struct LmiProblemJson {
    blocks: Vec<LmiBlockJson>,
    objective: Vec<f64>,
}

impl From<LmiProblem> for LmiProblemJson {
    fn from(p: LmiProblem) -> Self {
        Self {
            blocks: p
                .blocks
                .iter()
                .map(|b| LmiBlockJson {
                    size: b.size(),
                    f0: MatrixJson::from_real(&b.f0),
                    fi: b.fi.iter().map(MatrixJson::from_real).collect(),
                })
                .collect(),
            objective: p.objective,
        }
    }
}

impl TryFrom<LmiProblemJson> for LmiProblem {
    type Error = Error;

    fn try_from(j: LmiProblemJson) -> Result<Self> {
        let blocks = j
            .blocks
            .into_iter()
            .map(|b| {
                let f0 = b.f0.to_real()?;
                if f0.nrows() != b.size {
                    return Err(Error::DimensionMismatch(format!(
                        "declared size {} but F0 is {}x{}",
                        b.size,
                        f0.nrows(),
                        f0.ncols()
                    )));
                }
                let fi = b.fi.iter().map(MatrixJson::to_real).collect::<Result<Vec<_>>>()?;
                Ok(LmiBlock { f0, fi })
            })
            .collect::<Result<Vec<_>>>()?;
        LmiProblem::new(blocks, j.objective)
    }
}
