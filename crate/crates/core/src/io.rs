//! JSON file formats.
//!
//! Matrices: `{"rows":n,"cols":m,"re":[[..]],"im":[[..]]}`, row-major.
//! States add `"dims":[dA,dB]`. Floats are written in shortest round-trip
//! form, so `parse(serialize(x)) == x` bit for bit.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::states::BipartiteState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_complex(m: &CMatrix) -> Self {
        let re = (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.re).collect()).collect();
        let im = (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.im).collect()).collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re,
            im,
        }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
            im: vec![vec![0.0; m.ncols()]; m.nrows()],
        }
    }

    fn check_shape(&self) -> Result<()> {
        let ok = self.re.len() == self.rows
            && self.im.len() == self.rows
            && self.re.iter().chain(&self.im).all(|r| r.len() == self.cols);
        if ok && self.rows > 0 && self.cols > 0 {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "matrix JSON declares {}x{} but data disagrees",
                self.rows, self.cols
            )))
        }
    }

    pub fn to_complex(&self) -> Result<CMatrix> {
        self.check_shape()?;
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&x, &y)| C64::new(x, y)))
            .collect();
        CMatrix::from_vec(self.rows, self.cols, data)
    }

    /// Rejects any nonzero imaginary part.
    pub fn to_real(&self) -> Result<DMatrix<f64>> {
        self.check_shape()?;
        if self.im.iter().flatten().any(|&x| x != 0.0) {
            return Err(Error::DimensionMismatch("expected a real matrix".into()));
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| self.re[i][j]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub dims: [usize; 2],
}

impl StateJson {
    pub fn from_state(s: &BipartiteState) -> Self {
        Self {
            matrix: MatrixJson::from_complex(s.matrix()),
            dims: [s.d_a(), s.d_b()],
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        BipartiteState::new(self.matrix.to_complex()?, self.dims[0], self.dims[1])
    }
}

/// Witness operator with the data needed to reproduce and audit it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub dims: [usize; 2],
    pub metadata: WitnessMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessMetadata {
    pub params: crate::states::FamilyParams,
    pub level: usize,
    pub cuts: Vec<usize>,
    /// `tr(Wρ)` for the state the witness was extracted from.
    pub trace_w_rho: f64,
    pub objective: f64,
    pub shift: f64,
    pub pullback_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub min_sampled: f64,
}

pub fn state_to_json(s: &BipartiteState) -> Result<String> {
    Ok(serde_json::to_string(&StateJson::from_state(s))?)
}

pub fn state_from_json(text: &str) -> Result<BipartiteState> {
    serde_json::from_str::<StateJson>(text)?.to_state()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Serde adapter for a list of real matrices in the matrix JSON format.
pub mod real_matrices {
    use super::MatrixJson;
    use nalgebra::DMatrix;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(ms: &[DMatrix<f64>], ser: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(MatrixJson::from_real).collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        Vec::<MatrixJson>::deserialize(de)?
            .iter()
            .map(|m| m.to_real().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_matrix;
    use crate::states::{make_state, FamilyParams};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn state_roundtrip_is_bit_exact() {
        let p = FamilyParams::new(3, 0.5, vec![0.0, 0.0]).unwrap();
        let rho = make_state(&p).unwrap();
        let text = state_to_json(&rho).unwrap();
        assert!(text.contains("\"dims\":[3,3]"));
        let back = state_from_json(&text).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn rejects_malformed() {
        let bad = r#"{"rows":2,"cols":2,"re":[[1,0]],"im":[[0,0]]}"#;
        let m: MatrixJson = serde_json::from_str(bad).unwrap();
        assert!(m.to_complex().is_err());
        let complex = MatrixJson {
            rows: 1,
            cols: 1,
            re: vec![vec![1.0]],
            im: vec![vec![0.5]],
        };
        assert!(complex.to_real().is_err());
    }

    proptest! {
        #[test]
        fn matrix_roundtrip(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, scale in -1e300f64..1e300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols).scale(scale);
            let text = serde_json::to_string(&MatrixJson::from_complex(&m)).unwrap();
            let back: MatrixJson = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_complex().unwrap(), m);
        }
    }
}
