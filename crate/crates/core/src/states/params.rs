use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(d, a, λ_1..λ_{d-1})` of the state family. `λ_d` is not
/// stored: it is always 1, which is what the normalization assumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: usize,
    pub a: f64,
    pub lambdas: Vec<f64>,
}

impl FamilyParams {
    pub fn new(d: usize, a: f64, lambdas: Vec<f64>) -> Result<Self> {
        let p = Self { d, a, lambdas };
        p.validate()?;
        Ok(p)
    }

    /// The one-parameter subfamily (all `λ_k = 0`).
    pub fn one_parameter(d: usize, a: f64) -> Result<Self> {
        Self::new(d, a, vec![0.0; d.saturating_sub(1)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::InvalidParams(format!("d = {} (need d >= 3)", self.d)));
        }
        if !in_unit_interval(self.a) {
            return Err(Error::InvalidParams(format!("a = {} outside [0, 1]", self.a)));
        }
        if self.lambdas.len() != self.d - 1 {
            return Err(Error::InvalidParams(format!(
                "{} lambdas given, d = {} needs {}",
                self.lambdas.len(),
                self.d,
                self.d - 1
            )));
        }
        if let Some((k, l)) = self
            .lambdas
            .iter()
            .enumerate()
            .find(|(_, l)| !in_unit_interval(**l))
        {
            return Err(Error::InvalidParams(format!(
                "lambda_{} = {} outside [0, 1]",
                k + 1,
                l
            )));
        }
        Ok(())
    }

    /// `b = (1 + a)/2`.
    pub fn b(&self) -> f64 {
        (1.0 + self.a) / 2.0
    }

    /// `c = sqrt(1 - a^2)/2`.
    pub fn c(&self) -> f64 {
        (1.0 - self.a * self.a).sqrt() / 2.0
    }

    /// `λ_k` for `k` in `1..=d`, with `λ_d = 1`.
    pub fn lambda(&self, k: usize) -> f64 {
        assert!((1..=self.d).contains(&k), "lambda index {k} out of 1..={}", self.d);
        if k == self.d {
            1.0
        } else {
            self.lambdas[k - 1]
        }
    }

    /// `b(λ) = a + λ (b - a)`.
    pub fn b_of(&self, lambda: f64) -> f64 {
        self.a + lambda * (self.b() - self.a)
    }

    /// `c(λ) = λ c`.
    pub fn c_of(&self, lambda: f64) -> f64 {
        lambda * self.c()
    }

    /// `b_k = b(λ_k)`, 1-based.
    pub fn b_k(&self, k: usize) -> f64 {
        self.b_of(self.lambda(k))
    }

    /// `c_k = c(λ_k)`, 1-based.
    pub fn c_k(&self, k: usize) -> f64 {
        self.c_of(self.lambda(k))
    }

    /// `N_d^{-1} = (d^2 - 1) a + 1 + (1 - a) Σ_{k<d} λ_k`.
    pub fn inverse_normalization(&self) -> f64 {
        let d = self.d as f64;
        (d * d - 1.0) * self.a + 1.0 + (1.0 - self.a) * self.lambdas.iter().sum::<f64>()
    }

    pub fn normalization(&self) -> f64 {
        1.0 / self.inverse_normalization()
    }
}

fn in_unit_interval(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}
