//! Parameter scans over `λ` for a fixed `(d, a)`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{ppt_check, realignment_check, DEFAULT_TOL};
use crate::dps::{run_dps_with, ExtensionMaps, ExtensionSpec, ExtensionStatus};
use crate::error::{Error, Result};
use crate::sdp::SolverOptions;
use crate::states::{make_state, FamilyParams};

/// Environment variable capping the number of scan workers.
pub const WORKERS_ENV: &str = "BOUND_ENT_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Ppt,
    Realign,
    Dps,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ppt" => Ok(Self::Ppt),
            "realign" | "realignment" => Ok(Self::Realign),
            "dps" => Ok(Self::Dps),
            other => Err(Error::InvalidParams(format!("unknown criterion {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Points {
    /// Inclusive grid with `n` values per `λ` axis.
    Grid(usize),
    Explicit(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub d: usize,
    pub a: f64,
    pub criterion: Criterion,
    pub points: Points,
    pub dps: ExtensionSpec,
    /// Retry at level `k + 1` when level `k` finds an extension.
    pub escalate: bool,
}

impl ScanSpec {
    pub fn grid(d: usize, a: f64, criterion: Criterion, n: usize) -> Self {
        Self {
            d,
            a,
            criterion,
            points: Points::Grid(n),
            dps: ExtensionSpec::default(),
            escalate: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::InvalidParams(format!("d = {} < 3", self.d)));
        }
        if !(0.0..=1.0).contains(&self.a) {
            return Err(Error::InvalidParams(format!("a = {} outside [0, 1]", self.a)));
        }
        match &self.points {
            Points::Grid(n) if *n < 2 => {
                return Err(Error::InvalidParams(format!("grid resolution {n} < 2")));
            }
            Points::Grid(_) => {}
            Points::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidParams("empty point list".into()));
                }
                for l in list {
                    FamilyParams::new(self.d, self.a, l.clone())?;
                }
            }
        }
        if self.criterion == Criterion::Dps {
            self.dps.validate()?;
        }
        Ok(())
    }

    /// Every `λ` vector in row order.
    pub fn lambda_points(&self) -> Vec<Vec<f64>> {
        match &self.points {
            Points::Grid(n) => grid_points(self.d - 1, *n),
            Points::Explicit(list) => list.clone(),
        }
    }
}

/// `n` equally spaced values from 0 to 1 inclusive, endpoints exact.
pub fn linspace(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// All `n^dims` grid points, last coordinate varying fastest.
pub fn grid_points(dims: usize, n: usize) -> Vec<Vec<f64>> {
    let axis = linspace(n);
    let total = n.pow(dims as u32);
    (0..total)
        .map(|mut flat| {
            let mut p = vec![0.0; dims];
            for slot in (0..dims).rev() {
                p[slot] = axis[flat % n];
                flat /= n;
            }
            p
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambdas: Vec<f64>,
    pub evidence: f64,
    pub detected: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub d: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn header(&self) -> String {
        let mut cols: Vec<String> = (1..self.d).map(|i| format!("lambda{i}")).collect();
        cols.extend(["evidence", "detected", "status"].map(String::from));
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for r in &self.rows {
            for l in &r.lambdas {
                let _ = write!(out, "{l},");
            }
            let _ = writeln!(out, "{},{},{}", r.evidence, r.detected, r.status);
        }
        out
    }

    pub fn detected_count(&self) -> usize {
        self.rows.iter().filter(|r| r.detected).count()
    }
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

struct DpsContext {
    spec: ExtensionSpec,
    base: Arc<ExtensionMaps>,
    escalated: OnceLock<std::result::Result<Arc<ExtensionMaps>, String>>,
    opts: SolverOptions,
}

fn status_name(s: ExtensionStatus) -> &'static str {
    match s {
        ExtensionStatus::ExtensionFound => "extension_found",
        ExtensionStatus::NoExtension => "no_extension",
        ExtensionStatus::NumericalFailure => "numerical_failure",
    }
}

impl DpsContext {
    fn new(spec: &ScanSpec) -> Result<Self> {
        Ok(Self {
            spec: spec.dps.clone(),
            base: Arc::new(ExtensionMaps::new(spec.d, spec.d, &spec.dps)?),
            escalated: OnceLock::new(),
            opts: SolverOptions::default(),
        })
    }

    fn escalated_maps(&self, d: usize) -> std::result::Result<Arc<ExtensionMaps>, String> {
        self.escalated
            .get_or_init(|| {
                let mut next = self.spec.clone();
                next.level += 1;
                if next.with_ppt {
                    next.cuts.push(next.level);
                }
                ExtensionMaps::new(d, d, &next).map(Arc::new).map_err(|e| e.to_string())
            })
            .clone()
    }

    fn evaluate(&self, p: &FamilyParams, escalate: bool) -> Result<ScanRow> {
        let rho = make_state(p)?;
        let r = run_dps_with(&self.base, &rho, &self.opts)?;
        let mut status = format!("k{}:{}", self.spec.level, status_name(r.status));
        let mut result = r;
        if escalate && result.status == ExtensionStatus::ExtensionFound && self.spec.level < crate::dps::MAX_LEVEL {
            let maps = self.escalated_maps(p.d).map_err(Error::NumericalFailure)?;
            result = run_dps_with(&maps, &rho, &self.opts)?;
            let _ = write!(status, ">k{}:{}", maps.spec().level, status_name(result.status));
        }
        Ok(ScanRow {
            lambdas: p.lambdas.clone(),
            evidence: result.objective,
            detected: result.status == ExtensionStatus::NoExtension,
            status,
        })
    }
}

fn evaluate_point(spec: &ScanSpec, dps: Option<&DpsContext>, lambdas: &[f64]) -> ScanRow {
    let run = || -> Result<ScanRow> {
        let p = FamilyParams::new(spec.d, spec.a, lambdas.to_vec())?;
        match spec.criterion {
            Criterion::Ppt | Criterion::Realign => {
                let rho = make_state(&p)?;
                let v = if spec.criterion == Criterion::Ppt {
                    ppt_check(&rho, DEFAULT_TOL)?
                } else {
                    realignment_check(&rho, DEFAULT_TOL)?
                };
                Ok(ScanRow {
                    lambdas: lambdas.to_vec(),
                    evidence: v.evidence,
                    detected: v.is_entangled(),
                    status: "ok".into(),
                })
            }
            Criterion::Dps => dps.expect("context built for dps").evaluate(&p, spec.escalate),
        }
    };
    run().unwrap_or_else(|e| ScanRow {
        lambdas: lambdas.to_vec(),
        evidence: f64::NAN,
        detected: false,
        status: format!("error:{}", e.to_string().replace([',', '\n'], ";")),
    })
}

/// Evaluates every point, in parallel when `workers` allows, and assembles
/// rows in point order. Per-point failures become rows with an `error:`
/// status; the scan itself fails only on an invalid spec.
pub fn run_scan_with_workers(spec: &ScanSpec, workers: Option<usize>) -> Result<ScanTable> {
    spec.validate()?;
    let points = spec.lambda_points();
    let dps = match spec.criterion {
        Criterion::Dps => Some(DpsContext::new(spec)?),
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|l| evaluate_point(spec, dps.as_ref(), l))
            .collect()
    });
    Ok(ScanTable { d: spec.d, rows })
}

pub fn run_scan(spec: &ScanSpec) -> Result<ScanTable> {
    run_scan_with_workers(spec, workers_from_env())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        assert_eq!(linspace(3), vec![0.0, 0.5, 1.0]);
        let g = grid_points(2, 3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[1], vec![0.0, 0.5]);
        assert_eq!(g[3], vec![0.5, 0.0]);
        assert_eq!(grid_points(3, 2).len(), 8);
        assert_eq!(linspace(51)[50], 1.0);
    }

    #[test]
    fn csv_shape() {
        let spec = ScanSpec::grid(3, 0.8, Criterion::Ppt, 3);
        let t = run_scan_with_workers(&spec, Some(2)).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("lambda1,lambda2,evidence,detected,status"));
        assert_eq!(lines.count(), 9);
        assert_eq!(t.detected_count(), 0);
    }

    #[test]
    fn invalid_specs() {
        assert!(ScanSpec::grid(3, 1.2, Criterion::Ppt, 3).validate().is_err());
        assert!(ScanSpec::grid(3, 0.5, Criterion::Ppt, 1).validate().is_err());
        let mut s = ScanSpec::grid(4, 0.5, Criterion::Realign, 2);
        s.points = Points::Explicit(vec![vec![0.1, 0.2]]);
        assert!(s.validate().is_err());
        assert!("bogus".parse::<Criterion>().is_err());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let spec = ScanSpec::grid(3, 0.8, Criterion::Realign, 5);
        let one = run_scan_with_workers(&spec, Some(1)).unwrap();
        let four = run_scan_with_workers(&spec, Some(4)).unwrap();
        assert_eq!(one.to_csv(), four.to_csv());
    }
}
