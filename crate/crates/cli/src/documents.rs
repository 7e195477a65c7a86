//! JSON document types exchanged on stdin/stdout and in point-set files.
//!
//! Complex numbers serialize as two-element [re, im] arrays; reals use
//! serde_json's shortest round-trip decimals. Residual maps are ordered
//! so identical inputs always produce byte-identical documents.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use hardyball::geometry::BallPoint;
use hardyball::linalg::TolerancePolicy;
use hardyball::selftest::SelfTestReport;

use crate::CliError;

pub type ComplexPair = [f64; 2];

pub fn pair(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

pub fn unpair(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// A point set in ℂ^d: each point is an array of d [re, im] pairs.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PointSetDocument {
    pub d: usize,
    pub points: Vec<Vec<ComplexPair>>,
}

impl PointSetDocument {
    pub fn from_points(points: &[BallPoint]) -> Self {
        let d = points.first().map(|p| p.dim()).unwrap_or(0);
        Self {
            d,
            points: points
                .iter()
                .map(|p| p.coords().iter().map(|&z| pair(z)).collect())
                .collect(),
        }
    }

    pub fn to_points(&self) -> Result<Vec<BallPoint>, CliError> {
        let mut out = Vec::with_capacity(self.points.len());
        for (index, coords) in self.points.iter().enumerate() {
            if coords.len() != self.d {
                return Err(CliError(format!(
                    "point {index} has {} coordinates, document declares d = {}",
                    coords.len(),
                    self.d
                )));
            }
            let values: Vec<Complex64> = coords.iter().map(|&p| unpair(p)).collect();
            let point = BallPoint::from_slice(&values)
                .map_err(|e| CliError(format!("point {index}: {e}")))?;
            out.push(point);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ToleranceDocument {
    pub tol_rank: f64,
    pub tol_eq: f64,
    pub tol_herm: f64,
}

impl From<&TolerancePolicy> for ToleranceDocument {
    fn from(tol: &TolerancePolicy) -> Self {
        Self {
            tol_rank: tol.tol_rank,
            tol_eq: tol.tol_eq,
            tol_herm: tol.tol_herm,
        }
    }
}

/// Witness payloads: a factor vector, an automorphism, or a diagonal map.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDocument {
    Factors {
        assignment: Vec<usize>,
        factors: Vec<ComplexPair>,
    },
    Automorphism {
        assignment: Vec<usize>,
        unitary: Vec<Vec<ComplexPair>>,
        base: Vec<ComplexPair>,
    },
    Diagonal {
        alphas: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerdictDocument {
    pub command: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: ToleranceDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerdictDocument {
    pub fn new(command: &str, verdict: &str, tol: &TolerancePolicy) -> Self {
        Self {
            command: command.to_string(),
            verdict: verdict.to_string(),
            witness: None,
            residuals: BTreeMap::new(),
            tolerances: tol.into(),
            horizon: None,
            certified: None,
            detail: None,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GramDocument {
    pub command: String,
    pub d: usize,
    pub t: f64,
    pub matrix: Vec<Vec<ComplexPair>>,
    pub tolerances: ToleranceDocument,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CounterexampleDocument {
    pub command: String,
    pub t: f64,
    pub d: usize,
    pub z: ComplexPair,
    pub w: ComplexPair,
    pub radius: f64,
    pub out_a: String,
    pub out_b: String,
    pub isometry_verdict: String,
    pub congruence_verdict: String,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SuiteDocument {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SelfTestDocument {
    pub command: String,
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteDocument>,
    pub passed: bool,
}

impl SelfTestDocument {
    pub fn from_report(report: &SelfTestReport) -> Self {
        Self {
            command: "selftest".to_string(),
            seed: report.seed,
            cases: report.cases,
            suites: report
                .suites
                .iter()
                .map(|s| SuiteDocument {
                    name: s.name.to_string(),
                    cases: s.cases,
                    max_residual: s.max_residual,
                    threshold: s.threshold,
                    passed: s.passed,
                })
                .collect(),
            passed: report.all_passed(),
        }
    }
}
