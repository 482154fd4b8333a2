//! Machine-readable output document emitted by every data subcommand.

use polychain::Matrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One bidiagonal factor with its birth/death role.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDoc {
    pub role: String,
    /// Row-major m x m entries.
    pub matrix: Vec<f64>,
}

/// Everything a subcommand reports, serialized as JSON. Arrays carry full
/// double precision; a parsed document revalidates bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDocument {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub m: usize,
    pub kind: String,
    pub shift: f64,
    pub x_max: f64,
    /// Row-major m x m transition matrix (P, or P^r for `iterate`).
    pub matrix: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_state: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub return_times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ergodic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reversal: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimDoc>,
    pub warnings: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Monte Carlo block of the `simulate` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimDoc {
    pub steps: u64,
    pub seed: u64,
    /// 1-based start state, as on the command line.
    pub start: usize,
    pub empirical_distribution: Vec<f64>,
    /// `None` for states visited at most once (no return observed).
    pub empirical_return_times: Vec<Option<f64>>,
    pub return_time_se: Vec<Option<f64>>,
    pub visit_counts: Vec<u64>,
}

impl OutputDocument {
    /// Structural revalidation of a (re)parsed document: shapes, row sums
    /// and probability normalization within the document's tolerances.
    pub fn validate(&self) -> Result<(), String> {
        let m = self.m;
        if self.matrix.len() != m * m {
            return Err(format!(
                "matrix has {} entries, expected {}",
                self.matrix.len(),
                m * m
            ));
        }
        let row_tol = self
            .tolerances
            .get("row-sum")
            .copied()
            .unwrap_or(1e-10)
            .max(1e-12);
        for i in 0..m {
            let s: f64 = self.matrix[i * m..(i + 1) * m].iter().sum();
            if (s - 1.0).abs() > row_tol {
                return Err(format!("matrix row {i} sums to {s}"));
            }
            if self.matrix[i * m..(i + 1) * m].iter().any(|&v| v < 0.0) {
                return Err(format!("matrix row {i} has a negative entry"));
            }
        }
        if let Some(pi) = &self.steady_state {
            if pi.len() != m {
                return Err("steady_state length mismatch".into());
            }
            let s: f64 = pi.iter().sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(format!("steady state sums to {s}"));
            }
        }
        if let Some(t) = &self.return_times {
            if t.len() != m {
                return Err("return_times length mismatch".into());
            }
        }
        if let Some(rev) = &self.reversal {
            if rev.len() != m * m {
                return Err("reversal shape mismatch".into());
            }
        }
        if let Some(fs) = &self.factors {
            for (k, f) in fs.iter().enumerate() {
                if f.matrix.len() != m * m {
                    return Err(format!("factor {k} shape mismatch"));
                }
            }
        }
        Ok(())
    }
}

pub fn matrix_to_vec(m: &Matrix) -> Vec<f64> {
    m.as_slice().to_vec()
}
