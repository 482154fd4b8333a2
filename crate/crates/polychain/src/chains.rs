//! Stochastic chain construction and the derived analyses: steady state,
//! return times, period, ergodicity, iterated probabilities, time reversal
//! and the spectral-gap convergence ratio.
//!
//! A chain is the conjugation `P = (1/x_max) sigma^-1 M sigma` of the
//! truncated recurrence matrix (or its transpose for type I) by the Perron
//! eigenvector evaluated at the largest zero.

use crate::error::{Error, Result};
use crate::families::{recurrence_bands, FamilySpec, RecurrenceBands};
use crate::matrix::Matrix;
use crate::spectral::{banded_matrix, decompose, SpectralDecomposition};

const ENTRY_CLAMP: f64 = -1e-12;
const ROW_SUM_TOL: f64 = 1e-10;
const FIXED_POINT_TOL: f64 = 1e-8;
/// Entries below this threshold do not count as edges of the support graph.
const SUPPORT_EPS: f64 = 1e-14;

/// Which stochastic construction the chain uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    /// Tridiagonal birth-and-death chain from a scalar family.
    Scalar,
    /// Tetradiagonal chain conjugating T_m (two steps back, one forward).
    TypeII,
    /// Tetradiagonal chain conjugating T_m^t (one step back, two forward).
    TypeI,
}

impl ChainKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChainKind::Scalar => "scalar",
            ChainKind::TypeII => "II",
            ChainKind::TypeI => "I",
        }
    }
}

/// A finite-state stochastic chain built from a truncated recurrence matrix.
#[derive(Debug, Clone)]
pub struct StochasticChain {
    pub kind: ChainKind,
    pub m: usize,
    /// Transition matrix, rows summing to one.
    pub p: Matrix,
    /// Largest zero x_{m,m} of the m-th polynomial.
    pub x_max: f64,
    /// Conjugating diagonal: the right Perron components (scalar/type II) or
    /// the left ones (type I), normalized positive.
    pub sigma: Vec<f64>,
    pub spectral: SpectralDecomposition,
    pub bands: RecurrenceBands,
    pub family: Option<FamilySpec>,
    /// Non-fatal numerical notes (clamped entries, cross-check slack).
    pub warnings: Vec<String>,
}

/// Everything the analyses derive from one chain.
#[derive(Debug, Clone)]
pub struct ChainAnalysis {
    pub steady_state: Vec<f64>,
    pub return_times: Vec<f64>,
    pub period: usize,
    pub ergodic: bool,
    /// x_{m,m-1} / x_{m,m}; absent for single-state chains.
    pub gap_ratio: Option<f64>,
    /// Time-reversed transition matrix Q_{i,j} = pi_j P_{j,i} / pi_i.
    pub reversal: Matrix,
    pub warnings: Vec<String>,
}

/// Build the chain for a family: generate bands, locate the Perron data and
/// conjugate into a stochastic matrix.
pub fn build(spec: &FamilySpec, m: usize, kind: ChainKind) -> Result<StochasticChain> {
    let multiple = spec.is_multiple();
    match kind {
        ChainKind::Scalar if multiple => {
            return Err(Error::InvalidParams(format!(
                "{} is a multiple family; use kind II or I",
                spec.name()
            )))
        }
        ChainKind::TypeI | ChainKind::TypeII if !multiple => {
            return Err(Error::InvalidParams(format!(
                "{} is a scalar family; use kind scalar",
                spec.name()
            )))
        }
        _ => {}
    }
    if multiple && !spec.nonneg_stochastic() {
        return Err(Error::NotNonnegative {
            entry: "parameter difference outside (-1, 1)".into(),
            value: f64::NAN,
        });
    }
    let bands = recurrence_bands(spec, m)?;
    let mut chain = build_from_bands(bands, kind)?;
    chain.family = Some(spec.clone());
    Ok(chain)
}

/// Build a chain directly from recurrence bands (family-independent entry
/// point; also used for synthetic band patterns).
pub fn build_from_bands(bands: RecurrenceBands, kind: ChainKind) -> Result<StochasticChain> {
    match kind {
        ChainKind::Scalar if bands.is_multiple() => {
            return Err(Error::InvalidParams(
                "tetradiagonal bands need kind II or I".into(),
            ))
        }
        ChainKind::TypeI | ChainKind::TypeII if !bands.is_multiple() => {
            return Err(Error::InvalidParams(
                "tridiagonal bands use kind scalar".into(),
            ))
        }
        _ => {}
    }
    if let Some((entry, value)) = bands.first_negative() {
        return Err(Error::NotNonnegative { entry, value });
    }
    let m = bands.m;
    let spectral = decompose(&bands)?;
    let x_max = spectral.x_max();
    if !(x_max > 0.0) {
        return Err(Error::InvalidParams(format!(
            "largest zero x_max = {x_max} must be positive (apply a shift)"
        )));
    }
    let mut sigma = match kind {
        ChainKind::TypeI => spectral.perron_left(),
        _ => spectral.perron_right(),
    };
    if sigma[0] < 0.0 {
        for v in &mut sigma {
            *v = -*v;
        }
    }
    let t = banded_matrix(&bands);
    let source = match kind {
        ChainKind::TypeI => t.transpose(),
        _ => t,
    };
    let mut p = Matrix::zeros(m, m);
    let mut warnings = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let v = source[(i, j)] * sigma[j] / (x_max * sigma[i]);
            p[(i, j)] = v;
        }
    }
    for i in 0..m {
        let mut sum = 0.0;
        for j in 0..m {
            let v = p[(i, j)];
            if v < 0.0 {
                if v < ENTRY_CLAMP {
                    return Err(Error::NotNonnegative {
                        entry: format!("P[{i},{j}]"),
                        value: v,
                    });
                }
                warnings.push(format!("clamped P[{i},{j}] = {v:.3e} to 0"));
                p[(i, j)] = 0.0;
            }
            sum += p[(i, j)];
        }
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::ConsistencyCheck(format!(
                "row {i} sums to {sum} (defect {:.3e})",
                (sum - 1.0).abs()
            )));
        }
    }
    Ok(StochasticChain {
        kind,
        m,
        p,
        x_max,
        sigma,
        spectral,
        bands,
        family: None,
        warnings,
    })
}

impl StochasticChain {
    /// Closed-form steady state: componentwise product of the right and
    /// left Perron columns, normalized to a probability vector.
    pub fn steady_state(&self) -> Vec<f64> {
        let m = self.m;
        let r = self.spectral.perron_right();
        let l = self.spectral.perron_left();
        let mut pi: Vec<f64> = (0..m).map(|j| r[j] * l[j]).collect();
        let total: f64 = pi.iter().sum();
        for v in &mut pi {
            *v /= total;
        }
        pi
    }

    /// Expected return times, the reciprocals of the steady state.
    pub fn return_times(&self) -> Vec<f64> {
        self.steady_state().iter().map(|&p| 1.0 / p).collect()
    }

    /// Chain period from the coefficient-pattern lemmas, cross-checked by a
    /// gcd-over-cycle-lengths computation on the support graph of P.
    pub fn period(&self) -> Result<usize> {
        let lemma = period_of_bands(&self.bands);
        let graph = graph_period(&self.p);
        if lemma != graph {
            return Err(Error::PeriodMismatch {
                from_coefficients: lemma,
                from_graph: graph,
            });
        }
        Ok(lemma)
    }

    /// Ergodic iff aperiodic (each chain here is recurrent).
    pub fn ergodic(&self) -> Result<bool> {
        Ok(self.period()? == 1)
    }

    /// r-step transition probabilities through the spectral representation.
    pub fn iterated(&self, r: u32) -> Matrix {
        let m = self.m;
        let zs = &self.spectral.zeros;
        let x = self.x_max;
        let right = &self.spectral.right;
        let left = &self.spectral.left;
        let norm = &self.spectral.norm;
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = crate::hyper::KahanSum::default();
                for k in 0..m {
                    let ratio = (zs[k] / x).powi(r as i32);
                    let w = match self.kind {
                        // type I swaps the roles of the two tables
                        ChainKind::TypeI => right[(j, k)] * left[(i, k)],
                        _ => right[(i, k)] * left[(j, k)],
                    };
                    acc.add(ratio * w / norm[k]);
                }
                out[(i, j)] = acc.value() * self.sigma[j] / self.sigma[i];
            }
        }
        out
    }

    /// Spectral-gap convergence ratio x_{m,m-1} / x_{m,m}.
    pub fn gap_ratio(&self) -> Option<f64> {
        self.spectral.gap_ratio()
    }

    /// Time-reversed chain: Q_{i,j} = pi_j P_{j,i} / pi_i. Scalar chains are
    /// reversible (Q = P); type II and type I chains are each other's
    /// reversals.
    pub fn reversal(&self) -> Result<StochasticChain> {
        let pi = self.steady_state();
        for (j, &v) in pi.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::DegenerateSteadyState { index: j, value: v });
            }
        }
        let m = self.m;
        let mut q = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                q[(i, j)] = pi[j] * self.p[(j, i)] / pi[i];
            }
        }
        let kind = match self.kind {
            ChainKind::Scalar => ChainKind::Scalar,
            ChainKind::TypeII => ChainKind::TypeI,
            ChainKind::TypeI => ChainKind::TypeII,
        };
        let mut sigma = match kind {
            ChainKind::TypeI => self.spectral.perron_left(),
            _ => self.spectral.perron_right(),
        };
        if sigma[0] < 0.0 {
            for v in &mut sigma {
                *v = -*v;
            }
        }
        Ok(StochasticChain {
            kind,
            m,
            p: q,
            x_max: self.x_max,
            sigma,
            spectral: self.spectral.clone(),
            bands: self.bands.clone(),
            family: self.family.clone(),
            warnings: Vec::new(),
        })
    }

    /// Run every analysis at once, with the fixed-point cross-checks of the
    /// steady state recorded as warnings when they exceed tolerance.
    pub fn analyze(&self) -> Result<ChainAnalysis> {
        let pi = self.steady_state();
        let mut warnings = self.warnings.clone();
        // Uniqueness guard: lazy fixed-point iterations from two different
        // starting vectors must land on the closed form.
        for (tag, start) in [
            ("uniform", vec![1.0; self.m]),
            ("ramp", (1..=self.m).map(|i| i as f64).collect::<Vec<_>>()),
        ] {
            let fp = self.fixed_point_from(start);
            let dev = fp
                .iter()
                .zip(&pi)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if dev > FIXED_POINT_TOL {
                warnings.push(format!(
                    "fixed-point iteration ({tag} start) deviates from closed form by {dev:.3e}"
                ));
            }
        }
        let period = self.period()?;
        let reversal = self.reversal()?;
        Ok(ChainAnalysis {
            return_times: pi.iter().map(|&p| 1.0 / p).collect(),
            steady_state: pi,
            period,
            ergodic: period == 1,
            gap_ratio: self.gap_ratio(),
            reversal: reversal.p,
            warnings,
        })
    }

    /// Damped power iteration on (P + I)/2, which converges for periodic
    /// chains too and has the same fixed points as P.
    fn fixed_point_from(&self, start: Vec<f64>) -> Vec<f64> {
        let m = self.m;
        let total: f64 = start.iter().sum();
        let mut v: Vec<f64> = start.iter().map(|x| x / total).collect();
        for _ in 0..200_000 {
            let mut next = vec![0.0; m];
            for i in 0..m {
                let vi = v[i];
                if vi == 0.0 {
                    continue;
                }
                for j in 0..m {
                    next[j] += vi * self.p[(i, j)];
                }
            }
            let mut dev: f64 = 0.0;
            for j in 0..m {
                next[j] = 0.5 * (next[j] + v[j]);
                dev = dev.max((next[j] - v[j]).abs());
            }
            v = next;
            if dev < 1e-14 {
                break;
            }
        }
        v
    }
}

/// Period by the coefficient-pattern lemmas: a positive diagonal entry
/// gives period 1; all b = 0 with some c > 0 gives period 2; a multiple
/// pattern with b = c = 0 and d > 0 gives period 3.
pub fn period_of_bands(bands: &RecurrenceBands) -> usize {
    if bands.b.iter().any(|&v| v > 0.0) {
        1
    } else if bands.c.iter().any(|&v| v > 0.0) {
        2
    } else if bands.is_multiple() {
        3
    } else {
        // a 1x1 chain with b_0 = 0 has no return path at all; the catalog
        // never produces this, treat as aperiodic
        1
    }
}

/// Period as the gcd of closed-walk lengths through state 0 on the support
/// digraph of the transition matrix (BFS level differences).
pub fn graph_period(p: &Matrix) -> usize {
    let m = p.rows();
    let mut depth = vec![usize::MAX; m];
    let mut queue = std::collections::VecDeque::new();
    depth[0] = 0;
    queue.push_back(0usize);
    let mut order = Vec::with_capacity(m);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for v in 0..m {
            if p[(u, v)] > SUPPORT_EPS && depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for &u in &order {
        for v in 0..m {
            if p[(u, v)] > SUPPORT_EPS && depth[v] != usize::MAX {
                let diff = depth[u] + 1 - depth[v];
                g = gcd(g, diff);
            }
        }
    }
    if g == 0 {
        1
    } else {
        g
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
