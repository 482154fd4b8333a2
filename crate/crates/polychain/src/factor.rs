//! Bidiagonal factorization of banded recurrence matrices and the derived
//! pure-birth/pure-death stochastic factorizations.
//!
//! Scalar chains factor as `P = Pi Upsilon` (two bidiagonal stochastic
//! factors), type II as `Pi_1 Pi_2 Upsilon`, type I as
//! `Upsilon Pi_2 Pi_1`. Factors labelled `PureBirth` come from the paper's
//! Pi matrices, `PureDeath` from the Upsilon matrix.

use crate::chains::{ChainKind, StochasticChain};
use crate::error::{Error, Result};
use crate::families::{pbf_coefficients, RecurrenceBands};
use crate::matrix::Matrix;

const STOCHASTIC_ROW_TOL: f64 = 1e-10;
const ENTRY_CLAMP: f64 = -1e-12;
const PRODUCT_TOL: f64 = 1e-9;
const PATH_AGREEMENT_TOL: f64 = 1e-10;

/// Role of one bidiagonal stochastic factor, following the paper's
/// Pi (birth) / Upsilon (death) naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRole {
    PureBirth,
    PureDeath,
}

impl FactorRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            FactorRole::PureBirth => "pure-birth",
            FactorRole::PureDeath => "pure-death",
        }
    }
}

/// One bidiagonal stochastic factor.
#[derive(Debug, Clone)]
pub struct Factor {
    pub role: FactorRole,
    pub matrix: Matrix,
}

/// Ordered bidiagonal stochastic factors whose product is the chain's P.
#[derive(Debug, Clone)]
pub struct StochasticFactorization {
    pub factors: Vec<Factor>,
}

impl StochasticFactorization {
    /// Product of the factors in order.
    pub fn product(&self) -> Matrix {
        let mut it = self.factors.iter();
        let first = it.next().expect("at least one factor").matrix.clone();
        it.fold(first, |acc, f| acc.mul(&f.matrix))
    }
}

/// Bidiagonal factorization coefficients of the banded matrix by Gaussian
/// elimination: a_1..a_{2m-1} (scalar, J = L U) or a_1..a_{3m-2} (multiple,
/// T = L1 L2 U). Positivity is reported by the caller's inspection, not
/// required here.
///
/// The multiple split L = L1 L2 has a one-parameter gauge freedom (the
/// printed per-family coefficients fix it family by family); this routine
/// anchors it by splitting the first subdiagonal entry evenly. The product
/// of the factors reproduces the bands either way.
pub fn numeric_pbf(bands: &RecurrenceBands) -> Result<Vec<f64>> {
    let m = bands.m;
    let scale = 1.0 + bands.max_abs_row_sum();
    let pivot_floor = 1e-13 * scale;
    if bands.is_multiple() {
        // Doolittle LU with unit lower-triangular L of bandwidth 2:
        // b_i = l1_i + u_i, c_i = l1_i u_{i-1} + l2_i, d_i = l2_i u_{i-2}.
        let mut u = vec![0.0; m];
        let mut l1 = vec![0.0; m]; // l1[i] at row i, i >= 1
        let mut l2 = vec![0.0; m]; // l2[i] at row i, i >= 2
        u[0] = bands.b[0];
        for i in 1..m {
            if u[i - 1].abs() < pivot_floor {
                return Err(Error::ZeroPivot(i - 1));
            }
            if i >= 2 {
                if u[i - 2].abs() < pivot_floor {
                    return Err(Error::ZeroPivot(i - 2));
                }
                l2[i] = bands.d.as_ref().unwrap()[i - 2] / u[i - 2];
            }
            l1[i] = (bands.c[i - 1] - l2[i]) / u[i - 1];
            u[i] = bands.b[i] - l1[i];
        }
        // Split L = L1 L2: lambda_i + mu_i = l1_i, lambda_i mu_{i-1} = l2_i.
        let mut lambda = vec![0.0; m];
        let mut mu = vec![0.0; m];
        if m >= 2 {
            lambda[1] = 0.5 * l1[1];
            mu[1] = l1[1] - lambda[1];
            for i in 2..m {
                if mu[i - 1].abs() < pivot_floor {
                    return Err(Error::ZeroPivot(i - 1));
                }
                lambda[i] = l2[i] / mu[i - 1];
                mu[i] = l1[i] - lambda[i];
            }
        }
        let mut a = vec![0.0; 3 * m - 2];
        for i in 0..m {
            a[3 * i] = u[i]; // a_{3i+1}
            if i >= 1 {
                a[3 * i - 2] = lambda[i]; // a_{3i-1}
                a[3 * i - 1] = mu[i]; // a_{3i}
            }
        }
        Ok(a)
    } else {
        // Tridiagonal LU: u_0 = b_0, l_i = c_i / u_{i-1}, u_i = b_i - l_i.
        let mut a = vec![0.0; 2 * m - 1];
        let mut u_prev = bands.b[0];
        a[0] = u_prev;
        for i in 1..m {
            if u_prev.abs() < pivot_floor {
                return Err(Error::ZeroPivot(i - 1));
            }
            let l = bands.c[i - 1] / u_prev;
            let u = bands.b[i] - l;
            a[2 * i - 1] = l; // a_{2i}
            a[2 * i] = u; // a_{2i+1}
            u_prev = u;
        }
        Ok(a)
    }
}

/// Multiply the bidiagonal factors back into banded form: L U (scalar) or
/// L1 L2 U (multiple).
pub fn rebuild(a: &[f64], m: usize, is_multiple: bool) -> Result<RecurrenceBands> {
    let av = |k: usize| -> f64 {
        if k >= 1 && k <= a.len() {
            a[k - 1]
        } else {
            0.0
        }
    };
    if is_multiple {
        if a.len() != 3 * m - 2 {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients for a multiple factorization of size {m}, got {}",
                3 * m - 2,
                a.len()
            )));
        }
        // b_i = a_{3i-1} + a_{3i} + a_{3i+1}
        // c_i = (a_{3i-1} + a_{3i}) a_{3i-2} + a_{3i-1} a_{3i-3}
        // d_i = a_{3i-1} a_{3i-3} a_{3i-5}
        let b: Vec<f64> = (0..m)
            .map(|i| {
                if i == 0 {
                    av(1)
                } else {
                    av(3 * i - 1) + av(3 * i) + av(3 * i + 1)
                }
            })
            .collect();
        let c: Vec<f64> = (1..m)
            .map(|i| (av(3 * i - 1) + av(3 * i)) * av(3 * i - 2) + av(3 * i - 1) * av(3 * i - 3))
            .collect();
        let d: Vec<f64> = (2..m)
            .map(|i| av(3 * i - 1) * av(3 * i - 3) * av(3 * i - 5))
            .collect();
        RecurrenceBands::new(b, c, Some(d))
    } else {
        if a.len() != 2 * m - 1 {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients for a scalar factorization of size {m}, got {}",
                2 * m - 1,
                a.len()
            )));
        }
        let b: Vec<f64> = (0..m).map(|i| av(2 * i) + av(2 * i + 1)).collect();
        let c: Vec<f64> = (1..m).map(|i| av(2 * i - 1) * av(2 * i)).collect();
        RecurrenceBands::new(b, c, None)
    }
}

/// Pure-birth/pure-death stochastic factorization of the chain's transition
/// matrix: `[Pi, Upsilon]` (scalar), `[Pi_1, Pi_2, Upsilon]` (type II),
/// `[Upsilon, Pi_2, Pi_1]` (type I).
///
/// Factorization coefficients come from the family's closed forms when the
/// family is known, unshifted and inside its PBF region, otherwise from
/// [`numeric_pbf`] on the bands. When the closed forms are used the factor
/// product of the coefficient list is cross-checked against the bands.
pub fn stochastic_factors(chain: &StochasticChain) -> Result<StochasticFactorization> {
    let m = chain.m;
    let bands = &chain.bands;
    let a = factorization_coefficients(chain)?;
    for (i, &v) in a.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositivePivot {
                index: i + 1,
                value: v,
            });
        }
    }
    // The coefficient product must reproduce the bands regardless of which
    // path produced the list.
    let re = rebuild(&a, m, bands.is_multiple())?;
    let scale = 1.0 + bands.max_abs_row_sum();
    let band_err = re
        .b
        .iter()
        .zip(&bands.b)
        .chain(re.c.iter().zip(&bands.c))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    let band_err = match (&re.d, &bands.d) {
        (Some(rd), Some(bd)) => rd
            .iter()
            .zip(bd)
            .map(|(x, y)| (x - y).abs())
            .fold(band_err, f64::max),
        _ => band_err,
    };
    if band_err > PATH_AGREEMENT_TOL * scale {
        return Err(Error::ConsistencyCheck(format!(
            "factorization coefficients do not reproduce the bands (defect {band_err:.3e})"
        )));
    }

    let x = chain.x_max;
    let sigma = &chain.sigma;
    let av = |k: usize| -> f64 {
        if k >= 1 && k <= a.len() {
            a[k - 1]
        } else {
            0.0
        }
    };
    let factors = match chain.kind {
        ChainKind::Scalar => {
            // d_n = a_{2n+1} p_n + p_{n+1}, p_m(x_max) = 0
            let sig = |n: usize| if n < m { sigma[n] } else { 0.0 };
            let d: Vec<f64> = (0..m).map(|n| av(2 * n + 1) * sig(n) + sig(n + 1)).collect();
            let mut pi = Matrix::zeros(m, m);
            let mut up = Matrix::zeros(m, m);
            for i in 0..m {
                pi[(i, i)] = d[i] / (x * sigma[i]);
                if i >= 1 {
                    pi[(i, i - 1)] = av(2 * i) * d[i - 1] / (x * sigma[i]);
                }
                up[(i, i)] = av(2 * i + 1) * sigma[i] / d[i];
                if i + 1 < m {
                    up[(i, i + 1)] = sigma[i + 1] / d[i];
                }
            }
            vec![
                Factor {
                    role: FactorRole::PureBirth,
                    matrix: pi,
                },
                Factor {
                    role: FactorRole::PureDeath,
                    matrix: up,
                },
            ]
        }
        ChainKind::TypeII => {
            let sig = |n: usize| if n < m { sigma[n] } else { 0.0 };
            let d2: Vec<f64> = (0..m).map(|n| av(3 * n + 1) * sig(n) + sig(n + 1)).collect();
            let d1: Vec<f64> = (0..m)
                .map(|n| {
                    let head = if n >= 1 {
                        av(3 * n - 2) * av(3 * n) * sig(n - 1)
                    } else {
                        0.0
                    };
                    head + (av(3 * n) + av(3 * n + 1)) * sig(n) + sig(n + 1)
                })
                .collect();
            let mut p1 = Matrix::zeros(m, m);
            let mut p2 = Matrix::zeros(m, m);
            let mut up = Matrix::zeros(m, m);
            for i in 0..m {
                p1[(i, i)] = d1[i] / (x * sigma[i]);
                if i >= 1 {
                    p1[(i, i - 1)] = av(3 * i - 1) * d1[i - 1] / (x * sigma[i]);
                }
                p2[(i, i)] = d2[i] / d1[i];
                if i >= 1 {
                    p2[(i, i - 1)] = av(3 * i) * d2[i - 1] / d1[i];
                }
                up[(i, i)] = av(3 * i + 1) * sigma[i] / d2[i];
                if i + 1 < m {
                    up[(i, i + 1)] = sigma[i + 1] / d2[i];
                }
            }
            vec![
                Factor {
                    role: FactorRole::PureBirth,
                    matrix: p1,
                },
                Factor {
                    role: FactorRole::PureBirth,
                    matrix: p2,
                },
                Factor {
                    role: FactorRole::PureDeath,
                    matrix: up,
                },
            ]
        }
        ChainKind::TypeI => {
            let sig = |n: usize| if n < m { sigma[n] } else { 0.0 };
            let d2: Vec<f64> = (0..m).map(|i| sig(i) + av(3 * i + 2) * sig(i + 1)).collect();
            let d1: Vec<f64> = (0..m)
                .map(|i| {
                    sig(i)
                        + (av(3 * i + 2) + av(3 * i + 3)) * sig(i + 1)
                        + av(3 * i + 3) * av(3 * i + 5) * sig(i + 2)
                })
                .collect();
            let mut up = Matrix::zeros(m, m);
            let mut p2 = Matrix::zeros(m, m);
            let mut p1 = Matrix::zeros(m, m);
            for i in 0..m {
                up[(i, i)] = av(3 * i + 1) * d1[i] / (x * sigma[i]);
                if i >= 1 {
                    up[(i, i - 1)] = d1[i - 1] / (x * sigma[i]);
                }
                p2[(i, i)] = d2[i] / d1[i];
                if i + 1 < m {
                    p2[(i, i + 1)] = av(3 * i + 3) * d2[i + 1] / d1[i];
                }
                p1[(i, i)] = sig(i) / d2[i];
                if i + 1 < m {
                    p1[(i, i + 1)] = av(3 * i + 2) * sig(i + 1) / d2[i];
                }
            }
            vec![
                Factor {
                    role: FactorRole::PureDeath,
                    matrix: up,
                },
                Factor {
                    role: FactorRole::PureBirth,
                    matrix: p2,
                },
                Factor {
                    role: FactorRole::PureBirth,
                    matrix: p1,
                },
            ]
        }
    };
    let fact = StochasticFactorization { factors };
    for (idx, f) in fact.factors.iter().enumerate() {
        verify_stochastic(&f.matrix, idx)?;
    }
    let defect = fact.product().max_abs_diff(&chain.p);
    if defect > PRODUCT_TOL {
        return Err(Error::ConsistencyCheck(format!(
            "factor product deviates from P by {defect:.3e}"
        )));
    }
    Ok(fact)
}

fn factorization_coefficients(chain: &StochasticChain) -> Result<Vec<f64>> {
    if let Some(family) = &chain.family {
        if family.shift == 0.0 {
            if !family.has_pbf() {
                return Err(Error::NoPBF(format!(
                    "{} has no positive bidiagonal factorization at these parameters",
                    family.name()
                )));
            }
            let closed = pbf_coefficients(family, chain.m)?;
            if !chain.bands.is_multiple() {
                // dual route: the numeric elimination must agree with the
                // printed coefficients (scalar LU is unique)
                let numeric = numeric_pbf(&chain.bands)?;
                let scale = 1.0 + chain.bands.max_abs_row_sum();
                for (i, (c, n)) in closed.iter().zip(&numeric).enumerate() {
                    if (c - n).abs() > PATH_AGREEMENT_TOL * scale {
                        return Err(Error::ConsistencyCheck(format!(
                            "closed-form a_{} = {c} disagrees with elimination {n}",
                            i + 1
                        )));
                    }
                }
            }
            return Ok(closed);
        }
    }
    numeric_pbf(&chain.bands)
}

fn verify_stochastic(p: &Matrix, which: usize) -> Result<()> {
    for i in 0..p.rows() {
        let mut sum = 0.0;
        for j in 0..p.cols() {
            let v = p[(i, j)];
            if v < ENTRY_CLAMP {
                return Err(Error::ConsistencyCheck(format!(
                    "factor {which} entry ({i},{j}) = {v} is negative"
                )));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > STOCHASTIC_ROW_TOL {
            return Err(Error::ConsistencyCheck(format!(
                "factor {which} row {i} sums to {sum}"
            )));
        }
    }
    Ok(())
}
