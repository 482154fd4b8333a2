//! Catalog of scalar and multiple orthogonal polynomial families.
//!
//! For each family this module produces truncated recurrence coefficients,
//! positive-bidiagonal-factorization coefficients, closed-form evaluators
//! built on the hypergeometric kernels, and discrete-orthogonality residuals.
//!
//! Conventions: all polynomials are monic; scalar three-term recurrence
//! `x p_n = p_{n+1} + b_n p_n + c_n p_{n-1}`; multiple (stepline) four-term
//! recurrence `x B^(n) = B^(n+1) + b_n B^(n) + c_n B^(n-1) + d_n B^(n-2)`.

use crate::error::{Error, Result};
use crate::factor;
use crate::hyper::{kdf, pfq, pochhammer, KdfSpec};

/// Which polynomial family, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    Hahn { alpha: f64, beta: f64, n: u32 },
    Jacobi01 { alpha: f64, beta: f64 },
    Meixner { beta: f64, c: f64 },
    Kravchuk { p: f64, n: u32 },
    Laguerre { alpha: f64 },
    Charlier { b: f64 },
    Hermite,
    MultipleHahn { alpha1: f64, alpha2: f64, beta: f64, n: u32 },
    JacobiPineiro { alpha1: f64, alpha2: f64, beta: f64 },
    MultipleMeixnerII { beta1: f64, beta2: f64, c: f64 },
    MultipleLaguerreI { alpha1: f64, alpha2: f64 },
}

/// A family plus the diagonal shift `J -> J + s I` applied to its recurrence
/// matrix. Shifting moves every zero by `s` and makes period-2 families
/// factorizable once `s` exceeds the largest zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub shift: f64,
}

impl FamilySpec {
    /// Validate parameters and build a spec with zero shift.
    pub fn new(kind: FamilyKind) -> Result<Self> {
        Self::with_shift(kind, 0.0)
    }

    /// Validate parameters and build a spec with the given shift.
    pub fn with_shift(kind: FamilyKind, shift: f64) -> Result<Self> {
        let spec = FamilySpec { kind, shift };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        use FamilyKind::*;
        if !self.shift.is_finite() {
            return Err(Error::InvalidParams("shift must be finite".into()));
        }
        let err = |msg: String| Err(Error::InvalidParams(msg));
        match self.kind {
            Hahn { alpha, beta, .. } => {
                if !(alpha > -1.0 && beta > -1.0) {
                    return err(format!("Hahn needs alpha, beta > -1; got {alpha}, {beta}"));
                }
            }
            Jacobi01 { alpha, beta } => {
                if !(alpha > -1.0 && beta > -1.0) {
                    return err(format!("Jacobi needs alpha, beta > -1; got {alpha}, {beta}"));
                }
            }
            Meixner { beta, c } => {
                if !(beta > 0.0) || !(c > 0.0 && c < 1.0) {
                    return err(format!("Meixner needs beta > 0, 0 < c < 1; got {beta}, {c}"));
                }
            }
            Kravchuk { p, .. } => {
                if !(p > 0.0 && p < 1.0) {
                    return err(format!("Kravchuk needs 0 < p < 1; got {p}"));
                }
            }
            Laguerre { alpha } => {
                if !(alpha > -1.0) {
                    return err(format!("Laguerre needs alpha > -1; got {alpha}"));
                }
            }
            Charlier { b } => {
                if !(b > 0.0) {
                    return err(format!("Charlier needs b > 0; got {b}"));
                }
            }
            Hermite => {}
            MultipleHahn {
                alpha1,
                alpha2,
                beta,
                ..
            }
            | JacobiPineiro {
                alpha1,
                alpha2,
                beta,
            } => {
                if !(alpha1 > -1.0 && alpha2 > -1.0 && beta > -1.0) {
                    return err(format!(
                        "needs alpha1, alpha2, beta > -1; got {alpha1}, {alpha2}, {beta}"
                    ));
                }
                if is_integer(alpha1 - alpha2) {
                    return err(format!(
                        "needs alpha1 - alpha2 not an integer; got {}",
                        alpha1 - alpha2
                    ));
                }
            }
            MultipleMeixnerII { beta1, beta2, c } => {
                if !(beta1 > 0.0 && beta2 > 0.0) || !(c > 0.0 && c < 1.0) {
                    return err(format!(
                        "multiple Meixner II needs beta1, beta2 > 0, 0 < c < 1; got {beta1}, {beta2}, {c}"
                    ));
                }
                if is_integer(beta1 - beta2) {
                    return err(format!(
                        "needs beta1 - beta2 not an integer; got {}",
                        beta1 - beta2
                    ));
                }
            }
            MultipleLaguerreI { alpha1, alpha2 } => {
                if !(alpha1 > -1.0 && alpha2 > -1.0) {
                    return err(format!(
                        "multiple Laguerre I needs alpha1, alpha2 > -1; got {alpha1}, {alpha2}"
                    ));
                }
                if is_integer(alpha1 - alpha2) {
                    return err(format!(
                        "needs alpha1 - alpha2 not an integer; got {}",
                        alpha1 - alpha2
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical family name.
    pub fn name(&self) -> &'static str {
        use FamilyKind::*;
        match self.kind {
            Hahn { .. } => "hahn",
            Jacobi01 { .. } => "jacobi",
            Meixner { .. } => "meixner",
            Kravchuk { .. } => "kravchuk",
            Laguerre { .. } => "laguerre",
            Charlier { .. } => "charlier",
            Hermite => "hermite",
            MultipleHahn { .. } => "multiple-hahn",
            JacobiPineiro { .. } => "jacobi-pineiro",
            MultipleMeixnerII { .. } => "multiple-meixner-ii",
            MultipleLaguerreI { .. } => "multiple-laguerre-i",
        }
    }

    /// Whether the family carries two weights (tetradiagonal recurrence).
    pub fn is_multiple(&self) -> bool {
        use FamilyKind::*;
        matches!(
            self.kind,
            MultipleHahn { .. }
                | JacobiPineiro { .. }
                | MultipleMeixnerII { .. }
                | MultipleLaguerreI { .. }
        )
    }

    /// Whether the (unshifted) recurrence matrix is nonnegative, so that the
    /// stochastic constructions apply. Scalar catalog families always
    /// qualify; multiple families need the parameter difference inside
    /// (-1, 1).
    pub fn nonneg_stochastic(&self) -> bool {
        use FamilyKind::*;
        match self.kind {
            MultipleHahn { alpha1, alpha2, .. }
            | JacobiPineiro { alpha1, alpha2, .. }
            | MultipleLaguerreI { alpha1, alpha2 } => (alpha1 - alpha2).abs() < 1.0,
            MultipleMeixnerII { beta1, beta2, .. } => (beta1 - beta2).abs() < 1.0,
            _ => true,
        }
    }

    /// Whether the family has a printed positive bidiagonal factorization.
    pub fn has_pbf(&self) -> bool {
        use FamilyKind::*;
        match self.kind {
            Hermite => false,
            MultipleHahn { alpha1, alpha2, .. }
            | JacobiPineiro { alpha1, alpha2, .. }
            | MultipleLaguerreI { alpha1, alpha2 } => {
                alpha1 - alpha2 > -1.0 && alpha1 - alpha2 < 0.0
            }
            MultipleMeixnerII { beta1, beta2, .. } => beta1 - beta2 > -1.0 && beta1 - beta2 < 0.0,
            _ => true,
        }
    }

    /// Lower end of the family's support (after shift); `None` for the whole
    /// real line (Hermite).
    pub fn support_lower(&self) -> Option<f64> {
        match self.kind {
            FamilyKind::Hermite => None,
            _ => Some(self.shift.min(0.0)),
        }
    }

    /// Largest admissible truncation size, where one exists (Hahn-type
    /// families stop at degree N).
    pub fn max_truncation(&self) -> Option<usize> {
        use FamilyKind::*;
        match self.kind {
            Hahn { n, .. } | Kravchuk { n, .. } | MultipleHahn { n, .. } => Some(n as usize),
            _ => None,
        }
    }
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Truncated recurrence coefficients of a family: the bands of `J_m`
/// (scalar) or `T_m` (multiple).
///
/// Index conventions: `b[k]` is b_k for k = 0..m-1, `c[k]` is c_{k+1} for
/// k = 0..m-2, and `d[k]` is d_{k+2} for k = 0..m-3 (multiple only).
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceBands {
    pub m: usize,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Option<Vec<f64>>,
    /// Known lower bound of the spectrum's support, used to bracket zeros;
    /// `None` (whole real line) falls back to a row-sum bound.
    pub support_lower: Option<f64>,
}

impl RecurrenceBands {
    /// Assemble from raw bands, checking lengths and irreducibility
    /// (`c > 0` scalar, `d > 0` multiple).
    pub fn new(b: Vec<f64>, c: Vec<f64>, d: Option<Vec<f64>>) -> Result<Self> {
        let m = b.len();
        if m == 0 {
            return Err(Error::InvalidParams("bands must have m >= 1".into()));
        }
        if c.len() + 1 != m {
            return Err(Error::InvalidParams(format!(
                "expected {} subdiagonal entries, got {}",
                m - 1,
                c.len()
            )));
        }
        match &d {
            Some(d) => {
                if m >= 2 && d.len() + 2 != m {
                    return Err(Error::InvalidParams(format!(
                        "expected {} second-subdiagonal entries, got {}",
                        m - 2,
                        d.len()
                    )));
                }
                for (k, &v) in d.iter().enumerate() {
                    if !(v > 0.0) {
                        return Err(Error::InvalidParams(format!(
                            "d_{} = {} must be positive (irreducibility)",
                            k + 2,
                            v
                        )));
                    }
                }
            }
            None => {
                for (k, &v) in c.iter().enumerate() {
                    if !(v > 0.0) {
                        return Err(Error::InvalidParams(format!(
                            "c_{} = {} must be positive (irreducibility)",
                            k + 1,
                            v
                        )));
                    }
                }
            }
        }
        Ok(RecurrenceBands {
            m,
            b,
            c,
            d,
            support_lower: None,
        })
    }

    pub fn is_multiple(&self) -> bool {
        self.d.is_some()
    }

    /// True when every band entry is nonnegative (d is positive by
    /// construction).
    pub fn is_nonnegative(&self) -> bool {
        self.b.iter().all(|&v| v >= 0.0) && self.c.iter().all(|&v| v >= 0.0)
    }

    /// First offending entry if the matrix is not nonnegative.
    pub fn first_negative(&self) -> Option<(String, f64)> {
        for (k, &v) in self.b.iter().enumerate() {
            if v < 0.0 {
                return Some((format!("b_{k}"), v));
            }
        }
        for (k, &v) in self.c.iter().enumerate() {
            if v < 0.0 {
                return Some((format!("c_{}", k + 1), v));
            }
        }
        None
    }

    /// Squared-norm sequence h_0 = 1, h_{n+1} = c_{n+1} h_n (scalar only).
    pub fn h_norms(&self) -> Vec<f64> {
        let mut h = Vec::with_capacity(self.m);
        h.push(1.0);
        for k in 0..self.m - 1 {
            let prev = *h.last().unwrap();
            h.push(self.c[k] * prev);
        }
        h
    }

    /// Maximum absolute row sum of the banded matrix (spectral radius bound).
    pub fn max_abs_row_sum(&self) -> f64 {
        let m = self.m;
        let mut best: f64 = 0.0;
        for i in 0..m {
            let mut s = self.b[i].abs();
            if i + 1 < m {
                s += 1.0;
            }
            if i >= 1 {
                s += self.c[i - 1].abs();
            }
            if i >= 2 {
                if let Some(d) = &self.d {
                    s += d[i - 2].abs();
                }
            }
            best = best.max(s);
        }
        best
    }
}

/// Stepline multi-index of the type II polynomial `B^(j)`:
/// B^(2n) = B_(n,n), B^(2n+1) = B_(n+1,n).
pub fn stepline_type_ii(j: usize) -> (usize, usize) {
    (j.div_ceil(2), j / 2)
}

/// Stepline multi-index of the type I pair `A^(j)`:
/// A^(2n) = A_(n+1,n), A^(2n-1) = A_(n,n).
pub fn stepline_type_i(j: usize) -> (usize, usize) {
    (j / 2 + 1, j.div_ceil(2))
}

// ---------------------------------------------------------------------------
// Recurrence coefficients
// ---------------------------------------------------------------------------

/// Recurrence bands of the truncated matrix for the given family, with the
/// spec's shift added to every diagonal entry.
pub fn recurrence_bands(spec: &FamilySpec, m: usize) -> Result<RecurrenceBands> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::InvalidParams("m must be >= 1".into()));
    }
    if let Some(max) = spec.max_truncation() {
        if m > max {
            return Err(Error::TruncationTooLarge { m, max });
        }
    }
    use FamilyKind::*;
    let mut bands = match spec.kind {
        Hahn { alpha, beta, n } => {
            let a = |k: usize| hahn_a(alpha, beta, n as f64, k);
            scalar_bands_from_a(m, a)
        }
        Jacobi01 { alpha, beta } => {
            let b: Vec<f64> = (0..m).map(|k| jacobi01_b(alpha, beta, k)).collect();
            let c: Vec<f64> = (1..m).map(|k| jacobi01_c(alpha, beta, k)).collect();
            RecurrenceBands::new(b, c, None)?
        }
        Meixner { beta, c } => {
            let b: Vec<f64> = (0..m)
                .map(|k| (k as f64 + (beta + k as f64) * c) / (1.0 - c))
                .collect();
            let cc: Vec<f64> = (1..m)
                .map(|k| k as f64 * c * (beta + k as f64 - 1.0) / ((1.0 - c) * (1.0 - c)))
                .collect();
            RecurrenceBands::new(b, cc, None)?
        }
        Kravchuk { p, n } => {
            let nn = n as f64;
            let b: Vec<f64> = (0..m)
                .map(|k| (nn - k as f64) * p + k as f64 * (1.0 - p))
                .collect();
            let cc: Vec<f64> = (1..m)
                .map(|k| k as f64 * (1.0 - p) * (nn - k as f64 + 1.0) * p)
                .collect();
            RecurrenceBands::new(b, cc, None)?
        }
        Laguerre { alpha } => {
            let b: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
            let cc: Vec<f64> = (1..m).map(|k| k as f64 * (k as f64 + alpha)).collect();
            RecurrenceBands::new(b, cc, None)?
        }
        Charlier { b } => {
            let bb: Vec<f64> = (0..m).map(|k| k as f64 + b).collect();
            let cc: Vec<f64> = (1..m).map(|k| k as f64 * b).collect();
            RecurrenceBands::new(bb, cc, None)?
        }
        Hermite => {
            let b = vec![0.0; m];
            let cc: Vec<f64> = (1..m).map(|k| k as f64 / 2.0).collect();
            RecurrenceBands::new(b, cc, None)?
        }
        MultipleHahn {
            alpha1,
            alpha2,
            beta,
            n,
        } => multiple_hahn_bands(alpha1, alpha2, beta, n as f64, m)?,
        JacobiPineiro { .. } => {
            // The printed recurrence displays keep an N symbol the family
            // does not have; the factor product of the printed PBF
            // coefficients is exact and N-free, so the bands come from it.
            let a = pbf_unshifted(spec, m)?;
            factor::rebuild(&a, m, true)?
        }
        MultipleMeixnerII { beta1, beta2, c } => multiple_meixner_ii_bands(beta1, beta2, c, m)?,
        MultipleLaguerreI { alpha1, alpha2 } => multiple_laguerre_i_bands(alpha1, alpha2, m)?,
    };
    for v in &mut bands.b {
        *v += spec.shift;
    }
    bands.support_lower = spec.support_lower();
    Ok(bands)
}

fn scalar_bands_from_a<F: Fn(usize) -> f64>(m: usize, a: F) -> RecurrenceBands {
    // a(k) = a_k with a_0 = 0; b_n = a_{2n} + a_{2n+1}, c_n = a_{2n-1} a_{2n}.
    let b: Vec<f64> = (0..m).map(|k| a(2 * k) + a(2 * k + 1)).collect();
    let c: Vec<f64> = (1..m).map(|k| a(2 * k - 1) * a(2 * k)).collect();
    RecurrenceBands {
        m,
        b,
        c,
        d: None,
        support_lower: None,
    }
}

fn hahn_a(alpha: f64, beta: f64, n: f64, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let s = alpha + beta;
    if k % 2 == 1 {
        let j = ((k - 1) / 2) as f64; // a_{2j+1}
        if k == 1 {
            // (s+1) cancels between numerator and denominator
            return n * (alpha + 1.0) / (s + 2.0);
        }
        (n - j) * (alpha + j + 1.0) * (s + j + 1.0) / ((s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0))
    } else {
        let j = (k / 2) as f64; // a_{2j}
        j * (beta + j) * (s + n + j + 1.0) / ((s + 2.0 * j) * (s + 2.0 * j + 1.0))
    }
}

fn jacobi01_b(alpha: f64, beta: f64, k: usize) -> f64 {
    let s = alpha + beta;
    if k == 0 {
        // (alpha+beta) cancels in the n = 0 entry
        return 0.5 - (beta - alpha) / (2.0 * (s + 2.0));
    }
    let n = k as f64;
    0.5 - (beta * beta - alpha * alpha) / (2.0 * (2.0 * n + s) * (2.0 * n + s + 2.0))
}

fn jacobi01_c(alpha: f64, beta: f64, k: usize) -> f64 {
    let s = alpha + beta;
    if k == 1 {
        // (1 + alpha + beta) cancels in the n = 1 entry
        return (1.0 + alpha) * (1.0 + beta) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    }
    let n = k as f64;
    n * (n + alpha) * (n + beta) * (n + s)
        / ((2.0 * n + s - 1.0) * (2.0 * n + s) * (2.0 * n + s) * (2.0 * n + s + 1.0))
}

fn jacobi01_a(alpha: f64, beta: f64, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let s = alpha + beta;
    if k % 2 == 1 {
        let j = ((k - 1) / 2) as f64;
        if k == 1 {
            return (alpha + 1.0) / (s + 2.0);
        }
        (alpha + j + 1.0) * (s + j + 1.0) / ((s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0))
    } else {
        let j = (k / 2) as f64;
        j * (beta + j) / ((s + 2.0 * j) * (s + 2.0 * j + 1.0))
    }
}

// Auxiliary rational functions for the multiple Hahn recurrence, in the
// variables (n1, n2, a1, a2, beta, N). A vanishes for n1 = 0 and D for
// n1 n2 = 0; returning 0 early avoids 0/0 at the parameter-domain corners.
fn aux_a(n1: f64, n2: f64, a1: f64, a2: f64, be: f64, nn: f64) -> f64 {
    if n1 == 0.0 {
        return 0.0;
    }
    n1 * (n1 + n2 + a2 + be) * (n1 + n2 + be) * (nn + n1 + a1 + be + 1.0)
        / ((n1 + 2.0 * n2 + a2 + be)
            * (2.0 * n1 + n2 + a1 + be)
            * (2.0 * n1 + n2 + a1 + be + 1.0))
}

fn aux_b(n1: f64, n2: f64, a1: f64, a2: f64, be: f64, nn: f64) -> f64 {
    (n1 + a1 - a2) * (n1 + n2 + a1 + be) * (n1 + n2 + be - 1.0) * (nn - n1 - n2 + 1.0)
        / ((n1 + 2.0 * n2 + a2 + be - 1.0)
            * (2.0 * n1 + n2 + a1 + be)
            * (2.0 * n1 + n2 + a1 + be - 1.0))
}

fn aux_c(n1: f64, n2: f64, a1: f64, a2: f64, be: f64, nn: f64) -> f64 {
    if n1 == 1.0 && n2 == 1.0 {
        // (1 + a1 + beta) and (1 + a2 + beta) cancel
        return (1.0 + a1) * nn / (2.0 + a1 + be);
    }
    (n1 + a1) * (n1 + n2 + a1 + be - 1.0) * (n1 + n2 + a2 + be - 1.0) * (nn - n1 - n2 + 2.0)
        / ((n1 + 2.0 * n2 + a2 + be - 2.0)
            * (2.0 * n1 + n2 + a1 + be - 2.0)
            * (2.0 * n1 + n2 + a1 + be - 1.0))
}

fn aux_d(n1: f64, n2: f64, a1: f64, a2: f64, be: f64) -> f64 {
    if n1 == 0.0 || n2 == 0.0 {
        return 0.0;
    }
    n1 * n2 * (n1 + n2 + be) / ((2.0 * n1 + n2 + a1 + be + 1.0) * (n1 + 2.0 * n2 + a2 + be))
}

fn multiple_hahn_bands(a1: f64, a2: f64, be: f64, nn: f64, m: usize) -> Result<RecurrenceBands> {
    let mut b = Vec::with_capacity(m);
    let mut c = Vec::with_capacity(m.saturating_sub(1));
    let mut d = Vec::with_capacity(m.saturating_sub(2));
    for idx in 0..m {
        let k = (idx / 2) as f64;
        let v = if idx % 2 == 0 {
            aux_a(k, k, a1, a2, be, nn)
                + aux_a(k, k, a2, a1 + 1.0, be, nn)
                + aux_c(k + 1.0, k + 1.0, a1, a2, be, nn)
                + aux_d(k, k, a1, a2, be)
        } else {
            aux_a(k, k + 1.0, a2, a1, be, nn)
                + aux_a(k + 1.0, k, a1, a2 + 1.0, be, nn)
                + aux_c(k + 1.0, k + 2.0, a2, a1, be, nn)
                + aux_d(k, k + 1.0, a2, a1, be)
        };
        b.push(v);
    }
    for idx in 1..m {
        let k = (idx / 2) as f64;
        let v = if idx % 2 == 0 {
            let a_sum = aux_a(k, k, a1, a2, be, nn)
                + aux_a(k, k, a2, a1 + 1.0, be, nn)
                + aux_d(k, k, a1, a2, be);
            let first = aux_a(k, k, a1, a2, be, nn);
            a_sum * aux_c(k, k + 1.0, a2, a1, be, nn)
                + if first == 0.0 {
                    0.0
                } else {
                    first * aux_b(k, k, a1, a2, be, nn)
                }
        } else {
            let a_sum = aux_a(k, k + 1.0, a2, a1, be, nn)
                + aux_a(k + 1.0, k, a1, a2 + 1.0, be, nn)
                + aux_d(k, k + 1.0, a2, a1, be);
            let first = aux_a(k, k + 1.0, a2, a1, be, nn);
            a_sum * aux_c(k + 1.0, k + 1.0, a1, a2, be, nn)
                + if first == 0.0 {
                    0.0
                } else {
                    first * aux_b(k, k + 1.0, a2, a1, be, nn)
                }
        };
        c.push(v);
    }
    for idx in 2..m {
        let k = (idx / 2) as f64;
        let v = if idx % 2 == 0 {
            aux_a(k, k, a1, a2, be, nn)
                * aux_b(k, k, a1, a2, be, nn)
                * aux_c(k, k, a1, a2, be, nn)
        } else {
            aux_a(k, k + 1.0, a2, a1, be, nn)
                * aux_b(k, k + 1.0, a2, a1, be, nn)
                * aux_c(k, k + 1.0, a2, a1, be, nn)
        };
        d.push(v);
    }
    RecurrenceBands::new(b, c, Some(d))
}

fn multiple_meixner_ii_bands(b1: f64, b2: f64, c: f64, m: usize) -> Result<RecurrenceBands> {
    let q = c / (1.0 - c);
    let q2 = c / ((1.0 - c) * (1.0 - c));
    let q3 = c * c / ((1.0 - c) * (1.0 - c) * (1.0 - c));
    let mut b = Vec::with_capacity(m);
    let mut cc = Vec::with_capacity(m.saturating_sub(1));
    let mut d = Vec::with_capacity(m.saturating_sub(2));
    for idx in 0..m {
        let k = (idx / 2) as f64;
        b.push(if idx % 2 == 0 {
            2.0 * k + q * (b1 + 3.0 * k)
        } else {
            2.0 * k + 1.0 + q * (b2 + 3.0 * k + 1.0)
        });
    }
    for idx in 1..m {
        let k = (idx / 2) as f64;
        cc.push(if idx % 2 == 0 {
            q2 * k * (b1 + b2 + 3.0 * k - 2.0)
        } else {
            q2 * ((k + 1.0) * b1 + k * (b2 + 3.0 * k + 1.0))
        });
    }
    for idx in 2..m {
        let k = (idx / 2) as f64;
        d.push(if idx % 2 == 0 {
            q3 * k * (k + b1 - 1.0) * (k + b1 - b2)
        } else {
            q3 * k * (k + b2 - 1.0) * (k + b2 - b1)
        });
    }
    RecurrenceBands::new(b, cc, Some(d))
}

fn multiple_laguerre_i_bands(a1: f64, a2: f64, m: usize) -> Result<RecurrenceBands> {
    let mut b = Vec::with_capacity(m);
    let mut c = Vec::with_capacity(m.saturating_sub(1));
    let mut d = Vec::with_capacity(m.saturating_sub(2));
    for idx in 0..m {
        let k = (idx / 2) as f64;
        b.push(if idx % 2 == 0 {
            3.0 * k + 1.0 + a1
        } else {
            3.0 * k + 2.0 + a2
        });
    }
    for idx in 1..m {
        let k = (idx / 2) as f64;
        c.push(if idx % 2 == 0 {
            k * (3.0 * k + a1 + a2)
        } else {
            3.0 * k * k + k * (a1 + a2 + 3.0) + a1 + 1.0
        });
    }
    for idx in 2..m {
        let k = (idx / 2) as f64;
        d.push(if idx % 2 == 0 {
            k * (k + a1) * (k + a1 - a2)
        } else {
            k * (k + a2) * (k + a2 - a1)
        });
    }
    RecurrenceBands::new(b, c, Some(d))
}

// ---------------------------------------------------------------------------
// PBF coefficients
// ---------------------------------------------------------------------------

/// Bidiagonal-factor coefficients a_1..a_{2m-1} (scalar, J = L U) or
/// a_1..a_{3m-2} (multiple, T = L1 L2 U), all strictly positive.
///
/// These describe the factorization of the *unshifted* matrix; a shifted
/// spec errors because the printed coefficients no longer apply (use
/// [`crate::factor::numeric_pbf`] on the shifted bands instead).
pub fn pbf_coefficients(spec: &FamilySpec, m: usize) -> Result<Vec<f64>> {
    if spec.shift != 0.0 {
        return Err(Error::NoPBF(format!(
            "closed-form factorization coefficients apply to the unshifted {} matrix only",
            spec.name()
        )));
    }
    pbf_unshifted(spec, m)
}

fn pbf_unshifted(spec: &FamilySpec, m: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::InvalidParams("m must be >= 1".into()));
    }
    if let Some(max) = spec.max_truncation() {
        if m > max {
            return Err(Error::TruncationTooLarge { m, max });
        }
    }
    use FamilyKind::*;
    if let Hermite = spec.kind {
        return Err(Error::NoPBF(
            "Hermite has no pure birth/pure death factorization (apply a shift s > x_mm)".into(),
        ));
    }
    if spec.is_multiple() && !spec.has_pbf() {
        return Err(Error::NoPBF(format!(
            "{} admits a positive factorization only for parameter difference in (-1, 0)",
            spec.name()
        )));
    }
    let a: Vec<f64> = match spec.kind {
        Hahn { alpha, beta, n } => (1..2 * m)
            .map(|k| hahn_a(alpha, beta, n as f64, k))
            .collect(),
        Jacobi01 { alpha, beta } => (1..2 * m).map(|k| jacobi01_a(alpha, beta, k)).collect(),
        Meixner { beta, c } => (1..2 * m)
            .map(|k| {
                if k % 2 == 1 {
                    (beta + ((k - 1) / 2) as f64) * c / (1.0 - c)
                } else {
                    ((k / 2) as f64) / (1.0 - c)
                }
            })
            .collect(),
        Kravchuk { p, n } => (1..2 * m)
            .map(|k| {
                if k % 2 == 1 {
                    (n as f64 - ((k - 1) / 2) as f64) * p
                } else {
                    (k / 2) as f64 * (1.0 - p)
                }
            })
            .collect(),
        Laguerre { alpha } => (1..2 * m)
            .map(|k| {
                if k % 2 == 1 {
                    alpha + ((k - 1) / 2) as f64 + 1.0
                } else {
                    (k / 2) as f64
                }
            })
            .collect(),
        Charlier { b } => (1..2 * m)
            .map(|k| if k % 2 == 1 { b } else { (k / 2) as f64 })
            .collect(),
        Hermite => unreachable!(),
        MultipleHahn {
            alpha1,
            alpha2,
            beta,
            n,
        } => multiple_hahn_pbf(alpha1, alpha2, beta, n as f64, m)?,
        JacobiPineiro {
            alpha1,
            alpha2,
            beta,
        } => jacobi_pineiro_pbf(alpha1, alpha2, beta, m),
        MultipleMeixnerII { beta1, beta2, c } => multiple_meixner_ii_pbf(beta1, beta2, c, m)?,
        MultipleLaguerreI { alpha1, alpha2 } => (1..=3 * m - 2)
            .map(|k| {
                let n = ((k - 1) / 6) as f64;
                match (k - 1) % 6 {
                    0 => alpha1 + 1.0 + n,
                    1 => alpha2 - alpha1 + n,
                    2 => alpha1 - alpha2 + n + 1.0,
                    3 => alpha2 + 1.0 + n,
                    4 => n + 1.0,
                    _ => n + 1.0,
                }
            })
            .collect(),
    };
    for (i, &v) in a.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositivePivot {
                index: i + 1,
                value: v,
            });
        }
    }
    Ok(a)
}

fn jacobi_pineiro_pbf(a1: f64, a2: f64, be: f64, m: usize) -> Vec<f64> {
    (1..=3 * m - 2)
        .map(|k| {
            let n = ((k - 1) / 6) as f64;
            let p2 = |z: f64| z * (z + 1.0);
            match (k - 1) % 6 {
                0 => {
                    if k == 1 {
                        (a1 + 1.0) / (a1 + be + 2.0)
                    } else {
                        (a1 + 1.0 + n) * (a1 + be + 2.0 * n + 1.0) * (a2 + be + 2.0 * n + 1.0)
                            / (p2(a1 + be + 3.0 * n + 1.0) * (a2 + be + 3.0 * n + 1.0))
                    }
                }
                1 => {
                    if k == 2 {
                        (be + 1.0) * (a2 - a1) / ((a1 + be + 2.0) * (a2 + be + 2.0))
                    } else {
                        (be + 2.0 * n + 1.0) * (a2 - a1 + n) * (a2 + be + 2.0 * n + 1.0)
                            / ((a1 + be + 3.0 * n + 2.0) * p2(a2 + be + 3.0 * n + 1.0))
                    }
                }
                2 => {
                    (be + 2.0 * n + 1.0) * (a1 - a2 + n + 1.0) * (a1 + be + 2.0 * n + 2.0)
                        / (p2(a1 + be + 3.0 * n + 2.0) * (a2 + be + 3.0 * n + 2.0))
                }
                3 => {
                    (a2 + 1.0 + n) * (a1 + be + 2.0 * n + 2.0) * (a2 + be + 2.0 * n + 2.0)
                        / ((a1 + be + 3.0 * n + 3.0) * p2(a2 + be + 3.0 * n + 2.0))
                }
                4 => {
                    (n + 1.0) * (be + 2.0 * n + 2.0) * (a2 + be + 2.0 * n + 2.0)
                        / (p2(a1 + be + 3.0 * n + 3.0) * (a2 + be + 3.0 * n + 3.0))
                }
                _ => {
                    (n + 1.0) * (be + 2.0 * n + 2.0) * (a1 + be + 2.0 * n + 3.0)
                        / ((a1 + be + 3.0 * n + 4.0) * p2(a2 + be + 3.0 * n + 3.0))
                }
            }
        })
        .collect()
}

fn multiple_hahn_pbf(a1: f64, a2: f64, be: f64, nn: f64, m: usize) -> Result<Vec<f64>> {
    let p2 = |z: f64| z * (z + 1.0);
    // 3F2(..., 1) ratios shared between consecutive coefficients
    let f32_at = |u: [f64; 3], l: [f64; 2]| pfq(&u, &l, 1.0);
    let mut out = Vec::with_capacity(3 * m - 2);
    for k in 1..=(3 * m - 2) {
        let n = ((k - 1) / 6) as f64;
        let da = a2 - a1;
        let r1 = f32_at([-n, -nn, da - n], [-2.0 * n + 1.0, a2 + be + n + 1.0])?;
        let r2 = f32_at([-n, -nn, da - n], [-2.0 * n, a2 + be + n + 2.0])?;
        let r3 = f32_at([-n - 1.0, -nn, da - n - 1.0], [-2.0 * n - 1.0, a2 + be + n + 2.0])?;
        let r4 = f32_at([-n - 1.0, -nn, da - n - 1.0], [-2.0 * n - 2.0, a2 + be + n + 3.0])?;
        let v = match (k - 1) % 6 {
            0 => {
                if k == 1 {
                    nn * (a1 + 1.0) / (a1 + be + 2.0)
                } else {
                    (nn - 2.0 * n) * (a1 + 1.0 + n) * (a1 + be + 2.0 * n + 1.0)
                        * (a2 + be + 2.0 * n + 1.0)
                        / (p2(a1 + be + 3.0 * n + 1.0) * (a2 + be + 3.0 * n + 1.0))
                }
            }
            1 => {
                if k == 2 {
                    nn * (be + 1.0) * (a2 - a1) / ((a1 + be + 2.0) * (a2 + be + 2.0))
                } else {
                    (nn - 2.0 * n) * pochhammer(n, n as usize) * (be + 2.0 * n + 1.0)
                        * (da + n)
                        * (a2 + be + n + 1.0)
                        / (pochhammer(n + 1.0, n as usize)
                            * (a1 + be + 3.0 * n + 2.0)
                            * p2(a2 + be + 3.0 * n + 1.0))
                        * (r1 / r2)
                }
            }
            2 => {
                (2.0 * n + 1.0) * (be + 2.0 * n + 1.0) * (a1 + be + 2.0 * n + 2.0)
                    * (a2 + be + 2.0 * n + 2.0)
                    / (p2(a1 + be + 3.0 * n + 2.0) * (a2 + be + 3.0 * n + 2.0))
                    * (r3 / r2)
            }
            3 => {
                (nn - 2.0 * n - 1.0) * (a2 + 1.0 + n) * (a1 + be + 2.0 * n + 2.0)
                    * (a2 + be + 2.0 * n + 2.0)
                    / ((a1 + be + 3.0 * n + 3.0) * p2(a2 + be + 3.0 * n + 2.0))
            }
            4 => {
                (n + 1.0) * (nn - 2.0 * n - 1.0) * (be + 2.0 * n + 2.0) * (a1 - a2 + n + 1.0)
                    * (a1 + be + 2.0 + n + nn)
                    / ((2.0 * n + 1.0) * p2(a1 + be + 3.0 * n + 3.0) * (a2 + be + 3.0 * n + 3.0))
                    * (r2 / r3)
            }
            _ => {
                2.0 * (n + 1.0) * (be + 2.0 * n + 2.0) * (a1 + be + 2.0 * n + 3.0)
                    * (a2 + be + 2.0 * n + 3.0)
                    * (a2 + be + 2.0 + n + nn)
                    / ((a1 + be + 3.0 * n + 4.0)
                        * p2(a2 + be + 3.0 * n + 3.0)
                        * (a2 + be + n + 2.0))
                    * (r4 / r3)
            }
        };
        out.push(v);
    }
    Ok(out)
}

fn multiple_meixner_ii_pbf(b1: f64, b2: f64, c: f64, m: usize) -> Result<Vec<f64>> {
    let z = c / (c - 1.0);
    let f21 = |u: [f64; 2], l: f64| pfq(&u, &[l], z);
    let mut out = Vec::with_capacity(3 * m - 2);
    for k in 1..=(3 * m - 2) {
        let n = ((k - 1) / 6) as f64;
        let db = b2 - b1;
        let r1 = f21([-n, db - n], -2.0 * n + 1.0)?;
        let r2 = f21([-n, db - n], -2.0 * n)?;
        let r3 = f21([-n - 1.0, db - n - 1.0], -2.0 * n - 1.0)?;
        let r4 = f21([-n - 1.0, db - n - 1.0], -2.0 * n - 2.0)?;
        let v = match (k - 1) % 6 {
            0 => (b1 + n) * c / (1.0 - c),
            1 => {
                pochhammer(n, n as usize) * (db + n) * c * r1
                    / (pochhammer(n + 1.0, n as usize) * (1.0 - c) * r2)
            }
            2 => (2.0 * n + 1.0) * r3 / r2,
            3 => (b2 + n) * c / (1.0 - c),
            4 => {
                (n + 1.0) * (b1 - b2 + n + 1.0) * c * r2
                    / ((2.0 * n + 1.0) * (1.0 - c) * (1.0 - c) * r3)
            }
            _ => 2.0 * (n + 1.0) * r4 / ((1.0 - c) * r3),
        };
        out.push(v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Closed-form evaluators
// ---------------------------------------------------------------------------

/// Monic scalar polynomial value p_n(x) through its hypergeometric
/// representation. A shifted spec evaluates the underlying family at
/// `x - shift`, matching the shifted recurrence.
pub fn closed_form_scalar(spec: &FamilySpec, n: usize, x: f64) -> Result<f64> {
    spec.validate()?;
    if spec.is_multiple() {
        return Err(Error::InvalidParams(format!(
            "{} is a multiple family; use the type II / type I evaluators",
            spec.name()
        )));
    }
    if let Some(max) = spec.max_truncation() {
        if n > max {
            return Err(Error::TruncationTooLarge { m: n, max });
        }
    }
    let x = x - spec.shift;
    use FamilyKind::*;
    match spec.kind {
        Hahn { alpha, beta, n: nn } => {
            let nn = nn as f64;
            let pre = pochhammer(alpha + 1.0, n) * pochhammer(-nn, n)
                / pochhammer(alpha + beta + n as f64 + 1.0, n);
            Ok(pre
                * pfq(
                    &[-(n as f64), -x, alpha + beta + n as f64 + 1.0],
                    &[-nn, alpha + 1.0],
                    1.0,
                )?)
        }
        Jacobi01 { alpha, beta } => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let pre = sign * pochhammer(alpha + 1.0, n)
                / pochhammer(alpha + beta + n as f64 + 1.0, n);
            Ok(pre * pfq(&[-(n as f64), alpha + beta + n as f64 + 1.0], &[alpha + 1.0], x)?)
        }
        Meixner { beta, c } => {
            let pre = (c / (c - 1.0)).powi(n as i32) * pochhammer(beta, n);
            Ok(pre * pfq(&[-(n as f64), -x], &[beta], (c - 1.0) / c)?)
        }
        Kravchuk { p, n: nn } => {
            let pre = p.powi(n as i32) * pochhammer(-(nn as f64), n);
            Ok(pre * pfq(&[-(n as f64), -x], &[-(nn as f64)], 1.0 / p)?)
        }
        Laguerre { alpha } => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * pochhammer(alpha + 1.0, n) * pfq(&[-(n as f64)], &[alpha + 1.0], x)?)
        }
        Charlier { b } => {
            let pre = (-b).powi(n as i32);
            Ok(pre * pfq(&[-(n as f64), -x], &[], -1.0 / b)?)
        }
        Hermite => Ok(hermite_value(n, x)),
        _ => unreachable!(),
    }
}

fn hermite_value(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if x == 0.0 {
        if n % 2 == 1 {
            return 0.0;
        }
        // H_{2k}(0) = (-1)^k (2k-1)!! / 2^k for the monic e^{-x^2} family
        let k = n / 2;
        let mut v = 1.0;
        for j in 1..=k {
            v *= (2 * j - 1) as f64 / 2.0;
        }
        return if k % 2 == 0 { v } else { -v };
    }
    // x^n 2F0(-n/2, -(n-1)/2; -; -1/x^2); exactly one upper is a
    // nonpositive integer, so the sum terminates on its own.
    let u = [-(n as f64) / 2.0, -((n as f64) - 1.0) / 2.0];
    x.powi(n as i32) * pfq(&u, &[], -1.0 / (x * x)).expect("terminating by construction")
}

/// Monic type II multiple polynomial `B^(j)(x)` on the stepline.
pub fn closed_form_type_ii(spec: &FamilySpec, stepline_n: usize, x: f64) -> Result<f64> {
    spec.validate()?;
    let (n1, n2) = stepline_type_ii(stepline_n);
    if let Some(max) = spec.max_truncation() {
        if n1 + n2 > max {
            return Err(Error::TruncationTooLarge {
                m: stepline_n,
                max,
            });
        }
    }
    let x = x - spec.shift;
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    use FamilyKind::*;
    match spec.kind {
        MultipleHahn {
            alpha1: a1,
            alpha2: a2,
            beta: be,
            n,
        } => {
            let nn = n as f64;
            let pre = pochhammer(a1 + 1.0, n1) * pochhammer(a2 + 1.0, n2)
                * pochhammer(-nn, n1 + n2)
                / (pochhammer(a1 + be + n1f + n2f + 1.0, n1)
                    * pochhammer(a2 + be + n1f + n2f + 1.0, n2));
            let spec = KdfSpec {
                joint_upper: vec![-x, a1 + be + n1f + 1.0],
                left_upper: vec![-n2f, a1 + n1f + 1.0, a2 + be + n1f + n2f + 1.0],
                right_upper: vec![-n1f],
                joint_lower: vec![-nn, a1 + 1.0],
                left_lower: vec![a2 + 1.0, a1 + be + n1f + 1.0],
                right_lower: vec![],
                x: 1.0,
                y: 1.0,
            };
            Ok(pre * kdf(&spec)?)
        }
        JacobiPineiro {
            alpha1: a1,
            alpha2: a2,
            beta: be,
        } => {
            let sign = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
            let pre = sign * pochhammer(a1 + 1.0, n1) * pochhammer(a2 + 1.0, n2)
                / (pochhammer(n1f + n2f + a1 + be + 1.0, n1)
                    * pochhammer(n1f + n2f + a2 + be + 1.0, n2));
            let spec = KdfSpec {
                joint_upper: vec![a1 + be + n1f + 1.0],
                left_upper: vec![-n2f, a2 + be + n1f + n2f + 1.0, a1 + n1f + 1.0],
                right_upper: vec![-n1f],
                joint_lower: vec![a1 + 1.0],
                left_lower: vec![a2 + 1.0, a1 + be + n1f + 1.0],
                right_lower: vec![],
                x,
                y: x,
            };
            Ok(pre * kdf(&spec)?)
        }
        MultipleMeixnerII {
            beta1: b1,
            beta2: b2,
            c,
        } => {
            let pre = (c / (c - 1.0)).powi((n1 + n2) as i32)
                * pochhammer(b1, n1)
                * pochhammer(b2, n2);
            let z = (c - 1.0) / c;
            let spec = KdfSpec {
                joint_upper: vec![-x],
                left_upper: vec![-n1f],
                right_upper: vec![-n2f, b1 + n1f],
                joint_lower: vec![b1],
                left_lower: vec![],
                right_lower: vec![b2],
                x: z,
                y: z,
            };
            Ok(pre * kdf(&spec)?)
        }
        MultipleLaguerreI {
            alpha1: a1,
            alpha2: a2,
        } => {
            let sign = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
            let pre = sign * pochhammer(a1 + 1.0, n1) * pochhammer(a2 + 1.0, n2);
            let spec = KdfSpec {
                joint_upper: vec![],
                left_upper: vec![-n2f, a1 + n1f + 1.0],
                right_upper: vec![-n1f],
                joint_lower: vec![a1 + 1.0],
                left_lower: vec![a2 + 1.0],
                right_lower: vec![],
                x,
                y: x,
            };
            Ok(pre * kdf(&spec)?)
        }
        _ => Err(Error::InvalidParams(format!(
            "{} is a scalar family; use closed_form_scalar",
            spec.name()
        ))),
    }
}

/// Type I multiple polynomial `A^(j)_i(x)` on the stepline, in the paper's
/// normalization. Callers combine these only through ratios of the
/// determinant forms, so the absolute scale is never exposed downstream.
pub fn closed_form_type_i(
    spec: &FamilySpec,
    stepline_n: usize,
    which_weight: u8,
    x: f64,
) -> Result<f64> {
    spec.validate()?;
    if !(which_weight == 1 || which_weight == 2) {
        return Err(Error::InvalidParams("which_weight must be 1 or 2".into()));
    }
    let (n1, n2) = stepline_type_i(stepline_n);
    if let Some(max) = spec.max_truncation() {
        if n1 + n2 > max {
            return Err(Error::TruncationTooLarge {
                m: stepline_n,
                max,
            });
        }
    }
    let x = x - spec.shift;
    let ni = if which_weight == 1 { n1 } else { n2 };
    if ni == 0 {
        // degree <= n_i - 1 < 0: the zero polynomial
        return Ok(0.0);
    }
    let nhat = n1 + n2 - ni;
    let (n1f, n2f, nif, nhatf) = (n1 as f64, n2 as f64, ni as f64, nhat as f64);
    use FamilyKind::*;
    match spec.kind {
        MultipleHahn {
            alpha1,
            alpha2,
            beta: be,
            n,
        } => {
            let nn = n as f64;
            let (ai, ahat) = if which_weight == 1 {
                (alpha1, alpha2)
            } else {
                (alpha2, alpha1)
            };
            let sign = if (ni - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let pre = sign * factorial(n as usize + 1 - n1 - n2) * binom_ratio(n1, n2)
                / (pochhammer(be + 1.0, n1 + n2 - 1)
                    * pochhammer(ai + be + n1f + n2f + nif, n as usize + 1 - n1 - n2))
                * pochhammer(ahat + be + nhatf + 1.0, n1 + n2 - 1)
                / pochhammer(ai - ahat - nhatf + 1.0, n1 + n2 - 1);
            let spec = KdfSpec {
                joint_upper: vec![-nif + 1.0, -nn],
                left_upper: vec![ai + be + n1f + n2f, ai - ahat - nhatf + 1.0, -x],
                right_upper: vec![ahat - ai - nif + 1.0],
                joint_lower: vec![-n1f - n2f + 2.0, ahat + be + nhatf + 1.0],
                left_lower: vec![ai + 1.0, -nn],
                right_lower: vec![],
                x: 1.0,
                y: 1.0,
            };
            Ok(pre * kdf(&spec)?)
        }
        JacobiPineiro {
            alpha1,
            alpha2,
            beta: be,
        } => {
            let (ai, ahat) = if which_weight == 1 {
                (alpha1, alpha2)
            } else {
                (alpha2, alpha1)
            };
            let sign = if (n1 + n2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let pre = sign
                * pochhammer(alpha1 + be + n1f + n2f, n1)
                * pochhammer(alpha2 + be + n1f + n2f, n2)
                / (factorial(ni - 1) * pochhammer(ahat - ai, nhat))
                * gamma(ai + be + n1f + n2f)
                / (gamma(be + n1f + n2f) * gamma(ai + 1.0));
            Ok(pre
                * pfq(
                    &[-nif + 1.0, ai + be + n1f + n2f, ai - ahat - nhatf + 1.0],
                    &[ai + 1.0, ai - ahat + 1.0],
                    x,
                )?)
        }
        MultipleMeixnerII { beta1, beta2, c } => {
            let (bi, bhat) = if which_weight == 1 {
                (beta1, beta2)
            } else {
                (beta2, beta1)
            };
            let sign = if (ni - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let pre = (1.0 - c).powf(bi + n1f + n2f + nif - 2.0) / c.powi((n1 + n2 - 1) as i32)
                * sign
                * binom_ratio(n1, n2)
                / pochhammer(bi - bhat - nhatf + 1.0, n1 + n2 - 1);
            let spec = KdfSpec {
                joint_upper: vec![-nif + 1.0],
                left_upper: vec![-x, bi - bhat - nhatf + 1.0],
                right_upper: vec![bhat - bi - nif + 1.0],
                joint_lower: vec![-n1f - n2f + 2.0],
                left_lower: vec![bi],
                right_lower: vec![],
                x: 1.0,
                y: c / (c - 1.0),
            };
            Ok(pre * kdf(&spec)?)
        }
        MultipleLaguerreI { alpha1, alpha2 } => {
            let (ai, ahat) = if which_weight == 1 {
                (alpha1, alpha2)
            } else {
                (alpha2, alpha1)
            };
            let sign = if (n1 + n2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let pre =
                sign / (factorial(ni - 1) * gamma(ai + 1.0) * pochhammer(ahat - ai, nhat));
            Ok(pre
                * pfq(
                    &[-nif + 1.0, ai - ahat - nhatf + 1.0],
                    &[ai + 1.0, ai - ahat + 1.0],
                    x,
                )?)
        }
        _ => Err(Error::InvalidParams(format!(
            "{} is a scalar family; use closed_form_scalar",
            spec.name()
        ))),
    }
}

/// Determinant combination of the type I pair against the stepline-m pair,
/// the left-eigenvector components of the truncated recurrence matrix:
/// (-1)^m det [[A1^(j), A2^(j)], [A1^(m), A2^(m)]] at `x`.
pub fn type_i_determinant(spec: &FamilySpec, j: usize, m: usize, x: f64) -> Result<f64> {
    let a1j = closed_form_type_i(spec, j, 1, x)?;
    let a2j = closed_form_type_i(spec, j, 2, x)?;
    let a1m = closed_form_type_i(spec, m, 1, x)?;
    let a2m = closed_form_type_i(spec, m, 2, x)?;
    let det = a1j * a2m - a2j * a1m;
    Ok(if m % 2 == 0 { det } else { -det })
}

fn factorial(n: usize) -> f64 {
    pochhammer(1.0, n)
}

/// (n1+n2-2)! / ((n1-1)! (n2-1)!) with the stepline edge case (1,0) -> 1
/// (the gamma-ratio limit).
fn binom_ratio(n1: usize, n2: usize) -> f64 {
    if n1 == 0 || n2 == 0 {
        return 1.0;
    }
    factorial(n1 + n2 - 2) / (factorial(n1 - 1) * factorial(n2 - 1))
}

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

// ---------------------------------------------------------------------------
// Discrete orthogonality
// ---------------------------------------------------------------------------

/// Residual of the discrete orthogonality sum `sum_k k^j p_n(k) w(k)`,
/// normalized by `sum_k |k^j p_n(k)| w(k)`. Below 1e-8 for j < n when the
/// family's relations hold; for j >= n the raw normalized sum is returned.
/// Any shift is ignored: orthogonality belongs to the underlying family.
///
/// Infinite-support weights (Meixner, Charlier) are summed until the terms
/// fall below 1e-16 of the running maximum. Multiple families use the type
/// II polynomial and report the worst residual over the weights with j < n_i.
pub fn verify_discrete_orthogonality(spec: &FamilySpec, n: usize, j: usize) -> Result<f64> {
    spec.validate()?;
    use FamilyKind::*;
    let eval_scalar = |n: usize, k: f64| -> Result<f64> { closed_form_scalar(&FamilySpec { kind: spec.kind.clone(), shift: 0.0 }, n, k) };
    match spec.kind {
        Hahn { alpha, beta, n: nn } => {
            let w = |k: usize| {
                pochhammer(alpha + 1.0, k) / factorial(k) * pochhammer(beta + 1.0, nn as usize - k)
                    / factorial(nn as usize - k)
            };
            residual_finite(nn as usize, w, |k| eval_scalar(n, k), j)
        }
        Kravchuk { p, n: nn } => {
            let w = |k: usize| {
                factorial(nn as usize) / (factorial(k) * factorial(nn as usize - k))
                    * p.powi(k as i32)
                    * (1.0 - p).powi((nn as usize - k) as i32)
            };
            residual_finite(nn as usize, w, |k| eval_scalar(n, k), j)
        }
        Meixner { beta, c } => {
            let w = |k: usize| pochhammer(beta, k) * c.powi(k as i32) / factorial(k);
            residual_infinite(w, |k| eval_scalar(n, k), j)
        }
        Charlier { b } => {
            let w = |k: usize| b.powi(k as i32) / factorial(k);
            residual_infinite(w, |k| eval_scalar(n, k), j)
        }
        MultipleHahn {
            alpha1,
            alpha2,
            beta,
            n: nn,
        } => {
            let (d1, d2) = stepline_type_ii(n);
            let eval = |k: f64| {
                closed_form_type_ii(&FamilySpec { kind: spec.kind.clone(), shift: 0.0 }, n, k)
            };
            let mut worst: f64 = 0.0;
            let mut any = false;
            for (ai, di) in [(alpha1, d1), (alpha2, d2)] {
                if j < di || n == 0 {
                    let w = |k: usize| {
                        pochhammer(ai + 1.0, k) / factorial(k)
                            * pochhammer(beta + 1.0, nn as usize - k)
                            / factorial(nn as usize - k)
                    };
                    worst = worst.max(residual_finite(nn as usize, w, eval, j)?);
                    any = true;
                }
            }
            if !any {
                // no orthogonality claimed at this j; report weight-1 raw sum
                let w = |k: usize| {
                    pochhammer(alpha1 + 1.0, k) / factorial(k)
                        * pochhammer(beta + 1.0, nn as usize - k)
                        / factorial(nn as usize - k)
                };
                worst = residual_finite(nn as usize, w, eval, j)?;
            }
            Ok(worst)
        }
        MultipleMeixnerII { beta1, beta2, c } => {
            let (d1, d2) = stepline_type_ii(n);
            let eval = |k: f64| {
                closed_form_type_ii(&FamilySpec { kind: spec.kind.clone(), shift: 0.0 }, n, k)
            };
            let mut worst: f64 = 0.0;
            let mut any = false;
            for (bi, di) in [(beta1, d1), (beta2, d2)] {
                if j < di || n == 0 {
                    let w = |k: usize| pochhammer(bi, k) * c.powi(k as i32) / factorial(k);
                    worst = worst.max(residual_infinite(w, eval, j)?);
                    any = true;
                }
            }
            if !any {
                let w = |k: usize| pochhammer(beta1, k) * c.powi(k as i32) / factorial(k);
                worst = residual_infinite(w, eval, j)?;
            }
            Ok(worst)
        }
        _ => Err(Error::UnsupportedFamily(spec.name().into())),
    }
}

fn residual_finite<W, E>(top: usize, w: W, eval: E, j: usize) -> Result<f64>
where
    W: Fn(usize) -> f64,
    E: Fn(f64) -> Result<f64>,
{
    let mut num = crate::hyper::KahanSum::default();
    let mut den = 0.0;
    for k in 0..=top {
        let kf = k as f64;
        let t = kf.powi(j as i32) * eval(kf)? * w(k);
        num.add(t);
        den += t.abs();
    }
    Ok(if den == 0.0 { 0.0 } else { num.value().abs() / den })
}

fn residual_infinite<W, E>(w: W, eval: E, j: usize) -> Result<f64>
where
    W: Fn(usize) -> f64,
    E: Fn(f64) -> Result<f64>,
{
    let mut num = crate::hyper::KahanSum::default();
    let mut den = 0.0;
    let mut max_term: f64 = 0.0;
    for k in 0..200_000usize {
        let kf = k as f64;
        let t = kf.powi(j as i32) * eval(kf)? * w(k);
        num.add(t);
        den += t.abs();
        max_term = max_term.max(t.abs());
        if k > j + 4 && max_term > 0.0 && t.abs() < 1e-16 * max_term {
            break;
        }
    }
    Ok(if den == 0.0 { 0.0 } else { num.value().abs() / den })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hahn_spec() -> FamilySpec {
        FamilySpec::new(FamilyKind::Hahn {
            alpha: 0.5,
            beta: 0.75,
            n: 5,
        })
        .unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FamilySpec::new(FamilyKind::Meixner { beta: -0.1, c: 0.5 }).is_err());
        assert!(FamilySpec::new(FamilyKind::Meixner { beta: 1.0, c: 1.0 }).is_err());
        assert!(FamilySpec::new(FamilyKind::Kravchuk { p: 0.0, n: 5 }).is_err());
        assert!(FamilySpec::new(FamilyKind::Laguerre { alpha: -1.0 }).is_err());
        assert!(FamilySpec::new(FamilyKind::Charlier { b: 0.0 }).is_err());
        // integer parameter difference breaks the AT property
        assert!(FamilySpec::new(FamilyKind::MultipleLaguerreI {
            alpha1: 0.5,
            alpha2: 1.5,
        })
        .is_err());
        assert!(FamilySpec::new(FamilyKind::JacobiPineiro {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: -1.0,
        })
        .is_err());
    }

    #[test]
    fn hahn_truncation_capped_at_n() {
        assert!(matches!(
            recurrence_bands(&hahn_spec(), 6),
            Err(Error::TruncationTooLarge { m: 6, max: 5 })
        ));
        assert!(recurrence_bands(&hahn_spec(), 5).is_ok());
    }

    #[test]
    fn hahn_first_diagonal_entry() {
        // b_0 = a_1 = N (alpha+1) / (alpha+beta+2) = 5 * 1.5 / 3.25 = 30/13
        let bands = recurrence_bands(&hahn_spec(), 1).unwrap();
        assert_relative_eq!(bands.b[0], 30.0 / 13.0, max_relative = 1e-15);
    }

    #[test]
    fn hermite_bands_are_printed_values() {
        let spec = FamilySpec::new(FamilyKind::Hermite).unwrap();
        let bands = recurrence_bands(&spec, 4).unwrap();
        assert_eq!(bands.b, vec![0.0; 4]);
        assert_eq!(bands.c, vec![0.5, 1.0, 1.5]);
    }

    #[test]
    fn laguerre_pbf_matches_printed_pattern() {
        let spec = FamilySpec::new(FamilyKind::Laguerre { alpha: 0.5 }).unwrap();
        let a = pbf_coefficients(&spec, 4).unwrap();
        // a_{2n+1} = alpha + n + 1, a_{2n} = n
        assert_eq!(a.len(), 7);
        for n in 0..4usize {
            assert_relative_eq!(a[2 * n], 0.5 + n as f64 + 1.0);
            if n >= 1 {
                assert_relative_eq!(a[2 * n - 1], n as f64);
            }
        }
    }

    #[test]
    fn multiple_laguerre_pbf_matches_printed_pattern() {
        let spec = FamilySpec::new(FamilyKind::MultipleLaguerreI {
            alpha1: 0.3,
            alpha2: 0.7,
        })
        .unwrap();
        let a = pbf_coefficients(&spec, 3).unwrap();
        // a_1 = alpha1+1, a_2 = alpha2-alpha1, a_3 = alpha1-alpha2+1,
        // a_4 = alpha2+1, a_5 = a_6 = 1, a_7 = alpha1+2
        let expect = [1.3, 0.4, 0.6, 1.7, 1.0, 1.0, 2.3];
        for (got, want) in a.iter().zip(expect) {
            assert_relative_eq!(got, &want, max_relative = 1e-14);
        }
    }

    #[test]
    fn hermite_has_no_pbf() {
        let spec = FamilySpec::new(FamilyKind::Hermite).unwrap();
        assert!(matches!(pbf_coefficients(&spec, 4), Err(Error::NoPBF(_))));
    }

    #[test]
    fn pbf_refused_outside_semiband() {
        let spec = FamilySpec::new(FamilyKind::MultipleLaguerreI {
            alpha1: 0.7,
            alpha2: 0.3,
        })
        .unwrap();
        assert!(spec.nonneg_stochastic());
        assert!(!spec.has_pbf());
        assert!(matches!(pbf_coefficients(&spec, 4), Err(Error::NoPBF(_))));
    }

    #[test]
    fn closed_form_degree_zero_and_one() {
        for spec in [
            hahn_spec(),
            FamilySpec::new(FamilyKind::Laguerre { alpha: 1.2 }).unwrap(),
            FamilySpec::new(FamilyKind::Charlier { b: 0.9 }).unwrap(),
            FamilySpec::new(FamilyKind::Hermite).unwrap(),
        ] {
            let x = 1.37;
            assert_relative_eq!(closed_form_scalar(&spec, 0, x).unwrap(), 1.0);
            let b0 = recurrence_bands(&spec, 1).unwrap().b[0];
            assert_relative_eq!(
                closed_form_scalar(&spec, 1, x).unwrap(),
                x - b0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn hermite_closed_form_at_origin() {
        let spec = FamilySpec::new(FamilyKind::Hermite).unwrap();
        assert_eq!(closed_form_scalar(&spec, 3, 0.0).unwrap(), 0.0);
        // H_2(0) = -1/2, H_4(0) = 3/4 for the monic weight-exp(-x^2) family
        assert_relative_eq!(closed_form_scalar(&spec, 2, 0.0).unwrap(), -0.5);
        assert_relative_eq!(closed_form_scalar(&spec, 4, 0.0).unwrap(), 0.75);
    }

    #[test]
    fn type_ii_degree_zero_is_one() {
        let spec = FamilySpec::new(FamilyKind::JacobiPineiro {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
        })
        .unwrap();
        assert_relative_eq!(closed_form_type_ii(&spec, 0, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn stepline_maps() {
        assert_eq!(stepline_type_ii(0), (0, 0));
        assert_eq!(stepline_type_ii(1), (1, 0));
        assert_eq!(stepline_type_ii(4), (2, 2));
        assert_eq!(stepline_type_ii(5), (3, 2));
        assert_eq!(stepline_type_i(0), (1, 0));
        assert_eq!(stepline_type_i(1), (1, 1));
        assert_eq!(stepline_type_i(2), (2, 1));
        assert_eq!(stepline_type_i(7), (4, 4));
    }

    #[test]
    fn discrete_orthogonality_residuals() {
        let kr = FamilySpec::new(FamilyKind::Kravchuk { p: 0.3, n: 6 }).unwrap();
        assert!(verify_discrete_orthogonality(&kr, 2, 0).unwrap() < 1e-10);
        assert!(verify_discrete_orthogonality(&hahn_spec(), 3, 1).unwrap() < 1e-10);
        // n = 0: no orthogonality claimed, the normalized sum is 1
        assert_relative_eq!(verify_discrete_orthogonality(&kr, 0, 0).unwrap(), 1.0);
        let lag = FamilySpec::new(FamilyKind::Laguerre { alpha: 0.5 }).unwrap();
        assert!(matches!(
            verify_discrete_orthogonality(&lag, 2, 0),
            Err(Error::UnsupportedFamily(_))
        ));
        // infinite-support tail summation
        let mx = FamilySpec::new(FamilyKind::Meixner { beta: 1.3, c: 0.4 }).unwrap();
        assert!(verify_discrete_orthogonality(&mx, 3, 2).unwrap() < 1e-8);
    }
}
