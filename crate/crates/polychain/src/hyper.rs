//! Terminating hypergeometric kernels.
//!
//! Pochhammer symbols, generalized `pFq` sums and Kampé de Fériet double
//! sums. Every series handled here terminates because some upper parameter
//! is a nonpositive integer; there is no analytic continuation and no
//! asymptotics. Sums are accumulated with compensated (Kahan) summation in
//! increasing term order, `l`-major for the double sums.

use crate::error::{Error, Result};

/// Tolerance for recognizing a floating-point parameter as a nonpositive integer.
const INTEGER_TOL: f64 = 1e-9;

/// Compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1.
///
/// Computed by iterated multiplication, never through gamma ratios, so that
/// exact zeros like (-3)_5 = 0 come out exactly.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for k in 0..n {
        r *= x + k as f64;
    }
    r
}

/// If `x` is a nonpositive integer -n (within tolerance), returns n.
fn nonpositive_integer(x: f64) -> Option<usize> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() < INTEGER_TOL {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Smallest termination index among parameters that are nonpositive integers:
/// with an upper parameter -n, the factor (-n)_l vanishes for every l > n.
fn termination_bound(params: &[f64]) -> Option<usize> {
    params.iter().filter_map(|&p| nonpositive_integer(p)).min()
}

/// Generalized hypergeometric sum  sum_l  prod (b_i)_l / prod (c_j)_l  x^l / l! .
///
/// Terminates via a nonpositive-integer upper parameter. A lower parameter
/// that vanishes at or after the terminating index is accepted (the
/// conventional -N lower parameter of Hahn-type series); one that vanishes
/// strictly before it is a [`Error::PoleInLower`].
pub fn pfq(upper: &[f64], lower: &[f64], x: f64) -> Result<f64> {
    pfq_capped(upper, lower, x, None)
}

/// [`pfq`] with an explicit maximum term index for non-terminating parameter
/// sets (the sum then runs over l = 0..=cap).
pub fn pfq_capped(upper: &[f64], lower: &[f64], x: f64, cap: Option<usize>) -> Result<f64> {
    let l_max = match (termination_bound(upper), cap) {
        (Some(t), Some(c)) => t.min(c),
        (Some(t), None) => t,
        (None, Some(c)) => c,
        (None, None) => return Err(Error::NonTerminating),
    };
    let mut acc = KahanSum::default();
    let mut term = 1.0;
    for l in 0..=l_max {
        acc.add(term);
        if l == l_max {
            break;
        }
        let lf = l as f64;
        let mut num = x;
        for &u in upper {
            num *= u + lf;
        }
        if num == 0.0 {
            break;
        }
        let mut den = lf + 1.0;
        for &c in lower {
            let f = c + lf;
            if f == 0.0 {
                return Err(Error::PoleInLower {
                    parameter: c,
                    term: l + 1,
                });
            }
            den *= f;
        }
        term *= num / den;
    }
    Ok(acc.value())
}

/// Parameter blocks of a Kampé de Fériet double sum
///
/// ```text
/// sum_{l,m}  prod (a)_{l+m} / prod (alpha)_{l+m}
///          * prod (b)_l / prod (beta)_l
///          * prod (c)_m / prod (gamma)_m
///          * x^l / l!  y^m / m!
/// ```
///
/// `joint_*` are the (a)/(alpha) blocks coupling l and m, `left_*` the
/// (b)/(beta) blocks in l, `right_*` the (c)/(gamma) blocks in m.
#[derive(Debug, Clone, Default)]
pub struct KdfSpec {
    pub joint_upper: Vec<f64>,
    pub left_upper: Vec<f64>,
    pub right_upper: Vec<f64>,
    pub joint_lower: Vec<f64>,
    pub left_lower: Vec<f64>,
    pub right_lower: Vec<f64>,
    pub x: f64,
    pub y: f64,
}

/// Evaluate a terminating Kampé de Fériet double sum, l-major order.
///
/// The l index must be bounded by a nonpositive integer among
/// `left_upper` (or `joint_upper`), and m likewise via `right_upper` (or
/// `joint_upper`); otherwise the sum is [`Error::NonTerminating`].
pub fn kdf(spec: &KdfSpec) -> Result<f64> {
    let joint = termination_bound(&spec.joint_upper);
    let l_only = termination_bound(&spec.left_upper);
    let m_only = termination_bound(&spec.right_upper);
    if (l_only.is_none() && joint.is_none()) || (m_only.is_none() && joint.is_none()) {
        return Err(Error::NonTerminating);
    }
    let l_max = match (l_only, joint) {
        (Some(l), Some(j)) => l.min(j),
        (Some(l), None) => l,
        (None, Some(j)) => j,
        (None, None) => unreachable!(),
    };
    let mut acc = KahanSum::default();
    for l in 0..=l_max {
        let m_bound = match (m_only, joint) {
            (Some(m), Some(j)) => m.min(j - l),
            (Some(m), None) => m,
            (None, Some(j)) => j - l,
            (None, None) => unreachable!(),
        };
        for m in 0..=m_bound {
            acc.add(kdf_term(spec, l, m)?);
        }
    }
    Ok(acc.value())
}

fn kdf_term(spec: &KdfSpec, l: usize, m: usize) -> Result<f64> {
    let mut num = 1.0;
    for &a in &spec.joint_upper {
        num *= pochhammer(a, l + m);
    }
    for &b in &spec.left_upper {
        num *= pochhammer(b, l);
    }
    for &c in &spec.right_upper {
        num *= pochhammer(c, m);
    }
    if num == 0.0 {
        return Ok(0.0);
    }
    num *= spec.x.powi(l as i32) * spec.y.powi(m as i32);
    let mut den = pochhammer(1.0, l) * pochhammer(1.0, m);
    for (&p, count) in spec
        .joint_lower
        .iter()
        .map(|p| (p, l + m))
        .chain(spec.left_lower.iter().map(|p| (p, l)))
        .chain(spec.right_lower.iter().map(|p| (p, m)))
    {
        let f = pochhammer(p, count);
        if f == 0.0 {
            // Term index at which (p)_count first vanished.
            let hit = nonpositive_integer(p).map(|n| n + 1).unwrap_or(count);
            return Err(Error::PoleInLower {
                parameter: p,
                term: hit,
            });
        }
        den *= f;
    }
    Ok(num / den)
}
