//! Polynomial evaluation by recurrence, zeros via interlacing bisection, and
//! the right/left eigenvector tables of the truncated recurrence matrix.

use crate::error::{Error, Result};
use crate::families::RecurrenceBands;
use crate::matrix::Matrix;

/// Relative residual gate for accepting a point as an eigenvalue.
const LEFT_RESIDUAL_TOL: f64 = 1e-8;
/// Right-eigenvector residual gate, per column of the spectral tables.
const RIGHT_RESIDUAL_TOL: f64 = 1e-9;
/// Biorthogonality gate on the normalized tables.
const BIORTH_TOL: f64 = 1e-8;

/// Zeros of the m-th polynomial with the right/left eigenvector tables of
/// the truncated matrix.
///
/// Column k of `right` holds p_0(x_k)..p_{m-1}(x_k) (scalar) or
/// B^(0)(x_k)..B^(m-1)(x_k) (multiple); column k of `left` the
/// left-eigenvector components (scalar p_j(x_k)/h_j, multiple the
/// determinant vector up to scale). `norm[k]` is the biorthogonality sum
/// of the two columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub zeros: Vec<f64>,
    pub right: Matrix,
    pub left: Matrix,
    pub norm: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn m(&self) -> usize {
        self.zeros.len()
    }

    /// Largest zero x_{m,m}.
    pub fn x_max(&self) -> f64 {
        *self.zeros.last().unwrap()
    }

    /// Ratio of the two largest zeros, the geometric convergence rate.
    pub fn gap_ratio(&self) -> Option<f64> {
        let m = self.m();
        (m >= 2).then(|| self.zeros[m - 2] / self.zeros[m - 1])
    }

    /// Right Perron column (components of the eigenvector at x_{m,m}).
    pub fn perron_right(&self) -> Vec<f64> {
        let k = self.m() - 1;
        (0..self.m()).map(|l| self.right[(l, k)]).collect()
    }

    /// Left Perron column.
    pub fn perron_left(&self) -> Vec<f64> {
        let k = self.m() - 1;
        (0..self.m()).map(|l| self.left[(l, k)]).collect()
    }
}

/// Banded matrix (J_m or T_m) as a dense matrix.
pub fn banded_matrix(bands: &RecurrenceBands) -> Matrix {
    let m = bands.m;
    let mut t = Matrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = bands.b[i];
        if i + 1 < m {
            t[(i, i + 1)] = 1.0;
            t[(i + 1, i)] = bands.c[i];
        }
        if i + 2 < m {
            if let Some(d) = &bands.d {
                t[(i + 2, i)] = d[i];
            }
        }
    }
    t
}

/// p_0(x)..p_m(x) (scalar) or B^(0)(x)..B^(m)(x) (multiple) by the
/// recurrence, with p_{-1} = 0 (and B^(-2) = 0), p_0 = 1.
pub fn eval_sequence(bands: &RecurrenceBands, x: f64) -> Vec<f64> {
    eval_upto(bands, x, bands.m)
}

fn eval_upto(bands: &RecurrenceBands, x: f64, deg: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(deg + 1);
    p.push(1.0);
    for n in 0..deg {
        let mut v = (x - bands.b[n]) * p[n];
        if n >= 1 {
            v -= bands.c[n - 1] * p[n - 1];
        }
        if n >= 2 {
            if let Some(d) = &bands.d {
                v -= d[n - 2] * p[n - 2];
            }
        }
        p.push(v);
    }
    p
}

/// All m zeros of the m-th polynomial, ascending.
///
/// Degree-(k+1) zeros are bracketed by the degree-k zeros (interlacing)
/// together with the outer bounds: the support minimum carried by the bands
/// (or minus the max row sum when unknown) below, the max row sum above.
/// Each bracket is bisected on the sign of the recurrence evaluation.
pub fn zeros(bands: &RecurrenceBands) -> Result<Vec<f64>> {
    let m = bands.m;
    let bound = bands.max_abs_row_sum();
    let hi = bound + 1.0;
    let lo = match bands.support_lower {
        Some(s) => s - 1e-9 * (1.0 + s.abs()),
        None => -hi,
    };
    let mut zs = vec![bands.b[0]];
    for deg in 2..=m {
        let mut brackets = Vec::with_capacity(deg + 1);
        brackets.push(lo);
        brackets.extend_from_slice(&zs);
        brackets.push(hi);
        let mut next = Vec::with_capacity(deg);
        for i in 0..deg {
            next.push(bisect(bands, deg, brackets[i], brackets[i + 1], i)?);
        }
        zs = next;
    }
    Ok(zs)
}

fn bisect(bands: &RecurrenceBands, deg: usize, mut a: f64, mut b: f64, index: usize) -> Result<f64> {
    let eval = |x: f64| eval_upto(bands, x, deg)[deg];
    let mut fa = eval(a);
    let fb = eval(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure {
            degree: deg,
            index,
            lo: a,
            hi: b,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let fm = eval(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Left-eigenvector components at the eigenvalue `x`.
///
/// Scalar: component j is p_j(x)/h_j. Multiple: backward recurrence
/// `v_{m-1} = 1`, `v_m = v_{m+1} = 0`,
/// `v_{j-1} = (x - b_j) v_j - c_{j+1} v_{j+1} - d_{j+2} v_{j+2}`,
/// followed by one inverse-iteration pass on the banded matrix to scrub
/// the roundoff the backward sweep leaves at the non-extreme zeros.
/// Output is scale-free.
pub fn left_vector(bands: &RecurrenceBands, x: f64) -> Result<Vec<f64>> {
    let m = bands.m;
    let t = banded_matrix(bands);
    let v = if bands.is_multiple() {
        let mut v = vec![0.0; m + 2];
        v[m - 1] = 1.0;
        for j in (1..m).rev() {
            let mut val = (x - bands.b[j]) * v[j];
            if j + 1 < m {
                val -= bands.c[j] * v[j + 1];
            }
            if j + 2 < m {
                if let Some(d) = &bands.d {
                    val -= d[j] * v[j + 2];
                }
            }
            v[j - 1] = val;
        }
        v.truncate(m);
        refine_left(&t, x, v)
    } else {
        let h = bands.h_norms();
        let p = eval_sequence(bands, x);
        (0..m).map(|j| p[j] / h[j]).collect()
    };
    let res = left_residual(&t, x, &v);
    if res > LEFT_RESIDUAL_TOL {
        return Err(Error::NotAnEigenvalue {
            x,
            residual: res,
            tol: LEFT_RESIDUAL_TOL,
        });
    }
    Ok(v)
}

/// One inverse-iteration step: solve (T^t - x I) w = v and renormalize,
/// keeping the orientation of the input vector.
fn refine_left(t: &Matrix, x: f64, v: Vec<f64>) -> Vec<f64> {
    let m = t.rows();
    let mut shifted = t.transpose();
    for i in 0..m {
        shifted[(i, i)] -= x;
    }
    let w = shifted.solve(&v);
    let scale = w.iter().fold(0.0f64, |acc, &z| acc.max(z.abs()));
    if !(scale > 0.0) || w.iter().any(|z| !z.is_finite()) {
        return v;
    }
    let orient = v
        .iter()
        .zip(&w)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        .signum();
    w.into_iter().map(|z| z * orient / scale).collect()
}

fn left_residual(t: &Matrix, x: f64, v: &[f64]) -> f64 {
    let m = t.rows();
    let vmax = v.iter().fold(0.0f64, |acc, &z| acc.max(z.abs()));
    if vmax == 0.0 {
        return f64::INFINITY;
    }
    let scale = 1.0 + t.norm_inf();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let mut s = -x * v[j];
        for i in 0..m {
            let tij = t[(i, j)];
            if tij != 0.0 {
                s += v[i] * tij;
            }
        }
        worst = worst.max(s.abs());
    }
    worst / (vmax * scale)
}

/// Full spectral tables: zeros, right/left columns, biorthogonality sums.
/// Verifies per-column eigen-residuals, nonzero norms, biorthogonality of
/// the normalized tables, and sign-uniformity of the Perron columns.
pub fn decompose(bands: &RecurrenceBands) -> Result<SpectralDecomposition> {
    let m = bands.m;
    let zs = zeros(bands)?;
    let t = banded_matrix(bands);
    let mut right = Matrix::zeros(m, m);
    let mut left = Matrix::zeros(m, m);
    let mut norm = vec![0.0; m];
    for (k, &z) in zs.iter().enumerate() {
        let p = eval_sequence(bands, z);
        let umax = p[..m].iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let mut res: f64 = 0.0;
        for i in 0..m {
            let mut s = -z * p[i];
            s += t.row(i)
                .iter()
                .zip(&p[..m])
                .map(|(a, b)| a * b)
                .sum::<f64>();
            res = res.max(s.abs());
        }
        if res / umax > RIGHT_RESIDUAL_TOL * (1.0 + t.norm_inf()) {
            return Err(Error::ConsistencyCheck(format!(
                "right eigen-residual {:.3e} at zero {k} exceeds tolerance",
                res / umax
            )));
        }
        let v = left_vector(bands, z)?;
        let mut dot = crate::hyper::KahanSum::default();
        for l in 0..m {
            right[(l, k)] = p[l];
            left[(l, k)] = v[l];
            dot.add(p[l] * v[l]);
        }
        norm[k] = dot.value();
        if norm[k] == 0.0 {
            return Err(Error::ConsistencyCheck(format!(
                "biorthogonality norm vanished at zero {k} (zeros not simple?)"
            )));
        }
    }
    // Perron column sign-uniformity
    let k = m - 1;
    for table in [&right, &left] {
        let s0 = table[(0, k)].signum();
        if (0..m).any(|l| table[(l, k)] == 0.0 || table[(l, k)].signum() != s0) {
            return Err(Error::ConsistencyCheck(
                "Perron column is not sign-uniform".into(),
            ));
        }
    }
    // Normalized biorthogonality: V U = U V = I within tolerance. The gate
    // budgets for the cancellation volume of each inner product, which can
    // span many orders of magnitude when the polynomial values at distinct
    // zeros do (compensated summation alone cannot beat that floor).
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let mut dot = crate::hyper::KahanSum::default();
            let mut volume = 0.0f64;
            for l in 0..m {
                let term = right[(l, i)] * left[(l, j)];
                dot.add(term);
                volume += term.abs();
            }
            let target = if i == j { norm[j] } else { 0.0 };
            let kappa = (volume / norm[j].abs()).max(1.0);
            let defect = (dot.value() - target).abs() / (norm[j].abs() * kappa);
            worst = worst.max(defect);
        }
    }
    if worst > BIORTH_TOL {
        return Err(Error::ConsistencyCheck(format!(
            "biorthogonality defect {worst:.3e} exceeds {BIORTH_TOL:.1e}"
        )));
    }
    Ok(SpectralDecomposition {
        zeros: zs,
        right,
        left,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{recurrence_bands, FamilyKind, FamilySpec};
    use approx::assert_relative_eq;

    fn hahn5() -> RecurrenceBands {
        let spec = FamilySpec::new(FamilyKind::Hahn {
            alpha: 0.5,
            beta: 0.75,
            n: 5,
        })
        .unwrap();
        recurrence_bands(&spec, 5).unwrap()
    }

    #[test]
    fn eval_sequence_initialization() {
        let bands = hahn5();
        let p = eval_sequence(&bands, 0.37);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], 1.0);
        assert_relative_eq!(p[1], 0.37 - bands.b[0]);
    }

    #[test]
    fn zeros_degree_one_and_two() {
        let spec = FamilySpec::new(FamilyKind::Laguerre { alpha: 0.5 }).unwrap();
        let b1 = recurrence_bands(&spec, 1).unwrap();
        assert_relative_eq!(zeros(&b1).unwrap()[0], b1.b[0], max_relative = 1e-12);
        let b2 = recurrence_bands(&spec, 2).unwrap();
        let zs = zeros(&b2).unwrap();
        // quadratic formula on (x - b0)(x - b1) - c1
        let (b0, b1v, c1) = (b2.b[0], b2.b[1], b2.c[0]);
        let disc = ((b0 - b1v) * (b0 - b1v) + 4.0 * c1).sqrt();
        let lo = 0.5 * (b0 + b1v - disc);
        let hi = 0.5 * (b0 + b1v + disc);
        assert_relative_eq!(zs[0], lo, max_relative = 1e-12);
        assert_relative_eq!(zs[1], hi, max_relative = 1e-12);
    }

    #[test]
    fn hahn_largest_zero() {
        // frozen from an independent companion eigenvalue computation
        let zs = zeros(&hahn5()).unwrap();
        assert_relative_eq!(zs[4], 4.983684461924332, max_relative = 1e-10);
        let b0 = hahn5().b[0];
        assert!(((b0 / zs[4]) * 100.0).round() / 100.0 == 0.46);
    }

    #[test]
    fn zeros_ascending_and_interlacing() {
        for m in 2..=10usize {
            let spec = FamilySpec::new(FamilyKind::Meixner { beta: 1.3, c: 0.4 }).unwrap();
            let big = zeros(&recurrence_bands(&spec, m).unwrap()).unwrap();
            assert!(big.windows(2).all(|w| w[0] < w[1]));
            if m >= 3 {
                let small = zeros(&recurrence_bands(&spec, m - 1).unwrap()).unwrap();
                for i in 0..m - 1 {
                    assert!(big[i] < small[i] && small[i] < big[i + 1]);
                }
            }
        }
    }

    #[test]
    fn left_vector_scalar_first_component() {
        let bands = hahn5();
        let zs = zeros(&bands).unwrap();
        let v = left_vector(&bands, zs[4]).unwrap();
        assert_relative_eq!(v[0], 1.0); // p_0 / h_0 = 1
    }

    #[test]
    fn left_vector_rejects_non_eigenvalue() {
        let bands = hahn5();
        match left_vector(&bands, 1.7) {
            Err(Error::NotAnEigenvalue { .. }) => {}
            other => panic!("expected NotAnEigenvalue, got {other:?}"),
        }
    }

    #[test]
    fn decompose_single_state() {
        let spec = FamilySpec::new(FamilyKind::Charlier { b: 1.1 }).unwrap();
        let d = decompose(&recurrence_bands(&spec, 1).unwrap()).unwrap();
        assert_relative_eq!(d.zeros[0], 1.1);
        assert_relative_eq!(d.right[(0, 0)], 1.0);
        assert_relative_eq!(d.left[(0, 0)], 1.0);
        assert_relative_eq!(d.norm[0], 1.0);
    }

    #[test]
    fn decompose_perron_column_positive() {
        let spec = FamilySpec::new(FamilyKind::MultipleLaguerreI {
            alpha1: 0.3,
            alpha2: 0.7,
        })
        .unwrap();
        let d = decompose(&recurrence_bands(&spec, 6).unwrap()).unwrap();
        let r = d.perron_right();
        let l = d.perron_left();
        assert!(r.iter().all(|&v| v > 0.0) || r.iter().all(|&v| v < 0.0));
        assert!(l.iter().all(|&v| v > 0.0) || l.iter().all(|&v| v < 0.0));
    }

    #[test]
    fn shift_equivariance_of_zeros() {
        let base = FamilySpec::new(FamilyKind::Kravchuk { p: 0.3, n: 8 }).unwrap();
        let shifted =
            FamilySpec::with_shift(FamilyKind::Kravchuk { p: 0.3, n: 8 }, 2.5).unwrap();
        let z0 = zeros(&recurrence_bands(&base, 6).unwrap()).unwrap();
        let z1 = zeros(&recurrence_bands(&shifted, 6).unwrap()).unwrap();
        for (a, b) in z0.iter().zip(&z1) {
            assert!((a + 2.5 - b).abs() < 1e-10);
        }
    }
}
