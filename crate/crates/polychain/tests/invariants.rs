//! Cross-module invariants checked against independent oracles: exact
//! rational summation for the hypergeometric kernel, power iteration for
//! the largest zero, determinant closed forms for the left eigenvectors,
//! and the structural properties of the spectral tables and factorizations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use polychain::chains::{build, ChainKind};
use polychain::factor::FactorRole;
use polychain::families::{
    closed_form_scalar, closed_form_type_i, closed_form_type_ii, recurrence_bands,
    type_i_determinant, FamilyKind, FamilySpec,
};
use polychain::hyper::{kdf, pfq, KdfSpec};
use polychain::spectral::{banded_matrix, decompose, eval_sequence, left_vector, zeros};
use polychain::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a terminating pFq at x = 1 with one upper -n.
fn pfq_rational_oracle(n: usize, upper: &[BigRational], lower: &[BigRational]) -> BigRational {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for l in 0..=n {
        sum += &term;
        if l == n {
            break;
        }
        let lf = BigRational::from(BigInt::from(l as i64));
        let mut num = BigRational::from(BigInt::from(-(n as i64))) + &lf;
        for u in upper {
            num *= u + &lf;
        }
        let mut den = &lf + BigRational::one();
        for c in lower {
            den *= c + &lf;
        }
        term *= num / den;
    }
    sum
}

#[test]
fn pfq_matches_exact_rational_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let n = rng.gen_range(0..=6usize);
        let n_upper = rng.gen_range(0..=2usize);
        let n_lower = rng.gen_range(1..=2usize);
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for _ in 0..n_upper {
            upper.push(rat(rng.gen_range(-15..=15), rng.gen_range(1..=6)));
        }
        for _ in 0..n_lower {
            // keep lower parameters away from nonpositive integers in range
            let num = rng.gen_range(1..=12);
            let den = rng.gen_range(2..=7);
            lower.push(rat(num, den) + rat(1, 13));
        }
        let exact = pfq_rational_oracle(n, &upper, &lower);
        let mut upper_f: Vec<f64> = vec![-(n as f64)];
        upper_f.extend(upper.iter().map(|r| r.to_f64().unwrap()));
        let lower_f: Vec<f64> = lower.iter().map(|r| r.to_f64().unwrap()).collect();
        let got = pfq(&upper_f, &lower_f, 1.0).unwrap();
        let want = exact.to_f64().unwrap();
        let denom = 1.0 + want.abs().max(exact.abs().to_f64().unwrap());
        assert!(
            (got - want).abs() / denom < 1e-12,
            "n={n} upper={upper_f:?} lower={lower_f:?}: {got} vs {want}"
        );
    }
}

proptest! {
    #[test]
    fn pfq_two_term_identity(b in -5.0f64..5.0, c in 0.2f64..5.0, x in -3.0f64..3.0) {
        let got = pfq(&[-1.0, b], &[c], x).unwrap();
        let want = 1.0 - b * x / c;
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn kdf_decoupled_equals_product(
        n1 in 0usize..6, n2 in 0usize..6,
        b in -2.0f64..2.0, c in 0.3f64..3.0, g in 0.3f64..3.0,
        x in -1.5f64..1.5, y in -1.5f64..1.5,
    ) {
        let spec = KdfSpec {
            left_upper: vec![-(n1 as f64), b],
            right_upper: vec![-(n2 as f64)],
            left_lower: vec![c],
            right_lower: vec![g],
            x,
            y,
            ..Default::default()
        };
        let got = kdf(&spec).unwrap();
        let want = pfq(&[-(n1 as f64), b], &[c], x).unwrap() * pfq(&[-(n2 as f64)], &[g], y).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}

/// Power iteration on the banded matrix: an independent route to the
/// largest zero.
fn power_iteration_largest(bands: &polychain::RecurrenceBands) -> f64 {
    let t = banded_matrix(bands);
    let m = bands.m;
    // shift to make the dominant eigenvalue strictly largest in modulus
    let s = bands.max_abs_row_sum() + 1.0;
    let mut v = vec![1.0; m];
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let mut w = vec![0.0; m];
        for i in 0..m {
            let mut acc = s * v[i];
            for j in 0..m {
                acc += t[(i, j)] * v[j];
            }
            w[i] = acc;
        }
        let norm = w.iter().fold(0.0f64, |a, &z| a.max(z.abs()));
        for z in &mut w {
            *z /= norm;
        }
        let prev = lambda;
        lambda = norm;
        v = w;
        if (lambda - prev).abs() < 1e-14 * lambda {
            break;
        }
    }
    lambda - s
}

#[test]
fn largest_zero_matches_power_iteration() {
    let cases: Vec<(FamilySpec, usize)> = vec![
        (
            FamilySpec::new(FamilyKind::Hahn {
                alpha: 0.5,
                beta: 0.75,
                n: 5,
            })
            .unwrap(),
            5,
        ),
        (
            FamilySpec::new(FamilyKind::MultipleHahn {
                alpha1: 0.4,
                alpha2: 0.6,
                beta: 0.75,
                n: 10,
            })
            .unwrap(),
            7,
        ),
        (
            FamilySpec::new(FamilyKind::JacobiPineiro {
                alpha1: 0.4,
                alpha2: 0.6,
                beta: 0.75,
            })
            .unwrap(),
            7,
        ),
    ];
    for (spec, m) in cases {
        let bands = recurrence_bands(&spec, m).unwrap();
        let zs = zeros(&bands).unwrap();
        let dominant = power_iteration_largest(&bands);
        assert!(
            (zs[m - 1] - dominant).abs() < 1e-9 * (1.0 + dominant.abs()),
            "{}: bisection {} vs power iteration {}",
            spec.name(),
            zs[m - 1],
            dominant
        );
    }
}

fn all_family_specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::new(FamilyKind::Hahn {
            alpha: 0.5,
            beta: 0.75,
            n: 10,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::Jacobi01 {
            alpha: 0.5,
            beta: 0.75,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::Meixner { beta: 1.3, c: 0.4 }).unwrap(),
        FamilySpec::new(FamilyKind::Kravchuk { p: 0.3, n: 10 }).unwrap(),
        FamilySpec::new(FamilyKind::Laguerre { alpha: 0.5 }).unwrap(),
        FamilySpec::new(FamilyKind::Charlier { b: 1.7 }).unwrap(),
        FamilySpec::new(FamilyKind::Hermite).unwrap(),
        FamilySpec::new(FamilyKind::MultipleHahn {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
            n: 20,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::JacobiPineiro {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::MultipleMeixnerII {
            beta1: 0.8,
            beta2: 1.2,
            c: 0.35,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::MultipleLaguerreI {
            alpha1: 0.3,
            alpha2: 0.7,
        })
        .unwrap(),
    ]
}

#[test]
fn closed_forms_match_recurrence_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in all_family_specs() {
        let bands = recurrence_bands(&spec, 9).unwrap();
        let hi = bands.max_abs_row_sum();
        let lo = bands.support_lower.unwrap_or(-hi);
        for _ in 0..20 {
            let x = lo + (hi - lo) * rng.gen::<f64>();
            let p = eval_sequence(&bands, x);
            for n in 0..=8usize {
                let closed = if spec.is_multiple() {
                    closed_form_type_ii(&spec, n, x).unwrap()
                } else {
                    closed_form_scalar(&spec, n, x).unwrap()
                };
                let rel = (closed - p[n]).abs() / (1.0 + p[n].abs());
                assert!(
                    rel < 1e-8,
                    "{} n={n} x={x}: closed {closed} vs recurrence {}",
                    spec.name(),
                    p[n]
                );
            }
        }
    }
}

#[test]
fn hahn_values_at_zero_alternate_with_closed_form() {
    let spec = FamilySpec::new(FamilyKind::Hahn {
        alpha: 0.5,
        beta: 0.75,
        n: 5,
    })
    .unwrap();
    let bands = recurrence_bands(&spec, 5).unwrap();
    let p = eval_sequence(&bands, 0.0);
    for (n, &v) in p.iter().enumerate().take(6) {
        let closed = closed_form_scalar(&spec, n, 0.0).unwrap();
        assert!((closed - v).abs() < 1e-10 * (1.0 + v.abs()));
        let expected_sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!(v * expected_sign > 0.0, "p_{n}(0) = {v}");
    }
}

#[test]
fn multiple_hahn_type_ii_at_zero_matches_recurrence() {
    let spec = FamilySpec::new(FamilyKind::MultipleHahn {
        alpha1: 0.4,
        alpha2: 0.6,
        beta: 0.75,
        n: 10,
    })
    .unwrap();
    let bands = recurrence_bands(&spec, 7).unwrap();
    let p = eval_sequence(&bands, 0.0);
    for n in 0..=7usize {
        let closed = closed_form_type_ii(&spec, n, 0.0).unwrap();
        assert!(
            (closed - p[n]).abs() < 1e-10 * (1.0 + p[n].abs()),
            "n={n}: {closed} vs {}",
            p[n]
        );
    }
}

#[test]
fn type_i_determinants_match_left_vectors() {
    let m = 7usize;
    let cases: Vec<(FamilySpec, f64)> = vec![
        (
            FamilySpec::new(FamilyKind::MultipleHahn {
                alpha1: 0.4,
                alpha2: 0.6,
                beta: 0.75,
                n: 10,
            })
            .unwrap(),
            1e-6,
        ),
        (
            FamilySpec::new(FamilyKind::JacobiPineiro {
                alpha1: 0.4,
                alpha2: 0.6,
                beta: 0.75,
            })
            .unwrap(),
            1e-6,
        ),
        (
            FamilySpec::new(FamilyKind::MultipleMeixnerII {
                beta1: 0.8,
                beta2: 1.2,
                c: 0.35,
            })
            .unwrap(),
            1e-5,
        ),
        (
            FamilySpec::new(FamilyKind::MultipleLaguerreI {
                alpha1: 0.3,
                alpha2: 0.7,
            })
            .unwrap(),
            1e-6,
        ),
    ];
    for (spec, tol) in cases {
        let bands = recurrence_bands(&spec, m).unwrap();
        let zs = zeros(&bands).unwrap();
        let x = zs[m - 1];
        let v = left_vector(&bands, x).unwrap();
        let dets: Vec<f64> = (0..m)
            .map(|j| type_i_determinant(&spec, j, m, x).unwrap())
            .collect();
        assert!(
            dets.iter().all(|&d| d * dets[0] > 0.0),
            "{}: Perron determinant vector must be sign-uniform",
            spec.name()
        );
        for j in 0..m {
            let got = v[j] / v[0];
            let want = dets[j] / dets[0];
            assert!(
                (got - want).abs() <= tol * (1.0 + want.abs()),
                "{} component {j}: recurrence {got} vs determinant {want}",
                spec.name()
            );
        }
        // type I polynomials with a zero-degree slot vanish identically
        assert_eq!(closed_form_type_i(&spec, 0, 2, x).unwrap(), 0.0);
    }
}

#[test]
fn spectral_tables_reconstruct_banded_matrix() {
    for spec in all_family_specs() {
        for m in [3usize, 6, 8] {
            let bands = recurrence_bands(&spec, m).unwrap();
            let d = decompose(&bands).unwrap();
            let t = banded_matrix(&bands);
            let mut approx = Matrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    let mut acc = 0.0;
                    for k in 0..m {
                        acc += d.zeros[k] * d.right[(i, k)] * d.left[(j, k)] / d.norm[k];
                    }
                    approx[(i, j)] = acc;
                }
            }
            let err = approx.max_abs_diff(&t) / (1.0 + t.norm_inf());
            assert!(err < 1e-8, "{} m={m}: reconstruction error {err:.3e}", spec.name());
            for k in 0..m {
                assert!(d.norm[k] != 0.0);
            }
            // direct-product biorthogonality of the normalized tables
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    let mut dot = 0.0;
                    for k in 0..m {
                        dot += d.left[(k, i)] / d.norm[i] * d.right[(k, j)];
                    }
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - target).abs());
                }
            }
            assert!(worst < 1e-8, "{} m={m}: biorthogonality {worst:.3e}", spec.name());
        }
    }
}

#[test]
fn interlacing_and_dominance_up_to_ten() {
    for spec in all_family_specs() {
        let mut prev: Option<Vec<f64>> = None;
        for m in 1..=10usize {
            if spec.max_truncation().is_some_and(|max| m > max) {
                break;
            }
            let zs = zeros(&recurrence_bands(&spec, m).unwrap()).unwrap();
            assert!(zs.windows(2).all(|w| w[0] < w[1]), "{} m={m}", spec.name());
            if let Some(small) = prev {
                for i in 0..m - 1 {
                    assert!(
                        zs[i] < small[i] && small[i] < zs[i + 1],
                        "{} m={m} zero {i}",
                        spec.name()
                    );
                }
            }
            // the largest zero is simple; for aperiodic chains it dominates
            // every other zero in modulus as well
            if m >= 2 {
                assert!(zs[m - 1] > zs[m - 2]);
                if !matches!(spec.kind, FamilyKind::Hermite) {
                    for &z in &zs[..m - 1] {
                        assert!(z.abs() < zs[m - 1]);
                    }
                }
            }
            prev = Some(zs);
        }
    }
}

#[test]
fn shift_equivariance_of_spectra() {
    for base in all_family_specs() {
        let shifted = FamilySpec::with_shift(base.kind.clone(), 1.75).unwrap();
        let z0 = zeros(&recurrence_bands(&base, 6).unwrap()).unwrap();
        let z1 = zeros(&recurrence_bands(&shifted, 6).unwrap()).unwrap();
        for (a, b) in z0.iter().zip(&z1) {
            assert!(
                (a + 1.75 - b).abs() < 1e-10,
                "{}: {a} + s vs {b}",
                base.name()
            );
        }
    }
}

#[test]
fn reversal_pairs_match_across_kinds() {
    let multiples = [
        FamilyKind::MultipleHahn {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
            n: 12,
        },
        FamilyKind::JacobiPineiro {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
        },
        FamilyKind::MultipleMeixnerII {
            beta1: 0.8,
            beta2: 1.2,
            c: 0.35,
        },
        FamilyKind::MultipleLaguerreI {
            alpha1: 0.3,
            alpha2: 0.7,
        },
    ];
    for kind in multiples {
        let spec = FamilySpec::new(kind).unwrap();
        let ii = build(&spec, 6, ChainKind::TypeII).unwrap();
        let i = build(&spec, 6, ChainKind::TypeI).unwrap();
        assert!(
            ii.reversal().unwrap().p.max_abs_diff(&i.p) < 1e-8,
            "{}: reversal(II) != I",
            spec.name()
        );
        assert!(
            i.reversal().unwrap().p.max_abs_diff(&ii.p) < 1e-8,
            "{}: reversal(I) != II",
            spec.name()
        );
        // cross-kind balance pi_k P_II[k,l] = pi_l P_I[l,k]
        let pi = ii.steady_state();
        for k in 0..6 {
            for l in 0..6 {
                let lhs = pi[k] * ii.p[(k, l)];
                let rhs = pi[l] * i.p[(l, k)];
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn factor_orientations_follow_kind() {
    let check_bidiagonal = |mat: &Matrix, lower: bool| {
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                let allowed = j == i || (lower && j + 1 == i) || (!lower && j == i + 1);
                if !allowed {
                    assert_eq!(mat[(i, j)], 0.0, "entry ({i},{j}) outside band");
                }
            }
        }
    };
    let spec = FamilySpec::new(FamilyKind::Hahn {
        alpha: 0.5,
        beta: 0.75,
        n: 8,
    })
    .unwrap();
    let chain = build(&spec, 5, ChainKind::Scalar).unwrap();
    let f = polychain::factor::stochastic_factors(&chain).unwrap();
    assert_eq!(f.factors[0].role, FactorRole::PureBirth);
    assert_eq!(f.factors[1].role, FactorRole::PureDeath);
    check_bidiagonal(&f.factors[0].matrix, true);
    check_bidiagonal(&f.factors[1].matrix, false);

    let spec = FamilySpec::new(FamilyKind::JacobiPineiro {
        alpha1: 0.4,
        alpha2: 0.6,
        beta: 0.75,
    })
    .unwrap();
    let ii = build(&spec, 6, ChainKind::TypeII).unwrap();
    let f = polychain::factor::stochastic_factors(&ii).unwrap();
    let roles: Vec<FactorRole> = f.factors.iter().map(|x| x.role).collect();
    assert_eq!(
        roles,
        [FactorRole::PureBirth, FactorRole::PureBirth, FactorRole::PureDeath]
    );
    check_bidiagonal(&f.factors[0].matrix, true);
    check_bidiagonal(&f.factors[1].matrix, true);
    check_bidiagonal(&f.factors[2].matrix, false);

    let i = build(&spec, 6, ChainKind::TypeI).unwrap();
    let f = polychain::factor::stochastic_factors(&i).unwrap();
    let roles: Vec<FactorRole> = f.factors.iter().map(|x| x.role).collect();
    assert_eq!(
        roles,
        [FactorRole::PureDeath, FactorRole::PureBirth, FactorRole::PureBirth]
    );
    check_bidiagonal(&f.factors[0].matrix, true);
    check_bidiagonal(&f.factors[1].matrix, false);
    check_bidiagonal(&f.factors[2].matrix, false);
}

/// Closed-form steady states agree with iteratively solved fixed points
/// for every family up to m = 10 (recorded as analysis warnings otherwise).
#[test]
fn steady_state_matches_iterative_solve_up_to_ten() {
    for spec in all_family_specs() {
        for m in [4usize, 10] {
            let kind = if spec.is_multiple() {
                ChainKind::TypeII
            } else {
                ChainKind::Scalar
            };
            let chain = build(&spec, m, kind).unwrap();
            let analysis = chain.analyze().unwrap();
            assert!(
                analysis.warnings.is_empty(),
                "{} m={m}: {:?}",
                spec.name(),
                analysis.warnings
            );
            let sum: f64 = analysis.steady_state.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn truncation_caps_for_hahn_type_families() {
    let spec = FamilySpec::new(FamilyKind::MultipleHahn {
        alpha1: 0.4,
        alpha2: 0.6,
        beta: 0.75,
        n: 6,
    })
    .unwrap();
    assert!(recurrence_bands(&spec, 6).is_ok());
    assert!(matches!(
        recurrence_bands(&spec, 7),
        Err(polychain::Error::TruncationTooLarge { m: 7, max: 6 })
    ));
    assert!(matches!(
        closed_form_type_ii(&spec, 7, 0.5),
        Err(polychain::Error::TruncationTooLarge { .. })
    ));
}

#[test]
fn gap_ratio_is_shift_equivariant() {
    let base = FamilySpec::new(FamilyKind::Hermite).unwrap();
    let z0 = zeros(&recurrence_bands(&base, 5).unwrap()).unwrap();
    let s = z0[4] + 1.25;
    let shifted = FamilySpec::with_shift(FamilyKind::Hermite, s).unwrap();
    let chain = build(&shifted, 5, ChainKind::Scalar).unwrap();
    let want = (z0[3] + s) / (z0[4] + s);
    let got = chain.gap_ratio().unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Any in-domain parameter draw yields nonnegative bands and a
    /// stochastic chain with the closed-form steady state as fixed point.
    #[test]
    fn random_parameters_build_stochastic_chains(
        beta in 0.05f64..4.0, c in 0.05f64..0.95,
        alpha in -0.95f64..3.0, diff in -0.95f64..-0.05,
    ) {
        let cases = vec![
            (FamilySpec::new(FamilyKind::Meixner { beta, c }).unwrap(), ChainKind::Scalar),
            (FamilySpec::new(FamilyKind::Laguerre { alpha }).unwrap(), ChainKind::Scalar),
            (
                FamilySpec::new(FamilyKind::MultipleLaguerreI {
                    alpha1: alpha,
                    alpha2: alpha - diff,
                })
                .unwrap(),
                ChainKind::TypeII,
            ),
            (
                FamilySpec::new(FamilyKind::MultipleMeixnerII {
                    beta1: beta,
                    beta2: beta - diff,
                    c,
                })
                .unwrap(),
                ChainKind::TypeI,
            ),
        ];
        for (spec, kind) in cases {
            let bands = recurrence_bands(&spec, 6).unwrap();
            prop_assert!(bands.is_nonnegative(), "{}: {:?}", spec.name(), bands.first_negative());
            let chain = build(&spec, 6, kind).unwrap();
            let pi = chain.steady_state();
            for j in 0..6 {
                let mut s = 0.0;
                for i in 0..6 {
                    prop_assert!(chain.p[(i, j)] >= 0.0);
                    s += pi[i] * chain.p[(i, j)];
                }
                prop_assert!((s - pi[j]).abs() < 1e-10);
            }
            for i in 0..6 {
                let row: f64 = chain.p.row(i).iter().sum();
                prop_assert!((row - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn nonnegativity_of_catalog_bands() {
    for spec in all_family_specs() {
        let bands = recurrence_bands(&spec, 8).unwrap();
        assert!(
            bands.is_nonnegative(),
            "{}: {:?}",
            spec.name(),
            bands.first_negative()
        );
        if let Some(d) = &bands.d {
            assert!(d.iter().all(|&v| v > 0.0));
        }
    }
}

#[test]
fn closed_form_pbf_rebuild_reproduces_bands() {
    // scalar identity b_n = a_{2n} + a_{2n+1}, c_n = a_{2n-1} a_{2n} and the
    // three-factor product in the multiple case
    for spec in all_family_specs() {
        if !spec.has_pbf() {
            continue;
        }
        for m in 2..=8usize {
            let a = polychain::families::pbf_coefficients(&spec, m).unwrap();
            let re = polychain::factor::rebuild(&a, m, spec.is_multiple()).unwrap();
            let bands = recurrence_bands(&spec, m).unwrap();
            let scale = 1.0 + bands.max_abs_row_sum();
            let mut err = 0.0f64;
            for (x, y) in re.b.iter().zip(&bands.b).chain(re.c.iter().zip(&bands.c)) {
                err = err.max((x - y).abs());
            }
            if let (Some(rd), Some(bd)) = (&re.d, &bands.d) {
                for (x, y) in rd.iter().zip(bd) {
                    err = err.max((x - y).abs());
                }
            }
            assert!(
                err / scale < 1e-10,
                "{} m={m}: rebuild defect {err:.3e}",
                spec.name()
            );
        }
    }
}

/// The printed Jacobi-Pineiro recurrence formulas carry an extraneous N
/// symbol; in the large-N limit they must agree with the factor-product
/// bands this crate generates.
#[test]
fn jacobi_pineiro_bands_match_large_n_limit() {
    let (a1, a2, be) = (0.4, 0.6, 0.75);
    let spec = FamilySpec::new(FamilyKind::JacobiPineiro {
        alpha1: a1,
        alpha2: a2,
        beta: be,
    })
    .unwrap();
    let m = 7usize;
    let bands = recurrence_bands(&spec, m).unwrap();
    let nn = 1e9f64;
    let aux_a = |n1: f64, n2: f64, x1: f64, x2: f64| -> f64 {
        if n1 == 0.0 {
            return 0.0;
        }
        n1 * (n1 + n2 + x2 + be) * (n1 + n2 + be) * (nn + n1 + x1 + be + 1.0)
            / ((n1 + 2.0 * n2 + x2 + be) * (2.0 * n1 + n2 + x1 + be) * (2.0 * n1 + n2 + x1 + be + 1.0))
    };
    let aux_b = |n1: f64, n2: f64, x1: f64, x2: f64| -> f64 {
        (n1 + x1 - x2) * (n1 + n2 + x1 + be) * (n1 + n2 + be - 1.0) * (nn - n1 - n2 + 1.0)
            / ((n1 + 2.0 * n2 + x2 + be - 1.0)
                * (2.0 * n1 + n2 + x1 + be)
                * (2.0 * n1 + n2 + x1 + be - 1.0))
    };
    let aux_c = |n1: f64, n2: f64, x1: f64, x2: f64| -> f64 {
        (n1 + x1) * (n1 + n2 + x1 + be - 1.0) * (n1 + n2 + x2 + be - 1.0) * (nn - n1 - n2 + 2.0)
            / ((n1 + 2.0 * n2 + x2 + be - 2.0)
                * (2.0 * n1 + n2 + x1 + be - 2.0)
                * (2.0 * n1 + n2 + x1 + be - 1.0))
    };
    for idx in 0..m {
        let k = (idx / 2) as f64;
        let want = if idx % 2 == 0 {
            aux_a(k, k, a1, a2) / (nn + a1 + be + k + 1.0)
                + aux_a(k, k, a2, a1 + 1.0) / (nn + a2 + be + k + 1.0)
                + aux_c(k + 1.0, k + 1.0, a1, a2) / (nn - 2.0 * k)
        } else {
            aux_a(k, k + 1.0, a2, a1) / (nn + a2 + be + k + 1.0)
                + aux_a(k + 1.0, k, a1, a2 + 1.0) / (nn + a1 + be + k + 2.0)
                + aux_c(k + 1.0, k + 2.0, a2, a1) / (nn - 2.0 * k - 1.0)
        };
        assert!(
            (bands.b[idx] - want).abs() < 1e-8,
            "b_{idx}: {} vs printed-limit {want}",
            bands.b[idx]
        );
    }
    for idx in 1..m {
        let k = (idx / 2) as f64;
        let want = if idx % 2 == 0 {
            (aux_a(k, k, a1, a2) / (nn + a1 + be + k + 1.0)
                + aux_a(k, k, a2, a1 + 1.0) / (nn + a2 + be + k + 1.0))
                * aux_c(k, k + 1.0, a2, a1)
                / (nn - 2.0 * k + 1.0)
                + aux_a(k, k, a1, a2) * aux_b(k, k, a1, a2)
                    / ((nn + a1 + be + k + 1.0) * (nn - 2.0 * k + 1.0))
        } else {
            (aux_a(k, k + 1.0, a2, a1) / (nn + a2 + be + k + 1.0)
                + aux_a(k + 1.0, k, a1, a2 + 1.0) / (nn + a1 + be + k + 2.0))
                * aux_c(k + 1.0, k + 1.0, a1, a2)
                / (nn - 2.0 * k)
                + aux_a(k, k + 1.0, a2, a1) * aux_b(k, k + 1.0, a2, a1)
                    / ((nn + a2 + be + k + 1.0) * (nn - 2.0 * k))
        };
        assert!(
            (bands.c[idx - 1] - want).abs() < 1e-8,
            "c_{idx}: {} vs printed-limit {want}",
            bands.c[idx - 1]
        );
    }
    for idx in 2..m {
        let k = (idx / 2) as f64;
        let want = if idx % 2 == 0 {
            aux_a(k, k, a1, a2) * aux_b(k, k, a1, a2) * aux_c(k, k, a1, a2)
                / ((nn + a1 + be + k + 1.0) * (nn - 2.0 * k + 1.0) * (nn - 2.0 * k + 2.0))
        } else {
            aux_a(k, k + 1.0, a2, a1) * aux_b(k, k + 1.0, a2, a1) * aux_c(k, k + 1.0, a2, a1)
                / ((nn + a2 + be + k + 1.0) * (nn - 2.0 * k) * (nn - 2.0 * k + 1.0))
        };
        assert!(
            (bands.d.as_ref().unwrap()[idx - 2] - want).abs() < 1e-8,
            "d_{idx}: {} vs printed-limit {want}",
            bands.d.as_ref().unwrap()[idx - 2]
        );
    }
}

#[test]
fn discrete_orthogonality_across_orders() {
    let specs = [
        FamilySpec::new(FamilyKind::Hahn {
            alpha: 0.5,
            beta: 0.75,
            n: 8,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::Kravchuk { p: 0.3, n: 8 }).unwrap(),
        FamilySpec::new(FamilyKind::Meixner { beta: 1.3, c: 0.4 }).unwrap(),
        FamilySpec::new(FamilyKind::Charlier { b: 1.7 }).unwrap(),
        FamilySpec::new(FamilyKind::MultipleHahn {
            alpha1: 0.4,
            alpha2: 0.6,
            beta: 0.75,
            n: 10,
        })
        .unwrap(),
        FamilySpec::new(FamilyKind::MultipleMeixnerII {
            beta1: 0.8,
            beta2: 1.2,
            c: 0.35,
        })
        .unwrap(),
    ];
    for spec in specs {
        for n in 1..=4usize {
            let (j_top, _) = if spec.is_multiple() {
                let (n1, n2) = polychain::families::stepline_type_ii(n);
                (n1.min(n2), 0)
            } else {
                (n, 0)
            };
            for j in 0..j_top {
                let r = polychain::families::verify_discrete_orthogonality(&spec, n, j).unwrap();
                assert!(r < 1e-8, "{} n={n} j={j}: residual {r:.3e}", spec.name());
            }
        }
    }
}
