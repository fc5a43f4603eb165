mod common;

use common::{gaussian, max_abs_diff, rng};
use eqkit_core::doubly::reflect_to_doubly;
use eqkit_core::factor::sdst_factor_unchecked;
use eqkit_core::gram::{self, dual_params, gram_matrix, gram_principal_sqrt};
use eqkit_core::linalg::{determinant, eval_poly, generic_inverse, qr, sym_eig};
use eqkit_core::*;
use proptest::prelude::*;
use rand::Rng;

/// Alpha at relative position `t` in `(-1/(n-1), 1)`, kept `margin` away from both ends.
fn alpha_at(n: usize, t: f64, margin: f64) -> f64 {
    let lo = -1.0 / (n as f64 - 1.0) + margin;
    let hi = 1.0 - margin;
    lo + t * (hi - lo)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn sr_certifies_and_preserves_spans(n in 2usize..9, extra in 0usize..3, t in 0.0f64..1.0, seed in any::<u64>()) {
        let alpha = alpha_at(n, t, 0.05);
        let a = gaussian(&mut rng(seed), n + extra, n);
        let sr = sr_decompose_cos(&a, alpha).unwrap();
        let s = sr.s.matrix();
        prop_assert!((certify_equiangular(s, 1e-9).unwrap() - alpha).abs() <= 1e-9);
        prop_assert!(sr.r.is_upper_triangular(0.0));
        prop_assert!(sr.r.diagonal().iter().all(|&d| d > 0.0));
        prop_assert!(sr.residual <= 1e-9 * a.frobenius_norm().max(1.0));
        // each a_k lies in span(s_1..s_k) and each s_k in span(a_1..a_k)
        for k in 1..=n {
            let (qs, _) = qr(&s.columns_range(0, k)).unwrap();
            let (qa, _) = qr(&a.columns_range(0, k)).unwrap();
            for (basis, v) in [(&qs, a.column(k - 1)), (&qa, s.column(k - 1))] {
                let coef = basis.transpose().matvec(&v);
                let proj = basis.matvec(&coef);
                let res: f64 = v.iter().zip(&proj).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                let vn: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                prop_assert!(res <= 1e-9 * vn);
            }
        }
    }

    #[test]
    fn triangular_equiangular_is_unique(n in 2usize..8, alpha in 0.01f64..0.95, seed in any::<u64>()) {
        let mut a = gaussian(&mut rng(seed), n, n);
        for i in 0..n {
            for j in 0..i {
                a[(i, j)] = 0.0;
            }
            a[(i, i)] = a[(i, i)].abs() + 0.5;
        }
        let sr = sr_decompose_cos(&a, alpha).unwrap();
        prop_assert!(sr.s.matrix().is_upper_triangular(1e-12));
        let hat = triangular_equiangular(GramParams::new(n, alpha).unwrap()).unwrap();
        prop_assert!(max_abs_diff(sr.s.matrix(), hat.matrix()) <= 1e-9);
        prop_assert!(hat.matrix().gram().distance(&gram_matrix(GramParams::new(n, alpha).unwrap())) <= 1e-12);
    }

    #[test]
    fn polar_factor_is_orthogonal(n in 2usize..9, t in 0.0f64..1.0, seed in any::<u64>()) {
        let alpha = alpha_at(n, t, 0.05);
        let sr = sr_decompose_cos(&gaussian(&mut rng(seed), n, n), alpha).unwrap();
        let q = polar_orthogonal_factor(&sr.s).unwrap();
        let (_, root) = gram_principal_sqrt(GramParams::new(n, alpha).unwrap());
        prop_assert!(q.gram().distance_to_identity() <= 1e-10);
        prop_assert!(q.matmul(&root).distance(sr.s.matrix()) <= 1e-10);
    }

    #[test]
    fn obtuse_gram_eigenvalue(k in 1usize..8, frac in 0.01f64..0.99, seed in any::<u64>()) {
        let c = -frac / k as f64;
        let a = gaussian(&mut rng(seed), k + 1, k + 1);
        let sr = sr_decompose_cos(&a, c).unwrap();
        let (_, l) = sym_eig(&sr.s.matrix().gram()).unwrap();
        prop_assert!((l[0] - (1.0 + k as f64 * c)).abs() <= 1e-10);
        prop_assert!(l[0] > 0.0);
    }

    #[test]
    fn gram_closed_forms(n in 2usize..12, t in 0.0f64..1.0) {
        let p = GramParams::new(n, alpha_at(n, t, 1e-3)).unwrap();
        let g = gram_matrix(p);
        prop_assert!(g.matmul(&gram::gram_inverse(p).unwrap()).distance_to_identity() <= 1e-8);
        for v in gram::gram_sqrt_variants(p) {
            let m = v.matrix(n);
            prop_assert!(m.matmul(&m).distance(&g) <= 1e-10);
        }
        let (_, l) = sym_eig(&g).unwrap();
        prop_assert!((gram::gram_condition(p) - (l[n - 1] / l[0]).sqrt()).abs() <= 1e-6 * gram::gram_condition(p));
    }

    #[test]
    fn inverse_duality(n in 2usize..10, t in 0.0f64..1.0, seed in any::<u64>()) {
        let alpha = alpha_at(n, t, 0.05);
        let s = common::random_em(&mut rng(seed), n, alpha);
        let d = dual_params(s.gram_params().unwrap()).unwrap();
        let rows = fast_inverse(&s).unwrap().transpose().scale(1.0 / d.beta.sqrt());
        prop_assert!((certify_equiangular(&rows, 1e-8).unwrap() - d.alpha_prime).abs() <= 1e-8);
        // S S^T is similar to G_alpha
        let (_, l) = sym_eig(&s.matrix().matmul(&s.matrix().transpose())).unwrap();
        let (_, lg) = sym_eig(&gram_matrix(s.gram_params().unwrap())).unwrap();
        for (x, y) in l.iter().zip(&lg) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn sr_of_orthogonal(n in 2usize..9, alpha in 0.01f64..0.95, seed in any::<u64>()) {
        let (q, _) = qr(&gaussian(&mut rng(seed), n, n)).unwrap();
        let sr = sr_decompose_cos(&q, alpha).unwrap();
        let p = GramParams::new(n, alpha).unwrap();
        let d = dual_params(p).unwrap();
        let want = gram_matrix(GramParams::new(n, d.alpha_prime).unwrap()).scale(d.beta);
        prop_assert!(sr.r.matmul(&sr.r.transpose()).distance(&want) <= 1e-9);
    }

    #[test]
    fn dea_invariants(n in 2usize..9, t in 0.0f64..1.0, seed in any::<u64>()) {
        let alpha = alpha_at(n, t, 0.05);
        let a = gaussian(&mut rng(seed), n, n);
        let sr = sr_decompose_cos(&a, alpha).unwrap();
        let d = dea(&a, alpha).unwrap();
        let m = d.matrix();
        prop_assert!((certify_doubly(m, 1e-9).unwrap() - alpha).abs() <= 1e-9);
        // the reflection keeps the Gram matrix
        prop_assert!(m.gram().distance(&sr.s.matrix().gram()) <= 1e-12 * n as f64);
        // scaled to unit line sums
        let scaled = m.scale(1.0 / d.line_sum());
        for x in scaled.row_sums().iter().chain(&scaled.col_sums()) {
            prop_assert!((x - 1.0).abs() <= 1e-10);
        }
        prop_assert!(m.matmul(&m.transpose()).distance(&m.transpose().matmul(m)) <= 1e-10);
        // idempotent on its own output
        let again = dea(m, alpha).unwrap();
        prop_assert!(again.matrix().distance(m) <= 1e-9);
        prop_assert!(reflect_to_doubly(m, alpha).distance(m) <= 1e-9);
    }

    #[test]
    fn canonical_commuter_commutes(n in 2usize..8, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, seed in any::<u64>()) {
        let a1 = alpha_at(n, t1, 0.05);
        let a2 = alpha_at(n, t2, 0.05);
        let d = dea(&gaussian(&mut rng(seed), n, n), a2).unwrap();
        let c = canonical_commuter(GramParams::new(n, a1).unwrap());
        let m = d.matrix();
        prop_assert!(c.matmul(m).distance(&m.matmul(&c)) <= 1e-10);
    }

    #[test]
    fn dem_product(n in 2usize..8, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, seed in any::<u64>()) {
        let a1 = alpha_at(n, t1, 0.05);
        let a2 = alpha_at(n, t2, 0.05);
        let mut r = rng(seed);
        let s1 = dea(&gaussian(&mut r, n, n), a1).unwrap();
        let s2 = dea(&gaussian(&mut r, n, n), a2).unwrap();
        let p = s1.matrix().matmul(s2.matrix());
        match dem_product_params(a1, a2, n) {
            Ok((c, a)) => {
                let want = gram_matrix(GramParams::new(n, a).unwrap()).scale(c);
                prop_assert!(p.matmul(&p.transpose()).distance(&want) <= 1e-9);
                prop_assert!(p.matmul(&p.transpose()).distance(&p.transpose().matmul(&p)) <= 1e-9);
            }
            Err(e) => prop_assert!(matches!(e, Error::OutOfRange { .. }), "unexpected error {}", e),
        }
    }

    #[test]
    fn nonnegative_principal_root(n in 2usize..12, u in 0.0f64..1.0) {
        let lo = (n as f64 - 2.0) / (n as f64 - 1.0);
        let alpha = lo + u * (1.0 - 1e-6 - lo);
        let (_, root) = gram_principal_sqrt(GramParams::new(n, alpha).unwrap());
        prop_assert!(root.as_slice().iter().all(|&x| x >= -1e-15));
    }

    #[test]
    fn sdst_success_invariants(n in 2usize..6, alpha in 0.001f64..0.2, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (q, _) = qr(&gaussian(&mut r, n, n)).unwrap();
        let lambdas: Vec<f64> = (0..n).map(|i| (i as f64 + 1.0) * if i % 2 == 0 { 1.0 } else { -1.3 }).collect();
        let a = DenseMatrix::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * lambdas[k] * q[(j, k)]).sum());
        if let Ok(f) = sdst_factor(&a, alpha) {
            let trace: f64 = lambdas.iter().sum();
            prop_assert!((f.d.iter().sum::<f64>() - trace).abs() <= 1e-8 * trace.abs().max(1.0));
            prop_assert!(f.residual <= 1e-7 * a.frobenius_norm());
            prop_assert!((certify_equiangular(f.s.matrix(), 1e-8).unwrap() - alpha).abs() <= 1e-8);
        }
    }

    #[test]
    fn coefficient_polynomial_matches_determinant(n in 2usize..7, alpha in 0.01f64..0.9, seed in any::<u64>()) {
        // for positive d, lambda = spectrum of D G_alpha is real, and the
        // coefficient polynomial of lambda must be prod (x - d_i)
        let mut r = rng(seed);
        let d: Vec<f64> = (0..n).map(|_| 0.5 + 2.0 * r.random::<f64>()).collect();
        let g = gram_matrix(GramParams::new(n, alpha).unwrap());
        let sym = DenseMatrix::from_fn(n, n, |i, j| d[i].sqrt() * g[(i, j)] * d[j].sqrt());
        let (_, lambdas) = sym_eig(&sym).unwrap();
        let dg = DenseMatrix::from_fn(n, n, |i, j| d[i] * g[(i, j)]);
        let poly = build_poly(&lambdas, alpha, PolySource::Gn).unwrap();
        for k in 0..(2 * n + 1) {
            let x = -1.0 + 4.0 * k as f64 / (2 * n) as f64;
            let char_dg = determinant(&(&DenseMatrix::identity(n).scale(x) - &dg)).unwrap();
            let char_lambda: f64 = lambdas.iter().map(|l| x - l).product();
            let from_d: f64 = d.iter().map(|di| x - di).product();
            let g_x = eval_poly(&poly.coeffs, Complex64::new(x, 0.0)).re;
            let scale = 1.0 + from_d.abs();
            prop_assert!((char_dg - char_lambda).abs() <= 1e-6 * scale);
            prop_assert!((g_x - from_d).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn eigenbasis_round_trip(n in 2usize..6, alpha in 0.05f64..0.9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (q, _) = qr(&gaussian(&mut r, n, n)).unwrap();
        let hat = triangular_equiangular(GramParams::new(n, alpha).unwrap()).unwrap();
        let s = q.matmul(hat.matrix());
        let eig: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let a = DenseMatrix::from_fn(n, n, |i, j| s[(i, j)] * eig[j]).matmul(&generic_inverse(&s).unwrap());
        let (found, basis) = equiangular_eigenvectors(&a).unwrap().unwrap();
        prop_assert!((found - alpha).abs() <= 1e-6);
        let m = basis.matrix();
        for j in 0..n {
            let v = m.column(j);
            let av = a.matvec(&v);
            let lam: f64 = av.iter().zip(&v).map(|(x, y)| x * y).sum();
            let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-7 * a.frobenius_norm());
        }
    }

    #[test]
    fn schur_similarity_blocks(n in 2usize..7, alpha in 0.05f64..0.9, seed in any::<u64>()) {
        let a = gaussian(&mut rng(seed), n, n);
        let (s, t) = schur_equiangular(&a, alpha).unwrap();
        let back = s.matrix().matmul(&t).matmul(&generic_inverse(s.matrix()).unwrap());
        prop_assert!(back.distance(&a) <= 1e-8 * a.frobenius_norm().max(1.0));
    }
}

#[test]
fn prop_root_sweep() {
    for n in 2..=8 {
        for r in [1.0, -1.0, 2.0, -2.0] {
            for i in 1..=9 {
                let p = build_poly(&vec![r; n], i as f64 / 10.0, PolySource::Fn).unwrap();
                assert!(nonreal_root_certificate(&p).unwrap() >= 2, "n={n} r={r} alpha=0.{i}");
            }
        }
    }
}

#[test]
fn repeated_spectra_never_factor() {
    for n in 4..=6 {
        for k in 2..=(n - 2) {
            let mut lambdas = vec![1.0; k];
            lambdas.extend((0..(n - k)).map(|i| 2.0 + i as f64));
            for alpha in [0.05, 0.1, 0.2] {
                let a = DenseMatrix::from_diag(&lambdas);
                assert!(sdst_factor_unchecked(&a, alpha).is_err(), "{lambdas:?} at {alpha}");
                assert_eq!(
                    sdst_factor(&a, alpha).unwrap_err(),
                    Error::MultiplicityUnsupported { hint: MultiplicityHint::Impossible }
                );
            }
        }
    }
}

#[test]
fn simplex_frame_is_maximal() {
    for n in 1..=20 {
        // n + 2 unit vectors at -1/n would need a positive semidefinite Gram
        let p = n as f64;
        let g = DenseMatrix::from_fn(n + 2, n + 2, |i, j| if i == j { 1.0 } else { -1.0 / p });
        let (_, l) = sym_eig(&g).unwrap();
        assert!(l[0] < -1e-12);
        assert!((l[0] - (1.0 - (n as f64 + 1.0) / p)).abs() < 1e-12);
    }
}

#[test]
fn frame_bounds_are_optimal() {
    let mut r = rng(3);
    for n in 2..7 {
        let f = gaussian(&mut r, n, n + 3);
        let (c1, c2) = frame_bounds(&FrameSet::new(f.clone())).unwrap();
        let (q, _) = sym_eig(&f.matmul(&f.transpose())).unwrap();
        for (j, c, sign) in [(0, c1, 1.0), (n - 1, c2, -1.0)] {
            let x = q.column(j);
            let sum: f64 =
                (0..f.cols()).map(|k| f.column(k).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
            // tightening a bound by 1e-6 breaks the inequality at the extreme eigenvector
            let tighter = c + sign * 1e-6;
            assert!(if sign > 0.0 { sum < tighter } else { sum > tighter });
        }
    }
}

#[test]
fn frame_with_duplicate_column() {
    let mut r = rng(8);
    for n in 2..6 {
        let (q, _) = qr(&gaussian(&mut r, n, n)).unwrap();
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| q.column(j)).collect();
        let (b1, b2) = frame_bounds(&FrameSet::new(q.clone())).unwrap();
        cols.push(q.column(0));
        let (c1, c2) = frame_bounds(&FrameSet::new(DenseMatrix::from_columns(&cols).unwrap())).unwrap();
        assert!(c2 > b2 + 0.5 && c1 >= b1 - 1e-12);
    }
}

#[test]
fn welch_matches_simplex_coherence() {
    for n in 1..=40 {
        let s = simplex_frame(n).unwrap();
        let g = s.matrix().gram();
        assert!((g[(0, 1)].abs() - welch_alpha(n, n + 1).unwrap()).abs() <= 1e-14);
    }
}

#[test]
fn relate_to_sdst_consistency() {
    for n in 2..=10 {
        let (s, a) = relate_to_sdst(n).unwrap();
        let nf = n as f64;
        let mut want = vec![(nf + 1.0) / nf; n];
        want[0] = 1.0 / nf;
        assert!(a.distance(&DenseMatrix::from_diag(&want)) <= 1e-12);
        assert!((certify_equiangular(s.matrix(), 1e-12).unwrap() + 1.0 / nf).abs() <= 1e-12);
        let (r, t) = two_eigenvalue_factor(&a).unwrap();
        let rebuilt = t.matrix().matmul(&t.matrix().transpose()).scale(r);
        assert!(rebuilt.distance(&a) <= 1e-10, "n={n}");
        if n > 2 {
            // at n = 2 both eigenvalues are simple and the split is not unique
            assert!(
                (r - 1.0).abs() <= 1e-10 && (t.alpha() + 1.0 / nf).abs() <= 1e-10,
                "n={n} r={r} alpha={}",
                t.alpha()
            );
        }
    }
}

#[test]
fn generic_sr_output_is_not_doubly() {
    // seed 2024 is a concrete failing instance; the property holds for almost every seed
    let mut r = rng(2024);
    let a = gaussian(&mut r, 5, 5);
    let sr = sr_decompose_cos(&a, 0.4).unwrap();
    assert_eq!(certify_doubly(sr.s.matrix(), 1e-8), None);
}

#[test]
fn eigenvalue_bound_examples() {
    let mut r = rng(5);
    for _ in 0..20 {
        let s = common::random_em(&mut r, 8, 0.4);
        let (lo, hi) = eigenvalue_bounds(s.gram_params().unwrap());
        for pair in eqkit_core::linalg::eigenpairs(s.matrix()).unwrap() {
            let m = pair.value.norm();
            assert!(m >= lo - 1e-9 && m <= hi + 1e-9);
        }
    }
}

#[test]
fn sdst_alpha_bound_orders_spectra() {
    let wide = alpha_real_root_bound(&[1.0, 10.0, 100.0]);
    let narrow = alpha_real_root_bound(&[1.0, 1.1, 1.2]);
    println!("alpha bound: (1, 10, 100) -> {wide:.4}, (1, 1.1, 1.2) -> {narrow:.4}");
    assert!(wide > narrow && narrow > 0.0);
}

#[test]
fn fast_inverse_matches_generic_at_fifty() {
    let mut r = rng(50);
    let s = common::random_em(&mut r, 50, 0.3);
    let fast = fast_inverse(&s).unwrap();
    let slow = generic_inverse(s.matrix()).unwrap();
    assert!(fast.distance(&slow) <= 1e-9);
}
