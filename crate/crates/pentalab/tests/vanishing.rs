use num_complex::Complex64;
use pentalab::invariants::{CoordVector, Parity};
use pentalab::sample::{generic_coords, rng};
use pentalab::scalar::qr;
use pentalab::vanishing::*;
use proptest::prelude::*;

const ODD: [usize; 11] = [5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25];

#[test]
fn spec_values() {
    let cases = [(5, 1, -1.6180), (7, 1, -2.2470), (7, 2, 2.2470)];
    for (n, v, want) in cases {
        let got = lambda_direct(n, v, Reading::Gap).unwrap();
        assert!((got - Complex64::new(want, 0.0)).norm() < 1e-4, "n={n} v={v} got {got}");
    }
    let r = vanishing_check(5).unwrap();
    assert!((r.rows[0].margin - 2.618).abs() < 1e-3);
}

#[test]
fn rejects_bad_arguments() {
    for (n, v) in [(4, 1), (6, 1), (3, 1), (7, 0), (7, 3), (9, 4)] {
        assert!(lambda_direct(n, v, Reading::Gap).is_err(), "n={n} v={v}");
        assert!(lambda_via_measures(n, v).is_err(), "n={n} v={v}");
    }
}

#[test]
fn no_lambda_equals_v() {
    for n in ODD {
        let r = vanishing_check(n).unwrap();
        assert_eq!(r.rows.len(), (n - 3) / 2);
        for row in &r.rows {
            assert!(row.margin > TOL, "n={n} v={}", row.v);
            assert!(row.delta < TOL, "n={n} v={} delta {}", row.v, row.delta);
            assert!(row.im.abs() < 1e-9);
        }
        assert!(r.passes());
    }
}

#[test]
fn paths_follow_the_quarter_split() {
    for n in ODD {
        for v in 1..=(n - 3) / 2 {
            let (_, path) = lambda_via_measures(n, v).unwrap();
            let want = if 4 * v < n { MeasurePath::SparseComplement } else { MeasurePath::OuterPairs };
            assert_eq!(path, want);
        }
    }
}

#[test]
fn compression_matches_gap_sequences() {
    for n in [5, 7, 9, 11, 13] {
        for v in 1..=(n - 3) / 2 {
            assert!(compression_is_bijective(n, v, Reading::Gap).unwrap(), "n={n} v={v}");
        }
    }
    // without the gap the counts differ as soon as v ≥ 2
    assert!(!compression_is_bijective(7, 2, Reading::Printed).unwrap());
}

#[test]
fn full_circle_sums_vanish() {
    for n in [5, 7, 9] {
        for j in 1..n {
            assert!(theta(n, j).eval().norm() < 1e-9, "n={n} j={j}");
        }
        assert!((theta(n, n).eval() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn sparse_complement_is_positive() {
    for n in ODD {
        assert!(sparse_complement_positive(n), "n={n}");
    }
}

#[test]
fn sparse_complement_table_counts_measures() {
    for n in [9, 13, 17] {
        let v = (n - 1) / 4;
        let t = sparse_complement_table(n, v);
        for (a, row) in t.iter().enumerate() {
            assert_eq!(row.len(), 2 * a + 2);
            for (w, &p) in row.iter().enumerate() {
                let s = psi_sparse(n, &arc_a_complement(a), w).eval();
                assert!((s - Complex64::new(p, 0.0)).norm() < 1e-9, "n={n} a={a} w={w}");
            }
        }
    }
}

#[test]
fn outer_recursion_matches_enumeration() {
    for n in [5, 7, 9, 11] {
        for w in (2..n).step_by(2) {
            for k in 0..=4 {
                for ko in 0..=k {
                    let a = psi_outer(n, w, ko, k);
                    let b = psi_outer_enumerated(n, w, ko, k);
                    assert!((a - b).norm() < 1e-9, "n={n} w={w} k'={ko} k={k}");
                }
            }
        }
    }
}

#[test]
fn outer_sign_alternates_where_used() {
    let mut total = 0;
    for n in ODD {
        for s in outer_sign_samples(n) {
            assert!(s.ok, "{s:?}");
            total += 1;
        }
    }
    assert!(total > 100);
}

#[test]
fn outer_sign_fails_beyond_the_used_range() {
    // on a single conjugate pair the complete sums are periodic in k
    let v = psi_outer(5, 2, 5, 5);
    assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9);
}

#[test]
fn pair_recursion_sign() {
    for n in [5, 7, 9, 11] {
        for k in 2..8 {
            assert!(pair_recursion_residuals(n, k).1 < 1e-9, "n={n} k={k}");
        }
        // h_2 = e1² - e2 while the other sign gives e1² + e2, and |e2| = 1
        assert!((pair_recursion_residuals(n, 2).0 - 2.0).abs() < 1e-9);
    }
}

#[test]
fn gradient_is_a_power_vector() {
    for n in [5, 7, 9, 11] {
        for k in 1..=(n - 1) / 2 {
            let (mu, dev) = gradient_power_deviation(n, k, k as i64 - 1);
            assert!(dev < 1e-9, "n={n} k={k}");
            let lambda = if k == 1 { Complex64::new(1.0, 0.0) } else { lambda_direct(n, k - 1, Reading::Gap).unwrap() };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((mu - lambda * sign).norm() < 1e-9, "n={n} k={k}");
            assert!(mu.norm() > 1e-6);
            if k > 1 {
                assert!(gradient_power_deviation(n, k, k as i64).1 > 1e-6);
            }
        }
    }
}

#[test]
fn jacobian_has_full_rank() {
    let mut r = rng(11);
    for n in 3..=8 {
        let rep = independence_check(n, &mut r, 4).unwrap();
        assert_eq!(rep.expected, 2 * (n / 2) + 2);
        assert!(rep.passes(), "{rep:?}");
    }
    let mut r = rng(2);
    assert_eq!(independence_check(5, &mut r, 4).unwrap().rank, 6);
    assert_eq!(independence_check(8, &mut r, 4).unwrap().rank, 10);
}

#[test]
fn jacobian_is_deficient_at_a_constant_point() {
    let v = CoordVector::constant(6, qr(1, 3));
    assert!(rank(&jacobian(&v)) < 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homogeneity(seed in 0u64..10_000, n in 3usize..8, tn in 1i64..6, td in 1i64..6, kk in 1usize..4) {
        let mut r = rng(seed);
        let v = generic_coords(&mut r, n, 9).unwrap();
        let k = kk.min(n / 2).max(1);
        let t = qr(tn, td);
        for j in 1..=2 * n {
            for p in [Parity::Odd, Parity::Even] {
                prop_assert!(homogeneity_holds(&v, k, j, &t, p).unwrap());
            }
        }
    }
}
