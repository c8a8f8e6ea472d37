use pentalab::dynamics::*;
use pentalab::invariants::{invariant_tuple, swap_tuple, CoordVector, Parity};
use pentalab::invariants::{eval_E, eval_O};
use pentalab::projective::{Hom, ProjMap};
use pentalab::reconstruct::{build_polyline, build_polypoint, recip_determinant, TruncatedTable};
use pentalab::sample::{distinct_rationals, generic_coords, generic_polypoint, rng};
use pentalab::scalar::{q, random_q, Q};
use proptest::prelude::*;

fn random_map(r: &mut pentalab::sample::Rng) -> ProjMap {
    loop {
        let m = std::array::from_fn(|_| std::array::from_fn(|_| random_q(r, 6)));
        if let Ok(m) = ProjMap::new(m) {
            return m;
        }
    }
}

#[test]
fn alphas_swap_invariants() {
    let mut r = rng(21);
    for n in 3..=6 {
        for _ in 0..10 {
            let v = generic_coords(&mut r, n, 9).unwrap();
            let t = invariant_tuple(&v);
            for img in [alpha1(&v), alpha2(&v)] {
                let Ok(img) = img else { continue };
                assert_eq!(invariant_tuple(&img), swap_tuple(&t), "n = {n}");
            }
        }
    }
}

#[test]
fn geometric_and_coordinate_maps_agree_on_points() {
    let mut r = rng(22);
    for n in 3..=5 {
        let (_, p) = generic_polypoint(&mut r, n, 9).unwrap();
        let rep = coordinate_geometric_agreement(&p).unwrap();
        assert!(rep.alpha1 && rep.alpha2, "n = {n}: {rep:?}");
    }
}

#[test]
fn geometric_and_coordinate_maps_agree_on_lines() {
    let mut r = rng(23);
    for n in 3..=5 {
        let v = generic_coords(&mut r, n, 9).unwrap();
        let l = build_polyline(&v).unwrap();
        let rep = coordinate_geometric_agreement(&l).unwrap();
        assert!(rep.alpha1 && rep.alpha2, "n = {n}: {rep:?}");
    }
}

#[test]
fn deltas_are_involutions() {
    let mut r = rng(24);
    let (_, p) = generic_polypoint(&mut r, 5, 9).unwrap();
    let back1 = delta1(&delta1(&p).unwrap()).unwrap();
    let back2 = delta2(&delta2(&p).unwrap()).unwrap();
    for back in [back1, back2] {
        assert_eq!(back.kind(), p.kind());
        assert_eq!(back.class(), p.class());
        assert!(back.reps().iter().zip(p.reps()).all(|(a, b)| a.proj_eq(b)));
    }
    let d2 = delta2(&p).unwrap();
    assert_eq!((d2.kind(), d2.class()), (Kind::Lines, Class::One));
    let d1 = delta1(&p).unwrap();
    assert_eq!((d1.kind(), d1.class()), (Kind::Lines, Class::Three));
}

#[test]
fn dual_swaps_roles() {
    let mut r = rng(25);
    let (v, p) = generic_polypoint(&mut r, 4, 9).unwrap();
    let d = dual(&p).unwrap();
    assert_eq!(extract_invariants(&d).unwrap(), v);
    assert_eq!(d.class(), Class::Three);
}

#[test]
fn extraction_is_projectively_invariant() {
    let mut r = rng(26);
    for n in 3..=5 {
        let (v, p) = generic_polypoint(&mut r, n, 9).unwrap();
        let s = random_map(&mut r);
        assert_eq!(extract_invariants(&p.transformed(&s)).unwrap(), v);
    }
}

#[test]
fn conic_polygons() {
    let mut r = rng(27);
    for n in 4..=7 {
        for _ in 0..3 {
            let ts = distinct_rationals(&mut r, n, 12);
            let s = random_map(&mut r);
            let p = conic_polygon(&ts, Some(&s)).unwrap();
            let Ok(v) = extract_invariants(&p) else { continue };
            assert_eq!(conic_identities(&v), (true, true));
            assert_eq!(eval_O(&v, n).unwrap(), eval_E(&v, n).unwrap());
            assert_eq!(closed_relations(&v).unwrap(), (true, true));
        }
    }
}

#[test]
fn closed_polygons_satisfy_trivial_monodromy_relation() {
    let mut r = rng(28);
    for n in 4..=7 {
        let reps: Vec<Hom> = (0..n).map(|_| Hom::new([random_q(&mut r, 9), random_q(&mut r, 9), q(1)]).unwrap()).collect();
        let p = TwistedPolygon::closed(Kind::Points, Class::One, reps).unwrap();
        let Ok(v) = extract_invariants(&p) else { continue };
        assert_eq!(closed_relations(&v).unwrap(), (true, true));
        // any five points lie on a conic
        if n >= 6 {
            assert_eq!(conic_identities(&v), (false, false));
        }
    }
}

#[test]
fn generic_points_fail_conic_identities() {
    let mut r = rng(29);
    let v = generic_coords(&mut r, 6, 9).unwrap();
    assert_eq!(conic_identities(&v), (false, false));
}

#[test]
fn degenerate_polygons() {
    // alternate between the x-axis and the line y = 1
    let reps: Vec<Hom> = (0..8)
        .map(|i| Hom::new([q(i * i + 1), q(i % 2), q(1)]).unwrap())
        .collect();
    assert!(alternating_classes_degenerate(&reps));
    let p = TwistedPolygon::closed(Kind::Points, Class::One, reps).unwrap();
    assert!(is_degenerate(&p));
    let mut r = rng(30);
    let reps: Vec<Hom> = (0..8).map(|_| Hom::new([random_q(&mut r, 9), random_q(&mut r, 9), q(1)]).unwrap()).collect();
    assert!(!is_degenerate(&TwistedPolygon::closed(Kind::Points, Class::One, reps).unwrap()));
}

#[test]
fn recip_determinant_on_reconstruction() {
    let mut r = rng(31);
    let v = generic_coords(&mut r, 5, 9).unwrap();
    let t = TruncatedTable::periodic(&v, 36).unwrap();
    assert_eq!(recip_determinant(&t).unwrap(), v.get(1) * (q(1) - v.get(2) * v.get(3)));
}

#[test]
fn pentagram_step_matches_vertex_rule() {
    let mut r = rng(32);
    let reps: Vec<Hom> = (0..7).map(|_| Hom::new([random_q(&mut r, 9), random_q(&mut r, 9), q(1)]).unwrap()).collect();
    let p = TwistedPolygon::closed(Kind::Points, Class::One, reps.clone()).unwrap();
    let step = pentagram_step(&p).unwrap();
    let direct = pentagram_vertices(&reps).unwrap();
    // the step's first vertex sits between the original first and second
    assert!(step.reps().iter().zip(&direct).all(|(a, b)| a.proj_eq(b)));
}

#[test]
fn polypoint_extraction_examples() {
    let v = CoordVector::new((1..=8).map(|i| q(i + 1)).collect()).unwrap();
    let p = build_polypoint(&v).unwrap();
    assert_eq!(extract_invariants(&p).unwrap(), v);
    let _: Q = eval_O(&v, 4).unwrap();
    let _ = Parity::Odd;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alphas_are_involutions(seed in any::<u64>(), n in 3usize..=7) {
        let mut r = rng(seed);
        let v = generic_coords(&mut r, n, 9).unwrap();
        if let Ok(w) = alpha1(&v) {
            if let Ok(back) = alpha1(&w) { prop_assert_eq!(back, v.clone()); }
        }
        if let Ok(w) = alpha2(&v) {
            if let Ok(back) = alpha2(&w) { prop_assert_eq!(back, v); }
        }
    }

    #[test]
    fn invariance_under_alphas(seed in any::<u64>(), n in 3usize..=6) {
        let mut r = rng(seed);
        let v = generic_coords(&mut r, n, 9).unwrap();
        if let Ok(w) = alpha1(&v) {
            prop_assert_eq!(invariant_tuple(&w), swap_tuple(&invariant_tuple(&v)));
        }
    }
}
