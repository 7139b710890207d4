use std::sync::Arc;

use super::*;
use crate::complexes::builtin_complex;
use crate::groups::{builtin_group, GroupMorphism};
use crate::h1::coboundary_transform;
use crate::h2::AbelianH2Context;
use crate::testsupport::{builtin_extension_suite, central_extension_suite};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn budget() -> Budget {
    Budget::default()
}

fn z2_in_z4() -> ExtensionData {
    let z4 = builtin_group("Z4").unwrap();
    ExtensionData::from_normal_subgroup(&z4, &[0, 2]).unwrap()
}

fn z3_in_s3() -> ExtensionData {
    let s3 = builtin_group("S3").unwrap();
    let a3: Vec<Elem> = s3
        .elements()
        .filter(|&a| s3.element_order(a) != 2)
        .collect();
    ExtensionData::from_normal_subgroup(&s3, &a3).unwrap()
}

fn split_z2() -> ExtensionData {
    let v4 = builtin_group("Z2xZ2").unwrap();
    ExtensionData::from_normal_subgroup(&v4, &[0, 1]).unwrap()
}

fn generator_cocycle(k: &Arc<Nerve>, ext: &ExtensionData) -> OneCochain {
    let classes = h1_classes(k, ext.q(), &budget()).unwrap();
    assert_eq!(classes.len(), 2);
    classes.reps()[1].clone()
}

#[test]
fn delta_of_the_trivial_class_is_trivial() {
    for ext in builtin_extension_suite() {
        for name in ["circle3", "sphere2_tet", "rp2_6"] {
            let k = builtin_complex(name).unwrap();
            let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
            let q = OneCochain::trivial(&k, ext.q());
            let (class, _) = delta(&q, &ext, &ctx).unwrap();
            assert!(class.is_trivial(), "{name}");
        }
    }
}

#[test]
fn rp2_generator_has_nontrivial_delta_and_no_lifts() {
    let ext = z2_in_z4();
    let k = builtin_complex("rp2_6").unwrap();
    let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
    let q = generator_cocycle(&k, &ext);
    let (class, _) = delta(&q, &ext, &ctx).unwrap();
    assert!(!class.is_trivial());
    let lifts = find_lifts(&q, &ext, &budget(), LiftGranularity::Class).unwrap();
    assert!(lifts.classes.is_empty());
}

#[test]
fn all_torus_classes_lift_with_trivial_delta() {
    let ext = z2_in_z4();
    let k = builtin_complex("torus7").unwrap();
    let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
    let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
    assert_eq!(classes.len(), 4);
    for rep in classes.reps() {
        let (class, _) = delta(rep, &ext, &ctx).unwrap();
        assert!(class.is_trivial());
        let lifts = find_lifts(rep, &ext, &budget(), LiftGranularity::Class).unwrap();
        assert!(!lifts.classes.is_empty());
    }
}

#[test]
fn delta_is_a_class_function() {
    let mut rng = StdRng::seed_from_u64(2024);
    for ext in builtin_extension_suite() {
        for name in ["circle3", "rp2_6"] {
            let k = builtin_complex(name).unwrap();
            let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
            let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
            for rep in classes.reps() {
                let (base, _) = delta(rep, &ext, &ctx).unwrap();
                for _ in 0..25 {
                    let v: Vec<Elem> = (0..k.vertex_count())
                        .map(|_| rng.random_range(0..ext.q().order() as Elem))
                        .collect();
                    let moved = coboundary_transform(rep, &v);
                    let (other, _) = delta(&moved, &ext, &ctx).unwrap();
                    assert_eq!(base, other, "{name}");
                }
            }
        }
    }
}

#[test]
fn split_extension_gives_two_lift_classes_for_the_trivial_class() {
    let ext = split_z2();
    let k = builtin_complex("circle3").unwrap();
    let q = OneCochain::trivial(&k, ext.q());
    let lifts = find_lifts(&q, &ext, &budget(), LiftGranularity::Class).unwrap();
    assert_eq!(lifts.classes.len(), 2);
}

#[test]
fn lift_round_trip_contains_the_original_class() {
    for ext in builtin_extension_suite() {
        let k = builtin_complex("circle3").unwrap();
        let n_classes = h1_classes(&k, ext.n(), &budget()).unwrap();
        for n_rep in n_classes.reps() {
            let q = pushforward(ext.p(), n_rep).unwrap();
            let lifts = find_lifts(&q, &ext, &budget(), LiftGranularity::Class).unwrap();
            let target = canonical_form(n_rep).unwrap();
            assert!(
                lifts.classes.iter().any(|c| c.values() == target.values()),
                "lift list must contain the original class"
            );
        }
    }
}

#[test]
fn cocycle_granularity_returns_raw_lifts() {
    let ext = z2_in_z4();
    let k = builtin_complex("circle3").unwrap();
    let q = OneCochain::trivial(&k, ext.q());
    let lifts = find_lifts(&q, &ext, &budget(), LiftGranularity::Cocycle).unwrap();
    let raw = lifts.cocycles.unwrap();
    // Fibers of size 2 over three edges, no triangles: 8 exact lifts.
    assert_eq!(raw.len(), 8);
    assert_eq!(lifts.stats.solutions, 8);
}

#[test]
fn exactness_on_rp2_and_torus_for_the_central_extension() {
    let ext = z2_in_z4();

    let k = builtin_complex("rp2_6").unwrap();
    let report = check_exactness(&k, &ext, &budget()).unwrap();
    assert!(report.a_p_after_i_trivial);
    assert!(report.b_weak_inclusion);
    assert!(report.central);
    assert_eq!(report.c_exact, Some(true));
    assert_eq!(report.ker_delta, vec![0]);
    assert_eq!(report.im_p_star, vec![0]);
    assert_eq!(report.q_class_count, 2);

    let k = builtin_complex("torus7").unwrap();
    let report = check_exactness(&k, &ext, &budget()).unwrap();
    assert_eq!(report.c_exact, Some(true));
    assert_eq!(report.ker_delta, vec![0, 1, 2, 3]);
    assert_eq!(report.im_p_star, vec![0, 1, 2, 3]);
}

#[test]
fn exactness_on_the_circle_for_the_quaternion_center() {
    let q8 = builtin_group("Q8").unwrap();
    let ext = ExtensionData::from_normal_subgroup(&q8, &q8.center()).unwrap();
    let k = builtin_complex("circle3").unwrap();
    let report = check_exactness(&k, &ext, &budget()).unwrap();
    assert!(report.central);
    assert_eq!(report.c_exact, Some(true));
    assert_eq!(report.q_class_count, 4);
    assert_eq!(report.ker_delta.len(), 4);
}

#[test]
fn exactness_skips_the_central_assertion_for_noncentral_g() {
    let ext = z3_in_s3();
    let k = builtin_complex("circle3").unwrap();
    let report = check_exactness(&k, &ext, &budget()).unwrap();
    assert!(report.a_p_after_i_trivial);
    assert!(report.b_weak_inclusion);
    assert!(!report.central);
    assert_eq!(report.c_exact, None);
    assert!(report.passed());
}

#[test]
fn weak_inclusion_holds_on_every_builtin_instance() {
    for ext in builtin_extension_suite() {
        for name in ["circle3", "sphere2_tet", "rp2_6"] {
            let k = builtin_complex(name).unwrap();
            let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
            let n_classes = h1_classes(&k, ext.n(), &budget()).unwrap();
            for rep in n_classes.reps() {
                let q = pushforward(ext.p(), rep).unwrap();
                let (class, _) = delta(&q, &ext, &ctx).unwrap();
                assert!(class.is_trivial(), "delta(p_* n) must vanish on {name}");
            }
        }
    }
}

#[test]
fn square_commutes_for_every_cocycle_on_the_circle() {
    let ext = z3_in_s3();
    let k = builtin_complex("circle3").unwrap();
    let report = check_square(&k, &ext, &budget(), true).unwrap();
    assert_eq!(report.checked, 216, "all 6^3 cocycles");
    assert!(report.passed());
}

#[test]
fn square_commutes_on_the_sphere() {
    let ext = z2_in_z4();
    let k = builtin_complex("sphere2_tet").unwrap();
    let report = check_square(&k, &ext, &budget(), true).unwrap();
    assert!(report.passed());
    assert_eq!(report.checked, 64, "coboundaries only on a sphere: 4^4/4");
}

#[test]
fn gerbe_for_the_trivial_class_collapses() {
    for ext in builtin_extension_suite() {
        let k = builtin_complex("circle3").unwrap();
        let q = OneCochain::trivial(&k, ext.q());
        let report = gerbe_class(&q, &ext, &budget()).unwrap();
        assert!(report.collapsed);
        assert!(report.agreement);
    }
}

#[test]
fn rp2_generator_gerbe_does_not_collapse() {
    let ext = z2_in_z4();
    let k = builtin_complex("rp2_6").unwrap();
    let q = generator_cocycle(&k, &ext);
    let report = gerbe_class(&q, &ext, &budget()).unwrap();
    assert!(!report.collapsed);
    assert_eq!(report.lift_class_count, 0);
    assert!(report.agreement);
}

#[test]
fn torus_gerbes_collapse_with_gauge_witnesses() {
    let ext = z2_in_z4();
    let k = builtin_complex("torus7").unwrap();
    let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
    let (aut_xm, aut) = crate::groups::adjoint_module(ext.g(), budget().aut_order_cap).unwrap();
    for rep in classes.reps() {
        let report = gerbe_class(rep, &ext, &budget()).unwrap();
        assert!(report.collapsed);
        assert!(report.agreement);
        // gamma_* of any lift is itself a collapsing cocycle, by the
        // commuting square.
        let lifts = find_lifts(rep, &ext, &budget(), LiftGranularity::Class).unwrap();
        let gamma = crate::h1::gamma_star(&lifts.classes[0], ext.xm(), &aut).unwrap();
        let collapsed_pair = crate::h2::d_star(&gamma, &aut_xm).unwrap();
        assert!(
            crate::h2::pairs_equivalent(&collapsed_pair, &report.pair, &budget())
                .unwrap()
                .is_some()
        );
    }
}

#[test]
fn split_extension_breaks_duality_but_not_gauge() {
    let ext = split_z2();
    let k = builtin_complex("circle3").unwrap();
    let q = OneCochain::trivial(&k, ext.q());
    let g = classify_gauge_lifts(&q, &ext, &budget()).unwrap();
    assert_eq!(g.lifts.len(), 2);
    assert_eq!(g.groups.len(), 1);
    assert!(g.duality_breaking);
    assert!(!g.gauge_breaking);
}

#[test]
fn s3_extension_trivial_class_has_two_lifts_one_gauge_class() {
    let ext = z3_in_s3();
    let k = builtin_complex("circle3").unwrap();
    let q = OneCochain::trivial(&k, ext.q());
    let g = classify_gauge_lifts(&q, &ext, &budget()).unwrap();
    // Lifts land in ker p = A3: trivial and rotation classes.
    assert_eq!(g.lifts.len(), 2);
    assert_eq!(
        g.groups.len(),
        1,
        "conjugation by A3 on abelian Z3 is trivial"
    );
    assert!(g.duality_breaking);
    assert!(!g.gauge_breaking);
}

#[test]
fn empty_lift_set_raises_no_flags() {
    let ext = z2_in_z4();
    let k = builtin_complex("rp2_6").unwrap();
    let q = generator_cocycle(&k, &ext);
    let g = classify_gauge_lifts(&q, &ext, &budget()).unwrap();
    assert!(g.lifts.is_empty());
    assert!(g.groups.is_empty());
    assert!(!g.duality_breaking);
    assert!(!g.gauge_breaking);
}

/// First 2-cocycle over G' with a nontrivial class, in lexicographic
/// order; test-side construction for the realization probes.
fn nontrivial_two_cocycle(k: &Arc<Nerve>, ext: &ExtensionData) -> TwoCochain {
    let ctx = AbelianH2Context::new(k, ext.g_prime()).unwrap();
    let order = ext.g_prime().order() as Elem;
    let t = k.triangles().len();
    let mut values = vec![0 as Elem; t];
    loop {
        let z = TwoCochain::from_values(k, ext.g_prime(), values.clone()).unwrap();
        if ctx.is_cocycle(&z).unwrap() && !ctx.class_of(&z).unwrap().is_trivial() {
            return z;
        }
        let mut pos = t;
        loop {
            if pos == 0 {
                panic!("no nontrivial class exists");
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < order {
                break;
            }
            values[pos] = 0;
        }
    }
}

#[test]
fn realization_of_the_trivial_cocycle_is_trivial() {
    let ext = z2_in_z4();
    let k = builtin_complex("sphere2_tet").unwrap();
    let z = TwoCochain::trivial(&k, ext.g_prime());
    let u = solve_coboundary_realization(&z, &ext, &budget())
        .unwrap()
        .unwrap();
    assert!(u.is_trivial());
}

#[test]
fn rp2_nontrivial_class_is_realizable() {
    let ext = z2_in_z4();
    let k = builtin_complex("rp2_6").unwrap();
    let z = nontrivial_two_cocycle(&k, &ext);
    let u = solve_coboundary_realization(&z, &ext, &budget()).unwrap();
    assert!(u.is_some(), "the nu image of the generator realizes it");
}

#[test]
fn sphere_nontrivial_class_is_not_realizable() {
    // H1(S2, Q) is trivial, so the image of the obstruction map contains
    // only the trivial class; the exhaustive search must come back empty.
    let ext = z2_in_z4();
    let k = builtin_complex("sphere2_tet").unwrap();
    let z = nontrivial_two_cocycle(&k, &ext);
    let u = solve_coboundary_realization(&z, &ext, &budget()).unwrap();
    assert!(u.is_none());
}

#[test]
fn chern_is_consistent_with_lifts_on_the_split_instance() {
    let ext = split_z2();
    let k = builtin_complex("circle3").unwrap();
    let n = ext.n();
    let z2 = builtin_group("Z2").unwrap();
    // A morphism N -> Z2 killing i(G) = {e, a}: send a to 0 and b to 1.
    let a = n.element_by_name("a").unwrap();
    let b = n.element_by_name("b").unwrap();
    let kill =
        GroupMorphism::from_generator_images(Arc::clone(n), Arc::clone(&z2), &[(a, 0), (b, 1)])
            .unwrap();
    // The induced morphism on Q = N / i(G).
    let chi_images: Vec<Elem> = ext
        .q()
        .elements()
        .map(|y| kill.apply(ext.section(y)))
        .collect();
    let chi = GroupMorphism::new(Arc::clone(ext.q()), Arc::clone(&z2), chi_images).unwrap();
    let n_classes = h1_classes(&k, n, &budget()).unwrap();
    for rep in n_classes.reps() {
        let q = pushforward(ext.p(), rep).unwrap();
        let via_chern = crate::h1::chern(&q, &chi).unwrap();
        let via_lift = canonical_form(&pushforward(&kill, rep).unwrap()).unwrap();
        assert_eq!(via_chern.values(), via_lift.values());
    }
}

#[test]
fn obstruction_report_is_internally_consistent() {
    for ext in central_extension_suite() {
        for name in ["circle3", "rp2_6"] {
            let k = builtin_complex(name).unwrap();
            let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
            for rep in classes.reps() {
                let report = obstruction_report(rep, &ext, &budget()).unwrap();
                assert!(report.weak_inclusion_ok);
                assert!(report.gerbe_agreement);
                assert_eq!(report.duality_breaking, report.lifts.len() >= 2);
                if !report.lifts.is_empty() {
                    assert!(report.delta.is_trivial());
                }
            }
        }
    }
}

#[test]
fn lift_search_requires_a_cocycle() {
    let ext = z2_in_z4();
    let k = builtin_complex("sphere2_tet").unwrap();
    let mut values = vec![0; k.edges().len()];
    values[0] = 1;
    let not_cocycle = OneCochain::from_values(&k, ext.q(), values).unwrap();
    assert!(matches!(
        find_lifts(&not_cocycle, &ext, &budget(), LiftGranularity::Class),
        Err(Error::NotCocycle(_))
    ));
}

#[test]
fn realization_rejects_non_cocycles_on_complexes_with_tetrahedra() {
    let ext = z2_in_z4();
    let k = builtin_complex("sphere3_pent").unwrap();
    let mut values = vec![0; k.triangles().len()];
    values[0] = 1;
    let z = TwoCochain::from_values(&k, ext.g_prime(), values).unwrap();
    assert!(matches!(
        solve_coboundary_realization(&z, &ext, &budget()),
        Err(Error::NotCocycle(_))
    ));
}

#[test]
fn realization_searches_exhaustively_on_the_sphere_with_tetrahedra() {
    // H2(S3, Z2) is trivial, so every 2-cocycle over G' bounds and is
    // realizable by the trivial route.
    let ext = z2_in_z4();
    let k = builtin_complex("sphere3_pent").unwrap();
    let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
    assert_eq!(ctx.structure().invariant_factors, Vec::<u64>::new());
    let z = TwoCochain::trivial(&k, ext.g_prime());
    let u = solve_coboundary_realization(&z, &ext, &budget()).unwrap();
    assert!(u.is_some());
}
