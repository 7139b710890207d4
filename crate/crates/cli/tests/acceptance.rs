//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line and enforcing its time limit. Run with `--nocapture` to see the
//! lines as they complete:
//!
//! ```text
//! cargo test -p cocycle-cli --test acceptance -- --nocapture
//! ```

use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cocycle_core::{
    abelian_cohomology, builtin_complex, builtin_group, check_exactness, check_square,
    classify_gauge_lifts, coboundary_transform, delta, find_lifts, gerbe_class, h1_classes,
    nonabelian_h2_classes, nu, pairs_equivalent, pushforward, AbelianCoeff, AbelianH2Context,
    Budget, CrossedModule, Elem, ExtensionData, FiniteGroup, GroupAction, GroupMorphism,
    LiftGranularity, Nerve, OneCochain,
};

fn budget() -> Budget {
    Budget::default()
}

struct Criterion {
    number: u32,
    summary: &'static str,
    limit: Duration,
    started: Instant,
}

impl Criterion {
    fn start(number: u32, summary: &'static str, limit_secs: u64) -> Self {
        Criterion {
            number,
            summary,
            limit: Duration::from_secs(limit_secs),
            started: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.started.elapsed();
        let within = elapsed <= self.limit;
        println!(
            "acceptance: criterion {} ({}): {} in {:.2?} (limit {:?})",
            self.number,
            self.summary,
            if within { "PASS" } else { "FAIL (over time)" },
            elapsed,
            self.limit,
        );
        assert!(
            within,
            "criterion {} exceeded its time limit: {elapsed:.2?} > {:?}",
            self.number, self.limit
        );
    }
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

fn center_q8() -> ExtensionData {
    let q8 = builtin_group("Q8").unwrap();
    ExtensionData::from_normal_subgroup(&q8, &q8.center()).unwrap()
}

fn split_z2() -> ExtensionData {
    let v4 = builtin_group("Z2xZ2").unwrap();
    ExtensionData::from_normal_subgroup(&v4, &[0, 1]).unwrap()
}

#[test]
fn criterion_1_abelian_oracle_matches_the_known_groups() {
    let c = Criterion::start(1, "abelian oracle: spheres with Z, Z_d", 1);
    let s2 = builtin_complex("sphere2_tet").unwrap();
    for d in [2u64, 3, 4, 5] {
        let h = abelian_cohomology(&s2, AbelianCoeff::Mod(d), 2).unwrap();
        assert_eq!(h.count, Some(d), "H2(S2, Z_{d}) has d classes");
        assert_eq!(h.invariant_factors, vec![d], "single factor Z_{d}");
    }
    let h = abelian_cohomology(&s2, AbelianCoeff::Int, 2).unwrap();
    assert_eq!(h.invariant_factors, vec![0], "H2(S2, Z) is one free factor");
    let s3 = builtin_complex("sphere3_pent").unwrap();
    let h = abelian_cohomology(&s3, AbelianCoeff::Int, 3).unwrap();
    assert_eq!(h.invariant_factors, vec![0], "H3(S3, Z) is one free factor");
    for n in [2u64, 3, 4, 5] {
        let h = abelian_cohomology(&s3, AbelianCoeff::Mod(n), 2).unwrap();
        assert_eq!(h.count, Some(1), "H2(S3, Z_{n}) is trivial");
    }
    c.finish();
}

/// |Hom(pi_1, G) / conjugation| computed from a hard-coded presentation;
/// the independent oracle for criterion 2.
enum Pi1 {
    Trivial,
    FreeCyclic,
    FreeAbelianRank2,
    CyclicOrder2,
}

impl Pi1 {
    fn class_count(&self, g: &FiniteGroup) -> usize {
        let homs: Vec<Vec<Elem>> = match self {
            Pi1::Trivial => vec![vec![]],
            Pi1::FreeCyclic => g.elements().map(|a| vec![a]).collect(),
            Pi1::FreeAbelianRank2 => {
                let mut out = Vec::new();
                for a in g.elements() {
                    for b in g.elements() {
                        if g.mul(a, b) == g.mul(b, a) {
                            out.push(vec![a, b]);
                        }
                    }
                }
                out
            }
            Pi1::CyclicOrder2 => g
                .elements()
                .filter(|&a| g.mul(a, a) == 0)
                .map(|a| vec![a])
                .collect(),
        };
        let mut canonical: Vec<Vec<Elem>> = homs
            .iter()
            .map(|hom| {
                g.elements()
                    .map(|x| hom.iter().map(|&h| g.conjugate(h, x)).collect::<Vec<_>>())
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        canonical.sort();
        canonical.dedup();
        canonical.len()
    }
}

#[test]
fn criterion_2_h1_matches_the_presentation_oracle() {
    let c = Criterion::start(2, "H1 vs pi_1 presentation oracle", 30);
    let instances = [
        ("circle3", Pi1::FreeCyclic),
        ("sphere2_tet", Pi1::Trivial),
        ("torus7", Pi1::FreeAbelianRank2),
        ("rp2_6", Pi1::CyclicOrder2),
        ("sphere3_pent", Pi1::Trivial),
        ("disk3", Pi1::Trivial),
    ];
    for (name, pi1) in &instances {
        let k = builtin_complex(name).unwrap();
        for group_name in ["Z2", "Z3", "S3"] {
            let g = builtin_group(group_name).unwrap();
            let classes = h1_classes(&k, &g, &budget()).unwrap();
            assert_eq!(
                classes.len(),
                pi1.class_count(&g),
                "H1({name}, {group_name})"
            );
        }
    }
    c.finish();
}

fn generator_class(k: &Arc<Nerve>, ext: &ExtensionData) -> OneCochain {
    let classes = h1_classes(k, ext.q(), &budget()).unwrap();
    assert_eq!(classes.len(), 2);
    classes.reps()[1].clone()
}

#[test]
fn criterion_3_bockstein_obstruction_for_z2_in_z4() {
    let c = Criterion::start(3, "delta and lifts for Z2->Z4->Z2", 60);
    let ext = z2_in_z4();

    let rp2 = builtin_complex("rp2_6").unwrap();
    let ctx = AbelianH2Context::new(&rp2, ext.g_prime()).unwrap();
    let generator = generator_class(&rp2, &ext);
    let (class, _) = delta(&generator, &ext, &ctx).unwrap();
    assert!(!class.is_trivial(), "generator class has nontrivial delta");
    let lifts = find_lifts(&generator, &ext, &budget(), LiftGranularity::Class).unwrap();
    assert!(lifts.classes.is_empty(), "exhaustive lift set is empty");

    let torus = builtin_complex("torus7").unwrap();
    let ctx = AbelianH2Context::new(&torus, ext.g_prime()).unwrap();
    let classes = h1_classes(&torus, ext.q(), &budget()).unwrap();
    assert_eq!(classes.len(), 4);
    for rep in classes.reps() {
        let (class, _) = delta(rep, &ext, &ctx).unwrap();
        assert!(class.is_trivial(), "all torus classes have trivial delta");
        let lifts = find_lifts(rep, &ext, &budget(), LiftGranularity::Class).unwrap();
        assert!(!lifts.classes.is_empty(), "all torus classes lift");
    }
    c.finish();
}

#[test]
fn criterion_4_central_exactness_by_double_enumeration() {
    let c = Criterion::start(4, "ker delta = im p_* (central case)", 120);
    let instances: [(&str, ExtensionData); 3] = [
        ("rp2_6", z2_in_z4()),
        ("torus7", z2_in_z4()),
        ("circle3", center_q8()),
    ];
    for (name, ext) in &instances {
        let k = builtin_complex(name).unwrap();
        let report = check_exactness(&k, ext, &budget()).unwrap();
        assert!(report.central, "{name}: the hypothesis holds");
        assert!(report.a_p_after_i_trivial, "{name}");
        assert!(report.b_weak_inclusion, "{name}");
        assert_eq!(report.c_exact, Some(true), "{name}: zero counterexamples");
        assert_eq!(report.ker_delta, report.im_p_star, "{name}");
    }
    c.finish();
}

#[test]
fn criterion_5_nu_is_a_pointed_bijection() {
    let c = Criterion::start(5, "nu: H1(X,Q) <-> H2(X, G->N)", 120);
    let ext = z2_in_z4();
    for name in ["circle3", "sphere2_tet"] {
        let k = builtin_complex(name).unwrap();
        let q_classes = h1_classes(&k, ext.q(), &budget()).unwrap();
        let pair_classes = nonabelian_h2_classes(&k, ext.xm(), &budget()).unwrap();
        assert_eq!(
            pair_classes.len(),
            q_classes.len(),
            "{name}: independent pair enumeration count"
        );
        let mut hit = vec![false; pair_classes.len()];
        for rep in q_classes.reps() {
            let image = nu(rep, &ext).unwrap();
            let matched = pair_classes
                .reps()
                .iter()
                .position(|p| pairs_equivalent(p, &image, &budget()).unwrap().is_some())
                .expect("nu image is an enumerated class");
            assert!(!hit[matched], "{name}: nu is injective on classes");
            hit[matched] = true;
            let back = pushforward(ext.p(), image.u()).unwrap();
            assert_eq!(
                q_classes.classify(&back).unwrap(),
                q_classes.classify(rep).unwrap(),
                "{name}: p_* inverts nu"
            );
        }
        assert!(hit.iter().all(|&b| b), "{name}: nu is surjective");
    }
    c.finish();
}

#[test]
fn criterion_6_the_square_commutes_on_gauge_fixed_cocycles() {
    let c = Criterion::start(6, "d_* gamma_* = breve_gamma_* nu p_*", 60);
    let instances: [(&str, ExtensionData); 2] = [("circle3", z3_in_s3()), ("torus7", z2_in_z4())];
    for (name, ext) in &instances {
        let k = builtin_complex(name).unwrap();
        let report = check_square(&k, ext, &budget(), false).unwrap();
        assert!(
            report.failures.is_empty(),
            "{name}: zero failures over {} cocycles",
            report.checked
        );
        assert!(report.checked > 0);
    }
    c.finish();
}

#[test]
fn criterion_7_duality_breaking_on_the_split_extension() {
    let c = Criterion::start(7, "two lifts of one dual", 5);
    let ext = split_z2();
    let k = builtin_complex("circle3").unwrap();
    let trivial = OneCochain::trivial(&k, ext.q());
    let report = classify_gauge_lifts(&trivial, &ext, &budget()).unwrap();
    assert_eq!(report.lifts.len(), 2, "exactly two lift classes");
    assert!(report.duality_breaking, "the flag is raised");
    c.finish();
}

#[test]
fn criterion_8_gerbe_collapse_agrees_with_lift_existence() {
    let c = Criterion::start(8, "collapse <=> lift exists", 120);
    // Every instance exercised by criteria 3-5.
    let ext = z2_in_z4();
    for name in ["rp2_6", "torus7", "circle3", "sphere2_tet"] {
        let k = builtin_complex(name).unwrap();
        let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
        for rep in classes.reps() {
            let report = gerbe_class(rep, &ext, &budget()).unwrap();
            assert!(
                report.agreement,
                "{name}: collapse verdict disagrees with lift existence"
            );
            assert_eq!(report.collapsed, report.lift_class_count > 0, "{name}");
        }
    }
    c.finish();
}

/// Raw crossed-module data for the mutation suite, checked against the
/// axioms by direct equations independent of the library constructors.
struct RawModule {
    g: Arc<FiniteGroup>,
    n: Arc<FiniteGroup>,
    image: Vec<Elem>,
    perms: Vec<Vec<Elem>>,
}

impl RawModule {
    fn violates_an_axiom(&self) -> bool {
        let (g, n) = (&self.g, &self.n);
        // Morphism axioms for i.
        if self.image[0] != 0 {
            return true;
        }
        for a in g.elements() {
            for b in g.elements() {
                if self.image[g.mul(a, b) as usize]
                    != n.mul(self.image[a as usize], self.image[b as usize])
                {
                    return true;
                }
            }
        }
        // Action axioms: automorphism per element, homomorphism overall.
        for u in n.elements() {
            let p = &self.perms[u as usize];
            let mut seen = vec![false; g.order()];
            for &x in p.iter() {
                if seen[x as usize] {
                    return true;
                }
                seen[x as usize] = true;
            }
            if p[0] != 0 {
                return true;
            }
            for a in g.elements() {
                for b in g.elements() {
                    if p[g.mul(a, b) as usize] != g.mul(p[a as usize], p[b as usize]) {
                        return true;
                    }
                }
            }
        }
        for u in n.elements() {
            for v in n.elements() {
                let uv = n.mul(u, v);
                for x in g.elements() {
                    let lhs = self.perms[uv as usize][x as usize];
                    let rhs = self.perms[u as usize][self.perms[v as usize][x as usize] as usize];
                    if lhs != rhs {
                        return true;
                    }
                }
            }
        }
        // Equivariance and Peiffer.
        for u in n.elements() {
            for x in g.elements() {
                let lhs = self.image[self.perms[u as usize][x as usize] as usize];
                let rhs = n.conjugate(self.image[x as usize], u);
                if lhs != rhs {
                    return true;
                }
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                let lhs = self.perms[self.image[x as usize] as usize][y as usize];
                if lhs != g.conjugate(y, x) {
                    return true;
                }
            }
        }
        false
    }

    /// Library-side verdict: true when every constructor accepts the data.
    fn accepted_by_the_library(&self) -> bool {
        let Ok(i) =
            GroupMorphism::new(Arc::clone(&self.g), Arc::clone(&self.n), self.image.clone())
        else {
            return false;
        };
        let Ok(alpha) =
            GroupAction::new(Arc::clone(&self.n), Arc::clone(&self.g), self.perms.clone())
        else {
            return false;
        };
        CrossedModule::new(Arc::clone(&self.g), Arc::clone(&self.n), i, alpha).is_ok()
    }
}

#[test]
fn criterion_9a_mutated_invalid_modules_are_rejected() {
    let c = Criterion::start(9, "9a: 50 invalid crossed-module mutants rejected", 120);
    let bases: Vec<ExtensionData> = vec![z2_in_z4(), z3_in_s3(), center_q8(), split_z2()];
    let mut rng = StdRng::seed_from_u64(0x9a);
    let mut tested = 0u32;
    let mut attempts = 0u32;
    while tested < 50 {
        attempts += 1;
        assert!(attempts < 10_000, "mutation space exhausted");
        let base = &bases[rng.random_range(0..bases.len())];
        let xm = base.xm();
        let mut raw = RawModule {
            g: Arc::clone(xm.g()),
            n: Arc::clone(xm.n()),
            image: xm.g().elements().map(|x| xm.i().apply(x)).collect(),
            perms: xm
                .n()
                .elements()
                .map(|u| xm.alpha().permutation(u).to_vec())
                .collect(),
        };
        // Mutate one entry of i or of one action permutation.
        if rng.random_bool(0.5) {
            let x = rng.random_range(0..raw.g.order());
            let new = rng.random_range(0..raw.n.order()) as Elem;
            if raw.image[x] == new {
                continue;
            }
            raw.image[x] = new;
        } else {
            let u = rng.random_range(0..raw.n.order());
            let x = rng.random_range(0..raw.g.order());
            let new = rng.random_range(0..raw.g.order()) as Elem;
            if raw.perms[u][x] == new {
                continue;
            }
            raw.perms[u][x] = new;
        }
        // Keep only mutants that the direct axiom equations reject.
        if !raw.violates_an_axiom() {
            continue;
        }
        tested += 1;
        assert!(
            !raw.accepted_by_the_library(),
            "an invalid mutant slipped through the constructors"
        );
    }
    assert_eq!(tested, 50);
    c.finish();
}

#[test]
fn criterion_9b_functoriality_and_delta_invariance_under_sampling() {
    let c = Criterion::start(9, "9b: 200 sampled perturbations per instance", 120);
    let mut rng = StdRng::seed_from_u64(0x9b);

    // Pushforward functoriality along S3 -> Z2 -> Z2 on two nerves.
    let s3 = builtin_group("S3").unwrap();
    let z2 = builtin_group("Z2").unwrap();
    let t = s3.element_by_name("(0 1)").unwrap();
    let r = s3.element_by_name("(0 1 2)").unwrap();
    let sign =
        GroupMorphism::from_generator_images(Arc::clone(&s3), Arc::clone(&z2), &[(t, 1), (r, 0)])
            .unwrap();
    let id_z2 = GroupMorphism::identity(&z2);
    let composite = sign.then(&id_z2).unwrap();
    for name in ["circle3", "torus7"] {
        let k = builtin_complex(name).unwrap();
        for _ in 0..200 {
            let values: Vec<Elem> = (0..k.edges().len())
                .map(|_| rng.random_range(0..6))
                .collect();
            let cochain = OneCochain::from_values(&k, &s3, values).unwrap();
            let one_step = pushforward(&composite, &cochain).unwrap();
            let two_steps = pushforward(&id_z2, &pushforward(&sign, &cochain).unwrap()).unwrap();
            assert_eq!(one_step, two_steps, "{name}");
        }
    }

    // Delta is constant on classes under sampled coboundary perturbations.
    let instances: [(&str, ExtensionData); 4] = [
        ("circle3", z2_in_z4()),
        ("rp2_6", z2_in_z4()),
        ("circle3", center_q8()),
        ("circle3", split_z2()),
    ];
    for (name, ext) in &instances {
        let k = builtin_complex(name).unwrap();
        let ctx = AbelianH2Context::new(&k, ext.g_prime()).unwrap();
        let classes = h1_classes(&k, ext.q(), &budget()).unwrap();
        for rep in classes.reps() {
            let (base, _) = delta(rep, ext, &ctx).unwrap();
            for _ in 0..200 {
                let v: Vec<Elem> = (0..k.vertex_count())
                    .map(|_| rng.random_range(0..ext.q().order() as Elem))
                    .collect();
                let moved = coboundary_transform(rep, &v);
                let (other, _) = delta(&moved, ext, &ctx).unwrap();
                assert_eq!(base, other, "{name}: delta moved under a coboundary");
            }
        }
    }
    c.finish();
}

fn run_config_with_jobs(text: &str, jobs: &str) -> Output {
    let dir = std::env::temp_dir().join(format!(
        "cocycle-acceptance-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("determinism.cfg");
    std::fs::write(&path, text).unwrap();
    Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(["run", path.to_str().unwrap(), "--jobs", jobs])
        .env_remove("COCYCLE_BUDGET")
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_9c_reports_are_byte_identical_across_worker_counts() {
    let c = Criterion::start(9, "9c: byte-identical --jobs 1 vs --jobs 4", 120);
    let config = "cocycle-config v1\n\
        extension E = Z2 -> Z4\n\
        extension S = Z3 -> S3\n\
        extension C = center(Q8) -> Q8\n\
        task h1 torus7 S3\n\
        task abelian rp2_6 Z_4 2\n\
        task h2nab sphere2_tet E\n\
        task exactness rp2_6 E\n\
        task exactness circle3 C\n\
        task square circle3 S\n\
        task gauge-classes circle3 Z2->Z2xZ2 trivial\n\
        task lift torus7 E class 3\n\
        task realize rp2_6 E generator\n";
    let sequential = run_config_with_jobs(config, "1");
    assert_eq!(
        sequential.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&sequential.stderr)
    );
    let again = run_config_with_jobs(config, "1");
    assert_eq!(sequential.stdout, again.stdout, "same flags, same bytes");
    let parallel = run_config_with_jobs(config, "4");
    assert_eq!(
        sequential.stdout, parallel.stdout,
        "worker count must not change the report bytes"
    );
    c.finish();
}
