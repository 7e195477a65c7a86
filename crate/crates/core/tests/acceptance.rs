//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its measured residuals and runtime. Run with
//! `cargo test -p hardyball --test acceptance -- --nocapture` to see the
//! report lines.

use std::time::Instant;

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use hardyball::classify::{
    branch_collision, branch_collision_with_radius, branch_map, branch_separation_probe,
    build_hardy_isomorphism, congruence_test, counterexample_construct, hardy_equivalence,
    isometry_search, isometry_test, BranchInjectivity, CongruenceVerdict, HardyVerdict,
    IsometryOutcome, PointMap, SearchOutcome,
};
use hardyball::geometry::{mobius_fit, pseudo_hyperbolic, rudin_identity_residual, BallPoint, MobiusFit};
use hardyball::kernels::{kernel_eval, weighted_kernel_eval, KernelSpaceSpec, WeightSequence};
use hardyball::linalg::TolerancePolicy;
use hardyball::sampling;

fn report(criterion: &str, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("{criterion}: {status} - {detail}");
    assert!(passed, "{criterion}: FAIL - {detail}");
}

fn default_space(d: usize, t: f64) -> KernelSpaceSpec {
    KernelSpaceSpec::new(d, t, TolerancePolicy::default()).unwrap()
}

#[test]
fn criterion_1_rudin_identity() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    for d in 1..=4 {
        for _ in 0..1000 {
            let a = sampling::ball_point(&mut rng, d, 0.95);
            let x = sampling::ball_point(&mut rng, d, 0.95);
            let y = sampling::ball_point(&mut rng, d, 0.95);
            worst = worst.max(rudin_identity_residual(&a, &x, &y));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 1 (Mobius kernel identity)",
        worst < 1e-11 && elapsed < 5.0,
        &format!("max residual {worst:.3e} over 4000 triples, d in 1..=4, {elapsed:.2} s"),
    );
}

/// Instances shared by criteria 2 and 5: B is the pointwise image of A
/// under a random automorphism, paired by the identity assignment.
fn transported_instances() -> Vec<(KernelSpaceSpec, Vec<BallPoint>, Vec<BallPoint>)> {
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let mut instances = Vec::with_capacity(200);
    for index in 0..200 {
        let d = 1 + index % 3;
        let t = [0.5, 1.0, 2.0][index % 3];
        let n = 2 + index % 5;
        let space = KernelSpaceSpec::new(d, t, tol).unwrap();
        let sources = sampling::distinct_ball_points(&mut rng, d, n, 0.75, 0.08);
        let phi = sampling::automorphism(&mut rng, d, 0.7, &tol);
        let targets: Vec<BallPoint> = sources
            .iter()
            .map(|p| phi.apply(p).expect("image stays interior"))
            .collect();
        instances.push((space, sources, targets));
    }
    instances
}

#[test]
fn criterion_2_congruent_implies_isometric() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (space, sources, targets) in transported_instances() {
        let map = PointMap::identity(sources, targets).unwrap();
        match isometry_test(&map, &space).unwrap() {
            IsometryOutcome::Witness(w) => worst = worst.max(w.residual),
            IsometryOutcome::NotIsometric { rank } => {
                report(
                    "criterion 2 (congruent implies isometric)",
                    false,
                    &format!("transported instance judged not isometric (rank {rank})"),
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 2 (congruent implies isometric)",
        worst < 1e-8 && elapsed < 30.0,
        &format!("200 transported instances, max witness residual {worst:.3e}, {elapsed:.2} s"),
    );
}

enum InstanceKind {
    Transported,
    TransportedPermuted,
    Independent,
    Perturbed,
}

/// Deterministic mixed instance: transported (congruent), permuted
/// transported, independent random, or transported-then-perturbed.
fn dichotomy_instance(
    rng: &mut ChaCha12Rng,
    d: usize,
    n: usize,
    kind: &InstanceKind,
    tol: &TolerancePolicy,
) -> (Vec<BallPoint>, Vec<BallPoint>) {
    let sources = sampling::distinct_ball_points(rng, d, n, 0.72, 0.08);
    let phi = sampling::automorphism(rng, d, 0.65, tol);
    let mut targets: Vec<BallPoint> = sources
        .iter()
        .map(|p| phi.apply(p).expect("image stays interior"))
        .collect();
    match kind {
        InstanceKind::Transported => {}
        InstanceKind::TransportedPermuted => {
            // Deterministic rotation of the target list.
            targets.rotate_left(1 + n / 2);
        }
        InstanceKind::Independent => {
            targets = sampling::distinct_ball_points(rng, d, n, 0.72, 0.08);
        }
        InstanceKind::Perturbed => {
            let coords = targets[0].coords() * Complex64::new(0.9, 0.0)
                + BallPoint::origin(d).coords();
            let mut shifted = coords.clone();
            shifted[0] += Complex64::new(0.03, 0.02);
            if let Ok(p) = BallPoint::new(shifted) {
                targets[0] = p;
            }
        }
    }
    (sources, targets)
}

#[test]
fn criterion_3_faithfulness_dichotomy() {
    let start = Instant::now();
    let tol = TolerancePolicy::default();

    // (i) for t <= 2 the searches must agree, assignment for assignment.
    let kinds = [
        InstanceKind::Transported,
        InstanceKind::TransportedPermuted,
        InstanceKind::Independent,
        InstanceKind::Perturbed,
    ];
    let mut agreements = 0_usize;
    for (ti, &t) in [0.5, 1.0, 1.5, 2.0].iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(303 + ti as u64);
        for index in 0..100 {
            let d = 1 + index % 3;
            let n = 2 + index % 5;
            let kind = &kinds[index % 4];
            let (sources, targets) = dichotomy_instance(&mut rng, d, n, kind, &tol);
            let space = KernelSpaceSpec::new(d, t, tol).unwrap();
            let search = isometry_search(&sources, &targets, &space).unwrap();
            let congruence = congruence_test(&sources, &targets, &tol).unwrap();
            match (&search, &congruence) {
                (
                    SearchOutcome::Found(witness),
                    CongruenceVerdict::Congruent { assignment, .. },
                ) => {
                    if witness.map.assignment() != assignment.as_slice() {
                        report(
                            "criterion 3 (faithfulness dichotomy)",
                            false,
                            &format!(
                                "assignments disagree at t = {t}, instance {index}: {:?} vs {:?}",
                                witness.map.assignment(),
                                assignment
                            ),
                        );
                    }
                }
                (SearchOutcome::NotIsometric, CongruenceVerdict::NotCongruent { .. }) => {}
                _ => {
                    report(
                        "criterion 3 (faithfulness dichotomy)",
                        false,
                        &format!(
                            "verdicts disagree at t = {t}, instance {index} (isometric: {}, congruent: {})",
                            search.witness().is_some(),
                            congruence.is_congruent()
                        ),
                    );
                }
            }
            agreements += 1;
        }
    }

    // (ii) above t = 2 the constructed pairs separate the two notions.
    let mut worst_residual = 0.0_f64;
    let mut worst_ones = 0.0_f64;
    for &t in &[2.1, 3.0, 4.0, 7.0] {
        for d in [1, 2] {
            let cx = counterexample_construct(t, d).unwrap();
            let space = default_space(d, t);
            let witness = match isometry_test(&cx.map, &space).unwrap() {
                IsometryOutcome::Witness(w) => w,
                IsometryOutcome::NotIsometric { rank } => {
                    report(
                        "criterion 3 (faithfulness dichotomy)",
                        false,
                        &format!("counterexample at t = {t}, d = {d} not isometric (rank {rank})"),
                    );
                    unreachable!();
                }
            };
            worst_residual = worst_residual.max(witness.residual);
            // Independent recomputation of the ratio matrix.
            for i in 0..3 {
                for j in 0..3 {
                    let num = kernel_eval(&cx.sources[i], &cx.sources[j], &space).unwrap();
                    let den = kernel_eval(&cx.targets[i], &cx.targets[j], &space).unwrap();
                    worst_ones = worst_ones.max((num / den - Complex64::new(1.0, 0.0)).norm());
                }
            }
            let verdict = congruence_test(&cx.sources, &cx.targets, &tol).unwrap();
            if verdict.is_congruent() {
                report(
                    "criterion 3 (faithfulness dichotomy)",
                    false,
                    &format!("counterexample at t = {t}, d = {d} judged congruent"),
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 3 (faithfulness dichotomy)",
        worst_residual < 1e-10 && worst_ones < 1e-10 && elapsed < 60.0,
        &format!(
            "{agreements} dichotomy agreements for t <= 2; counterexamples: max residual {worst_residual:.3e}, ratio-vs-ones {worst_ones:.3e}, {elapsed:.2} s"
        ),
    );
}

#[test]
fn criterion_4_branch_injectivity() {
    let start = Instant::now();
    let mut details = String::new();
    let mut passed = true;

    for &t in &[0.5, 1.0, 2.0] {
        let mut rng = ChaCha12Rng::seed_from_u64(404);
        let minimum = branch_separation_probe(t, &mut rng, 10_000, 1e-3).unwrap();
        details.push_str(&format!("t = {t}: min separation {minimum:.3e}; "));
        passed &= minimum > 1e-12;
    }

    for &t in &[3.0, 4.0] {
        let BranchInjectivity::Collision(collision) = branch_collision(t).unwrap() else {
            panic!("collision expected for t = {t}");
        };
        let gz = branch_map(collision.z, t).unwrap();
        let gw = branch_map(collision.w, t).unwrap();
        let gap = (gz - gw).norm();
        passed &= gap < 1e-13;
        passed &= collision.z.norm() == collision.w.norm();
        passed &= collision.z != collision.w;
        passed &= (gz - collision.value).norm() < 1e-13;
        details.push_str(&format!("t = {t}: |g(z)-g(w)| = {gap:.3e}; "));
    }

    // Radius 1/2 pins the collision value at exactly -1/16 for t = 4.
    let quarter = branch_collision_with_radius(4.0, 0.5).unwrap();
    passed &= quarter.value == Complex64::new(-1.0 / 16.0, 0.0);
    let gz = branch_map(quarter.z, 4.0).unwrap();
    passed &= (gz - Complex64::new(-1.0 / 16.0, 0.0)).norm() < 1e-13;
    details.push_str("t = 4, r = 1/2: value = -1/16 exactly");

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 4 (branch injectivity)",
        passed,
        &format!("{details} ({elapsed:.2} s)"),
    );
}

#[test]
fn criterion_5_congruence_witness_accuracy() {
    let tol = TolerancePolicy::default();
    let mut worst_point = 0.0_f64;
    let mut worst_unitary = 0.0_f64;
    for (_, sources, targets) in transported_instances() {
        let verdict = congruence_test(&sources, &targets, &tol).unwrap();
        let CongruenceVerdict::Congruent {
            witness,
            assignment,
            ..
        } = verdict
        else {
            report(
                "criterion 5 (congruence witness accuracy)",
                false,
                "a transported instance was judged not congruent",
            );
            unreachable!();
        };
        for (i, source) in sources.iter().enumerate() {
            let image = witness.apply(source).unwrap();
            worst_point = worst_point.max(image.distance(&targets[assignment[i]]));
        }
        let u = witness.unitary();
        let defect = (u * u.adjoint() - nalgebra::DMatrix::identity(u.nrows(), u.ncols()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        worst_unitary = worst_unitary.max(defect);
    }
    report(
        "criterion 5 (congruence witness accuracy)",
        worst_point < 1e-8 && worst_unitary < 1e-10,
        &format!(
            "200 recovered automorphisms: max point error {worst_point:.3e}, max unitary defect {worst_unitary:.3e}"
        ),
    );
}

#[test]
fn criterion_6_weighted_hardy_suite() {
    let tol = TolerancePolicy::default();
    let horizon = 256;
    let mut passed = true;
    let mut details = String::new();

    // (a) proportional weights, exact constant.
    for &c in &[0.5, 1.0, 3.0] {
        let w = WeightSequence::constant(1.0, horizon).unwrap();
        let u = WeightSequence::constant(c, horizon).unwrap();
        let verdict = hardy_equivalence(&w, &u, &tol);
        match verdict.verdict {
            HardyVerdict::Isometric { ratio } => {
                passed &= ratio == 1.0 / c;
            }
            _ => passed = false,
        }
    }
    details.push_str("(a) exact constants; ");

    // (b) bounded non-constant ratio.
    let w = WeightSequence::constant(1.0, horizon).unwrap();
    let u = WeightSequence::custom(
        (0..=horizon)
            .map(|n| (n as f64 + 2.0) / (n as f64 + 1.0))
            .collect(),
    )
    .unwrap();
    match hardy_equivalence(&w, &u, &tol).verdict {
        HardyVerdict::Equivalent { lower, upper } => {
            passed &= lower >= 0.5 && upper <= 1.0;
            details.push_str(&format!("(b) bounds [{lower:.6}, {upper:.6}]; "));
        }
        _ => passed = false,
    }

    // (c) unbounded ratio.
    let growing = WeightSequence::power(1.0, horizon).unwrap();
    passed &= matches!(
        hardy_equivalence(&w, &growing, &tol).verdict,
        HardyVerdict::Inequivalent { .. }
    );
    details.push_str("(c) inequivalent; ");

    // (d) coefficientwise kernel identity, exact at the full horizon.
    let u_kernel = WeightSequence::custom(
        (0..=horizon)
            .map(|n| (n as f64 + 1.0) / (n as f64 + 2.0))
            .collect(),
    )
    .unwrap();
    let iso = build_hardy_isomorphism(&w, &u_kernel, &tol).unwrap();
    let residual = iso.kernel_identity_residual(&w, &u_kernel);
    passed &= residual == 0.0;
    details.push_str(&format!("(d) kernel identity residual {residual:e}; "));

    // (e) binomial weights at exponent 1 are identically one.
    let binom = WeightSequence::binomial(1.0, horizon).unwrap();
    let ones = WeightSequence::constant(1.0, horizon).unwrap();
    passed &= binom.values() == ones.values();
    match hardy_equivalence(&binom, &ones, &tol).verdict {
        HardyVerdict::Isometric { ratio } => passed &= ratio == 1.0,
        _ => passed = false,
    }
    details.push_str("(e) binomial(1) = constant(1)");

    report("criterion 6 (weighted Hardy suite)", passed, &details);
}

#[test]
fn criterion_7_weighted_kernel_consistency() {
    let tol = TolerancePolicy::default();
    let mut passed = true;
    let mut worst_gap = 0.0_f64;
    let mut worst_bound = 0.0_f64;
    for &t in &[1.0, 2.0] {
        let weights = WeightSequence::binomial(t, 256).unwrap();
        let space = default_space(1, t);
        for &x in &[0.1, 0.3, 0.5] {
            let z = Complex64::new(x, 0.0);
            let truncated = weighted_kernel_eval(z, z, &weights, &tol).unwrap();
            let exact = kernel_eval(
                &BallPoint::from_disk(z).unwrap(),
                &BallPoint::from_disk(z).unwrap(),
                &space,
            )
            .unwrap();
            let gap = (truncated.value - exact).norm();
            passed &= gap < truncated.tail_bound;
            passed &= truncated.tail_bound < 1e-8;
            worst_gap = worst_gap.max(gap);
            worst_bound = worst_bound.max(truncated.tail_bound);
        }
    }
    report(
        "criterion 7 (weighted-kernel consistency)",
        passed,
        &format!("max |truncated - exact| {worst_gap:.3e}, max tail bound {worst_bound:.3e} at horizon 256"),
    );
}

/// Exhaustive oracle: first assignment (in lexicographic order) whose
/// ratio matrix passes the isometry test, with no pruning at all.
fn brute_force_search(
    sources: &[BallPoint],
    targets: &[BallPoint],
    space: &KernelSpaceSpec,
) -> Option<Vec<usize>> {
    let n = sources.len();
    for perm in (0..n).permutations(n) {
        let map = PointMap::new(sources.to_vec(), targets.to_vec(), perm.clone()).unwrap();
        if let IsometryOutcome::Witness(_) = isometry_test(&map, space).unwrap() {
            return Some(perm);
        }
    }
    None
}

#[test]
fn criterion_8_brute_force_oracle() {
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha12Rng::seed_from_u64(808);
    let mut found = 0_usize;
    for index in 0..100 {
        let d = 1 + index % 2;
        let n = 2 + index % 4;
        let t = [1.0, 1.5, 3.0][index % 3];
        let space = KernelSpaceSpec::new(d, t, tol).unwrap();
        let (sources, targets) = match index % 3 {
            0 => {
                let sources = sampling::distinct_ball_points(&mut rng, d, n, 0.7, 0.08);
                let phi = sampling::automorphism(&mut rng, d, 0.6, &tol);
                let mut targets: Vec<BallPoint> =
                    sources.iter().map(|p| phi.apply(p).unwrap()).collect();
                targets.rotate_left(n / 2);
                (sources, targets)
            }
            1 => (
                sampling::distinct_ball_points(&mut rng, d, n, 0.7, 0.08),
                sampling::distinct_ball_points(&mut rng, d, n, 0.7, 0.08),
            ),
            _ => {
                let cx = counterexample_construct(t.max(2.5), d).unwrap();
                (cx.sources, cx.targets)
            }
        };
        let space = if index % 3 == 2 {
            KernelSpaceSpec::new(d, t.max(2.5), tol).unwrap()
        } else {
            space
        };
        let oracle = brute_force_search(&sources, &targets, &space);
        let search = isometry_search(&sources, &targets, &space).unwrap();
        match (&oracle, &search) {
            (Some(perm), SearchOutcome::Found(witness)) => {
                if witness.map.assignment() != perm.as_slice() {
                    report(
                        "criterion 8 (brute-force oracle)",
                        false,
                        &format!(
                            "instance {index}: pruned search found {:?}, oracle {:?}",
                            witness.map.assignment(),
                            perm
                        ),
                    );
                }
                found += 1;
            }
            (None, SearchOutcome::NotIsometric) => {}
            _ => {
                report(
                    "criterion 8 (brute-force oracle)",
                    false,
                    &format!(
                        "instance {index}: pruned search and oracle disagree (oracle witness: {})",
                        oracle.is_some()
                    ),
                );
            }
        }
    }
    report(
        "criterion 8 (brute-force oracle)",
        true,
        &format!("100 instances in exact agreement with exhaustive enumeration ({found} witnesses)"),
    );
}

#[test]
fn criterion_9_schwarz_pick() {
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let mut worst_preservation = 0.0_f64;
    let mut worst_contraction = 0.0_f64;
    for _ in 0..1000 {
        let map = sampling::disk_automorphism(&mut rng, 0.8);
        let x = sampling::disk_point(&mut rng, 0.9);
        let y = sampling::disk_point(&mut rng, 0.9);
        worst_preservation = worst_preservation.max(
            (pseudo_hyperbolic(map.apply(x), map.apply(y)) - pseudo_hyperbolic(x, y)).abs(),
        );
        let probe = |z: Complex64| z * z * 0.5;
        worst_contraction = worst_contraction
            .max((pseudo_hyperbolic(probe(x), probe(y)) - pseudo_hyperbolic(x, y)).max(0.0));
    }

    let mut worst_fit = 0.0_f64;
    for _ in 0..200 {
        let map = sampling::disk_automorphism(&mut rng, 0.7);
        let x1 = sampling::disk_point(&mut rng, 0.8);
        let mut x2 = sampling::disk_point(&mut rng, 0.8);
        while (x1 - x2).norm() < 0.05 {
            x2 = sampling::disk_point(&mut rng, 0.8);
        }
        let pairs = vec![(x1, map.apply(x1)), (x2, map.apply(x2))];
        match mobius_fit(&pairs, &tol).unwrap() {
            MobiusFit::Unique(fit) => {
                worst_fit = worst_fit.max((fit.rotation() - map.rotation()).norm());
                worst_fit = worst_fit.max((fit.base() - map.base()).norm());
            }
            other => {
                report(
                    "criterion 9 (Schwarz-Pick)",
                    false,
                    &format!("expected unique fit, got {other:?}"),
                );
            }
        }
    }
    report(
        "criterion 9 (Schwarz-Pick)",
        worst_preservation < 1e-12 && worst_contraction < 1e-12 && worst_fit < 1e-10,
        &format!(
            "automorphism preservation {worst_preservation:.3e}, probe contraction excess {worst_contraction:.3e}, fit coefficient error {worst_fit:.3e}"
        ),
    );
}
