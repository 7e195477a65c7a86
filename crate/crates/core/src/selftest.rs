//! Reproducible invariant suites over randomized instances.
//!
//! Each suite draws its data from a seeded generator, measures the worst
//! residual of one structural identity, and compares it against a fixed
//! threshold. `run_selftest` bundles them into a single deterministic
//! report; a zero case count is a vacuous pass.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::classify::{
    branch_separation_probe, congruence_test, hardy_equivalence, isometry_test,
    rotation_composition, CongruenceVerdict, HardyVerdict, PointMap,
};
use crate::geometry::{
    involution_at, mobius_fit, pseudo_hyperbolic, rudin_identity_residual, BallPoint, MobiusFit,
};
use crate::kernels::{kernel_eval, KernelSpaceSpec, WeightSequence};
use crate::linalg::{
    numerical_rank, principal_power, unitary_extension, HermitianMatrix, TolerancePolicy,
};
use crate::sampling;

/// Outcome of one invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &'static str, cases: usize, max_residual: f64, threshold: f64) -> Self {
        Self {
            name,
            cases,
            max_residual,
            threshold,
            passed: max_residual <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn rudin_identity_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        for d in 1..=4 {
            let a = sampling::ball_point(rng, d, 0.9);
            let x = sampling::ball_point(rng, d, 0.9);
            let y = sampling::ball_point(rng, d, 0.9);
            worst = worst.max(rudin_identity_residual(&a, &x, &y));
        }
    }
    SuiteReport::new("rudin_identity", cases, worst, 1e-11)
}

fn involution_roundtrip_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        for d in 1..=4 {
            let a = sampling::ball_point(rng, d, 0.9);
            let x = sampling::ball_point(rng, d, 0.9);
            let phi = involution_at(&a);
            let back = phi
                .apply(&phi.apply(&x).expect("interior image"))
                .expect("interior image");
            worst = worst.max(back.distance(&x));
        }
    }
    SuiteReport::new("involution_roundtrip", cases, worst, 1e-10)
}

fn power_multiplicativity_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let z = Complex64::from_polar(rng.gen_range(0.1..5.0), rng.gen_range(-0.7..0.7));
        let w = Complex64::from_polar(rng.gen_range(0.1..5.0), rng.gen_range(-0.7..0.7));
        let t = rng.gen_range(0.2..4.0);
        let lhs = principal_power(z, t).unwrap() * principal_power(w, t).unwrap();
        let rhs = principal_power(z * w, t).unwrap();
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    SuiteReport::new("power_multiplicativity", cases, worst, 1e-12)
}

fn kernel_covariance_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let mut worst = 0.0_f64;
    let one = Complex64::new(1.0, 0.0);
    for _ in 0..cases {
        for (d, t) in [(1, 0.5), (2, 1.0), (3, 2.0)] {
            let space = KernelSpaceSpec::new(d, t, TolerancePolicy::default()).unwrap();
            let a = sampling::ball_point(rng, d, 0.8);
            let x = sampling::ball_point(rng, d, 0.8);
            let y = sampling::ball_point(rng, d, 0.8);
            let phi = involution_at(&a);
            let scale = (1.0 - a.norm() * a.norm()).sqrt();
            let factor = |p: &BallPoint| {
                let base = Complex64::new(scale, 0.0) / (one - p.inner(&a));
                principal_power(base, t).unwrap()
            };
            let lhs = kernel_eval(
                &phi.apply(&x).unwrap(),
                &phi.apply(&y).unwrap(),
                &space,
            )
            .unwrap()
                * factor(&x)
                * factor(&y).conj();
            let rhs = kernel_eval(&x, &y, &space).unwrap();
            worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        }
    }
    SuiteReport::new("kernel_covariance", cases, worst, 1e-10)
}

fn schwarz_pick_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let map = sampling::disk_automorphism(rng, 0.8);
        let x = sampling::disk_point(rng, 0.9);
        let y = sampling::disk_point(rng, 0.9);
        let preserved = (pseudo_hyperbolic(map.apply(x), map.apply(y)) - pseudo_hyperbolic(x, y))
            .abs();
        worst = worst.max(preserved);
        // Strict contraction probe: any analytic self-map may only shrink.
        let probe = |z: Complex64| z * z * 0.5;
        let violation = pseudo_hyperbolic(probe(x), probe(y)) - pseudo_hyperbolic(x, y);
        worst = worst.max(violation.max(0.0));
    }
    SuiteReport::new("schwarz_pick", cases, worst, 1e-12)
}

fn mobius_fit_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let map = sampling::disk_automorphism(rng, 0.7);
        let x1 = sampling::disk_point(rng, 0.8);
        let mut x2 = sampling::disk_point(rng, 0.8);
        while (x1 - x2).norm() < 0.05 {
            x2 = sampling::disk_point(rng, 0.8);
        }
        let pairs = vec![(x1, map.apply(x1)), (x2, map.apply(x2))];
        match mobius_fit(&pairs, &tol).unwrap() {
            MobiusFit::Unique(fit) => {
                worst = worst.max((fit.rotation() - map.rotation()).norm());
                worst = worst.max((fit.base() - map.base()).norm());
            }
            _ => worst = f64::INFINITY,
        }
    }
    SuiteReport::new("mobius_fit_recovery", cases, worst, 1e-10)
}

fn congruent_implies_isometric_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for instance in 0..cases {
        let d = 1 + instance % 3;
        let t = [0.5, 1.0, 2.0][instance % 3];
        let n = 2 + instance % 5;
        let space = KernelSpaceSpec::new(d, t, tol).unwrap();
        let sources = sampling::distinct_ball_points(rng, d, n, 0.75, 1e-3);
        let phi = sampling::automorphism(rng, d, 0.7, &tol);
        let targets: Vec<BallPoint> = sources
            .iter()
            .map(|p| phi.apply(p).expect("interior image"))
            .collect();
        let verdict = congruence_test(&sources, &targets, &tol).expect("congruence test runs");
        let CongruenceVerdict::Congruent {
            assignment,
            point_error,
            ..
        } = verdict
        else {
            worst = f64::INFINITY;
            continue;
        };
        worst = worst.max(point_error);
        let map = PointMap::new(sources.clone(), targets.clone(), assignment)
            .expect("verdict assignment is a bijection");
        match isometry_test(&map, &space).expect("isometry test runs") {
            crate::classify::IsometryOutcome::Witness(w) => worst = worst.max(w.residual),
            crate::classify::IsometryOutcome::NotIsometric { .. } => worst = f64::INFINITY,
        }
    }
    SuiteReport::new("congruent_implies_isometric", cases, worst, 1e-8)
}

fn unitary_extension_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for instance in 0..cases {
        let d = 2 + instance % 3;
        let count = 1 + instance % d;
        let sources: Vec<_> = (0..count)
            .map(|_| sampling::ball_point(rng, d, 0.9).coords().clone())
            .collect();
        let v = sampling::unitary(rng, d);
        let targets: Vec<_> = sources.iter().map(|s| &v * s).collect();
        let u = unitary_extension(&sources, &targets, &tol).expect("isometric data extends");
        let defect = (&u * u.adjoint() - nalgebra::DMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        worst = worst.max(defect);
        for (s, t) in sources.iter().zip(targets.iter()) {
            worst = worst.max((&u * s - t).norm());
        }
    }
    SuiteReport::new("unitary_extension", cases, worst, 1e-10)
}

fn rank_invariance_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for instance in 0..cases {
        let d = 2 + instance % 3;
        let rank = 1 + instance % d;
        // Hermitian PSD matrix of known rank from a random factor.
        let factor = nalgebra::DMatrix::from_fn(d, rank, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &factor * factor.adjoint();
        let hermitian = HermitianMatrix::from_matrix(m.clone(), &tol).expect("Hermitian product");
        let before = numerical_rank(&hermitian, &tol);
        let u = sampling::unitary(rng, d);
        let conjugated = &u * m * u.adjoint();
        let symmetrized = HermitianMatrix::from_upper(d, |i, j| {
            if i == j {
                Complex64::new(conjugated[(i, j)].re, 0.0)
            } else {
                (conjugated[(i, j)] + conjugated[(j, i)].conj()) * 0.5
            }
        })
        .expect("finite entries");
        let after = numerical_rank(&symmetrized, &tol);
        worst = worst.max((before as f64 - after as f64).abs());
    }
    SuiteReport::new("rank_unitary_invariance", cases, worst, 0.0)
}

fn hardy_symmetry_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let horizon = 64;
        let values: Vec<f64> = (0..=horizon)
            .map(|n| 1.0 + 0.5 * ((n as f64) * 0.3).sin() + rng.gen_range(0.0..0.2))
            .collect();
        let w = WeightSequence::custom(values).unwrap();
        let u = WeightSequence::constant(rng.gen_range(0.5..2.0), horizon).unwrap();
        let forward = hardy_equivalence(&w, &u, &tol);
        let backward = hardy_equivalence(&u, &w, &tol);
        if let (
            HardyVerdict::Equivalent { lower, upper },
            HardyVerdict::Equivalent {
                lower: blower,
                upper: bupper,
            },
        ) = (forward.verdict, backward.verdict)
        {
            worst = worst.max((blower - 1.0 / upper).abs() / upper.max(1.0));
            worst = worst.max((bupper - 1.0 / lower).abs() / (1.0 / lower).max(1.0));
        } else {
            worst = f64::INFINITY;
        }
    }
    SuiteReport::new("hardy_symmetry", cases, worst, 1e-12)
}

fn branch_injectivity_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    // Reports the deficiency against the separation floor; zero when the
    // probe stays clear of it.
    let samples = cases * 100;
    let mut worst = 0.0_f64;
    if samples > 0 {
        for t in [0.5, 1.0, 2.0] {
            let minimum = branch_separation_probe(t, rng, samples, 1e-3)
                .expect("probe accepts positive exponents");
            worst = worst.max(1e-12 - minimum.min(1e-12));
        }
    }
    SuiteReport::new("branch_injectivity_probe", samples, worst, 0.0)
}

fn rotation_invariance_suite(rng: &mut ChaCha12Rng, cases: usize) -> SuiteReport {
    let tol = TolerancePolicy::default();
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let w = WeightSequence::binomial(rng.gen_range(0.5..3.0), 64).unwrap();
        let u = WeightSequence::constant(rng.gen_range(0.5..2.0), 64).unwrap();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let shift = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = rotation_composition(theta, &w, &u, &tol);
        let b = rotation_composition(theta + shift, &w, &u, &tol);
        // The norm profile does not depend on the rotation angle at all.
        let diff = a
            .norm_profile
            .iter()
            .zip(b.norm_profile.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max);
        worst = worst.max(diff);
        if a.is_isomorphism_at_horizon() != b.is_isomorphism_at_horizon() {
            worst = f64::INFINITY;
        }
    }
    SuiteReport::new("rotation_invariance", cases, worst, 0.0)
}

/// Runs every suite with a deterministic generator derived from `seed`.
///
/// `cases` scales the instance count per suite; zero is a vacuous pass.
pub fn run_selftest(seed: u64, cases: usize) -> SelfTestReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let suites = vec![
        rudin_identity_suite(&mut rng, cases),
        involution_roundtrip_suite(&mut rng, cases),
        power_multiplicativity_suite(&mut rng, cases),
        kernel_covariance_suite(&mut rng, cases),
        schwarz_pick_suite(&mut rng, cases),
        mobius_fit_suite(&mut rng, cases),
        congruent_implies_isometric_suite(&mut rng, cases.min(60)),
        unitary_extension_suite(&mut rng, cases),
        rank_invariance_suite(&mut rng, cases),
        branch_injectivity_suite(&mut rng, cases),
        hardy_symmetry_suite(&mut rng, cases),
        rotation_invariance_suite(&mut rng, cases),
    ];
    SelfTestReport {
        seed,
        cases,
        suites,
    }
}
