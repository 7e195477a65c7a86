//! Decision procedures for kernel subspaces and weighted Hardy spaces.
//!
//! Point-set level: `isometry_test` decides whether a point assignment
//! induces an isometric isomorphism of the spanned kernel subspaces by a
//! rank-one test on the entrywise Gram ratio matrix; `congruence_test`
//! decides whether two sets are related by a ball automorphism and
//! produces the automorphism when they are. For exponents above 2 the
//! principal branch stops being injective on the relevant domain, and
//! `counterexample_construct` turns a branch collision into a pair of
//! sets that are isometric but not congruent.
//!
//! Weight-sequence level: `hardy_equivalence` compares two weight
//! sequences up to bounded ratios, `build_hardy_isomorphism` produces
//! the diagonal isomorphism when the ratios allow one, and
//! `rotation_composition` diagonalizes a rotation composition operator
//! over the monomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::geometry::{
    involution_at, BallAutomorphism, BallPoint, GeometryError, BOUNDARY_MARGIN,
    DUPLICATE_TOLERANCE,
};
use crate::kernels::{kernel_eval, KernelError, KernelSpaceSpec, WeightFamily, WeightSequence};
use crate::linalg::{
    inner, numerical_rank, principal_power, rank1_factor, HermitianMatrix, LinalgError,
    TolerancePolicy,
};

/// Largest point-set size the assignment searches accept before refusing.
pub const DEFAULT_SEARCH_CAP: usize = 9;

/// Relative slack when comparing the automorphism-invariant pruning quantity.
const PRUNE_RELATIVE_TOLERANCE: f64 = 1e-6;

/// Log-log slope above which a monotone ratio trend is treated as unbounded.
const TREND_SLOPE_THRESHOLD: f64 = 0.05;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error(transparent)]
    Kernel(#[from] KernelError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("point sets must be non-empty")]
    EmptyPointSet,

    #[error("point sets have different sizes: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{which} points {i} and {j} coincide")]
    DuplicatePoints {
        which: &'static str,
        i: usize,
        j: usize,
    },

    #[error("assignment is not a bijection on {n} points")]
    InvalidAssignment { n: usize },

    #[error("points have mixed dimensions: {got} vs {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("point-set size {size} exceeds the search cap {cap}; refusing rather than degrading")]
    CapExceeded { size: usize, cap: usize },

    #[error("exponent must be positive and finite, got {t}")]
    InvalidExponent { t: f64 },

    #[error("the branch map is injective for exponent {t} ≤ 2; no collision exists")]
    InjectiveRange { t: f64 },

    #[error("no isometric-but-not-congruent pair exists for exponent {t} ≤ 2: every induced isometry extends to a ball automorphism")]
    FaithfulExponent { t: f64 },

    #[error("collision radius {radius} outside the admissible interval (0, {max})")]
    InvalidRadius { radius: f64, max: f64 },

    #[error("weights are inequivalent (witness index {witness_index}); no bounded isomorphism exists")]
    InequivalentWeights { witness_index: usize },
}

/// A bijective correspondence between two finite point sets:
/// sources[i] is paired with targets[assignment[i]].
#[derive(Debug, Clone, PartialEq)]
pub struct PointMap {
    sources: Vec<BallPoint>,
    targets: Vec<BallPoint>,
    assignment: Vec<usize>,
}

fn validate_point_set(points: &[BallPoint], which: &'static str) -> Result<usize, ClassifyError> {
    let Some(first) = points.first() else {
        return Err(ClassifyError::EmptyPointSet);
    };
    let d = first.dim();
    for p in points {
        if p.dim() != d {
            return Err(ClassifyError::DimensionMismatch {
                got: p.dim(),
                expected: d,
            });
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].distance(&points[j]) < DUPLICATE_TOLERANCE {
                return Err(ClassifyError::DuplicatePoints { which, i, j });
            }
        }
    }
    Ok(d)
}

impl PointMap {
    pub fn new(
        sources: Vec<BallPoint>,
        targets: Vec<BallPoint>,
        assignment: Vec<usize>,
    ) -> Result<Self, ClassifyError> {
        let ds = validate_point_set(&sources, "source")?;
        let dt = validate_point_set(&targets, "target")?;
        if sources.len() != targets.len() {
            return Err(ClassifyError::SizeMismatch {
                left: sources.len(),
                right: targets.len(),
            });
        }
        if ds != dt {
            return Err(ClassifyError::DimensionMismatch {
                got: dt,
                expected: ds,
            });
        }
        let n = sources.len();
        if assignment.len() != n {
            return Err(ClassifyError::InvalidAssignment { n });
        }
        let mut seen = vec![false; n];
        for &k in &assignment {
            if k >= n || seen[k] {
                return Err(ClassifyError::InvalidAssignment { n });
            }
            seen[k] = true;
        }
        Ok(Self {
            sources,
            targets,
            assignment,
        })
    }

    /// Pairs sources[i] with targets[i].
    pub fn identity(sources: Vec<BallPoint>, targets: Vec<BallPoint>) -> Result<Self, ClassifyError> {
        let n = sources.len();
        Self::new(sources, targets, (0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sources[0].dim()
    }

    pub fn sources(&self) -> &[BallPoint] {
        &self.sources
    }

    pub fn targets(&self) -> &[BallPoint] {
        &self.targets
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn target_of(&self, i: usize) -> &BallPoint {
        &self.targets[self.assignment[i]]
    }
}

/// A certified induced isometry: the point correspondence together with
/// the nowhere-zero factor values and the ratio-matrix reconstruction
/// residual.
#[derive(Debug, Clone)]
pub struct IsometryWitness {
    pub map: PointMap,
    pub factors: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub enum IsometryOutcome {
    Witness(IsometryWitness),
    NotIsometric { rank: usize },
}

impl IsometryOutcome {
    pub fn witness(&self) -> Option<&IsometryWitness> {
        match self {
            IsometryOutcome::Witness(w) => Some(w),
            IsometryOutcome::NotIsometric { .. } => None,
        }
    }
}

/// Tests whether a point assignment induces an isometric isomorphism of
/// the spanned kernel subspaces.
///
/// Forms the entrywise ratio R[i][j] = k(aᵢ, aⱼ) / k(bᵢ, bⱼ) of the two
/// Gram matrices under the assignment. The assignment induces an
/// isometry exactly when R has rank one with positive diagonal, in which
/// case the rank-one factor is the witness.
pub fn isometry_test(
    map: &PointMap,
    space: &KernelSpaceSpec,
) -> Result<IsometryOutcome, ClassifyError> {
    if map.dim() != space.dimension() {
        return Err(ClassifyError::DimensionMismatch {
            got: map.dim(),
            expected: space.dimension(),
        });
    }
    let n = map.len();
    let mut upper = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let numerator = kernel_eval(&map.sources()[i], &map.sources()[j], space)?;
            let denominator = kernel_eval(map.target_of(i), map.target_of(j), space)?;
            upper[i][j] = numerator / denominator;
        }
    }
    let ratio = HermitianMatrix::from_upper(n, |i, j| upper[i][j])?;
    let rank = numerical_rank(&ratio, space.tol());
    if rank != 1 {
        return Ok(IsometryOutcome::NotIsometric { rank });
    }
    if (0..n).any(|i| {
        let diagonal = ratio.entry(i, i).re;
        diagonal <= 0.0 || diagonal.is_nan()
    }) {
        return Ok(IsometryOutcome::NotIsometric { rank });
    }
    match rank1_factor(&ratio, space.tol()) {
        Ok(factor) => Ok(IsometryOutcome::Witness(IsometryWitness {
            map: map.clone(),
            factors: factor.values,
            residual: factor.residual,
        })),
        // A factorization that fails its own residual check is a refusal,
        // not a witness.
        Err(_) => Ok(IsometryOutcome::NotIsometric { rank }),
    }
}

/// δ(x, y) = |1 − ⟨x,y⟩|² / ((1 − ‖x‖²)(1 − ‖y‖²)).
///
/// Invariant under every ball automorphism, so candidate assignments must
/// match it pairwise; used to prune the searches.
fn automorphism_invariant(x: &BallPoint, y: &BallPoint) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let numerator = (one - x.inner(y)).norm_sqr();
    numerator / ((1.0 - x.norm() * x.norm()) * (1.0 - y.norm() * y.norm()))
}

fn invariant_matrix(points: &[BallPoint]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut delta = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            delta[i][j] = automorphism_invariant(&points[i], &points[j]);
        }
    }
    delta
}

fn invariants_compatible(a: f64, b: f64) -> bool {
    (a - b).abs() <= PRUNE_RELATIVE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Quick reject: the multisets of pairwise invariants must agree.
fn invariant_multisets_match(ds: &[Vec<f64>], dt: &[Vec<f64>]) -> bool {
    let collect = |d: &[Vec<f64>]| {
        let n = d.len();
        let mut v = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                v.push(d[i][j]);
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite invariants"));
        v
    };
    let a = collect(ds);
    let b = collect(dt);
    a.iter().zip(b.iter()).all(|(&x, &y)| invariants_compatible(x, y))
}

fn backtrack_assignments<T, F>(
    ds: &[Vec<f64>],
    dt: &[Vec<f64>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    tested: &mut usize,
    full_test: &mut F,
) -> Result<Option<T>, ClassifyError>
where
    F: FnMut(&[usize]) -> Result<Option<T>, ClassifyError>,
{
    let n = ds.len();
    let position = assignment.len();
    if position == n {
        *tested += 1;
        return full_test(assignment);
    }
    for candidate in 0..n {
        if used[candidate] {
            continue;
        }
        let consistent = (0..position)
            .all(|k| invariants_compatible(ds[k][position], dt[assignment[k]][candidate]));
        if !consistent {
            continue;
        }
        used[candidate] = true;
        assignment.push(candidate);
        if let Some(hit) = backtrack_assignments(ds, dt, assignment, used, tested, full_test)? {
            return Ok(Some(hit));
        }
        assignment.pop();
        used[candidate] = false;
    }
    Ok(None)
}

/// Lexicographic first-success search over invariant-pruned assignments.
/// Returns the hit (if any) and the number of fully tested assignments.
fn search_assignments<T, F>(
    sources: &[BallPoint],
    targets: &[BallPoint],
    mut full_test: F,
) -> Result<(Option<T>, usize), ClassifyError>
where
    F: FnMut(&[usize]) -> Result<Option<T>, ClassifyError>,
{
    let ds = invariant_matrix(sources);
    let dt = invariant_matrix(targets);
    if !invariant_multisets_match(&ds, &dt) {
        return Ok((None, 0));
    }
    let n = sources.len();
    let mut assignment = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut tested = 0;
    let hit = backtrack_assignments(&ds, &dt, &mut assignment, &mut used, &mut tested, &mut full_test)?;
    Ok((hit, tested))
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(IsometryWitness),
    NotIsometric,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&IsometryWitness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::NotIsometric => None,
        }
    }
}

/// Searches all assignments between two point sets for one inducing an
/// isometry, with invariant-based pruning.
pub fn isometry_search(
    sources: &[BallPoint],
    targets: &[BallPoint],
    space: &KernelSpaceSpec,
) -> Result<SearchOutcome, ClassifyError> {
    isometry_search_with_cap(sources, targets, space, DEFAULT_SEARCH_CAP)
}

pub fn isometry_search_with_cap(
    sources: &[BallPoint],
    targets: &[BallPoint],
    space: &KernelSpaceSpec,
    cap: usize,
) -> Result<SearchOutcome, ClassifyError> {
    if sources.is_empty() && targets.is_empty() {
        return Err(ClassifyError::EmptyPointSet);
    }
    if sources.len() != targets.len() {
        // No bijection exists at all.
        return Ok(SearchOutcome::NotIsometric);
    }
    if sources.len() > cap {
        return Err(ClassifyError::CapExceeded {
            size: sources.len(),
            cap,
        });
    }
    validate_point_set(sources, "source")?;
    validate_point_set(targets, "target")?;
    let (hit, _) = search_assignments(sources, targets, |assignment| {
        let map = PointMap::new(sources.to_vec(), targets.to_vec(), assignment.to_vec())?;
        Ok(isometry_test(&map, space)?.witness().cloned())
    })?;
    Ok(match hit {
        Some(witness) => SearchOutcome::Found(witness),
        None => SearchOutcome::NotIsometric,
    })
}

/// Why a congruence search refused.
#[derive(Debug, Clone, PartialEq)]
pub enum CongruenceRefusal {
    SizeMismatch {
        left: usize,
        right: usize,
    },
    /// After moving the paired base points to the origin, a Hermitian
    /// inner product disagreed.
    InnerProductMismatch {
        i: usize,
        j: usize,
        source: Complex64,
        target: Complex64,
    },
    /// Every candidate bijection was pruned or failed.
    Exhausted {
        assignments_tried: usize,
    },
}

#[derive(Debug, Clone)]
pub enum CongruenceVerdict {
    Congruent {
        witness: BallAutomorphism,
        assignment: Vec<usize>,
        /// Max Euclidean error of the witness over the paired points.
        point_error: f64,
    },
    NotCongruent {
        refusal: CongruenceRefusal,
    },
}

impl CongruenceVerdict {
    pub fn is_congruent(&self) -> bool {
        matches!(self, CongruenceVerdict::Congruent { .. })
    }

    pub fn witness(&self) -> Option<&BallAutomorphism> {
        match self {
            CongruenceVerdict::Congruent { witness, .. } => Some(witness),
            CongruenceVerdict::NotCongruent { .. } => None,
        }
    }
}

enum AssignmentCheck {
    Witness {
        witness: BallAutomorphism,
        point_error: f64,
    },
    Mismatch {
        i: usize,
        j: usize,
        source: Complex64,
        target: Complex64,
    },
    Failed,
}

/// Tests one assignment for congruence.
///
/// Both sets are normalized by the involutions moving the paired base
/// points to the origin; the assignment is realized by an automorphism
/// exactly when the normalized sets are related by a unitary, i.e. when
/// all pairwise Hermitian inner products agree. The witness is assembled
/// as θ⁻¹ ∘ U ∘ ψ⁻¹ and verified pointwise before being accepted.
fn congruence_for_assignment(
    sources: &[BallPoint],
    targets: &[BallPoint],
    assignment: &[usize],
    tol: &TolerancePolicy,
) -> Result<AssignmentCheck, ClassifyError> {
    let base_source = &sources[0];
    let base_target = &targets[assignment[0]];
    let psi = involution_at(base_source);
    let theta = involution_at(base_target);
    let n = sources.len();
    let mut normalized_sources = Vec::with_capacity(n);
    let mut normalized_targets = Vec::with_capacity(n);
    for i in 0..n {
        normalized_sources.push(psi.apply(&sources[i])?.coords().clone());
        normalized_targets.push(theta.apply(&targets[assignment[i]])?.coords().clone());
    }
    for i in 0..n {
        for j in i..n {
            let source = inner(&normalized_sources[i], &normalized_sources[j]);
            let target = inner(&normalized_targets[i], &normalized_targets[j]);
            if (source - target).norm() > tol.tol_eq {
                return Ok(AssignmentCheck::Mismatch {
                    i,
                    j,
                    source,
                    target,
                });
            }
        }
    }
    let Ok(unitary) = crate::linalg::unitary_extension(&normalized_sources, &normalized_targets, tol)
    else {
        return Ok(AssignmentCheck::Failed);
    };
    let Ok(inner_map) = BallAutomorphism::new(unitary, base_source.clone(), tol) else {
        return Ok(AssignmentCheck::Failed);
    };
    // θ is an involution, so θ⁻¹ = θ.
    let Ok(witness) = theta.compose(&inner_map, tol) else {
        return Ok(AssignmentCheck::Failed);
    };
    let mut point_error = 0.0_f64;
    for i in 0..n {
        let Ok(image) = witness.apply(&sources[i]) else {
            return Ok(AssignmentCheck::Failed);
        };
        point_error = point_error.max(image.distance(&targets[assignment[i]]));
    }
    if point_error > tol.tol_eq {
        return Ok(AssignmentCheck::Failed);
    }
    Ok(AssignmentCheck::Witness {
        witness,
        point_error,
    })
}

/// Decides whether two point sets are related by a ball automorphism,
/// searching over invariant-pruned assignments.
pub fn congruence_test(
    sources: &[BallPoint],
    targets: &[BallPoint],
    tol: &TolerancePolicy,
) -> Result<CongruenceVerdict, ClassifyError> {
    congruence_test_with_cap(sources, targets, tol, DEFAULT_SEARCH_CAP)
}

pub fn congruence_test_with_cap(
    sources: &[BallPoint],
    targets: &[BallPoint],
    tol: &TolerancePolicy,
    cap: usize,
) -> Result<CongruenceVerdict, ClassifyError> {
    if sources.is_empty() && targets.is_empty() {
        return Err(ClassifyError::EmptyPointSet);
    }
    if sources.len() != targets.len() {
        return Ok(CongruenceVerdict::NotCongruent {
            refusal: CongruenceRefusal::SizeMismatch {
                left: sources.len(),
                right: targets.len(),
            },
        });
    }
    if sources.len() > cap {
        return Err(ClassifyError::CapExceeded {
            size: sources.len(),
            cap,
        });
    }
    validate_point_set(sources, "source")?;
    validate_point_set(targets, "target")?;
    let mut first_mismatch: Option<CongruenceRefusal> = None;
    let (hit, tried) = search_assignments(sources, targets, |assignment| {
        match congruence_for_assignment(sources, targets, assignment, tol)? {
            AssignmentCheck::Witness {
                witness,
                point_error,
            } => Ok(Some((witness, assignment.to_vec(), point_error))),
            AssignmentCheck::Mismatch {
                i,
                j,
                source,
                target,
            } => {
                if first_mismatch.is_none() {
                    first_mismatch = Some(CongruenceRefusal::InnerProductMismatch {
                        i,
                        j,
                        source,
                        target,
                    });
                }
                Ok(None)
            }
            AssignmentCheck::Failed => Ok(None),
        }
    })?;
    Ok(match hit {
        Some((witness, assignment, point_error)) => CongruenceVerdict::Congruent {
            witness,
            assignment,
            point_error,
        },
        None => CongruenceVerdict::NotCongruent {
            refusal: first_mismatch.unwrap_or(CongruenceRefusal::Exhausted {
                assignments_tried: tried,
            }),
        },
    })
}

/// (1 − z)^t on the unit disk via the principal branch.
pub fn branch_map(z: Complex64, t: f64) -> Result<Complex64, ClassifyError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ClassifyError::InvalidExponent { t });
    }
    Ok(principal_power(Complex64::new(1.0, 0.0) - z, t)?)
}

/// A pair z ≠ w of equal modulus identified by the branch map.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCollision {
    pub z: Complex64,
    pub w: Complex64,
    /// The common value (1 − z)^t = (1 − w)^t = −radius^t, known in
    /// closed form from the construction.
    pub value: Complex64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchInjectivity {
    /// For t ≤ 2 the map is injective on the punctured disk.
    Injective,
    Collision(BranchCollision),
}

/// Default collision radius, chosen to keep |z| < 1 with margin.
pub fn default_collision_radius(t: f64) -> f64 {
    (PI / t).cos().min(0.8)
}

/// Constructs the collision z = 1 − r·e^{iπ/t}, w = conj(z) for t > 2.
///
/// The argument of 1 − z is exactly π/t, so raising to the t-th power
/// lands both points on the negative real axis at −r^t.
pub fn branch_collision_with_radius(t: f64, radius: f64) -> Result<BranchCollision, ClassifyError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ClassifyError::InvalidExponent { t });
    }
    if t <= 2.0 {
        return Err(ClassifyError::InjectiveRange { t });
    }
    let angle = PI / t;
    let max_radius = 2.0 * angle.cos();
    if !(radius > 0.0 && radius < max_radius) {
        return Err(ClassifyError::InvalidRadius {
            radius,
            max: max_radius,
        });
    }
    let z = Complex64::new(1.0, 0.0) - Complex64::from_polar(radius, angle);
    if z.norm() >= 1.0 - BOUNDARY_MARGIN {
        return Err(ClassifyError::InvalidRadius {
            radius,
            max: max_radius,
        });
    }
    Ok(BranchCollision {
        z,
        w: z.conj(),
        value: Complex64::new(-radius.powf(t), 0.0),
        radius,
    })
}

/// Injectivity analysis of z ↦ (1 − z)^t on the punctured disk.
pub fn branch_collision(t: f64) -> Result<BranchInjectivity, ClassifyError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ClassifyError::InvalidExponent { t });
    }
    if t <= 2.0 {
        return Ok(BranchInjectivity::Injective);
    }
    Ok(BranchInjectivity::Collision(branch_collision_with_radius(
        t,
        default_collision_radius(t),
    )?))
}

/// Randomized spot check backing the injectivity verdict: the smallest
/// |(1−z)^t − (1−w)^t| over sampled pairs with |z − w| > `min_distance`.
pub fn branch_separation_probe<R: Rng>(
    t: f64,
    rng: &mut R,
    samples: usize,
    min_distance: f64,
) -> Result<f64, ClassifyError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ClassifyError::InvalidExponent { t });
    }
    let mut minimum = f64::INFINITY;
    let mut accepted = 0;
    while accepted < samples {
        let z = crate::sampling::disk_point(rng, 0.999);
        let w = crate::sampling::disk_point(rng, 0.999);
        if z.norm() < 1e-6 || w.norm() < 1e-6 || (z - w).norm() <= min_distance {
            continue;
        }
        accepted += 1;
        let separation = (branch_map(z, t)? - branch_map(w, t)?).norm();
        minimum = minimum.min(separation);
    }
    Ok(minimum)
}

/// An isometric-but-not-congruent pair of three-point sets along the
/// first coordinate axis.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub sources: Vec<BallPoint>,
    pub targets: Vec<BallPoint>,
    pub map: PointMap,
    pub collision: BranchCollision,
}

fn embed_first_axis(value: Complex64, dimension: usize) -> Result<BallPoint, ClassifyError> {
    let mut coords = vec![Complex64::new(0.0, 0.0); dimension];
    coords[0] = value;
    Ok(BallPoint::from_slice(&coords)?)
}

/// Builds point sets that span isometric kernel subspaces without being
/// congruent; only possible for exponents above 2.
///
/// With ⟨a₁,a₂⟩ = z, ⟨b₁,b₂⟩ = w from a branch collision and matching
/// norms ‖aᵢ‖ = ‖bᵢ‖, the Gram ratio matrix is identically one, so the
/// given assignment induces an isometry while its inner products differ.
/// The two nonzero points are placed at distinct radii |z|^(3/4) and
/// |z|^(1/4): an equal-radius split (both points at |z|^(1/2)) is
/// degenerate (the rotation by a₂/a₁ then carries {0, a₁, a₂} onto
/// {0, b₂, b₁}, making the sets congruent after all). Distinct radii
/// leave the stated assignment as the only norm-compatible pairing of
/// the nonzero points.
pub fn counterexample_construct(t: f64, dimension: usize) -> Result<Counterexample, ClassifyError> {
    counterexample_construct_with_radius(t, dimension, default_collision_radius(t))
}

pub fn counterexample_construct_with_radius(
    t: f64,
    dimension: usize,
    radius: f64,
) -> Result<Counterexample, ClassifyError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ClassifyError::InvalidExponent { t });
    }
    if t <= 2.0 {
        return Err(ClassifyError::FaithfulExponent { t });
    }
    if dimension == 0 {
        return Err(KernelError::InvalidDimension.into());
    }
    let collision = branch_collision_with_radius(t, radius)?;
    let split = collision.z.norm().powf(0.25);
    let sources = vec![
        BallPoint::origin(dimension),
        embed_first_axis(collision.z / split, dimension)?,
        embed_first_axis(Complex64::new(split, 0.0), dimension)?,
    ];
    let targets = vec![
        BallPoint::origin(dimension),
        embed_first_axis(collision.w / split, dimension)?,
        embed_first_axis(Complex64::new(split, 0.0), dimension)?,
    ];
    let map = PointMap::identity(sources.clone(), targets.clone())?;
    Ok(Counterexample {
        sources,
        targets,
        map,
        collision,
    })
}

/// Verdict on two weight sequences over a shared horizon.
#[derive(Debug, Clone, PartialEq)]
pub enum HardyVerdict {
    /// Constant ratio wₙ/uₙ = ratio at every checked index.
    Isometric { ratio: f64 },
    /// Ratios bounded in [lower, upper] with 0 < lower ≤ upper.
    Equivalent { lower: f64, upper: f64 },
    Inequivalent { witness_index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardyEquivalenceVerdict {
    pub verdict: HardyVerdict,
    pub horizon: usize,
    /// True when both families admit symbolic asymptotics; custom arrays
    /// yield horizon-limited verdicts only.
    pub certified: bool,
}

/// Asymptotic model wₙ ≈ coefficient · n^exponent for tagged families.
fn family_asymptotics(family: WeightFamily) -> Option<(f64, f64)> {
    match family {
        WeightFamily::Constant(c) => Some((0.0, c)),
        WeightFamily::Power(s) => Some((s, 1.0)),
        WeightFamily::Binomial(t) => Some((1.0 - t, statrs::function::gamma::gamma(t))),
        WeightFamily::Custom => None,
    }
}

/// Compares two weight sequences: proportional, boundedly equivalent, or
/// inequivalent.
///
/// Tagged closed-form families are decided by their symbolic growth
/// exponents; custom arrays fall back to a last-quarter trend heuristic
/// and are horizon-limited by construction.
pub fn hardy_equivalence(
    w: &WeightSequence,
    u: &WeightSequence,
    tol: &TolerancePolicy,
) -> HardyEquivalenceVerdict {
    let horizon = w.horizon().min(u.horizon());
    let ratios: Vec<f64> = (0..=horizon).map(|n| w.value(n) / u.value(n)).collect();
    let mut min_index = 0;
    let mut max_index = 0;
    for (n, &r) in ratios.iter().enumerate() {
        if r < ratios[min_index] {
            min_index = n;
        }
        if r > ratios[max_index] {
            max_index = n;
        }
    }
    let lower = ratios[min_index];
    let upper = ratios[max_index];
    let symbolic = (
        family_asymptotics(w.family()),
        family_asymptotics(u.family()),
    );
    let certified = symbolic.0.is_some() && symbolic.1.is_some();

    if upper <= lower * (1.0 + tol.tol_eq) {
        return HardyEquivalenceVerdict {
            verdict: HardyVerdict::Isometric { ratio: ratios[0] },
            horizon,
            certified,
        };
    }

    if let (Some((we, wc)), Some((ue, uc))) = symbolic {
        if (we - ue).abs() > 1e-12 {
            let witness_index = if we > ue { max_index } else { min_index };
            return HardyEquivalenceVerdict {
                verdict: HardyVerdict::Inequivalent { witness_index },
                horizon,
                certified: true,
            };
        }
        let limit = wc / uc;
        return HardyEquivalenceVerdict {
            verdict: HardyVerdict::Equivalent {
                lower: lower.min(limit),
                upper: upper.max(limit),
            },
            horizon,
            certified: true,
        };
    }

    // Horizon-limited trend analysis over the last quarter.
    let span = (horizon / 4).max(1);
    let start = horizon - span;
    let tail = &ratios[start..];
    let increasing = tail.windows(2).all(|p| p[1] >= p[0]);
    let decreasing = tail.windows(2).all(|p| p[1] <= p[0]);
    let slope = (ratios[horizon] / ratios[start]).ln()
        / (((horizon + 1) as f64) / ((start + 1) as f64)).ln();
    if (increasing || decreasing) && slope.abs() > TREND_SLOPE_THRESHOLD {
        let witness_index = if slope > 0.0 { max_index } else { min_index };
        return HardyEquivalenceVerdict {
            verdict: HardyVerdict::Inequivalent { witness_index },
            horizon,
            certified: false,
        };
    }
    HardyEquivalenceVerdict {
        verdict: HardyVerdict::Equivalent { lower, upper },
        horizon,
        certified: false,
    }
}

/// The diagonal isomorphism T zⁿ = αₙ zⁿ between two weighted Hardy
/// spaces, with the proportionality constant of its action on kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalIsomorphism {
    pub alphas: Vec<f64>,
    /// λ with T(kernel at s of w) = λ · (kernel at s of u) coefficientwise:
    /// 1 for the ratio choice αₙ = wₙ/uₙ, 1/√c for the isometric choice.
    pub kernel_scale: f64,
    pub verdict: HardyEquivalenceVerdict,
}

impl DiagonalIsomorphism {
    /// Coefficientwise defect max_n |αₙ/wₙ − kernel_scale/uₙ| of the
    /// kernel mapping identity.
    pub fn kernel_identity_residual(&self, w: &WeightSequence, u: &WeightSequence) -> f64 {
        let horizon = self.verdict.horizon.min(w.horizon()).min(u.horizon());
        (0..=horizon)
            .map(|n| (self.alphas[n] / w.value(n) - self.kernel_scale / u.value(n)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_isometric(&self) -> bool {
        matches!(self.verdict.verdict, HardyVerdict::Isometric { .. })
    }
}

/// Builds the diagonal isomorphism when the weights are equivalent:
/// αₙ = wₙ/uₙ in general, αₙ = √c when the ratio is the constant c.
pub fn build_hardy_isomorphism(
    w: &WeightSequence,
    u: &WeightSequence,
    tol: &TolerancePolicy,
) -> Result<DiagonalIsomorphism, ClassifyError> {
    let verdict = hardy_equivalence(w, u, tol);
    let horizon = verdict.horizon;
    match verdict.verdict {
        HardyVerdict::Inequivalent { witness_index } => {
            Err(ClassifyError::InequivalentWeights { witness_index })
        }
        HardyVerdict::Isometric { ratio } => {
            let alpha = ratio.sqrt();
            Ok(DiagonalIsomorphism {
                alphas: vec![alpha; horizon + 1],
                kernel_scale: 1.0 / alpha,
                verdict,
            })
        }
        HardyVerdict::Equivalent { .. } => Ok(DiagonalIsomorphism {
            alphas: (0..=horizon).map(|n| w.value(n) / u.value(n)).collect(),
            kernel_scale: 1.0,
            verdict,
        }),
    }
}

/// The composition operator of the rotation z ↦ e^{iθ} z, diagonalized
/// over the monomials as a map from one weighted space to another.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationDiagonal {
    pub theta: f64,
    /// Diagonal entries e^{inθ}.
    pub diagonal: Vec<Complex64>,
    /// ‖C zⁿ‖_u / ‖zⁿ‖_w = √(uₙ/wₙ); independent of θ.
    pub norm_profile: Vec<f64>,
    pub verdict: HardyEquivalenceVerdict,
}

impl RotationDiagonal {
    /// Bounded with bounded inverse over the horizon.
    pub fn is_isomorphism_at_horizon(&self) -> bool {
        !matches!(self.verdict.verdict, HardyVerdict::Inequivalent { .. })
    }
}

pub fn rotation_composition(
    theta: f64,
    w: &WeightSequence,
    u: &WeightSequence,
    tol: &TolerancePolicy,
) -> RotationDiagonal {
    let verdict = hardy_equivalence(w, u, tol);
    let horizon = verdict.horizon;
    let diagonal = (0..=horizon)
        .map(|n| Complex64::from_polar(1.0, n as f64 * theta))
        .collect();
    let norm_profile = (0..=horizon)
        .map(|n| (u.value(n) / w.value(n)).sqrt())
        .collect();
    RotationDiagonal {
        theta,
        diagonal,
        norm_profile,
        verdict,
    }
}
