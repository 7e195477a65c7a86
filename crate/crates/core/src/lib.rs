//! Numerical decision procedures for kernel subspaces of the unit ball
//! and weighted Hardy spaces on the disk.
//!
//! The crate is organized around four layers:
//!
//! - [`linalg`]: complex scalars and small dense Hermitian matrices
//!   (principal-branch powers, numerical rank, rank-one factorization,
//!   unitary completion of inner-product-preserving maps).
//! - [`geometry`]: points of the open unit ball in ℂ^d, its Möbius
//!   automorphisms, the pseudo-hyperbolic metric on the disk, and
//!   recovery of disk automorphisms from point correspondences.
//! - [`kernels`]: evaluation of the kernels (1 − ⟨x,y⟩)^{−t} on the ball
//!   and of weighted Hardy kernels on the disk, Gram matrices of finite
//!   point sets, and weight-sequence models.
//! - [`classify`]: the decision procedures built on top: isometry and
//!   congruence tests for finite point sets, branch-injectivity analysis,
//!   construction of isometric-but-not-congruent pairs, and
//!   equivalence/isomorphism verdicts for weighted Hardy spaces.
//!
//! [`sampling`] provides seeded random generators for ball points,
//! unitaries and automorphisms; [`selftest`] bundles the crate's
//! numerical invariants into reproducible suites.

// Index loops over matrix entries stay indexed.
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod sampling;
pub mod selftest;

pub use classify::{
    branch_collision, branch_collision_with_radius, branch_map, congruence_test,
    counterexample_construct, hardy_equivalence, build_hardy_isomorphism, isometry_search,
    isometry_test, rotation_composition, BranchCollision, BranchInjectivity, ClassifyError,
    CongruenceRefusal, CongruenceVerdict, Counterexample, DiagonalIsomorphism,
    HardyEquivalenceVerdict, HardyVerdict, IsometryOutcome, IsometryWitness, PointMap,
    RotationDiagonal, SearchOutcome, DEFAULT_SEARCH_CAP,
};
pub use geometry::{
    involution_at, mobius_fit, pseudo_hyperbolic, rudin_identity_residual, BallAutomorphism,
    BallPoint, DiskAutomorphism, FitObstruction, GeometryError, MobiusFit, BOUNDARY_MARGIN,
};
pub use kernels::{
    gram, kernel_eval, radius_guard, weighted_kernel_eval, GramMatrix, KernelError,
    KernelSpaceSpec, RadiusVerdict, TruncatedKernel, WeightFamily, WeightSequence,
};
pub use linalg::{
    inner, numerical_rank, principal_log, principal_power, rank1_factor, unitary_extension,
    HermitianMatrix, LinalgError, Rank1Factor, TolerancePolicy,
};
