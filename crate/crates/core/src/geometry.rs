//! Points and Möbius automorphisms of the open unit ball in ℂ^d, the
//! pseudo-hyperbolic metric on the disk, and disk-automorphism fitting.
//!
//! Every automorphism of the ball factors as a unitary composed with the
//! standard involution φ_a exchanging 0 and a; that canonical form is the
//! representation used here. The involution is
//!
//! ```text
//! φ_a(x) = (a − P_a x − s_a Q_a x) / (1 − ⟨x, a⟩)
//! ```
//!
//! with P_a the orthogonal projection onto span(a), Q_a = I − P_a and
//! s_a = sqrt(1 − ‖a‖²). Its correctness is validated against the kernel
//! identity `rudin_identity_residual` measures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{inner, TolerancePolicy};

/// Points with norm at or above 1 − BOUNDARY_MARGIN are rejected as
/// boundary-degenerate rather than silently computed.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Two points closer than this are treated as duplicates.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point has norm {norm} ≥ 1 - {margin:e}; boundary-degenerate", margin = BOUNDARY_MARGIN)]
    BoundaryDegenerate { norm: f64 },

    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("dimension mismatch: {got} vs {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("matrix is not unitary within tolerance (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("pairs {i} and {j} share the source point but map to distinct targets")]
    InconsistentPairs { i: usize, j: usize },

    #[error("rotation coefficient has modulus {modulus}, not unimodular")]
    NotUnimodular { modulus: f64 },
}

/// A point of the open unit ball in ℂ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: DVector<Complex64>,
}

impl BallPoint {
    pub fn new(coords: DVector<Complex64>) -> Result<Self, GeometryError> {
        for (index, z) in coords.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate { index });
            }
        }
        let norm = coords.norm();
        if norm >= 1.0 - BOUNDARY_MARGIN {
            return Err(GeometryError::BoundaryDegenerate { norm });
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[Complex64]) -> Result<Self, GeometryError> {
        Self::new(DVector::from_row_slice(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            coords: DVector::from_element(dim, Complex64::new(0.0, 0.0)),
        }
    }

    /// One-dimensional point from a disk element.
    pub fn from_disk(z: Complex64) -> Result<Self, GeometryError> {
        Self::new(DVector::from_vec(vec![z]))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<Complex64> {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// ⟨self, other⟩ = Σ xᵢ conj(yᵢ).
    pub fn inner(&self, other: &BallPoint) -> Complex64 {
        inner(&self.coords, &other.coords)
    }

    pub fn distance(&self, other: &BallPoint) -> f64 {
        (&self.coords - &other.coords).norm()
    }
}

/// Raw involution action on coordinates; `a` must lie strictly inside the ball.
fn involution_coords(a: &DVector<Complex64>, x: &DVector<Complex64>) -> DVector<Complex64> {
    let a_norm = a.norm();
    if a_norm == 0.0 {
        return x.clone();
    }
    let unit = a / Complex64::new(a_norm, 0.0);
    let parallel = &unit * inner(x, &unit);
    let transverse = x - &parallel;
    let s = (1.0 - a_norm * a_norm).sqrt();
    let numerator = a - &parallel - transverse * Complex64::new(s, 0.0);
    let denominator = Complex64::new(1.0, 0.0) - inner(x, a);
    numerator / denominator
}

/// The Möbius involution φ_a with φ_a(a) = 0, φ_a(0) = a and φ_a ∘ φ_a = id.
///
/// φ_0 is the identity by convention.
pub fn involution_at(a: &BallPoint) -> BallAutomorphism {
    BallAutomorphism {
        unitary: DMatrix::identity(a.dim(), a.dim()),
        base: a.clone(),
    }
}

/// An automorphism of the ball in canonical form Φ(x) = U · φ_base(x).
#[derive(Debug, Clone, PartialEq)]
pub struct BallAutomorphism {
    unitary: DMatrix<Complex64>,
    base: BallPoint,
}

impl BallAutomorphism {
    pub fn identity(dim: usize) -> Self {
        Self {
            unitary: DMatrix::identity(dim, dim),
            base: BallPoint::origin(dim),
        }
    }

    /// Validates unitarity and pairs the matrix with the involution at `base`.
    pub fn new(
        unitary: DMatrix<Complex64>,
        base: BallPoint,
        tol: &TolerancePolicy,
    ) -> Result<Self, GeometryError> {
        let d = base.dim();
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(GeometryError::DimensionMismatch {
                got: unitary.nrows(),
                expected: d,
            });
        }
        let defect = (&unitary * unitary.adjoint() - DMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        if defect > tol.tol_eq {
            return Err(GeometryError::NotUnitary { defect });
        }
        Ok(Self { unitary, base })
    }

    pub fn from_unitary(
        unitary: DMatrix<Complex64>,
        tol: &TolerancePolicy,
    ) -> Result<Self, GeometryError> {
        let d = unitary.nrows();
        Self::new(unitary, BallPoint::origin(d), tol)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn unitary(&self) -> &DMatrix<Complex64> {
        &self.unitary
    }

    pub fn base(&self) -> &BallPoint {
        &self.base
    }

    /// True when the involution part is trivial (pure unitary map).
    pub fn is_unitary_only(&self) -> bool {
        self.base.is_origin()
    }

    /// Applies the automorphism; an output at the boundary guard signals
    /// numerical breakdown and is reported as an error.
    pub fn apply(&self, x: &BallPoint) -> Result<BallPoint, GeometryError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                got: x.dim(),
                expected: self.dim(),
            });
        }
        let moved = involution_coords(self.base.coords(), x.coords());
        BallPoint::new(&self.unitary * moved)
    }

    /// Closed-form inverse: (U ∘ φ_a)⁻¹ = U* ∘ φ_{U·a}.
    pub fn inverse(&self) -> Result<Self, GeometryError> {
        let new_base = BallPoint::new(&self.unitary * self.base.coords())?;
        Ok(Self {
            unitary: self.unitary.adjoint(),
            base: new_base,
        })
    }

    /// Canonical form of self ∘ other.
    ///
    /// The base of the composition is Γ⁻¹(0); the unitary part is the
    /// linear map Γ ∘ φ_base, recovered column-by-column from interior
    /// samples and verified to be unitary.
    pub fn compose(&self, other: &Self, tol: &TolerancePolicy) -> Result<Self, GeometryError> {
        let d = self.dim();
        if other.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                got: other.dim(),
                expected: d,
            });
        }
        if self.is_unitary_only() && other.is_unitary_only() {
            return Self::from_unitary(&self.unitary * &other.unitary, tol);
        }
        // Γ⁻¹(0) = Ψ⁻¹(Φ⁻¹(0)) and Φ⁻¹(0) = φ_{aΦ}(0) = aΦ.
        let base = other.inverse()?.apply(&self.base)?;
        let base_involution = involution_at(&base);
        let mut unitary = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        let sample_radius = 0.5;
        for j in 0..d {
            let mut e = DVector::from_element(d, Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(sample_radius, 0.0);
            let sample = BallPoint::new(e)?;
            let image = self.apply(&other.apply(&base_involution.apply(&sample)?)?)?;
            let column = image.coords() / Complex64::new(sample_radius, 0.0);
            unitary.set_column(j, &column);
        }
        Self::new(unitary, base, tol)
    }
}

/// Absolute residual of the two sides of the Möbius kernel identity
///
/// ```text
/// 1 − ⟨φ_a(x), φ_a(y)⟩ = (1 − ‖a‖²) (1 − ⟨x,y⟩) / ((1 − ⟨x,a⟩)(1 − ⟨a,y⟩))
/// ```
///
/// for the involution exchanging 0 and a.
pub fn rudin_identity_residual(a: &BallPoint, x: &BallPoint, y: &BallPoint) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let px = involution_coords(a.coords(), x.coords());
    let py = involution_coords(a.coords(), y.coords());
    let lhs = one - inner(&px, &py);
    let scale = Complex64::new(1.0 - a.norm() * a.norm(), 0.0);
    let rhs = scale * (one - x.inner(y))
        / ((one - x.inner(a)) * (one - a.inner(y)));
    (lhs - rhs).norm()
}

/// Pseudo-hyperbolic distance ρ(x, y) = |x − y| / |1 − conj(x) y| on the disk.
pub fn pseudo_hyperbolic(x: Complex64, y: Complex64) -> f64 {
    debug_assert!(x.norm() < 1.0 && y.norm() < 1.0);
    ((x - y) / (Complex64::new(1.0, 0.0) - x.conj() * y)).norm()
}

/// A conformal automorphism of the unit disk,
/// φ(z) = rotation · (z − base) / (1 − conj(base) z) with |rotation| = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskAutomorphism {
    rotation: Complex64,
    base: Complex64,
}

impl DiskAutomorphism {
    pub fn new(rotation: Complex64, base: Complex64) -> Result<Self, GeometryError> {
        let modulus = rotation.norm();
        if (modulus - 1.0).abs() > 1e-6 {
            return Err(GeometryError::NotUnimodular { modulus });
        }
        if base.norm() >= 1.0 - BOUNDARY_MARGIN {
            return Err(GeometryError::BoundaryDegenerate { norm: base.norm() });
        }
        Ok(Self {
            rotation: rotation / modulus,
            base,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            base: Complex64::new(0.0, 0.0),
        }
    }

    pub fn from_angle(theta: f64, base: Complex64) -> Result<Self, GeometryError> {
        Self::new(Complex64::from_polar(1.0, theta), base)
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotation * (z - self.base) / (Complex64::new(1.0, 0.0) - self.base.conj() * z)
    }
}

/// Obstruction reported when no disk automorphism fits the data.
#[derive(Debug, Clone, PartialEq)]
pub enum FitObstruction {
    /// Pseudo-hyperbolic distances of a source pair and its target pair differ.
    DistanceMismatch {
        i: usize,
        j: usize,
        source_distance: f64,
        target_distance: f64,
    },
    /// The automorphism pinned by the first two pairs misses a later pair.
    UnmatchedPair { index: usize, error: f64 },
}

/// Result of fitting a disk automorphism to point correspondences.
#[derive(Debug, Clone, PartialEq)]
pub enum MobiusFit {
    /// Automorphism pinned by at least two distinct pairs.
    Unique(DiskAutomorphism),
    /// One effective pair only: a fit with an unresolved rotational degree
    /// of freedom about its target.
    RotationFree(DiskAutomorphism),
    NoFit(FitObstruction),
}

/// Translation z ↦ (z − b)/(1 − conj(b) z) taking b to 0.
fn disk_translation(b: Complex64, z: Complex64) -> Complex64 {
    (z - b) / (Complex64::new(1.0, 0.0) - b.conj() * z)
}

/// Inverse translation, taking 0 back to b.
fn disk_translation_inv(b: Complex64, w: Complex64) -> Complex64 {
    (w + b) / (Complex64::new(1.0, 0.0) + b.conj() * w)
}

/// Converts z ↦ m_{y0}⁻¹(rot · m_{x0}(z)) into coefficient form.
fn canonical_disk_map(
    x0: Complex64,
    y0: Complex64,
    rot: Complex64,
) -> Result<DiskAutomorphism, GeometryError> {
    let base = disk_translation_inv(x0, -y0 * rot.conj());
    let eval = |z: Complex64| disk_translation_inv(y0, rot * disk_translation(x0, z));
    // Sample away from the pole of the coefficient formula.
    let candidates = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.6, 0.0),
        Complex64::new(-0.6, 0.0),
        Complex64::new(0.0, 0.6),
    ];
    let probe = candidates
        .iter()
        .copied()
        .max_by(|a, b| {
            (a - base)
                .norm()
                .partial_cmp(&(b - base).norm())
                .expect("finite norms")
        })
        .expect("non-empty candidate list");
    let rotation = eval(probe) * (Complex64::new(1.0, 0.0) - base.conj() * probe) / (probe - base);
    DiskAutomorphism::new(rotation, base)
}

/// Fits a disk automorphism to pairs (xᵢ ↦ yᵢ).
///
/// Requires matching pseudo-hyperbolic distances (the equality case of
/// Schwarz–Pick); with one effective pair the rotational degree of
/// freedom is flagged instead of silently resolved.
pub fn mobius_fit(
    pairs: &[(Complex64, Complex64)],
    tol: &TolerancePolicy,
) -> Result<MobiusFit, GeometryError> {
    if pairs.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    for &(x, y) in pairs {
        for z in [x, y] {
            if z.norm() >= 1.0 - BOUNDARY_MARGIN {
                return Err(GeometryError::BoundaryDegenerate { norm: z.norm() });
            }
        }
    }
    let n = pairs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let same_source = (pairs[i].0 - pairs[j].0).norm() < DUPLICATE_TOLERANCE;
            let same_target = (pairs[i].1 - pairs[j].1).norm() < tol.tol_eq;
            if same_source && !same_target {
                return Err(GeometryError::InconsistentPairs { i, j });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let source_distance = pseudo_hyperbolic(pairs[i].0, pairs[j].0);
            let target_distance = pseudo_hyperbolic(pairs[i].1, pairs[j].1);
            if (source_distance - target_distance).abs() > tol.tol_eq {
                return Ok(MobiusFit::NoFit(FitObstruction::DistanceMismatch {
                    i,
                    j,
                    source_distance,
                    target_distance,
                }));
            }
        }
    }

    let (x0, y0) = pairs[0];
    let second = pairs
        .iter()
        .position(|&(x, _)| (x - x0).norm() >= DUPLICATE_TOLERANCE);
    let Some(j) = second else {
        // Every source coincides with the first: translation-only fit.
        let map = canonical_disk_map(x0, y0, Complex64::new(1.0, 0.0))?;
        return Ok(MobiusFit::RotationFree(map));
    };

    let zeta = disk_translation(x0, pairs[j].0);
    let xi = disk_translation(y0, pairs[j].1);
    let rot = xi / zeta;
    let rot = rot / rot.norm();
    let map = canonical_disk_map(x0, y0, rot)?;
    for (index, &(x, y)) in pairs.iter().enumerate() {
        let error = (map.apply(x) - y).norm();
        if error > tol.tol_eq {
            return Ok(MobiusFit::NoFit(FitObstruction::UnmatchedPair {
                index,
                error,
            }));
        }
    }
    Ok(MobiusFit::Unique(map))
}
