//! Complex scalar and dense-matrix substrate.
//!
//! Everything downstream works over `num_complex::Complex64` and small
//! dense `nalgebra` matrices. This module provides the principal-branch
//! scalar functions, a validated Hermitian matrix type, SVD-based
//! numerical rank, rank-one factorization with a fixed phase convention,
//! and unitary extension of inner-product-preserving vector maps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Errors from the linear-algebra substrate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum LinalgError {
    #[error("principal logarithm of zero is undefined")]
    ZeroLogArgument,

    #[error("principal power requires Re(z) > 0, got Re(z) = {re}")]
    BranchDomain { re: f64 },

    #[error("matrix is not Hermitian within slack {slack:e} (entry ({i},{j}) deviates by {deviation:e})")]
    NotHermitian {
        i: usize,
        j: usize,
        deviation: f64,
        slack: f64,
    },

    #[error("matrix entry ({i},{j}) is not finite")]
    NonFiniteEntry { i: usize, j: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected numerical rank 1, found rank {rank}")]
    NotRankOne { rank: usize },

    #[error("diagonal entry {index} is not strictly positive")]
    NotPositive { index: usize },

    #[error("rank-one reconstruction residual {residual:e} exceeds tolerance")]
    FactorResidual { residual: f64 },

    #[error("inner products of sources and targets disagree at pair ({i},{j}): {source_product} vs {target_product}")]
    NotIsometricData {
        i: usize,
        j: usize,
        source_product: Complex64,
        target_product: Complex64,
    },

    #[error("vector {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("source and target counts differ: {sources} vs {targets}")]
    CountMismatch { sources: usize, targets: usize },

    #[error("unitary extension failed verification (defect {defect:e})")]
    ExtensionBreakdown { defect: f64 },

    #[error("tolerance {name} = {value} must lie strictly between 0 and 1")]
    InvalidTolerance { name: &'static str, value: f64 },
}

/// Relative singular-value cutoff, entrywise equality slack, and
/// Hermitian-symmetry slack used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Relative singular-value cutoff for rank decisions.
    pub tol_rank: f64,
    /// Entrywise equality tolerance.
    pub tol_eq: f64,
    /// Hermitian symmetry slack.
    pub tol_herm: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            tol_rank: 1e-9,
            tol_eq: 1e-8,
            tol_herm: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub fn new(tol_rank: f64, tol_eq: f64, tol_herm: f64) -> Result<Self, LinalgError> {
        for (name, value) in [
            ("tol_rank", tol_rank),
            ("tol_eq", tol_eq),
            ("tol_herm", tol_herm),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(LinalgError::InvalidTolerance { name, value });
            }
        }
        Ok(Self {
            tol_rank,
            tol_eq,
            tol_herm,
        })
    }

    /// Default policy with `tol_eq` replaced.
    pub fn with_tol_eq(tol_eq: f64) -> Result<Self, LinalgError> {
        let base = Self::default();
        Self::new(base.tol_rank, tol_eq, base.tol_herm)
    }
}

/// Hermitian inner product ⟨x, y⟩ = Σ xᵢ · conj(yᵢ), linear in the first slot.
pub fn inner(x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a * b.conj())
        .sum()
}

/// Principal branch of the complex logarithm, imaginary part in (−π, π].
pub fn principal_log(z: Complex64) -> Result<Complex64, LinalgError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(LinalgError::ZeroLogArgument);
    }
    Ok(z.ln())
}

/// z^t = exp(t · Log z) on the right half plane Re(z) > 0.
///
/// The domain restriction keeps all uses away from the branch cut, so
/// the identity z^t w^t = (zw)^t holds whenever z, w and zw all lie in
/// the half plane.
pub fn principal_power(z: Complex64, t: f64) -> Result<Complex64, LinalgError> {
    if z.re <= 0.0 || z.re.is_nan() {
        return Err(LinalgError::BranchDomain { re: z.re });
    }
    Ok((principal_log(z)? * t).exp())
}

/// A square complex matrix validated to be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry (within `tol_herm`) and finiteness.
    pub fn from_matrix(
        data: DMatrix<Complex64>,
        tol: &TolerancePolicy,
    ) -> Result<Self, LinalgError> {
        if data.nrows() != data.ncols() {
            return Err(LinalgError::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let n = data.nrows();
        for i in 0..n {
            for j in 0..n {
                let z = data[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFiniteEntry { i, j });
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                let deviation = (data[(i, j)] - data[(j, i)].conj()).norm();
                if deviation > tol.tol_herm {
                    return Err(LinalgError::NotHermitian {
                        i,
                        j,
                        deviation,
                        slack: tol.tol_herm,
                    });
                }
            }
        }
        Ok(Self { data })
    }

    /// Builds an exactly Hermitian matrix from its upper triangle.
    ///
    /// `entry(i, j)` is consulted only for i ≤ j; the diagonal keeps its
    /// real part and the lower triangle is mirrored by conjugation.
    pub fn from_upper<F>(n: usize, mut entry: F) -> Result<Self, LinalgError>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            for j in i..n {
                let z = entry(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFiniteEntry { i, j });
                }
                if i == j {
                    data[(i, i)] = Complex64::new(z.re, 0.0);
                } else {
                    data[(i, j)] = z;
                    data[(j, i)] = z.conj();
                }
            }
        }
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Trace (real by Hermitian symmetry).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }
}

/// Number of singular values above `tol_rank` relative to the largest;
/// 0 for the zero matrix.
pub fn numerical_rank(m: &HermitianMatrix, tol: &TolerancePolicy) -> usize {
    if m.dim() == 0 {
        return 0;
    }
    let svd = m.matrix().clone().svd(false, false);
    let largest = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol.tol_rank * largest)
        .count()
}

/// A vector f with M[i][j] = f[i]·conj(f[j]) and the reconstruction residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Factor {
    pub values: Vec<Complex64>,
    /// Max entrywise reconstruction error |f[i]·conj(f[j]) − M[i][j]|.
    pub residual: f64,
}

/// Factors a rank-one Hermitian matrix with positive diagonal as f·f*.
///
/// The factor is only determined up to a unimodular global phase; the
/// convention fixed here is f[0] = sqrt(M[0][0]) real positive and
/// f[j] = conj(M[0][j]) / f[0].
pub fn rank1_factor(m: &HermitianMatrix, tol: &TolerancePolicy) -> Result<Rank1Factor, LinalgError> {
    let n = m.dim();
    let rank = numerical_rank(m, tol);
    if rank != 1 {
        return Err(LinalgError::NotRankOne { rank });
    }
    for i in 0..n {
        let diagonal = m.entry(i, i).re;
        if diagonal <= 0.0 || diagonal.is_nan() {
            return Err(LinalgError::NotPositive { index: i });
        }
    }
    let f0 = m.entry(0, 0).re.sqrt();
    let mut values = Vec::with_capacity(n);
    values.push(Complex64::new(f0, 0.0));
    for j in 1..n {
        values.push(m.entry(0, j).conj() / f0);
    }
    let mut residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let err = (values[i] * values[j].conj() - m.entry(i, j)).norm();
            residual = residual.max(err);
        }
    }
    if residual > tol.tol_eq {
        return Err(LinalgError::FactorResidual { residual });
    }
    Ok(Rank1Factor { values, residual })
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Pivoted modified Gram–Schmidt step: orthogonalizes `v` against `basis`.
fn orthogonalize(v: &mut DVector<Complex64>, basis: &[DVector<Complex64>]) {
    // Two passes keep the result orthogonal even for nearly dependent input.
    for _ in 0..2 {
        for q in basis {
            let coeff = inner(v, q);
            *v -= q * coeff;
        }
    }
}

/// Completes `basis` to an orthonormal basis of ℂ^d with pivoted
/// Gram–Schmidt over the standard basis vectors (deterministic pivot order).
fn complete_basis(basis: &[DVector<Complex64>], d: usize) -> Vec<DVector<Complex64>> {
    let mut complement: Vec<DVector<Complex64>> = Vec::new();
    let mut residuals: Vec<DVector<Complex64>> = (0..d)
        .map(|k| {
            let mut e = DVector::from_element(d, Complex64::new(0.0, 0.0));
            e[k] = Complex64::new(1.0, 0.0);
            orthogonalize(&mut e, basis);
            e
        })
        .collect();
    let mut used = vec![false; d];
    while basis.len() + complement.len() < d {
        let mut best = None;
        let mut best_norm = 0.0;
        for (k, r) in residuals.iter().enumerate() {
            if !used[k] && r.norm() > best_norm {
                best_norm = r.norm();
                best = Some(k);
            }
        }
        let k = best.expect("basis completion pivot must exist");
        used[k] = true;
        let q = residuals[k].clone() / Complex64::new(best_norm, 0.0);
        for (j, r) in residuals.iter_mut().enumerate() {
            if !used[j] {
                let coeff = inner(r, &q);
                *r -= &q * coeff;
            }
        }
        complement.push(q);
    }
    complement
}

/// Builds a unitary U with U·sources[i] = targets[i].
///
/// Requires the two lists to have identical pairwise inner products
/// (within `tol_eq`); the spans are orthonormalized by rank-revealing
/// pivoted Gram–Schmidt with a shared pivot order, the bases are mapped
/// to each other, and the orthogonal complements are paired in
/// deterministic pivot order. The result is verified to be unitary and
/// to reproduce the requested action.
pub fn unitary_extension(
    sources: &[DVector<Complex64>],
    targets: &[DVector<Complex64>],
    tol: &TolerancePolicy,
) -> Result<DMatrix<Complex64>, LinalgError> {
    if sources.len() != targets.len() {
        return Err(LinalgError::CountMismatch {
            sources: sources.len(),
            targets: targets.len(),
        });
    }
    let d = sources
        .first()
        .map(|v| v.len())
        .or_else(|| targets.first().map(|v| v.len()))
        .unwrap_or(0);
    if d == 0 {
        return Ok(DMatrix::identity(0, 0));
    }
    for (index, v) in sources.iter().chain(targets.iter()).enumerate() {
        if v.len() != d {
            return Err(LinalgError::DimensionMismatch {
                index: index % sources.len().max(1),
                got: v.len(),
                expected: d,
            });
        }
    }
    let m = sources.len();
    for i in 0..m {
        for j in i..m {
            let s = inner(&sources[i], &sources[j]);
            let t = inner(&targets[i], &targets[j]);
            if (s - t).norm() > tol.tol_eq {
                return Err(LinalgError::NotIsometricData {
                    i,
                    j,
                    source_product: s,
                    target_product: t,
                });
            }
        }
    }

    // Shared pivot order: the source residual norms drive both sides.
    let max_norm = sources.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    let cutoff = (max_norm * tol.tol_rank).max(f64::MIN_POSITIVE);
    let mut source_residuals: Vec<DVector<Complex64>> = sources.to_vec();
    let mut target_residuals: Vec<DVector<Complex64>> = targets.to_vec();
    let mut used = vec![false; m];
    let mut source_basis: Vec<DVector<Complex64>> = Vec::new();
    let mut target_basis: Vec<DVector<Complex64>> = Vec::new();
    loop {
        let mut pivot = None;
        let mut pivot_norm = cutoff;
        for k in 0..m {
            if !used[k] && source_residuals[k].norm() > pivot_norm {
                pivot_norm = source_residuals[k].norm();
                pivot = Some(k);
            }
        }
        let Some(k) = pivot else { break };
        used[k] = true;
        let qs = source_residuals[k].clone() / Complex64::new(source_residuals[k].norm(), 0.0);
        let qt = target_residuals[k].clone() / Complex64::new(target_residuals[k].norm(), 0.0);
        for j in 0..m {
            if !used[j] {
                let cs = inner(&source_residuals[j], &qs);
                source_residuals[j] -= &qs * cs;
                let ct = inner(&target_residuals[j], &qt);
                target_residuals[j] -= &qt * ct;
            }
        }
        source_basis.push(qs);
        target_basis.push(qt);
    }

    let source_complement = complete_basis(&source_basis, d);
    let target_complement = complete_basis(&target_basis, d);

    let mut u = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (qt, qs) in target_basis
        .iter()
        .zip(source_basis.iter())
        .chain(target_complement.iter().zip(source_complement.iter()))
    {
        u += qt * qs.adjoint();
    }

    let defect = max_abs(&(&u * u.adjoint() - DMatrix::identity(d, d)));
    if defect > tol.tol_eq {
        return Err(LinalgError::ExtensionBreakdown { defect });
    }
    for (s, t) in sources.iter().zip(targets.iter()) {
        let err = (&u * s - t).norm();
        if err > tol.tol_eq * (1.0 + s.norm()) {
            return Err(LinalgError::ExtensionBreakdown { defect: err });
        }
    }
    Ok(u)
}
