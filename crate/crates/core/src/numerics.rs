//! Complex Hermitian linear algebra used by the rank-one machinery.
//!
//! The DC phase solver needs three things from a PSD matrix: its leading
//! eigenpair (for the spectral-norm subgradient), the gap between trace and
//! spectral norm (which vanishes exactly on rank-one matrices), and a factor
//! `v` with `v vᴴ ≈ m` once that gap is small.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Absolute Hermitian-symmetry tolerance for unit-scale matrices.
const HERMITIAN_TOL: f64 = 1e-12;
/// Relative eigengap below which the leading eigenvalue counts as tied.
const TIE_TOL: f64 = 1e-10;
/// Negative eigenvalues down to this fraction of the trace are clamped to zero.
const PSD_CLAMP: f64 = 1e-8;
/// Components with modulus at or below this are treated as zero when fixing phase.
const PHASE_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not rank-one: trace minus spectral norm = {residual:e}")]
    NotRankOne { residual: f64 },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
}

/// A square complex matrix equal to its conjugate transpose.
///
/// Construction validates the symmetry and then stores the exact Hermitian
/// part `(m + mᴴ)/2`, so downstream code can rely on real diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self, NumericsError> {
        if !m.is_square() {
            return Err(NumericsError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
        let n = m.nrows();
        let mut deviation = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOL * scale || !deviation.is_finite() {
            return Err(NumericsError::NotHermitian { deviation });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Symmetrizes without validation. For matrices that are Hermitian by
    /// construction up to roundoff.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        let mut h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        for i in 0..h.nrows() {
            h[(i, i)].im = 0.0;
        }
        Self(h)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// `v vᴴ`
    pub fn outer(v: &CVector) -> Self {
        Self::from_matrix_unchecked(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    /// Real inner product `⟨A, B⟩ = Re Tr(Aᴴ B)`.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        frobenius_inner(&self.0, &other.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(&self.0 * C64::new(factor, 0.0))
    }

    /// `vᴴ m v`, real for Hermitian `m`.
    pub fn quadratic_form(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.0 * v)[(0, 0)].re
    }
}

impl std::ops::Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

/// `Re Tr(Aᴴ B)` for arbitrary complex matrices of equal shape.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn hermitian_eig(m: &HermitianMatrix) -> EigenDecomposition {
    let n = m.dim();
    if n == 0 {
        return EigenDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m.0.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Index of the first component with modulus above the phase threshold.
fn first_significant(v: &CVector) -> Option<usize> {
    v.iter().position(|z| z.norm() > PHASE_EPS)
}

/// Rotates `v` by a unit phase so its first significant component is real
/// and nonnegative.
pub fn normalize_phase(v: &mut CVector) {
    if let Some(j) = first_significant(v) {
        let rot = v[j].conj() / v[j].norm();
        v.iter_mut().for_each(|z| *z *= rot);
        v[j] = C64::new(v[j].re, 0.0);
    }
}

/// Unit leading eigenvector with the deterministic tie rule applied:
/// among eigenvectors whose eigenvalue is within the tie tolerance of the
/// largest, prefer the earliest first-significant index, then the larger
/// modulus there.
pub fn leading_eigenvector(eig: &EigenDecomposition) -> CVector {
    let n = eig.eigenvalues.len();
    let top = eig.largest();
    let mut best = 0;
    let mut best_key = (usize::MAX, 0.0_f64);
    for i in 0..n {
        if top - eig.eigenvalues[i] > TIE_TOL * top.abs() && i > 0 {
            break;
        }
        let v = eig.eigenvector(i);
        let key = match first_significant(&v) {
            Some(j) => (j, v[j].norm()),
            None => (usize::MAX, 0.0),
        };
        if key.0 < best_key.0 || (key.0 == best_key.0 && key.1 > best_key.1 + PHASE_EPS) {
            best = i;
            best_key = key;
        }
    }
    let mut v = eig.eigenvector(best);
    normalize_phase(&mut v);
    v
}

/// `φ₁φ₁ᴴ`, a subgradient of the spectral norm at a PSD matrix.
pub fn leading_rank_one(m: &HermitianMatrix) -> HermitianMatrix {
    let eig = hermitian_eig(m);
    HermitianMatrix::outer(&leading_eigenvector(&eig))
}

pub fn spectral_norm(m: &HermitianMatrix) -> f64 {
    let eig = hermitian_eig(m);
    eig.eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()))
}

/// `Tr(m) − ‖m‖₂`; zero exactly when a PSD `m` with positive trace has rank one.
pub fn rank_one_residual(m: &HermitianMatrix) -> f64 {
    let eig = hermitian_eig(m);
    m.trace() - eig.largest()
}

/// Recovers `v = √λ₁ φ₁` with `v vᴴ ≈ m`, phase-normalized.
pub fn rank_one_factor(m: &HermitianMatrix, tol: f64) -> Result<CVector, NumericsError> {
    let eig = hermitian_eig(m);
    let trace = m.trace();
    let floor = -PSD_CLAMP * trace.abs();
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < floor {
        return Err(NumericsError::NotPsd { min_eigenvalue });
    }
    let lambda1 = eig.largest().max(0.0);
    let clamped_trace: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0)).sum();
    let residual = clamped_trace - lambda1;
    if residual > tol * trace {
        return Err(NumericsError::NotRankOne { residual });
    }
    let mut v = leading_eigenvector(&eig) * C64::new(lambda1.sqrt(), 0.0);
    normalize_phase(&mut v);
    Ok(v)
}
