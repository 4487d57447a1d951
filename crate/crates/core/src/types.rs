//! Validated wrappers around [`ComplexMatrix`].
//!
//! Each wrapper checks its defining identity once, at construction, against a
//! tolerance scaled by `max(1, ‖M‖_F)`. Fields are private so a value of these
//! types always satisfies its invariant.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{tolerance_scale, ComplexMatrix};

pub const ORTHONORMAL_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
pub const PROJECTOR_TOL: f64 = 1e-10;
pub const PROJECTOR_TRACE_TOL: f64 = 1e-8;

/// An `n × m` matrix with orthonormal columns, `0 < m ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame(ComplexMatrix);

impl Frame {
    pub fn new(columns: ComplexMatrix) -> Result<Self> {
        if columns.cols() > columns.rows() {
            return Err(Error::Shape(format!(
                "frame with {} columns in dimension {}",
                columns.cols(),
                columns.rows()
            )));
        }
        let deviation = columns.unitarity_defect();
        if deviation > ORTHONORMAL_TOL * tolerance_scale(&columns) {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self(columns))
    }

    pub(crate) fn new_unchecked(columns: ComplexMatrix) -> Self {
        Self(columns)
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.0.rows()
    }

    /// Number of columns `m`.
    pub fn rank(&self) -> usize {
        self.0.cols()
    }

    /// `F F†`.
    pub fn projector(&self) -> OrthoProjector {
        OrthoProjector {
            matrix: self.0.matmul(&self.0.adjoint()),
            rank: self.rank(),
        }
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl Deref for Frame {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// A Hermitian idempotent `n × n` matrix of trace `rank`: a point of the
/// Grassmannian `Gr(rank, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoProjector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl OrthoProjector {
    pub fn new(matrix: ComplexMatrix, rank: usize) -> Result<Self> {
        Self::with_tolerance(matrix, rank, PROJECTOR_TOL, PROJECTOR_TRACE_TOL)
    }

    /// Same checks as [`OrthoProjector::new`] with caller-chosen tolerances,
    /// for matrices produced by an integrator.
    pub fn with_tolerance(matrix: ComplexMatrix, rank: usize, tol: f64, trace_tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "projector must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defects = ProjectorDefects::of(&matrix, rank);
        let scale = tolerance_scale(&matrix);
        if defects.hermiticity > tol * scale {
            return Err(Error::NotProjector {
                rank,
                deviation: defects.hermiticity,
            });
        }
        if defects.idempotency > tol * scale {
            return Err(Error::NotProjector {
                rank,
                deviation: defects.idempotency,
            });
        }
        if defects.trace > trace_tol * scale {
            return Err(Error::NotProjector {
                rank,
                deviation: defects.trace,
            });
        }
        Ok(Self { matrix, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl Deref for OrthoProjector {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// How far a matrix is from being a rank-`m` orthogonal projector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorDefects {
    /// `‖P − P†‖_F`
    pub hermiticity: f64,
    /// `‖P² − P‖_F`
    pub idempotency: f64,
    /// `|tr P − m|`
    pub trace: f64,
}

impl ProjectorDefects {
    pub fn of(p: &ComplexMatrix, rank: usize) -> Self {
        Self {
            hermiticity: p.hermiticity_defect(),
            idempotency: p.matmul(p).distance(p),
            trace: (p.trace() - Complex64::new(rank as f64, 0.0)).norm(),
        }
    }
}

/// A square matrix with `M†M = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "unitary matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_defect();
        if deviation > tol * tolerance_scale(&matrix) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// Real rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self(ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("2x2 rotation"))
    }

    /// Diagonal unitary with entries `e^{iθ_k}`.
    pub fn from_phases(phases: &[f64]) -> Self {
        let diag: Vec<Complex64> = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        Self(ComplexMatrix::from_diag(&diag))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// A square matrix with `M† = −M`. The constructor stores `(M − M†)/2`, so the
/// identity holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewHermitianMatrix(ComplexMatrix);

impl SkewHermitianMatrix {
    /// Projects `matrix` onto the skew-Hermitian matrices.
    pub fn new(matrix: &ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "generator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self(matrix.skew_part()))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl Deref for SkewHermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl AsRef<ComplexMatrix> for SkewHermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl AsRef<ComplexMatrix> for ComplexMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        self
    }
}

/// Which real number represents each eigenvalue `e^{iλ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseBranch {
    /// `λ ∈ (−π, π]`, as produced by diagonalizing a unitary.
    Principal,
    /// `λ` unrestricted, taken from the spectrum of a skew-Hermitian
    /// generator `H = V diag(iλ) V†`.
    Generator,
}

/// Spectral form `V diag(e^{iλ_k}) V†` of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub(crate) phases: Vec<f64>,
    pub(crate) eigenvectors: UnitaryMatrix,
    pub(crate) branch: PhaseBranch,
}

impl SpectralData {
    /// Assembles spectral data from parts. `eigenvectors` must be unitary and
    /// match `phases` in length; principal-branch phases must lie in `(−π, π]`.
    pub fn new(phases: Vec<f64>, eigenvectors: UnitaryMatrix, branch: PhaseBranch) -> Result<Self> {
        if phases.len() != eigenvectors.dim() {
            return Err(Error::Shape(format!(
                "{} phases for {} eigenvectors",
                phases.len(),
                eigenvectors.dim()
            )));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if branch == PhaseBranch::Principal {
            let pi = std::f64::consts::PI;
            if let Some(&bad) = phases.iter().find(|&&p| p <= -pi || p > pi) {
                return Err(Error::Shape(format!("phase {bad} outside (-pi, pi]")));
            }
        }
        Ok(Self {
            phases,
            eigenvectors,
            branch,
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn eigenvectors(&self) -> &UnitaryMatrix {
        &self.eigenvectors
    }

    pub fn branch(&self) -> PhaseBranch {
        self.branch
    }

    /// Unit-modulus eigenvalues `e^{iλ_k}`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect()
    }

    /// `V diag(e^{iλ_k}) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &*self.eigenvectors;
        let mut scaled = v.clone();
        for (c, u) in self.eigenvalues().into_iter().enumerate() {
            for r in 0..v.rows() {
                scaled[(r, c)] *= u;
            }
        }
        scaled.matmul(&v.adjoint())
    }
}
