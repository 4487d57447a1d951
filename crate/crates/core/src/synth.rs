//! Generators with prescribed monodromy on a subspace.
//!
//! Let `g₀` act on `V₀ = range(F₀)` with eigenpairs `(e^{iλ_k}, e_k)`. Extend
//! the eigenbasis by `e_{m+1}, …, e_n` and let `g` act on the whole space as
//! `diag(u₁, …, u_m, u_m, 1, …, 1)` in that basis. Any logarithm of this
//! matrix exponentiates back to `g`, in particular
//!
//! ```text
//! H_ω = blockdiag(diag(iλ₁, …, iλ_{m−1}), Ω, 0),   Ω = ω diag(iλ_m, i(λ_m + 2πw)) ω†
//! ```
//!
//! for every `ω ∈ U(2)` and integer winding `w`. The two diagonal entries of
//! the middle block differ by `2πiw`, so `exp(Ω) = u_m I₂` regardless of `ω`,
//! while `Ω` itself is off-diagonal whenever `w ≠ 0` and `ω` mixes the two
//! coordinates. Only then does `H` fail to commute with the projector onto
//! `V₀`, making the trajectory `e^{tH} P₀ e^{−tH}` non-constant.
//!
//! The pivot parameter picks which eigenvalue of `g₀` gets doubled; the chosen
//! eigenpair is moved to position `m` before the extension.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm, extend_to_unitary, unitary_eig, DEFAULT_GROUP_TOL};
use crate::matrix::{commutator, ComplexMatrix};
use crate::types::{Frame, SkewHermitianMatrix, UnitaryMatrix};

/// Commutator norms above this mark a non-constant trajectory.
pub const NONTRIVIAL_THRESHOLD: f64 = 1e-8;
/// Unitarity tolerance for the mixing matrix ω.
pub const OMEGA_UNITARY_TOL: f64 = 1e-12;
const CERTIFICATE_THRESHOLD: f64 = 1e-12;

/// A subspace `V₀` with a unitary `g₀` acting on it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProblem {
    frame: Frame,
    g0: UnitaryMatrix,
}

impl BoundaryProblem {
    /// `g0` is given in the coordinates of `frame`'s columns, so it is
    /// `m × m`. The subspace must be proper: the construction needs a vector
    /// orthogonal to it.
    pub fn new(frame: Frame, g0: UnitaryMatrix) -> Result<Self> {
        if g0.dim() != frame.rank() {
            return Err(Error::Shape(format!(
                "g0 is {}x{} but the frame has rank {}",
                g0.dim(),
                g0.dim(),
                frame.rank()
            )));
        }
        if frame.rank() == frame.ambient_dim() {
            return Err(Error::NoRoomForExtension { rank: frame.rank() });
        }
        Ok(Self { frame, g0 })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn g0(&self) -> &UnitaryMatrix {
        &self.g0
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient_dim()
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }
}

/// Coordinates on the solution family: the mixing unitary ω, the winding
/// integer, and which eigenvalue of `g₀` is doubled.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisParams {
    omega: UnitaryMatrix,
    winding: i64,
    pivot: Option<usize>,
}

impl SynthesisParams {
    pub fn new(omega: ComplexMatrix, winding: i64) -> Result<Self> {
        if (omega.rows(), omega.cols()) != (2, 2) {
            return Err(Error::Shape(format!(
                "omega must be 2x2, got {}x{}",
                omega.rows(),
                omega.cols()
            )));
        }
        let omega = UnitaryMatrix::with_tolerance(omega, OMEGA_UNITARY_TOL)?;
        Ok(Self {
            omega,
            winding,
            pivot: None,
        })
    }

    /// One-based index of the doubled eigenvalue; defaults to `m`.
    pub fn with_pivot(mut self, pivot: usize) -> Self {
        self.pivot = Some(pivot);
        self
    }

    pub fn omega(&self) -> &UnitaryMatrix {
        &self.omega
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn pivot(&self) -> Option<usize> {
        self.pivot
    }

    fn resolved_pivot(&self, rank: usize) -> Result<usize> {
        let p = self.pivot.unwrap_or(rank);
        if p == 0 || p > rank {
            return Err(Error::InvalidPivot { pivot: p, rank });
        }
        Ok(p)
    }
}

/// Residuals certifying that `H` solves the boundary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyReport {
    /// `‖exp(H) P₀ exp(−H) − P₀‖_F`
    pub proj_residual: f64,
    /// `‖F₀† exp(H) F₀ − g₀‖_F`
    pub restriction_residual: f64,
    /// `‖H + H†‖_F`
    pub skew_residual: f64,
    /// `‖[H, P₀]‖_F`
    pub commutator_norm: f64,
    pub nontrivial: bool,
}

impl MonodromyReport {
    /// Both monodromy residuals are within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.proj_residual <= tol && self.restriction_residual <= tol
    }

    /// Every residual, including skew-Hermiticity, is within `tol`.
    pub fn all_within(&self, tol: f64) -> bool {
        self.holds(tol) && self.skew_residual <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    /// Columns `e₁, …, e_n`; the first `m` are eigenvectors of `g₀` in
    /// ambient coordinates.
    pub basis: UnitaryMatrix,
    /// `diag(u₁, …, u_m, u_m, 1, …, 1)`.
    pub u_matrix: UnitaryMatrix,
    /// Phases after moving the pivot to position `m`.
    pub phases: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    /// `H = E H_ω E†` in ambient coordinates.
    pub generator: SkewHermitianMatrix,
    /// `H_ω` in the basis `E`.
    pub block_generator: SkewHermitianMatrix,
    pub basis: UnitaryMatrix,
    pub u_matrix: UnitaryMatrix,
    pub phases: Vec<f64>,
    pub report: MonodromyReport,
}

/// Predicted off-diagonal size of Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NontrivialityCertificate {
    /// `|Ω₁₂| = 2π |w| |ω₁₁| |ω₂₁|`
    pub off_diagonal: f64,
    /// `‖[H_ω, A]‖_F = √2 |Ω₁₂|`
    pub commutator_norm: f64,
    pub nontrivial: bool,
}

/// Eigen-decomposes `g₀` and lifts its eigenvectors into the ambient space.
///
/// Returns the phases in ascending order in `(−π, π]` together with the
/// frame `F₀ v_k`.
pub fn diagonalize_boundary(prob: &BoundaryProblem) -> Result<(Vec<f64>, Frame)> {
    let spectral = unitary_eig(&prob.g0, DEFAULT_GROUP_TOL)?;
    let lifted = prob.frame.matmul(spectral.eigenvectors());
    Ok((spectral.phases().to_vec(), Frame::new(lifted)?))
}

/// Moves the pivot eigenpair to position `m`, completes the eigenframe to a
/// unitary basis and builds the diagonal template of `g`.
pub fn build_extension(eigenframe: &Frame, phases: &[f64], params: &SynthesisParams) -> Result<Extension> {
    let n = eigenframe.ambient_dim();
    let m = eigenframe.rank();
    if phases.len() != m {
        return Err(Error::Shape(format!("{} phases for rank {m}", phases.len())));
    }
    if m == n {
        return Err(Error::NoRoomForExtension { rank: m });
    }
    let pivot = params.resolved_pivot(m)? - 1;

    let mut order: Vec<usize> = (0..m).filter(|&k| k != pivot).collect();
    order.push(pivot);
    let reordered: Vec<f64> = order.iter().map(|&k| phases[k]).collect();
    let mut columns = ComplexMatrix::zeros(n, m);
    for (dst, &src) in order.iter().enumerate() {
        columns.set_column(dst, &eigenframe.column(src));
    }
    let basis = extend_to_unitary(&Frame::new_unchecked(columns))?;

    let mut diag: Vec<f64> = reordered.clone();
    diag.push(reordered[m - 1]);
    diag.resize(n, 0.0);
    Ok(Extension {
        basis,
        u_matrix: UnitaryMatrix::from_phases(&diag),
        phases: reordered,
    })
}

/// `H_ω = blockdiag(H₁, Ω, 0)` in the extended basis.
pub fn build_generator(phases: &[f64], params: &SynthesisParams, n: usize) -> Result<SkewHermitianMatrix> {
    let m = phases.len();
    if m == 0 {
        return Err(Error::Shape("no phases".into()));
    }
    if n < m + 1 {
        return Err(Error::NoRoomForExtension { rank: m });
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in phases[..m - 1].iter().enumerate() {
        h[(k, k)] = Complex64::new(0.0, lambda);
    }
    let lambda_m = phases[m - 1];
    let wound = lambda_m + 2.0 * PI * params.winding as f64;
    let inner = ComplexMatrix::from_diag(&[Complex64::new(0.0, lambda_m), Complex64::new(0.0, wound)]);
    let omega = params.omega();
    let block = omega.matmul(&inner).matmul(&omega.adjoint());
    h.set_block(m - 1, m - 1, &block);
    SkewHermitianMatrix::new(&h)
}

/// Builds a generator solving the boundary problem for the given family
/// parameters and certifies it.
pub fn synthesize(prob: &BoundaryProblem, params: &SynthesisParams) -> Result<SynthesisResult> {
    let n = prob.ambient_dim();
    let (phases, eigenframe) = diagonalize_boundary(prob)?;
    let ext = build_extension(&eigenframe, &phases, params)?;
    let block_generator = build_generator(&ext.phases, params, n)?;
    let ambient = ext.basis.matmul(&block_generator).matmul(&ext.basis.adjoint());
    let generator = SkewHermitianMatrix::new(&ambient)?;
    let report = verify_monodromy(&generator, prob)?;
    Ok(SynthesisResult {
        generator,
        block_generator,
        basis: ext.basis,
        u_matrix: ext.u_matrix,
        phases: ext.phases,
        report,
    })
}

/// Measures how well `h` solves the boundary problem.
///
/// Accepts any square matrix so that a malformed generator shows up as a
/// nonzero `skew_residual` instead of being silently projected.
pub fn verify_monodromy(h: &ComplexMatrix, prob: &BoundaryProblem) -> Result<MonodromyReport> {
    let n = prob.ambient_dim();
    if (h.rows(), h.cols()) != (n, n) {
        return Err(Error::Shape(format!(
            "generator is {}x{}, ambient dimension is {n}",
            h.rows(),
            h.cols()
        )));
    }
    let p0 = prob.frame.projector();
    let forward = expm(h)?;
    let backward = expm(&-h)?;
    let proj_residual = forward.matmul(&p0).matmul(&backward).distance(&p0);
    let restricted = prob.frame.adjoint().matmul(&forward).matmul(&prob.frame);
    let restriction_residual = restricted.distance(&prob.g0);
    let commutator_norm = commutator(h, &p0)?.frobenius_norm();
    Ok(MonodromyReport {
        proj_residual,
        restriction_residual,
        skew_residual: h.skew_defect(),
        commutator_norm,
        nontrivial: commutator_norm > NONTRIVIAL_THRESHOLD,
    })
}

/// Closed-form size of the off-diagonal entry of Ω.
///
/// Row orthonormality of ω reduces `Ω₁₂` to `2πiw·ω₁₂·conj(ω₂₂)`, whose
/// modulus equals `2π|w||ω₁₁||ω₂₁|` for a unitary 2×2 matrix. It does not
/// depend on the doubled phase.
pub fn nontriviality_certificate(params: &SynthesisParams) -> NontrivialityCertificate {
    let omega = params.omega();
    let off_diagonal = 2.0 * PI * (params.winding as f64).abs() * omega[(0, 0)].norm() * omega[(1, 0)].norm();
    NontrivialityCertificate {
        off_diagonal,
        commutator_norm: std::f64::consts::SQRT_2 * off_diagonal,
        nontrivial: off_diagonal > CERTIFICATE_THRESHOLD,
    }
}
