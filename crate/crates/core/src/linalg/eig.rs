//! Eigendecompositions of Hermitian and unitary matrices.
//!
//! Hermitian matrices are diagonalized by cyclic complex Jacobi rotations.
//! Unitary (normal) matrices go through two Hermitian problems: the Hermitian
//! part `(U + U†)/2` separates eigenvalues by their real part, and inside each
//! cluster of equal real parts the skew part `(U − U†)/2i` separates the
//! rest.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{tolerance_scale, ComplexMatrix, I};
use crate::types::{PhaseBranch, SkewHermitianMatrix, SpectralData, UnitaryMatrix};

/// Off-diagonal stopping tolerance (relative to `‖A‖_F`) for Jacobi sweeps.
pub const DEFAULT_EIG_TOL: f64 = 1e-14;
/// Eigenvalues of the Hermitian part closer than this are treated as one
/// cluster in [`unitary_eig`].
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

const HERMITIAN_INPUT_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in ascending order and a unitary whose columns are
/// the matching eigenvectors. Sweeps stop once the off-diagonal Frobenius norm
/// is at most `tol · ‖A‖_F`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, UnitaryMatrix)> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = a.hermiticity_defect();
    if deviation > HERMITIAN_INPUT_TOL * tolerance_scale(a) {
        return Err(Error::NotHermitian { deviation });
    }

    let n = a.rows();
    let mut w = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = tol * w.frobenius_norm();

    let mut sweeps = 0;
    while w.off_diagonal_norm() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|k| w[(k, k)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &v.column(src));
    }
    Ok((values, UnitaryMatrix::new_unchecked(sorted)))
}

/// One Jacobi rotation annihilating `w[(p, q)]`; accumulates into `v`.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[c, s·φ], [−s·φ̄, c]] on the (p, q) plane; W ← J†WJ, V ← VJ.
    let sp = phase * s;
    let sp_conj = sp.conj();
    let n = w.rows();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * c - wkq * sp_conj;
        w[(k, q)] = wkp * sp + wkq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sp_conj;
        v[(k, q)] = vkp * sp + vkq * c;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = wpk * c - wqk * sp;
        w[(q, k)] = wpk * sp_conj + wqk * c;
    }
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);
    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);
}

/// Maps an angle onto the principal branch `(−π, π]`.
pub fn principal_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// Spectral decomposition of a unitary matrix.
///
/// Phases are principal values in `(−π, π]`, sorted ascending; exact ties are
/// broken by comparing eigenvectors entrywise. Each eigenvector is scaled so
/// that its first largest-modulus entry is real and positive.
pub fn unitary_eig(u: &UnitaryMatrix, group_tol: f64) -> Result<SpectralData> {
    let deviation = u.unitarity_defect();
    if deviation > crate::types::UNITARY_TOL * tolerance_scale(u) {
        return Err(Error::NotUnitary { deviation });
    }
    let n = u.dim();
    let (cosines, v) = hermitian_eig(&u.hermitian_part(), DEFAULT_EIG_TOL)?;
    let mut v = v.into_matrix();
    // (U − U†)/2i
    let sine_part = u.skew_part().scale(-I);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] < group_tol {
            end += 1;
        }
        if end - start > 1 {
            let block = v.column_block(start, end);
            let restricted = block.adjoint().matmul(&sine_part).matmul(&block).hermitian_part();
            let (_, w) = hermitian_eig(&restricted, DEFAULT_EIG_TOL)?;
            v.set_block(0, start, &block.matmul(&w));
        }
        start = end;
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            normalize_phase(&mut col);
            let uv = u.matvec(&col);
            let rayleigh: Complex64 = col.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
            (principal_phase(rayleigh.arg()), col)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex_cmp(&a.1, &b.1)));

    let phases = pairs.iter().map(|(p, _)| *p).collect();
    let cols: Vec<Vec<Complex64>> = pairs.into_iter().map(|(_, c)| c).collect();
    let vectors = UnitaryMatrix::new_unchecked(ComplexMatrix::from_columns(&cols)?);
    SpectralData::new(phases, vectors, PhaseBranch::Principal)
}

/// Spectral data of `exp(H)` read directly off a skew-Hermitian generator:
/// `H = V diag(iλ_k) V†` with unrestricted `λ_k`.
pub fn generator_spectrum(h: &SkewHermitianMatrix) -> Result<SpectralData> {
    // -iH is Hermitian with eigenvalues λ_k.
    let hermitian = h.scale(-I);
    let (values, vectors) = hermitian_eig(&hermitian, DEFAULT_EIG_TOL)?;
    SpectralData::new(values, vectors, PhaseBranch::Generator)
}

fn normalize_phase(col: &mut [Complex64]) {
    let mut best = 0;
    for (k, z) in col.iter().enumerate() {
        if z.norm() > col[best].norm() {
            best = k;
        }
    }
    let mag = col[best].norm();
    if mag > 0.0 {
        let rot = col[best].conj() / mag;
        col.iter_mut().for_each(|z| *z *= rot);
    }
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
