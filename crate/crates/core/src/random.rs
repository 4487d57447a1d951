//! Random fixtures: Haar-like unitaries, frames, and bounded skew-Hermitian
//! generators.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::linalg::{hermitian_eig, orthonormalize, DEFAULT_EIG_TOL};
use crate::matrix::{ComplexMatrix, I};
use crate::types::{Frame, SkewHermitianMatrix, UnitaryMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite gaussian samples")
}

/// Orthonormalized Gaussian columns.
pub fn random_frame<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Frame {
    loop {
        let g = gaussian_matrix(n, m, rng);
        let cols: Vec<Vec<Complex64>> = (0..m).map(|c| g.column(c)).collect();
        if let Ok(f) = orthonormalize(&cols, 1e-8) {
            if f.rank() == m {
                return f;
            }
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    UnitaryMatrix::new(random_frame(n, n, rng).into_matrix()).expect("orthonormal square frame")
}

/// `V diag(e^{iθ_k}) V†` for a random `V`.
pub fn unitary_with_phases<R: Rng + ?Sized>(phases: &[f64], rng: &mut R) -> UnitaryMatrix {
    let v = random_unitary(phases.len(), rng);
    let d = UnitaryMatrix::from_phases(phases);
    UnitaryMatrix::new(v.matmul(&d).matmul(&v.adjoint())).expect("conjugate of a unitary")
}

/// Spectral norm of a skew-Hermitian matrix.
pub fn skew_spectral_norm(h: &SkewHermitianMatrix) -> f64 {
    let (vals, _) = hermitian_eig(&h.scale(-I), DEFAULT_EIG_TOL).expect("-iH is Hermitian");
    vals.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Skew-Hermitian generator with spectral norm drawn uniformly from
/// `[0, max_norm]`.
pub fn random_skew_hermitian<R: Rng + ?Sized>(n: usize, max_norm: f64, rng: &mut R) -> SkewHermitianMatrix {
    let h = SkewHermitianMatrix::new(&gaussian_matrix(n, n, rng)).expect("square");
    let norm = skew_spectral_norm(&h);
    let target = Uniform::new_inclusive(0.0, max_norm).sample(rng);
    if norm == 0.0 {
        return h;
    }
    SkewHermitianMatrix::new(&h.scale_real(target / norm)).expect("square")
}
