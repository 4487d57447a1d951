use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::types::{SpectralData, UnitaryMatrix};

/// Largest 1-norm the Taylor series is applied to after scaling.
const SCALED_NORM_BOUND: f64 = 0.5;
/// Terms smaller than this (relative to the running sum) end the series.
const TERM_TOL: f64 = 1e-18;
const MAX_TERMS: usize = 64;

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series.
///
/// `M` is scaled by `2^{-s}` so that `‖M‖₁ / 2^s ≤ 0.5`; the series is summed
/// until the next term is below `1e-18` relative to the partial sum, then the
/// result is squared `s` times. Works for any square matrix.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "exponential of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    let norm = m.one_norm();
    let squarings = if norm > SCALED_NORM_BOUND {
        (norm / SCALED_NORM_BOUND).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale_real(0.5f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.matmul(&scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.one_norm() <= TERM_TOL * sum.one_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}

/// `V diag(e^{itλ_k}) V†` from spectral data.
pub fn expm_spectral(s: &SpectralData, t: f64) -> UnitaryMatrix {
    let v = s.eigenvectors();
    let mut scaled = (**v).clone();
    for (c, &lambda) in s.phases().iter().enumerate() {
        let u = Complex64::from_polar(1.0, t * lambda);
        for r in 0..v.rows() {
            scaled[(r, c)] *= u;
        }
    }
    UnitaryMatrix::new_unchecked(scaled.matmul(&v.adjoint()))
}
