use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::types::{Frame, UnitaryMatrix};

/// Relative drop tolerance used when callers have no better choice.
pub const DEFAULT_DROP_TOL: f64 = 1e-8;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `v` along each of `basis` (orthonormal), twice.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in basis {
            let coeff = dot(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= coeff * y;
            }
        }
    }
}

/// Orthonormalizes `vectors` by modified Gram–Schmidt with one
/// reorthogonalization pass.
///
/// A vector whose residual after projection falls below
/// `tol · max(1, max_k ‖v_k‖)` is dropped. The resulting frame spans the same
/// space as the inputs.
pub fn orthonormalize(vectors: &[Vec<Complex64>], tol: f64) -> Result<Frame> {
    let n = vectors.first().map(Vec::len).ok_or(Error::EmptySpan)?;
    if n == 0 {
        return Err(Error::Shape("zero-length vectors".into()));
    }
    if let Some(bad) = vectors.iter().position(|v| v.len() != n) {
        return Err(Error::Shape(format!(
            "vector {bad} has length {}, expected {n}",
            vectors[bad].len()
        )));
    }
    if vectors.iter().flatten().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(1.0, f64::max);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        if basis.len() == n {
            break;
        }
        let mut w = v.clone();
        project_out(&mut w, &basis);
        let r = norm(&w);
        if r < tol * scale {
            continue;
        }
        w.iter_mut().for_each(|x| *x /= r);
        basis.push(w);
    }
    if basis.is_empty() {
        return Err(Error::EmptySpan);
    }
    Frame::new(ComplexMatrix::from_columns(&basis)?)
}

/// Completes `partial` to an `n × n` unitary.
///
/// The first `m` columns are copied verbatim. Each further column is the
/// standard basis vector with the largest residual against the columns chosen
/// so far, orthogonalized and normalized.
pub fn extend_to_unitary(partial: &Frame) -> Result<UnitaryMatrix> {
    // Frame guarantees orthonormality; re-check in case the caller built it
    // from a matrix that has since drifted.
    let deviation = partial.unitarity_defect();
    if deviation > crate::types::ORTHONORMAL_TOL * partial.frobenius_norm().max(1.0) {
        return Err(Error::NotOrthonormal { deviation });
    }
    let n = partial.ambient_dim();
    let m = partial.rank();

    let mut out = ComplexMatrix::zeros(n, n);
    out.set_block(0, 0, partial);

    let mut basis: Vec<Vec<Complex64>> = (0..m).map(|c| partial.column(c)).collect();
    let mut used = vec![false; n];
    while basis.len() < n {
        let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
        for (j, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            project_out(&mut e, &basis);
            let r = norm(&e);
            if best.as_ref().map_or(true, |(_, _, br)| r > *br) {
                best = Some((j, e, r));
            }
        }
        let (j, mut e, r) = best.expect("fewer than n columns implies an unused basis vector");
        used[j] = true;
        e.iter_mut().for_each(|x| *x /= r);
        out.set_column(basis.len(), &e);
        basis.push(e);
    }
    UnitaryMatrix::new(out)
}
