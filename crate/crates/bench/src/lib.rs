//! Seeded fixtures shared by the criterion benches.

use std::f64::consts::PI;

use holonomy_core::random::{random_frame, random_skew_hermitian, random_unitary};
use holonomy_core::synth::{BoundaryProblem, SynthesisParams};
use holonomy_core::{Complex64, ComplexMatrix, Frame, SkewHermitianMatrix, UnitaryMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Matrix sizes exercised by the benches.
pub const SIZES: [usize; 4] = [4, 8, 12, 16];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn skew_hermitian(n: usize, seed: u64) -> SkewHermitianMatrix {
    random_skew_hermitian(n, 10.0 * PI, &mut rng(seed))
}

pub fn unitary(n: usize, seed: u64) -> UnitaryMatrix {
    random_unitary(n, &mut rng(seed))
}

/// A random instance with `m = n / 2` and winding 1.
pub fn boundary_instance(n: usize, seed: u64) -> (BoundaryProblem, SynthesisParams) {
    let mut rng = rng(seed);
    let m = (n / 2).max(1);
    let prob = BoundaryProblem::new(random_frame(n, m, &mut rng), random_unitary(m, &mut rng)).expect("m < n");
    let params = SynthesisParams::new(random_unitary(2, &mut rng).into_matrix(), 1).expect("unitary ω");
    (prob, params)
}

/// The three-dimensional instance with `g₀ = diag(i, −1)`.
pub fn reference_instance() -> (BoundaryProblem, SynthesisParams) {
    let frame = Frame::new(ComplexMatrix::identity(3).column_block(0, 2)).expect("standard frame");
    let g0 = UnitaryMatrix::new(ComplexMatrix::from_diag(&[Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)]))
        .expect("diagonal unitary");
    let params = SynthesisParams::new(UnitaryMatrix::rotation(PI / 4.0).into_matrix(), 1)
        .expect("rotation is unitary")
        .with_pivot(2);
    (BoundaryProblem::new(frame, g0).expect("m < n"), params)
}
