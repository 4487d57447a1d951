//! Dense complex linear algebra: orthonormal frames, eigensolvers and matrix
//! exponentials.

mod eig;
mod expm;
mod gram_schmidt;

pub use eig::{
    generator_spectrum, hermitian_eig, principal_phase, unitary_eig, DEFAULT_EIG_TOL,
    DEFAULT_GROUP_TOL,
};
pub use expm::{expm, expm_spectral};
pub use gram_schmidt::{extend_to_unitary, orthonormalize, DEFAULT_DROP_TOL};
