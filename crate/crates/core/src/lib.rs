//! Skew-Hermitian generators whose unitary flow returns a subspace to itself
//! with a prescribed unitary action, and the projector dynamics they induce on
//! the Grassmannian.
//!
//! Given an `m`-dimensional subspace `V₀ ⊂ ℂⁿ` (as an orthonormal [`Frame`])
//! and a unitary `g₀` acting on it, [`synth::synthesize`] builds `H` with
//! `exp(H) V₀ = V₀` and `exp(H)|_{V₀} = g₀`. A mixing unitary `ω ∈ U(2)` and a
//! winding integer select a member of the solution family; when both are
//! nontrivial the projector trajectory `P(t) = e^{tH} P₀ e^{−tH}` is a closed,
//! non-constant loop. [`flow`] integrates that trajectory.

pub mod error;
pub mod flow;
pub mod linalg;
pub mod matrix;
#[cfg(feature = "random")]
pub mod random;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use matrix::{commutator, ComplexMatrix};
pub use num_complex::Complex64;
pub use types::{
    Frame, OrthoProjector, PhaseBranch, ProjectorDefects, SkewHermitianMatrix, SpectralData,
    UnitaryMatrix,
};
