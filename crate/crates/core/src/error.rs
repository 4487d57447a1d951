use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("all input vectors are numerically zero")]
    EmptySpan,

    #[error("columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not an orthogonal projector of rank {rank} (deviation {deviation:.3e})")]
    NotProjector { rank: usize, deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("subspace of dimension {rank} fills the ambient space; no room for the doubled eigenvector")]
    NoRoomForExtension { rank: usize },

    #[error("pivot index {pivot} out of range 1..={rank}")]
    InvalidPivot { pivot: usize, rank: usize },

    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),

    #[error("trajectory does not close (residual {residual:.3e}); restriction to the subspace is undefined")]
    LoopNotClosed { residual: f64 },
}
