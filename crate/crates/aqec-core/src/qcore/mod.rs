//! Dense complex linear algebra over labeled subsystems: Kronecker
//! products, partial trace, partial transpose, system permutation,
//! entangled states, entropies.

mod entropy;
mod layout;
mod op;
mod ops;

pub use entropy::{mutual_info_bound_check, von_neumann_entropy, MutualInfoBound};
pub use layout::SystemLayout;
pub use op::{CMatrix, Op, HERMITICITY_TOL, PSD_TOL};
pub use ops::{
    conjugate, kron, kron_all, max_entangled, max_entangled_labeled, partial_trace,
    partial_trace_drop, partial_transpose, pauli, permute_systems,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QcoreError {
    #[error("unknown subsystem label `{label}`")]
    UnknownLabel { label: String },
    #[error("duplicate subsystem label `{label}`")]
    DuplicateLabel { label: String },
    #[error("invalid dimension for `{label}`")]
    InvalidDimension { label: String },
    #[error("operator shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("layouts do not match")]
    LayoutMismatch,
    #[error("operator is not hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("operator is not PSD (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("operator trace is not 1 (got {trace})")]
    NotUnitTrace { trace: f64 },
    #[error("tr_A of the state is not a product state (deviation {deviation:.3e})")]
    MarginalNotProduct { deviation: f64 },
}
