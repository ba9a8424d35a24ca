//! Finite permutation-group engine over tensor positions, character-based
//! multiplicity computation, commutant orbit bases, numerical block
//! diagonalization, SDP reduction, Schur–Weyl handling of diagonal unitary
//! symmetry, and the joint-symmetry analyzer.

mod action;
mod adapted;
mod cg;
mod characters;
mod commutant;
mod joint;
mod perm;
mod reduce;
mod schur_weyl;
mod tables;

pub use action::{copies_action, p_grid_action, ActionElement, Su2Twist, TensorAction};
pub use adapted::{block_diagonalize, block_diagonalize_action, BlockDiagonalizer, BlockSpec};
pub use cg::cg_basis_lll;
pub use characters::{
    class_size, factorial, mn_character, partitions, CharacterTable, Partition, ProductClass,
};
pub use commutant::{commutant_orbit_basis, multiplicities_by_characters, CommutantBasis};
pub use joint::{
    global_group_order, grid_group_generators, grid_group_structure, joint_symmetry_check,
    GridGroupStructure, JointSymmetryReport, JointVerdict,
};
pub use perm::{closure, Perm, PermGroup, ORDER_GUARD};
pub use reduce::{expand_primal, reduce_sdp, symmetrize_problem, twirl, COMMUTE_TOL};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("invalid generator permutation")]
    InvalidGenerator,
    #[error("group order guard ({guard}) exceeded; use generator-only mode")]
    OrderGuardExceeded { guard: usize },
    #[error("orbit enumeration guard exceeded (work {work}); use the block strategy")]
    OrbitGuardExceeded { work: usize },
    #[error("permutation maps sites of different dimensions (site {site})")]
    DimMismatchUnderAction { site: usize },
    #[error("factor map is not a homomorphism")]
    NotAHomomorphism,
    #[error("character table failed orthogonality")]
    BadCharacterTable,
    #[error("non-integer multiplicity {value} (wrong table/action pairing)")]
    NonIntegerMultiplicity { value: f64 },
    #[error("multiplicity-weighted dimension {got} ≠ space dimension {expected}")]
    MultiplicityDimensionMismatch { got: usize, expected: usize },
    #[error("degenerate eigen-split after {attempts} resamples")]
    DegenerateSplit { attempts: usize },
    #[error("block structure error: {detail}")]
    BlockStructure { detail: String },
    #[error("group degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("data not invariant: {what} moves under element {element} by {norm:.3e}")]
    NotInvariant {
        what: String,
        element: usize,
        norm: f64,
    },
}
