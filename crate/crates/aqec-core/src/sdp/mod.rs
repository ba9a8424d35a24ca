//! Standard-form block SDP data model, a built-in dense primal-dual
//! interior-point solver for desk-scale blocks, and SDPA sparse file
//! import/export for external cross-checking.

mod problem;
mod sdpa;
mod solver;

pub use problem::{BlockSparse, SdpProblem, SparseHerm};
pub use sdpa::{export_sdpa, export_solution, import_sdpa, import_sdpa_solution};
pub use solver::{solve, SdpSolution, SdpStatus, MAX_BLOCK_DIM};

use thiserror::Error;

/// Upper-triangle entries of the real symmetric embedding of a complex
/// hermitian block (used by the SDPA export).
pub(crate) fn solver_embed_upper(h: &SparseHerm) -> Vec<(usize, usize, f64)> {
    let d = h.dim;
    let mut out = Vec::new();
    for &(i, j, v) in h.upper_entries() {
        let re = 0.5 * v.re;
        let im = 0.5 * v.im;
        if i == j {
            if re != 0.0 {
                out.push((i, i, re));
                out.push((i + d, i + d, re));
            }
        } else {
            if re != 0.0 {
                out.push((i, j, re));
                out.push((i + d, j + d, re));
            }
            if im != 0.0 {
                out.push((i, j + d, -im));
                out.push((j, i + d, im));
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("coefficient index ({i},{j}) out of range for block of dim {dim}")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },
    #[error("coefficient matrix not hermitian (imaginary diagonal {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("block dimension {dim} exceeds the dense-solver guard")]
    BlockTooLarge { dim: usize },
    #[error("tolerance {tol} below the 1e-9 floor")]
    ToleranceTooTight { tol: f64 },
    #[error("problem has no constraints after presolve")]
    NoConstraints,
    #[error("structurally infeasible: {detail}")]
    Infeasible { detail: String },
    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error(transparent)]
    Io(std::io::Error),
}
