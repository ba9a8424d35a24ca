//! Symmetry reduction of SDPs with invariant data: sandwiching the
//! problem through a block diagonalizer, plus group averaging helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::action::TensorAction;
use super::adapted::BlockDiagonalizer;
use super::SymmetryError;
use crate::sdp::{BlockSparse, SdpProblem, SparseHerm};

type CMat = DMatrix<Complex64>;

/// Group average `(1/|G|) Σ_g U_g ρ U_g†` (a cheap index-permutation sum).
pub fn twirl(action: &TensorAction, op: &CMat) -> CMat {
    let d = op.nrows();
    let mut out = CMat::zeros(d, d);
    for el in &action.elements {
        let map = action.index_map(el);
        for i in 0..d {
            for j in 0..d {
                out[(map[i], map[j])] += op[(i, j)];
            }
        }
    }
    out / Complex64::new(action.group_order() as f64, 0.0)
}

/// Replace every coefficient matrix by its group average. Valid when the
/// variable is constrained to be invariant (the averaged row has the same
/// value on invariant states). Rows that average to zero with zero rhs are
/// dropped; a zero row with nonzero rhs is structurally infeasible.
pub fn symmetrize_problem(
    p: &SdpProblem,
    action: &TensorAction,
) -> Result<SdpProblem, SymmetryError> {
    if p.block_dims.len() != 1 || p.block_dims[0] != action.total_dim() {
        return Err(SymmetryError::BlockStructure {
            detail: "symmetrize_problem expects a single block matching the action".into(),
        });
    }
    let mut out = SdpProblem::new(p.block_dims.clone());
    out.objective.blocks[0] = dense_to_sparse(&twirl(action, &p.objective.blocks[0].to_dense()));
    for (row, rhs) in &p.constraints {
        let avg = twirl(action, &row.blocks[0].to_dense());
        let norm = avg.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if norm < 1e-13 {
            if rhs.abs() > 1e-10 {
                return Err(SymmetryError::BlockStructure {
                    detail: format!("row averages to zero with rhs {rhs}"),
                });
            }
            continue;
        }
        let mut bs = BlockSparse::zeros(&p.block_dims);
        bs.blocks[0] = dense_to_sparse(&avg);
        out.push_constraint(bs, *rhs);
    }
    Ok(out)
}

pub(crate) fn dense_to_sparse(m: &CMat) -> SparseHerm {
    let d = m.nrows();
    let mut s = SparseHerm::new(d);
    for i in 0..d {
        for j in i..d {
            // Hermitize to absorb numerical drift.
            let v = if i == j {
                Complex64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * Complex64::new(0.5, 0.0)
            };
            if v.norm() > 1e-14 {
                s.add(i, j, v).expect("indices in range");
            }
        }
    }
    s
}

/// Commutation tolerance for the invariance precondition.
pub const COMMUTE_TOL: f64 = 1e-9;

/// Reduce a single-block SDP whose data commutes with the group action.
/// The optimal value is preserved; fails naming the offending element when
/// a data matrix is not invariant.
pub fn reduce_sdp(p: &SdpProblem, bd: &BlockDiagonalizer) -> Result<SdpProblem, SymmetryError> {
    let action = &bd.action;
    if p.block_dims.len() != 1 || p.block_dims[0] != bd.dim() {
        return Err(SymmetryError::BlockStructure {
            detail: "reduce_sdp expects a single block matching the diagonalizer".into(),
        });
    }
    let check = |name: &str, m: &CMat| -> Result<(), SymmetryError> {
        for (k, el) in action.elements.iter().enumerate() {
            let map = action.index_map(el);
            let mut dev = 0.0f64;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let moved = m[(map[i], map[j])];
                    dev = dev.max((moved - m[(i, j)]).norm());
                }
            }
            if dev > COMMUTE_TOL {
                return Err(SymmetryError::NotInvariant {
                    what: name.to_string(),
                    element: k,
                    norm: dev,
                });
            }
        }
        Ok(())
    };

    let block_dims: Vec<usize> = bd.blocks.iter().map(|b| b.mult).collect();
    let mut out = SdpProblem::new(block_dims.clone());

    let reduce_mat = |m: &CMat, target: &mut BlockSparse| {
        for (b, spec) in bd.blocks.iter().enumerate() {
            let x = bd.project_block(m, b);
            let scaled = &x * Complex64::new(spec.irrep_dim as f64, 0.0);
            target.blocks[b] = dense_to_sparse(&scaled);
        }
    };

    let obj = p.objective.blocks[0].to_dense();
    check("objective", &obj)?;
    reduce_mat(&obj, &mut out.objective);
    for (idx, (row, rhs)) in p.constraints.iter().enumerate() {
        let m = row.blocks[0].to_dense();
        check(&format!("constraint {idx}"), &m)?;
        let mut bs = BlockSparse::zeros(&block_dims);
        reduce_mat(&m, &mut bs);
        out.push_constraint(bs, *rhs);
    }
    Ok(out)
}

/// Expand a reduced primal solution back to the full space.
pub fn expand_primal(bd: &BlockDiagonalizer, blocks: &[CMat]) -> CMat {
    bd.expand(blocks)
}
