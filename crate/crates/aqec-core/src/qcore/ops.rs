//! Tensor operations on labeled operators: Kronecker products, partial
//! trace, partial transpose, subsystem permutation, entangled states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::SystemLayout;
use super::op::{CMatrix, Op};
use super::QcoreError;

/// Tensor product; the result layout is the concatenation of the inputs.
pub fn kron(a: &Op, b: &Op) -> Result<Op, QcoreError> {
    let layout = a.layout().concat(b.layout())?;
    let entries = a.entries().kronecker(b.entries());
    let mut op = Op::new(layout, entries)?;
    if a.is_flagged_hermitian() && b.is_flagged_hermitian() {
        op = Op::new_hermitian(op.layout().clone(), op.into_entries())?;
    }
    Ok(op)
}

/// Kronecker product of a list of operators, left to right.
pub fn kron_all(ops: &[&Op]) -> Result<Op, QcoreError> {
    let mut acc = ops[0].clone();
    for op in &ops[1..] {
        acc = kron(&acc, op)?;
    }
    Ok(acc)
}

/// Partial trace keeping the subsystems in `keep` (result ordered as in the
/// original layout). Trace is preserved: `tr(out) = tr(in)`.
pub fn partial_trace(a: &Op, keep: &[&str]) -> Result<Op, QcoreError> {
    let keep_pos = a.layout().positions_of(keep)?;
    let mut keep_sorted = keep_pos.clone();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep_pos.len() {
        return Err(QcoreError::DuplicateLabel {
            label: "partial_trace keep set".into(),
        });
    }
    let n = a.layout().num_systems();
    let trace_pos: Vec<usize> = (0..n).filter(|p| !keep_sorted.contains(p)).collect();
    Ok(partial_trace_positions(a, &keep_sorted, &trace_pos))
}

/// Partial trace removing the subsystems in `drop`.
pub fn partial_trace_drop(a: &Op, drop: &[&str]) -> Result<Op, QcoreError> {
    let drop_pos = a.layout().positions_of(drop)?;
    let keep: Vec<&str> = a
        .layout()
        .systems()
        .iter()
        .enumerate()
        .filter(|(p, _)| !drop_pos.contains(p))
        .map(|(_, (l, _))| l.as_str())
        .collect();
    partial_trace(a, &keep)
}

fn partial_trace_positions(a: &Op, keep: &[usize], traced: &[usize]) -> Op {
    let layout = a.layout();
    let out_layout = layout.select_positions(keep);
    let d_out = out_layout.total_dim();
    let d_tr: usize = traced
        .iter()
        .map(|&p| layout.systems()[p].1)
        .product::<usize>()
        .max(1);
    let tr_layout = layout.select_positions(traced);

    let n = layout.num_systems();
    let mut full_row = vec![0usize; n];
    let mut full_col = vec![0usize; n];
    let mut keep_row = vec![0usize; keep.len()];
    let mut keep_col = vec![0usize; keep.len()];
    let mut tr_multi = vec![0usize; traced.len()];

    let mut out = CMatrix::zeros(d_out, d_out);
    for i in 0..d_out {
        out_layout.multi_index(i, &mut keep_row);
        for j in 0..d_out {
            out_layout.multi_index(j, &mut keep_col);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..d_tr {
                tr_layout.multi_index(t, &mut tr_multi);
                for (k, &p) in keep.iter().enumerate() {
                    full_row[p] = keep_row[k];
                    full_col[p] = keep_col[k];
                }
                for (k, &p) in traced.iter().enumerate() {
                    full_row[p] = tr_multi[k];
                    full_col[p] = tr_multi[k];
                }
                acc += a.entries()[(layout.flat_index(&full_row), layout.flat_index(&full_col))];
            }
            out[(i, j)] = acc;
        }
    }
    let mut op = Op::new(out_layout, out).expect("shape is consistent by construction");
    if a.is_flagged_hermitian() {
        op = Op::new_hermitian(op.layout().clone(), op.into_entries())
            .expect("partial trace preserves hermiticity");
    }
    op
}

/// Partial transpose over the subsystems in `subset`. Involution; preserves
/// trace and hermiticity.
pub fn partial_transpose(a: &Op, subset: &[&str]) -> Result<Op, QcoreError> {
    let pos = a.layout().positions_of(subset)?;
    let layout = a.layout().clone();
    let n = layout.num_systems();
    let d = layout.total_dim();
    let mut row = vec![0usize; n];
    let mut col = vec![0usize; n];
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        layout.multi_index(i, &mut row);
        for j in 0..d {
            layout.multi_index(j, &mut col);
            let mut prow = row.clone();
            let mut pcol = col.clone();
            for &p in &pos {
                prow[p] = col[p];
                pcol[p] = row[p];
            }
            out[(layout.flat_index(&prow), layout.flat_index(&pcol))] = a.entries()[(i, j)];
        }
    }
    let mut op = Op::new(layout, out)?;
    if a.is_flagged_hermitian() {
        op = Op::new_hermitian(op.layout().clone(), op.into_entries())?;
    }
    Ok(op)
}

/// Reorder subsystems into the order given by `new_order` (labels). The
/// operator is conjugated by the corresponding permutation unitary, so the
/// spectrum is preserved.
pub fn permute_systems(a: &Op, new_order: &[&str]) -> Result<Op, QcoreError> {
    let pos = a.layout().positions_of(new_order)?;
    if pos.len() != a.layout().num_systems() {
        return Err(QcoreError::ShapeMismatch {
            expected: a.layout().num_systems(),
            got: pos.len(),
        });
    }
    let mut sorted = pos.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pos.len() {
        return Err(QcoreError::DuplicateLabel {
            label: "permute_systems order".into(),
        });
    }
    let layout = a.layout();
    let out_layout = layout.select_positions(&pos);
    let d = layout.total_dim();
    let n = layout.num_systems();

    // Map old flat index -> new flat index.
    let mut index_map = vec![0usize; d];
    let mut multi = vec![0usize; n];
    let mut new_multi = vec![0usize; n];
    for i in 0..d {
        layout.multi_index(i, &mut multi);
        for (k, &p) in pos.iter().enumerate() {
            new_multi[k] = multi[p];
        }
        index_map[i] = out_layout.flat_index(&new_multi);
    }

    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(index_map[i], index_map[j])] = a.entries()[(i, j)];
        }
    }
    let mut op = Op::new(out_layout, out)?;
    if a.is_flagged_hermitian() {
        op = Op::new_hermitian(op.layout().clone(), op.into_entries())?;
    }
    Ok(op)
}

/// Normalized maximally entangled state `Φ` on two `d`-dimensional systems.
pub fn max_entangled(d: usize) -> Result<Op, QcoreError> {
    max_entangled_labeled(d, "ref", "out")
}

/// `Φ` with explicit labels for the two halves.
pub fn max_entangled_labeled(d: usize, left: &str, right: &str) -> Result<Op, QcoreError> {
    if d < 2 {
        return Err(QcoreError::InvalidDimension {
            label: format!("max_entangled d={d}"),
        });
    }
    let layout = SystemLayout::new(vec![(left, d), (right, d)])?;
    let total = d * d;
    let mut m = CMatrix::zeros(total, total);
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = inv_d;
        }
    }
    Op::new_hermitian(layout, m)
}

/// Build an operator from a dense matrix acting on qubits with Pauli helpers.
pub mod pauli {
    use super::*;

    pub fn matrix_i() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn matrix_x() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn matrix_y() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, -1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        m
    }

    pub fn matrix_z() -> CMatrix {
        let mut m = CMatrix::identity(2, 2);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        m
    }
}

/// Dense unitary conjugation `U A U†` on a matching layout.
pub fn conjugate(a: &Op, u: &DMatrix<Complex64>) -> Result<Op, QcoreError> {
    if u.nrows() != a.dim() {
        return Err(QcoreError::ShapeMismatch {
            expected: a.dim(),
            got: u.nrows(),
        });
    }
    let entries = u * a.entries() * u.adjoint();
    let mut op = Op::new(a.layout().clone(), entries)?;
    if a.is_flagged_hermitian() {
        op = Op::new_hermitian(op.layout().clone(), op.into_entries())?;
    }
    Ok(op)
}
