//! Standard-form block SDP data model.
//!
//! max tr[C X]  s.th.  tr[A_j X] = b_j,  X ⪰ 0 block-diagonal,
//! with complex hermitian data per block.

use num_complex::Complex64;

use super::SdpError;

/// Sparse hermitian matrix: entries stored on the upper triangle
/// (`i ≤ j`), the lower triangle implied by conjugation.
#[derive(Debug, Clone, Default)]
pub struct SparseHerm {
    pub dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHerm {
    pub fn new(dim: usize) -> Self {
        SparseHerm { dim, entries: Vec::new() }
    }

    /// Add `v` at (i, j) plus the conjugate at (j, i). Diagonal additions
    /// must be real within 1e-12.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) -> Result<(), SdpError> {
        if i >= self.dim || j >= self.dim {
            return Err(SdpError::IndexOutOfRange { i, j, dim: self.dim });
        }
        if i == j && v.im.abs() > 1e-12 {
            return Err(SdpError::NotHermitian { deviation: v.im.abs() });
        }
        if i <= j {
            self.entries.push((i, j, if i == j { Complex64::new(v.re, 0.0) } else { v }));
        } else {
            self.entries.push((j, i, v.conj()));
        }
        Ok(())
    }

    /// Coalesce duplicate coordinates and drop numerically zero entries.
    pub fn compress(&mut self) {
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut out: Vec<(usize, usize, Complex64)> = Vec::with_capacity(self.entries.len());
        for &(i, j, v) in &self.entries {
            if let Some(last) = out.last_mut() {
                if last.0 == i && last.1 == j {
                    last.2 += v;
                    continue;
                }
            }
            out.push((i, j, v));
        }
        out.retain(|&(_, _, v)| v.norm() > 1e-300);
        self.entries = out;
    }

    pub fn upper_entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&mut self, s: f64) {
        for e in &mut self.entries {
            e.2 *= s;
        }
    }

    /// Hilbert–Schmidt inner product `tr[A B]` of two compressed sparse
    /// hermitian matrices (real by hermiticity).
    pub fn dot(&self, other: &SparseHerm) -> f64 {
        // Both sorted by (i, j) after compress().
        let (a, b) = (&self.entries, &other.entries);
        let mut ia = 0;
        let mut ib = 0;
        let mut acc = 0.0;
        while ia < a.len() && ib < b.len() {
            let ka = (a[ia].0, a[ia].1);
            let kb = (b[ib].0, b[ib].1);
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => ia += 1,
                std::cmp::Ordering::Greater => ib += 1,
                std::cmp::Ordering::Equal => {
                    let w = if ka.0 == ka.1 { 1.0 } else { 2.0 };
                    // tr[AB] picks up conj(a)·b from the upper triangle twice.
                    acc += w * (a[ia].2.conj() * b[ib].2).re;
                    ia += 1;
                    ib += 1;
                }
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// tr[A X] against a dense hermitian matrix (same block).
    pub fn dot_dense(&self, x: &nalgebra::DMatrix<Complex64>) -> f64 {
        let mut acc = 0.0;
        for &(i, j, v) in &self.entries {
            if i == j {
                acc += (v * x[(j, i)]).re;
            } else {
                acc += 2.0 * (v * x[(j, i)]).re;
            }
        }
        acc
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v.conj();
            }
        }
        m
    }
}

/// Per-block sparse hermitian data (one `SparseHerm` per block).
#[derive(Debug, Clone)]
pub struct BlockSparse {
    pub blocks: Vec<SparseHerm>,
}

impl BlockSparse {
    pub fn zeros(block_dims: &[usize]) -> Self {
        BlockSparse {
            blocks: block_dims.iter().map(|&d| SparseHerm::new(d)).collect(),
        }
    }

    pub fn compress(&mut self) {
        for b in &mut self.blocks {
            b.compress();
        }
    }

    pub fn dot(&self, other: &BlockSparse) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dot(b))
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        for b in &mut self.blocks {
            b.scale(s);
        }
    }

    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(|b| b.upper_entries().len()).sum()
    }
}

/// Block standard-form conic program (maximization).
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub objective: BlockSparse,
    pub constraints: Vec<(BlockSparse, f64)>,
}

impl SdpProblem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        let objective = BlockSparse::zeros(&block_dims);
        SdpProblem {
            block_dims,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn push_constraint(&mut self, mut row: BlockSparse, rhs: f64) {
        row.compress();
        self.constraints.push((row, rhs));
    }

    pub fn compress(&mut self) {
        self.objective.compress();
        for (row, _) in &mut self.constraints {
            row.compress();
        }
    }

    /// Canonical FNV-1a hash over the exact problem data (17 significant
    /// digits), used by the SDPA round-trip check.
    pub fn canonical_hash(&self) -> u64 {
        fn eat(h: &mut u64, bytes: &[u8]) {
            for &b in bytes {
                *h ^= b as u64;
                *h = h.wrapping_mul(0x100000001b3);
            }
        }
        fn eat_mat(h: &mut u64, m: &BlockSparse) {
            for (bi, blk) in m.blocks.iter().enumerate() {
                let mut entries = blk.upper_entries().to_vec();
                entries.sort_by_key(|&(i, j, _)| (i, j));
                for (i, j, v) in entries {
                    let s = format!("{bi}:{i}:{j}:{:.16e}:{:.16e};", v.re, v.im);
                    eat(h, s.as_bytes());
                }
            }
        }
        let mut h = 0xcbf29ce484222325u64;
        for d in &self.block_dims {
            eat(&mut h, &d.to_le_bytes());
        }
        eat_mat(&mut h, &self.objective);
        for (row, rhs) in &self.constraints {
            eat_mat(&mut h, row);
            eat(&mut h, format!("{rhs:.16e};").as_bytes());
        }
        h
    }

    /// Remove linearly dependent equality rows (pivoted Gram Cholesky,
    /// pivot threshold 1e-12 on normalized rows). Returns the kept row
    /// indices. Fails with `Infeasible` when a dependent row has an
    /// inconsistent right-hand side.
    pub fn deduplicate(&mut self) -> Result<Vec<usize>, SdpError> {
        use rayon::prelude::*;
        let m = self.constraints.len();
        if m == 0 {
            return Ok(Vec::new());
        }
        let norms: Vec<f64> = self
            .constraints
            .iter()
            .map(|(row, _)| row.frobenius_norm().max(1e-300))
            .collect();
        let tol = 1e-12;
        // Normalized rows have unit Gram diagonal.
        let mut diag = vec![1.0f64; m];
        let mut l: Vec<Vec<f64>> = Vec::new(); // Cholesky columns, each length m
        let mut pivots: Vec<usize> = Vec::new();
        let mut is_pivot = vec![false; m];
        loop {
            let mut p = usize::MAX;
            let mut best = tol;
            for i in 0..m {
                if !is_pivot[i] && diag[i] > best {
                    best = diag[i];
                    p = i;
                }
            }
            if p == usize::MAX {
                break;
            }
            // Fresh Gram row for the pivot.
            let row_p = &self.constraints[p].0;
            let g_p: Vec<f64> = (0..m)
                .into_par_iter()
                .map(|i| {
                    if is_pivot[i] {
                        0.0
                    } else {
                        row_p.dot(&self.constraints[i].0) / (norms[p] * norms[i])
                    }
                })
                .collect();
            let dp = diag[p].sqrt();
            let mut col = vec![0.0f64; m];
            for i in 0..m {
                if is_pivot[i] {
                    continue;
                }
                let mut v = g_p[i];
                for lc in &l {
                    v -= lc[p] * lc[i];
                }
                col[i] = v / dp;
            }
            col[p] = dp;
            for i in 0..m {
                if !is_pivot[i] {
                    diag[i] = (diag[i] - col[i] * col[i]).max(0.0);
                }
            }
            is_pivot[p] = true;
            l.push(col);
            pivots.push(p);
        }
        // Consistency of dropped rows: row_r/norm_r = Σ_k L[k][r]·q_k within
        // tolerance, so its rhs must match the same combination.
        let mut beta = vec![0.0f64; pivots.len()];
        for (k, &p) in pivots.iter().enumerate() {
            let mut v = self.constraints[p].1 / norms[p];
            for (k2, b2) in beta.iter().enumerate().take(k) {
                v -= l[k2][p] * b2;
            }
            beta[k] = v / l[k][p];
        }
        for r in 0..m {
            if is_pivot[r] {
                continue;
            }
            let implied: f64 = (0..pivots.len()).map(|k| l[k][r] * beta[k]).sum();
            let actual = self.constraints[r].1 / norms[r];
            if (implied - actual).abs() > 1e-8 {
                return Err(SdpError::Infeasible {
                    detail: format!(
                        "equality row {r} is dependent with inconsistent rhs ({} vs {})",
                        actual * norms[r],
                        implied * norms[r]
                    ),
                });
            }
        }
        let mut keep_sorted = pivots.clone();
        keep_sorted.sort_unstable();
        let kept: Vec<(BlockSparse, f64)> = keep_sorted
            .iter()
            .map(|&i| self.constraints[i].clone())
            .collect();
        self.constraints = kept;
        Ok(keep_sorted)
    }
}
