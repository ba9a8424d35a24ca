//! Commutant of the diagonal unitary action on k tensor factors: the span
//! of the k! subsystem-permutation operators, thinned to a linearly
//! independent subset.

use super::perm::Perm;
use super::SymmetryError;

/// A linearly independent set of permutation operators spanning the
/// commutant of `U^{⊗k}` on `(C^d)^{⊗k}`.
#[derive(Debug, Clone)]
pub struct PermOperatorBasis {
    pub local_dim: usize,
    pub copies: usize,
    pub perms: Vec<Perm>,
}

impl PermOperatorBasis {
    pub fn dimension(&self) -> usize {
        self.perms.len()
    }

    /// Dense operator for one permutation: U_σ |i_1…i_k⟩ = |i_{σ⁻¹(1)}…⟩.
    pub fn operator_dense(&self, k: usize) -> nalgebra::DMatrix<num_complex::Complex64> {
        let d = self.local_dim.pow(self.copies as u32);
        let mut m = nalgebra::DMatrix::zeros(d, d);
        let sigma = &self.perms[k];
        let dims = vec![self.local_dim; self.copies];
        for idx in 0..d {
            let mut rem = idx;
            let mut multi = vec![0usize; self.copies];
            for p in (0..self.copies).rev() {
                multi[p] = rem % dims[p];
                rem /= dims[p];
            }
            let mut new_multi = vec![0usize; self.copies];
            for p in 0..self.copies {
                new_multi[sigma.0[p]] = multi[p];
            }
            let mut out = 0usize;
            for p in 0..self.copies {
                out = out * dims[p] + new_multi[p];
            }
            m[(out, idx)] = num_complex::Complex64::new(1.0, 0.0);
        }
        m
    }
}

fn all_perms(k: usize) -> Vec<Perm> {
    fn rec(items: &mut Vec<usize>, at: usize, out: &mut Vec<Perm>) {
        if at == items.len() {
            out.push(Perm(items.clone()));
            return;
        }
        for i in at..items.len() {
            items.swap(at, i);
            rec(items, at + 1, out);
            items.swap(at, i);
        }
    }
    let mut items: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    rec(&mut items, 0, &mut out);
    out.sort();
    out
}

/// Schur–Weyl commutant basis for `k` copies of local dimension `d`:
/// permutation operators with one representative per linear dependency
/// class. For `d ≥ k` all k! operators are independent; for smaller `d`
/// the rank is Σ_λ m_λ² over partitions of k with at most d rows.
pub fn schur_weyl_commutant(local_dim: usize, copies: usize) -> Result<PermOperatorBasis, SymmetryError> {
    if local_dim.pow(copies as u32) > 1 << 20 {
        return Err(SymmetryError::OrbitGuardExceeded {
            work: local_dim.pow(copies as u32),
        });
    }
    let perms = all_perms(copies);
    // Gram matrix: tr[U_σ† U_τ] = d^{cycles(σ⁻¹τ)} (exact integers).
    let n = perms.len();
    let mut gram = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let rel = perms[i].inverse().compose(&perms[j]);
            gram[i][j] = (local_dim as f64).powi(rel.num_cycles() as i32);
        }
    }
    // Greedy pivoted selection of an independent subset (identity first).
    let mut selected: Vec<usize> = Vec::new();
    let mut basis_gram: Vec<Vec<f64>> = Vec::new();
    for cand in 0..n {
        // Residual norm² of cand against selected span.
        let k = selected.len();
        if k == 0 {
            selected.push(cand);
            basis_gram = vec![vec![gram[cand][cand]]];
            continue;
        }
        // Solve G_SS w = G_S,cand; residual = G_cc − w·G_S,cand.
        let mut a = basis_gram.clone();
        let mut rhs: Vec<f64> = selected.iter().map(|&s| gram[s][cand]).collect();
        // Gaussian elimination (small k).
        let mut ok = true;
        for col in 0..k {
            let mut piv = col;
            for r in col + 1..k {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            a.swap(col, piv);
            rhs.swap(col, piv);
            if a[col][col].abs() < 1e-9 {
                ok = false;
                break;
            }
            for r in col + 1..k {
                let f = a[r][col] / a[col][col];
                for c2 in col..k {
                    a[r][c2] -= f * a[col][c2];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        if !ok {
            continue;
        }
        let mut w = vec![0.0f64; k];
        for r in (0..k).rev() {
            let mut v = rhs[r];
            for c2 in r + 1..k {
                v -= a[r][c2] * w[c2];
            }
            w[r] = v / a[r][r];
        }
        let dot: f64 = selected.iter().zip(&w).map(|(&s, wi)| gram[s][cand] * wi).sum();
        let residual = gram[cand][cand] - dot;
        let scale = gram[cand][cand].max(1.0);
        if residual > 1e-9 * scale {
            selected.push(cand);
            let k2 = selected.len();
            let mut g2 = vec![vec![0.0f64; k2]; k2];
            for (ai, &si) in selected.iter().enumerate() {
                for (bi, &sj) in selected.iter().enumerate() {
                    g2[ai][bi] = gram[si][sj];
                }
            }
            basis_gram = g2;
        }
    }
    Ok(PermOperatorBasis {
        local_dim,
        copies,
        perms: selected.into_iter().map(|i| perms[i].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_copies_qubits() {
        let b = schur_weyl_commutant(2, 2).unwrap();
        assert_eq!(b.dimension(), 2); // {I, SWAP}
    }

    #[test]
    fn three_copies_qubits_have_one_relation() {
        // 3! = 6 permutation operators with one linear relation at d = 2:
        // dimension Σ m_λ² = 2² + 1² = 5.
        let b = schur_weyl_commutant(2, 3).unwrap();
        assert_eq!(b.dimension(), 5);
    }

    #[test]
    fn three_copies_qutrits_all_independent() {
        let b = schur_weyl_commutant(3, 3).unwrap();
        assert_eq!(b.dimension(), 6);
    }

    #[test]
    fn operators_commute_with_diagonal_unitaries() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let b = schur_weyl_commutant(2, 3).unwrap();
        for _ in 0..50 {
            let mut g = nalgebra::DMatrix::<num_complex::Complex64>::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    g[(i, j)] = num_complex::Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let u = g.qr().q();
            let u3 = u.kronecker(&u).kronecker(&u);
            for k in 0..b.dimension() {
                let p = b.operator_dense(k);
                let comm = &u3 * &p - &p * &u3;
                let dev = comm.iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!(dev < 1e-12, "commutator {dev:.3e}");
            }
        }
    }
}
