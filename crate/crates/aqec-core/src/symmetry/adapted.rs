//! Numerical block diagonalization: symmetry-adapted isometries for
//! permutation actions, optionally combined with a twisted diagonal-SU(2)
//! sector, via character projectors, generic eigen-splitting of the group
//! algebra, and frame spreading with lowering operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::action::{Su2Twist, TensorAction};
use super::characters::Partition;
use super::commutant::CommutantBasis;
use super::SymmetryError;

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One isotypic block of the adapted basis.
#[derive(Debug, Clone)]
pub struct BlockSpec {
    /// Permutation-irrep label (one partition per group factor).
    pub irrep: Vec<Partition>,
    /// Twice the spin of the SU(2) sector (`None` without an SU(2) part).
    pub spin2: Option<usize>,
    /// Multiplicity m_λ: the reduced block dimension.
    pub mult: usize,
    /// Irrep dimension d_λ (including the 2j+1 magnetic factor).
    pub irrep_dim: usize,
}

impl BlockSpec {
    pub fn label(&self) -> String {
        match self.spin2 {
            Some(s2) => format!("{:?} ⊗ spin {}/2", self.irrep, s2),
            None => format!("{:?}", self.irrep),
        }
    }
}

/// Symmetry-adapting isometry with its block layout: conjugation by
/// `isometry` maps every commutant element to `⊕_λ (X_λ ⊗ 1_{d_λ})`.
#[derive(Debug, Clone)]
pub struct BlockDiagonalizer {
    pub isometry: CMat,
    pub blocks: Vec<BlockSpec>,
    pub col_offsets: Vec<usize>,
    pub seed: u64,
    pub action: TensorAction,
}

impl BlockDiagonalizer {
    pub fn dim(&self) -> usize {
        self.isometry.nrows()
    }

    /// Column of the adapted basis for (block, multiplicity index i,
    /// irrep-internal index a).
    pub fn column(&self, block: usize, i: usize, a: usize) -> nalgebra::DVectorView<'_, Complex64> {
        let d = self.blocks[block].irrep_dim;
        self.isometry.column(self.col_offsets[block] + i * d + a)
    }

    /// Reduced coefficient of an invariant operator: the m_λ×m_λ matrix
    /// with entries averaged over the irrep-internal index.
    pub fn project_block(&self, op: &CMat, block: usize) -> CMat {
        let spec = &self.blocks[block];
        let (m, d) = (spec.mult, spec.irrep_dim);
        let mut out = CMat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = c(0.0, 0.0);
                for a in 0..d {
                    let vi = self.column(block, i, a);
                    let vj = self.column(block, j, a);
                    acc += (vi.adjoint() * op * vj)[(0, 0)];
                }
                out[(i, j)] = acc / c(d as f64, 0.0);
            }
        }
        out
    }

    /// Full-space operator from reduced blocks: `V (⊕ X_λ ⊗ 1_{d_λ}) V†`.
    pub fn expand(&self, blocks: &[CMat]) -> CMat {
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        for (b, x) in blocks.iter().enumerate() {
            let spec = &self.blocks[b];
            for i in 0..spec.mult {
                for j in 0..spec.mult {
                    let v = x[(i, j)];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    for a in 0..spec.irrep_dim {
                        let vi = self.column(b, i, a);
                        let vj = self.column(b, j, a);
                        for r in 0..dim {
                            let vr = vi[r] * v;
                            if vr.norm_sqr() == 0.0 {
                                continue;
                            }
                            for s in 0..dim {
                                out[(r, s)] += vr * vj[s].conj();
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Maximum off-block leakage of `V† op V` over all cross terms, plus
    /// the deviation of the diagonal blocks from the `X ⊗ 1` pattern.
    pub fn leakage(&self, op: &CMat) -> f64 {
        let w = self.isometry.adjoint() * op * &self.isometry;
        let dim = self.dim();
        let mut pattern = CMat::zeros(dim, dim);
        for (b, spec) in self.blocks.iter().enumerate() {
            let x = self.project_block(op, b);
            let off = self.col_offsets[b];
            let d = spec.irrep_dim;
            for i in 0..spec.mult {
                for j in 0..spec.mult {
                    for a in 0..d {
                        pattern[(off + i * d + a, off + j * d + a)] = x[(i, j)];
                    }
                }
            }
        }
        (&w - &pattern).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Dense permutation unitary of a group element's site action.
fn perm_unitary(action: &TensorAction, el_idx: usize) -> CMat {
    let map = action.index_map(&action.elements[el_idx]);
    let d = action.total_dim();
    let mut u = CMat::zeros(d, d);
    for (src, &dst) in map.iter().enumerate() {
        u[(dst, src)] = c(1.0, 0.0);
    }
    u
}

/// Apply a group element to a vector (cheap index permutation).
fn apply_perm(map: &[usize], v: &CMat) -> CMat {
    let mut out = CMat::zeros(v.nrows(), 1);
    for (src, &dst) in map.iter().enumerate() {
        out[(dst, 0)] = v[(src, 0)];
    }
    out
}

/// Twisted SU(2) generators J_x, J_y, J_z for the marked qubit sites:
/// fundamental sites contribute σ_α/2, conjugate sites −σ_αᵀ/2.
fn su2_generators(action: &TensorAction) -> Option<[CMat; 3]> {
    if action.su2_twists.is_empty() {
        return None;
    }
    let dims = &action.site_dims;
    let total = action.total_dim();
    let n = dims.len();
    let sx = crate::qcore::pauli::matrix_x();
    let sy = crate::qcore::pauli::matrix_y();
    let sz = crate::qcore::pauli::matrix_z();
    let mut out = [CMat::zeros(total, total), CMat::zeros(total, total), CMat::zeros(total, total)];
    for &(site, twist) in &action.su2_twists {
        assert_eq!(dims[site], 2, "SU(2) twists require qubit sites");
        for (k, sigma) in [&sx, &sy, &sz].into_iter().enumerate() {
            let local: CMat = match twist {
                Su2Twist::Fundamental => sigma * c(0.5, 0.0),
                Su2Twist::Conjugate => sigma.transpose() * c(-0.5, 0.0),
            };
            // Embed at `site`: sum over basis indices differing only there.
            let stride: usize = dims[site + 1..].iter().product();
            let outer: usize = dims[..site].iter().product();
            let inner = stride;
            let d_site = dims[site];
            for o in 0..outer {
                for a in 0..d_site {
                    for b in 0..d_site {
                        let v = local[(a, b)];
                        if v.norm_sqr() == 0.0 {
                            continue;
                        }
                        for i in 0..inner {
                            let row = (o * d_site + a) * inner + i;
                            let col = (o * d_site + b) * inner + i;
                            out[k][(row, col)] += v;
                        }
                    }
                }
            }
            let _ = n;
        }
    }
    Some(out)
}

/// Orthonormal basis of the eigenspace of a hermitian matrix for
/// eigenvalues within `tol` of `target`.
fn eigenspace(h: &CMat, target: f64, tol: f64) -> CMat {
    let eig = nalgebra::linalg::SymmetricEigen::new(h.clone());
    let cols: Vec<usize> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - target).abs() < tol)
        .map(|(k, _)| k)
        .collect();
    let mut out = CMat::zeros(h.nrows(), cols.len());
    for (i, &k) in cols.iter().enumerate() {
        out.set_column(i, &eig.eigenvectors.column(k));
    }
    out
}

/// Build the adapted basis for a tensor action (permutation part plus
/// optional SU(2) twists). Deterministic given the seed, which is recorded
/// in the output.
pub fn block_diagonalize_action(
    action: &TensorAction,
    seed: u64,
) -> Result<BlockDiagonalizer, SymmetryError> {
    let dim = action.total_dim();
    let order = action.group_order() as f64;

    // Permutation isotypic projectors.
    let unitaries: Vec<CMat> = (0..action.elements.len())
        .map(|k| perm_unitary(action, k))
        .collect();
    let table = &action.table;
    let mut perm_projectors: Vec<(usize, CMat)> = Vec::new(); // (irrep index, P)
    for (li, _) in table.irreps.iter().enumerate() {
        let d_l = table.irrep_dim(li) as f64;
        let mut p = CMat::zeros(dim, dim);
        for (k, el) in action.elements.iter().enumerate() {
            let chi = table.chars[li][action.class_of(el)] as f64;
            if chi != 0.0 {
                p += &unitaries[k] * c(chi * d_l / order, 0.0);
            }
        }
        if p.iter().map(|v| v.norm()).fold(0.0, f64::max) > 1e-12 {
            perm_projectors.push((li, p));
        }
    }

    // SU(2) sector data.
    let js = su2_generators(action);
    let (spin_sectors, jm, jz) = match &js {
        Some([jx, jy, jz]) => {
            let c2 = jx * jx + jy * jy + jz * jz;
            let eig = nalgebra::linalg::SymmetricEigen::new(c2.clone());
            let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            values.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
            // j(j+1) -> 2j (integer).
            let sectors: Vec<(usize, f64)> = values
                .iter()
                .map(|&v| {
                    let j = (-0.5 + (0.25 + v.max(0.0)).sqrt()).max(0.0);
                    let spin2 = (2.0 * j).round() as usize;
                    (spin2, v)
                })
                .collect();
            let jm = jx - jy * c(0.0, 1.0); // lowering J₋ = J_x − i J_y
            (Some((c2, sectors)), Some(jm), Some(jz.clone()))
        }
        None => (None, None, None),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps: Vec<Vec<usize>> = action.elements.iter().map(|el| action.index_map(el)).collect();

    let mut all_columns: Vec<CMat> = Vec::new();
    let mut blocks: Vec<BlockSpec> = Vec::new();
    let mut col_offsets: Vec<usize> = Vec::new();

    // Enumerate (perm irrep, spin) sectors.
    let spin_list: Vec<Option<(usize, f64)>> = match &spin_sectors {
        Some((_, sectors)) => sectors.iter().map(|&s| Some(s)).collect(),
        None => vec![None],
    };

    for spin in &spin_list {
        // Basis of the spin sector (or the whole space).
        let spin_basis: CMat = match (spin, &spin_sectors) {
            (Some((_, c2val)), Some((c2, _))) => eigenspace(c2, *c2val, 1e-6),
            _ => CMat::identity(dim, dim),
        };
        if spin_basis.ncols() == 0 {
            continue;
        }
        for (li, p_l) in &perm_projectors {
            let d_perm = table.irrep_dim(*li);
            // Joint isotypic: eigenvalue-1 space of P restricted to the spin sector.
            let m_res = spin_basis.adjoint() * p_l * &spin_basis;
            let w_cols = eigenspace(&m_res, 1.0, 1e-6);
            if w_cols.ncols() == 0 {
                continue;
            }
            let w = &spin_basis * &w_cols; // columns: joint isotypic basis
            let (spin2, spin_dim) = match spin {
                Some((s2, _)) => (Some(*s2), s2 + 1),
                None => (None, 1),
            };
            let d_total = d_perm * spin_dim;
            let s_dim = w.ncols();
            if s_dim % d_total != 0 {
                return Err(SymmetryError::BlockStructure {
                    detail: format!(
                        "isotypic dim {s_dim} not divisible by irrep dim {d_total}"
                    ),
                });
            }
            let mult = s_dim / d_total;

            // Highest-weight subspace within the isotypic component.
            let w1: CMat = if let Some(jz) = &jz {
                let j = spin2.unwrap() as f64 / 2.0;
                let jz_res = w.adjoint() * jz * &w;
                let hw = eigenspace(&jz_res, j, 1e-6);
                &w * &hw
            } else {
                w.clone()
            };
            debug_assert_eq!(w1.ncols(), mult * d_perm);

            // Corner: smallest-eigenvalue cluster of a generic hermitian
            // group-algebra element restricted to the highest-weight space.
            let corner: CMat = if d_perm == 1 {
                w1.clone()
            } else {
                let mut attempt = 0;
                loop {
                    let mut r = CMat::zeros(dim, dim);
                    for u in &unitaries {
                        let coeff: f64 = rng.gen::<f64>() - 0.5;
                        r += u * c(coeff, 0.0);
                    }
                    let rh = (&r + r.adjoint()) * c(0.5, 0.0);
                    let r1 = w1.adjoint() * &rh * &w1;
                    let eig = nalgebra::linalg::SymmetricEigen::new(r1);
                    let mut order_idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                    order_idx.sort_by(|&a, &b| {
                        eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap()
                    });
                    let lowest = eig.eigenvalues[order_idx[0]];
                    let cluster: Vec<usize> = order_idx
                        .iter()
                        .copied()
                        .filter(|&k| (eig.eigenvalues[k] - lowest).abs() < 1e-8)
                        .collect();
                    let gap_ok = order_idx
                        .iter()
                        .map(|&k| eig.eigenvalues[k])
                        .filter(|v| (v - lowest).abs() >= 1e-8)
                        .map(|v| v - lowest)
                        .next()
                        .map(|g| g > 1e-8)
                        .unwrap_or(true);
                    if cluster.len() == mult && gap_ok {
                        let mut corner_cols = CMat::zeros(w1.ncols(), mult);
                        for (i, &k) in cluster.iter().enumerate() {
                            corner_cols.set_column(i, &eig.eigenvectors.column(k));
                        }
                        break &w1 * &corner_cols;
                    }
                    attempt += 1;
                    if attempt >= 5 {
                        return Err(SymmetryError::DegenerateSplit { attempts: attempt });
                    }
                }
            };

            // Frame recipes across the permutation-irrep index from v₁.
            let v1 = corner.column(0).into_owned();
            let v1m = CMat::from_column_slice(dim, 1, v1.as_slice());
            let mut recipes: Vec<Vec<(usize, Complex64)>> = Vec::new();
            let mut frame1: Vec<CMat> = Vec::new();
            for (gi, map) in maps.iter().enumerate() {
                if recipes.len() == d_perm {
                    break;
                }
                let wv = apply_perm(map, &v1m);
                // Gram-Schmidt against accepted frame vectors, tracking the
                // combination of U_g v₁'s that produced the new vector.
                let mut resid = wv.clone();
                let mut combo: Vec<(usize, Complex64)> = vec![(gi, c(1.0, 0.0))];
                for (k, bk) in frame1.iter().enumerate() {
                    let ov = (bk.adjoint() * &resid)[(0, 0)];
                    if ov.norm_sqr() > 0.0 {
                        resid -= bk * ov;
                        for &(g2, c2) in &recipes[k] {
                            combo.push((g2, -ov * c2));
                        }
                    }
                }
                let nrm = resid.norm();
                if nrm > 1e-6 {
                    let scale = c(1.0 / nrm, 0.0);
                    let combo: Vec<(usize, Complex64)> =
                        combo.into_iter().map(|(g, cc)| (g, cc * scale)).collect();
                    frame1.push(resid * scale);
                    recipes.push(combo);
                }
            }
            if recipes.len() != d_perm {
                return Err(SymmetryError::BlockStructure {
                    detail: format!(
                        "frame spreading found {} of {} irrep directions",
                        recipes.len(),
                        d_perm
                    ),
                });
            }

            // Assemble columns: i slow; a = (perm index r, magnetic μ desc).
            for i in 0..mult {
                let vi = CMat::from_column_slice(dim, 1, corner.column(i).into_owned().as_slice());
                for recipe in &recipes {
                    let mut top = CMat::zeros(dim, 1);
                    for &(g, coeff) in recipe {
                        top += apply_perm(&maps[g], &vi) * coeff;
                    }
                    // Magnetic ladder downward.
                    let mut current = top.clone();
                    all_columns.push(current.clone());
                    if let (Some(s2), Some(jm)) = (spin2, &jm) {
                        let j = s2 as f64 / 2.0;
                        let mut mu = j;
                        while mu > -j + 0.5 {
                            let norm = (j * (j + 1.0) - mu * (mu - 1.0)).sqrt();
                            current = jm * &current / c(norm, 0.0);
                            all_columns.push(current.clone());
                            mu -= 1.0;
                        }
                    }
                }
            }
            col_offsets.push(0); // fixed up below
            blocks.push(BlockSpec {
                irrep: table.irreps[*li].clone(),
                spin2,
                mult,
                irrep_dim: d_total,
            });
        }
    }

    // Column offsets and final isometry.
    let mut total_cols = 0usize;
    for (b, spec) in blocks.iter().enumerate() {
        col_offsets[b] = total_cols;
        total_cols += spec.mult * spec.irrep_dim;
    }
    if total_cols != dim {
        return Err(SymmetryError::BlockStructure {
            detail: format!("adapted basis has {total_cols} columns, expected {dim}"),
        });
    }
    // Column order inside a block from the assembly loop is (i, r, μ):
    // matches (i slow, a = r·(2j+1) + μ-desc) as required.
    let mut v = CMat::zeros(dim, dim);
    for (k, col) in all_columns.iter().enumerate() {
        v.set_column(k, &col.column(0));
    }

    let bd = BlockDiagonalizer {
        isometry: v,
        blocks,
        col_offsets,
        seed,
        action: action.clone(),
    };
    // Unitarity check.
    let gram = bd.isometry.adjoint() * &bd.isometry;
    let dev = (&gram - CMat::identity(dim, dim))
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(SymmetryError::BlockStructure {
            detail: format!("adapted basis not orthonormal (deviation {dev:.3e})"),
        });
    }
    Ok(bd)
}

/// Spec-level entry point: block-diagonalize the group behind a commutant
/// basis and verify the leakage invariant on its elements.
pub fn block_diagonalize(cb: &CommutantBasis, seed: u64) -> Result<BlockDiagonalizer, SymmetryError> {
    let bd = block_diagonalize_action(&cb.action, seed)?;
    for k in 0..cb.dimension().min(64) {
        let el = cb.element_dense(k);
        let leak = bd.leakage(&el);
        if leak > 1e-9 {
            return Err(SymmetryError::BlockStructure {
                detail: format!("commutant element {k} leaks {leak:.3e} off-block"),
            });
        }
    }
    Ok(bd)
}
