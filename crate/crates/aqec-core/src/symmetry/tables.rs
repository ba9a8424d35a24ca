//! Block tables for the grid symmetry of the hierarchy: extendibility-only
//! sizes and the combined iid × extendibility × isotropic-U(2) table built
//! by tensoring the P-grid sector with the L-sector and coupling the
//! column-swap signs.

use super::action::{copies_action, p_grid_action, Su2Twist};
use super::adapted::block_diagonalize_action;
use super::characters::Partition;
use super::commutant::multiplicities_by_characters;
use super::SymmetryError;

/// One row of the combined block table.
#[derive(Debug, Clone)]
pub struct CombinedBlockRow {
    /// S_m irrep on the grid rows.
    pub row_irrep: Partition,
    /// Twice the spin of the isotropic U(2) sector on the L-systems.
    pub spin2: usize,
    /// Total S_n (column-swap) irrep after coupling P- and L-sectors.
    pub column_irrep: Partition,
    /// Block size of the reduced SDP variable.
    pub mult: usize,
    /// Dimension of the associated irrep (d_{S_m} × (2j+1)).
    pub irrep_dim: usize,
}

/// Extendibility-only block sizes: multiplicities of S_n on n copies of
/// the d_L·d_P system times the untouched first-system dimension.
pub fn extendibility_block_sizes(m: usize, n: usize) -> Result<Vec<usize>, SymmetryError> {
    let d_lp = 1usize << (m + 1);
    if n < 2 {
        // S₁ is trivial: a single full block.
        return Ok(vec![d_lp * d_lp.pow(n as u32)]);
    }
    let action = copies_action(&[], &[d_lp], n)?;
    let mult = multiplicities_by_characters(&action)?;
    Ok(mult
        .iter()
        .filter(|(_, m)| *m > 0)
        .map(|(_, mm)| mm * d_lp)
        .collect())
}

/// The combined-symmetry block table for encoding one qubit into `m`
/// qubits with `n = 2` extensions: S_m (iid rows) × S₂ (extendibility
/// columns) × U(2) (isotropic on the L-systems). The two sectors couple
/// through the diagonal S₂, which for one-dimensional S₂ irreps is a sign
/// product.
pub fn combined_block_table(m: usize, n: usize) -> Result<Vec<CombinedBlockRow>, SymmetryError> {
    if n != 2 {
        return Err(SymmetryError::BlockStructure {
            detail: "combined block table is implemented for n = 2".into(),
        });
    }
    // P-grid sector: S_m × S₂ on m·3 qubit sites.
    let grid = p_grid_action(m, n, 2)?;
    let grid_mult = multiplicities_by_characters(&grid)?;
    let grid_dims: Vec<usize> = (0..grid.table.irreps.len())
        .map(|i| grid.table.irrep_dim(i))
        .collect();

    // L-sector: (L, L̄¹, L̄²) under S₂ × twisted SU(2).
    let l_action = copies_action(&[2], &[2], n)?.with_su2(vec![
        (0, Su2Twist::Fundamental),
        (1, Su2Twist::Conjugate),
        (2, Su2Twist::Conjugate),
    ]);
    let l_bd = block_diagonalize_action(&l_action, 42)?;

    let sign_product = |a: &Partition, b: &Partition| -> Partition {
        let odd_a = *a == vec![1, 1];
        let odd_b = *b == vec![1, 1];
        if odd_a ^ odd_b {
            vec![1, 1]
        } else {
            vec![2]
        }
    };

    // Accumulate coupled multiplicities keyed by (row irrep, spin2, total sign).
    let mut rows: Vec<CombinedBlockRow> = Vec::new();
    for (gi, (glabel, gm)) in grid_mult.iter().enumerate() {
        if *gm == 0 {
            continue;
        }
        let alpha = glabel[0].clone();
        let s_p = glabel[1].clone();
        // d of the S_m part alone: grid irrep dim divided by the S₂ part (1).
        let d_alpha = grid_dims[gi];
        for spec in &l_bd.blocks {
            let gamma = spec.irrep[0].clone();
            let spin2 = spec.spin2.expect("L-sector carries SU(2)");
            let total = sign_product(&s_p, &gamma);
            let mult = gm * spec.mult;
            let irrep_dim = d_alpha * (spin2 + 1);
            if let Some(existing) = rows.iter_mut().find(|r| {
                r.row_irrep == alpha && r.spin2 == spin2 && r.column_irrep == total
            }) {
                existing.mult += mult;
            } else {
                rows.push(CombinedBlockRow {
                    row_irrep: alpha,
                    spin2,
                    column_irrep: total,
                    mult,
                    irrep_dim,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.spin2, &a.row_irrep, &a.column_irrep).cmp(&(b.spin2, &b.row_irrep, &b.column_irrep))
    });
    Ok(rows)
}
