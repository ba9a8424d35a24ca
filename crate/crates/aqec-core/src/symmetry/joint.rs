//! Joint-symmetry analysis for pairs of permutation groups: whether the
//! product set UV forms a group, the product formula, and the structure
//! of the grid symmetry group generated by iid- and extendibility-style
//! actions.

use std::collections::HashSet;

use super::perm::{closure, Perm, PermGroup, ORDER_GUARD};
use super::SymmetryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointVerdict {
    Joint,
    NotJoint,
}

/// Result of the joint-symmetry check on a pair of groups.
#[derive(Debug, Clone)]
pub struct JointSymmetryReport {
    pub is_group: bool,
    pub product_order: usize,
    pub closure_order: usize,
    pub intersection_order: usize,
    pub product_formula_holds: bool,
    pub verdict: JointVerdict,
}

/// Checks whether `W = {uv}` is a group: equivalent to `UV = VU` as sets.
/// Also reports `|UV|·|U∩V|` against `|U|·|V|` and the closure order.
pub fn joint_symmetry_check(u: &PermGroup, v: &PermGroup) -> Result<JointSymmetryReport, SymmetryError> {
    if u.degree != v.degree {
        return Err(SymmetryError::DegreeMismatch {
            left: u.degree,
            right: v.degree,
        });
    }
    let uv = u.product_set(v);
    let vu = v.product_set(u);
    let uv_set: HashSet<&Perm> = uv.iter().collect();
    let sets_equal = uv.len() == vu.len() && vu.iter().all(|p| uv_set.contains(p));
    let mut gens = u.generators.clone();
    gens.extend(v.generators.iter().cloned());
    let closure_elems = closure(u.degree, &gens, ORDER_GUARD)?;
    let inter = u.intersection_order(v);
    // Product formula of the generated group: when UV is a group it equals
    // the closure, so |closure|·|U∩V| = |U|·|V| must hold.
    let product_formula_holds = closure_elems.len() * inter == u.order() * v.order();
    let is_group = sets_equal;
    Ok(JointSymmetryReport {
        is_group,
        product_order: uv.len(),
        closure_order: closure_elems.len(),
        intersection_order: inter,
        product_formula_holds,
        verdict: if is_group {
            JointVerdict::Joint
        } else {
            JointVerdict::NotJoint
        },
    })
}

/// `|G| = (m!/2)·(m!)^n·n!` for the grid symmetry group generated by the
/// first-two-column iid action together with the extendibility column
/// permutations.
pub fn global_group_order(m: usize, n: usize) -> u128 {
    let fact = |k: usize| -> u128 { (1..=k as u128).product::<u128>().max(1) };
    (fact(m) / 2).max(1) * fact(m).pow(n as u32) * fact(n)
}

/// Generators of the grid group on `m` rows × `n+1` columns of positions
/// (position `(c, r) = c·m + r`): iid generators act on columns 0 and 1
/// simultaneously; extendibility generators swap adjacent copy columns.
pub fn grid_group_generators(m: usize, n: usize) -> (usize, Vec<Perm>) {
    let degree = m * (n + 1);
    let mut gens = Vec::new();
    // iid: adjacent row transpositions applied to columns 0 and 1.
    for r in 0..m.saturating_sub(1) {
        let mut img: Vec<usize> = (0..degree).collect();
        for c in [0usize, 1] {
            img.swap(c * m + r, c * m + r + 1);
        }
        gens.push(Perm(img));
    }
    // extendibility: adjacent copy-column swaps (full columns).
    for c in 1..n {
        let mut img: Vec<usize> = (0..degree).collect();
        for r in 0..m {
            img.swap(c * m + r, (c + 1) * m + r);
        }
        gens.push(Perm(img));
    }
    (degree, gens)
}

/// Structure report for the grid group: explicit order by closure, the
/// kernel of the restriction to the extension columns, and whether that
/// kernel consists of even permutations of the first column only.
#[derive(Debug, Clone)]
pub struct GridGroupStructure {
    pub order: usize,
    pub formula_order: u128,
    pub kernel_order: usize,
    pub kernel_all_even_on_first_column: bool,
}

pub fn grid_group_structure(m: usize, n: usize) -> Result<GridGroupStructure, SymmetryError> {
    let (degree, gens) = grid_group_generators(m, n);
    let elements = closure(degree, &gens, ORDER_GUARD)?;
    // Kernel of restriction to columns 1..n (positions m..degree).
    let mut kernel_order = 0usize;
    let mut kernel_even = true;
    for g in &elements {
        let trivial_on_ext = (m..degree).all(|p| g.0[p] == p);
        if trivial_on_ext {
            kernel_order += 1;
            // Restriction to column 0.
            let first: Vec<usize> = (0..m).map(|r| g.0[r]).collect();
            let fp = Perm(first);
            if !fp.is_even() {
                kernel_even = false;
            }
        }
    }
    Ok(GridGroupStructure {
        order: elements.len(),
        formula_order: global_group_order(m, n),
        kernel_order,
        kernel_all_even_on_first_column: kernel_even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_pair_is_not_joint() {
        // U = {id, (1 4)(2 5)}, V = {id, (2 3)(5 6)} on six points.
        let u = PermGroup::from_generators(6, vec![Perm::from_cycles(6, &[&[0, 3], &[1, 4]])]).unwrap();
        let v = PermGroup::from_generators(6, vec![Perm::from_cycles(6, &[&[1, 2], &[4, 5]])]).unwrap();
        let report = joint_symmetry_check(&u, &v).unwrap();
        assert_eq!(report.verdict, JointVerdict::NotJoint);
        assert_eq!(report.product_order, 4);
        assert_eq!(report.closure_order, 8);
        assert!(!report.product_formula_holds); // 8·1 ≠ 2·2
    }

    #[test]
    fn disjoint_s2_times_s2_is_joint() {
        let u = PermGroup::from_generators(4, vec![Perm::from_cycles(4, &[&[0, 1]])]).unwrap();
        let v = PermGroup::from_generators(4, vec![Perm::from_cycles(4, &[&[2, 3]])]).unwrap();
        let report = joint_symmetry_check(&u, &v).unwrap();
        assert_eq!(report.verdict, JointVerdict::Joint);
        assert_eq!(report.product_order, 4);
        assert!(report.product_formula_holds);
    }

    #[test]
    fn wreath_style_pair_is_joint() {
        // U = S₂×S₂ acting within two blocks {0,1}, {2,3}; V = S₂ swapping
        // the blocks. V normalizes U: joint, order (2!)²·2! = 8.
        let u = PermGroup::from_generators(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1]]),
                Perm::from_cycles(4, &[&[2, 3]]),
            ],
        )
        .unwrap();
        let v = PermGroup::from_generators(4, vec![Perm::from_cycles(4, &[&[0, 2], &[1, 3]])]).unwrap();
        let report = joint_symmetry_check(&u, &v).unwrap();
        assert_eq!(report.verdict, JointVerdict::Joint);
        assert_eq!(report.closure_order, 8);
        assert!(report.product_formula_holds);
    }

    #[test]
    fn grid_orders_match_formula() {
        for (m, n) in [(2, 1), (2, 2), (3, 2), (2, 3), (3, 3)] {
            let s = grid_group_structure(m, n).unwrap();
            assert_eq!(s.order as u128, s.formula_order, "m={m} n={n}");
            let half_m_fact: u128 = ((1..=m as u128).product::<u128>() / 2).max(1);
            assert_eq!(s.kernel_order as u128, half_m_fact, "kernel m={m} n={n}");
            assert!(s.kernel_all_even_on_first_column);
        }
        assert_eq!(global_group_order(2, 2), 8);
        assert_eq!(global_group_order(3, 2), 216);
        assert_eq!(global_group_order(2, 1), 2);
    }
}
