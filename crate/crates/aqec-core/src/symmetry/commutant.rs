//! Orbit bases of permutation-group commutants and multiplicity
//! computation by characters.

use num_complex::Complex64;

use super::action::TensorAction;
use super::characters::Partition;
use super::SymmetryError;

/// Memory guard: group order × matrix-unit pairs.
const ORBIT_GUARD: usize = 500_000_000;

/// Basis of the commutant of a permutation action, one sparse 0/1 matrix
/// per orbit of matrix-unit index pairs.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub action: TensorAction,
    /// Each element: the (row, col) support of one orbit sum Σ E_ij.
    pub orbits: Vec<Vec<(u32, u32)>>,
}

impl CommutantBasis {
    pub fn dimension(&self) -> usize {
        self.orbits.len()
    }

    pub fn element_dense(&self, k: usize) -> nalgebra::DMatrix<Complex64> {
        let d = self.action.total_dim();
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(d, d);
        for &(i, j) in &self.orbits[k] {
            m[(i as usize, j as usize)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

/// Multiplicity of each irrep in the permutation action on the tensor
/// space, by the character inner product. Errors when an inner product is
/// not an integer within 1e-9 (wrong table/action pairing).
pub fn multiplicities_by_characters(
    action: &TensorAction,
) -> Result<Vec<(Vec<Partition>, usize)>, SymmetryError> {
    let table = &action.table;
    let order = table.group_order() as f64;
    // One action character per class.
    let mut class_char = vec![f64::NAN; table.classes.len()];
    for el in &action.elements {
        let c = action.class_of(el);
        if class_char[c].is_nan() {
            class_char[c] = action.action_character(el);
        }
    }
    let mut out = Vec::new();
    let mut weighted_sum = 0usize;
    for (i, label) in table.irreps.iter().enumerate() {
        let mut acc = 0.0;
        for (k, class) in table.classes.iter().enumerate() {
            acc += class.size as f64 * table.chars[i][k] as f64 * class_char[k];
        }
        let m = acc / order;
        if (m - m.round()).abs() > 1e-9 || m.round() < 0.0 {
            return Err(SymmetryError::NonIntegerMultiplicity { value: m });
        }
        let m = m.round() as usize;
        weighted_sum += m * table.irrep_dim(i);
        out.push((label.clone(), m));
    }
    if weighted_sum != action.total_dim() {
        return Err(SymmetryError::MultiplicityDimensionMismatch {
            got: weighted_sum,
            expected: action.total_dim(),
        });
    }
    Ok(out)
}

/// Orbit basis of the commutant: one sparse element per orbit of
/// index pairs under the simultaneous action `(i, j) ↦ (g·i, g·j)`.
pub fn commutant_orbit_basis(action: &TensorAction) -> Result<CommutantBasis, SymmetryError> {
    let d = action.total_dim();
    if action.group_order() * d * d > ORBIT_GUARD {
        return Err(SymmetryError::OrbitGuardExceeded {
            work: action.group_order() * d * d,
        });
    }
    let maps: Vec<Vec<usize>> = action.elements.iter().map(|el| action.index_map(el)).collect();
    let mut orbit_of = vec![u32::MAX; d * d];
    let mut orbits: Vec<Vec<(u32, u32)>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let pair = i * d + j;
            if orbit_of[pair] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            let mut support = Vec::new();
            // The group is fully enumerated, so one pass closes the orbit.
            for map in &maps {
                let p = map[i] * d + map[j];
                if orbit_of[p] == u32::MAX {
                    orbit_of[p] = id;
                    support.push((map[i] as u32, map[j] as u32));
                }
            }
            orbits.push(support);
        }
    }
    Ok(CommutantBasis {
        action: action.clone(),
        orbits,
    })
}
