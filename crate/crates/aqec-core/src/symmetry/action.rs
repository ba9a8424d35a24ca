//! Group actions on tensor positions: products of symmetric groups acting
//! on labeled sites, with optional twisted diagonal-SU(2) markers.

use super::characters::{CharacterTable, Partition};
use super::perm::Perm;
use super::SymmetryError;

/// Twist of the diagonal SU(2) action on a site: fundamental `u` or
/// conjugate `ū`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2Twist {
    Fundamental,
    Conjugate,
}

/// One group element: its abstract factor components and its action on
/// tensor positions.
#[derive(Debug, Clone)]
pub struct ActionElement {
    pub factors: Vec<Perm>,
    pub site_perm: Perm,
}

/// A product of symmetric groups acting on tensor positions, with an
/// optional twisted-SU(2) sector on a subset of sites.
#[derive(Debug, Clone)]
pub struct TensorAction {
    pub site_dims: Vec<usize>,
    pub table: CharacterTable,
    pub elements: Vec<ActionElement>,
    /// (site, twist) pairs carrying the diagonal unitary symmetry.
    pub su2_twists: Vec<(usize, Su2Twist)>,
}

fn all_perms(degree: usize) -> Vec<Perm> {
    let mut out = vec![Perm::identity(degree)];
    if degree <= 1 {
        return out;
    }
    out.clear();
    let mut items: Vec<usize> = (0..degree).collect();
    permute_rec(&mut items, 0, &mut out);
    out
}

fn permute_rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == items.len() {
        out.push(Perm(items.clone()));
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_rec(items, k + 1, out);
        items.swap(k, i);
    }
}

impl TensorAction {
    /// Build from factor degrees and a map from factor tuples to site
    /// permutations. The map must be a homomorphism; this is checked on
    /// generators against composed elements.
    pub fn build<F>(
        site_dims: Vec<usize>,
        factor_degrees: &[usize],
        map: F,
    ) -> Result<Self, SymmetryError>
    where
        F: Fn(&[Perm]) -> Perm,
    {
        let table = CharacterTable::product_of(factor_degrees);
        let factor_perms: Vec<Vec<Perm>> = factor_degrees.iter().map(|&d| all_perms(d)).collect();
        let mut elements = Vec::new();
        let mut idx = vec![0usize; factor_degrees.len()];
        loop {
            let factors: Vec<Perm> = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| factor_perms[k][i].clone())
                .collect();
            let site_perm = map(&factors);
            if site_perm.degree() != site_dims.len() || !site_perm.is_valid() {
                return Err(SymmetryError::InvalidGenerator);
            }
            // Sites of equal dimension only.
            for (s, &img) in site_perm.0.iter().enumerate() {
                if site_dims[s] != site_dims[img] {
                    return Err(SymmetryError::DimMismatchUnderAction { site: s });
                }
            }
            elements.push(ActionElement { factors, site_perm });
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < factor_perms[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        // Homomorphism spot check: map(a)∘map(b) = map(a∘b) on a few pairs.
        let n = elements.len();
        for step in 1..n.min(4) {
            let a = &elements[step];
            let b = &elements[n - step];
            let ab_factors: Vec<Perm> = a
                .factors
                .iter()
                .zip(&b.factors)
                .map(|(x, y)| x.compose(y))
                .collect();
            let expect = map(&ab_factors);
            let got = a.site_perm.compose(&b.site_perm);
            if expect != got {
                return Err(SymmetryError::NotAHomomorphism);
            }
        }
        Ok(TensorAction {
            site_dims,
            table,
            elements,
            su2_twists: Vec::new(),
        })
    }

    /// Trivial group on the given sites.
    pub fn trivial(site_dims: Vec<usize>) -> Self {
        let n = site_dims.len();
        TensorAction {
            site_dims,
            table: CharacterTable::symmetric(1),
            elements: vec![ActionElement {
                factors: vec![Perm::identity(1)],
                site_perm: Perm::identity(n),
            }],
            su2_twists: Vec::new(),
        }
    }

    pub fn with_su2(mut self, twists: Vec<(usize, Su2Twist)>) -> Self {
        self.su2_twists = twists;
        self
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn total_dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    /// Index of the class (in table order) containing an element.
    pub fn class_of(&self, el: &ActionElement) -> usize {
        let cts: Vec<Partition> = el.factors.iter().map(|p| p.cycle_type()).collect();
        self.table
            .classes
            .iter()
            .position(|c| c.cycle_types == cts)
            .expect("element class present in table")
    }

    /// Character of the permutation action on the full tensor space:
    /// product over cycles of the site permutation of the common site
    /// dimension along the cycle.
    pub fn action_character(&self, el: &ActionElement) -> f64 {
        let n = el.site_perm.degree();
        let mut seen = vec![false; n];
        let mut chi = 1f64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = el.site_perm.0[x];
            }
            chi *= self.site_dims[start] as f64;
        }
        chi
    }

    /// Flat-index permutation for one element: `out[new_index] = in[index]`
    /// with `new_multi[σ(k)] = multi[k]`.
    pub fn index_map(&self, el: &ActionElement) -> Vec<usize> {
        let dims = &self.site_dims;
        let n = dims.len();
        let total = self.total_dim();
        let mut map = vec![0usize; total];
        let mut multi = vec![0usize; n];
        for idx in 0..total {
            // Decompose (row-major, leftmost slowest).
            let mut rem = idx;
            for k in (0..n).rev() {
                multi[k] = rem % dims[k];
                rem /= dims[k];
            }
            let mut new_multi = vec![0usize; n];
            for k in 0..n {
                new_multi[el.site_perm.0[k]] = multi[k];
            }
            let mut out = 0usize;
            for k in 0..n {
                out = out * dims[k] + new_multi[k];
            }
            map[idx] = out;
        }
        map
    }
}

/// The Fig.-2 style grid action on the P-sector: `m` rows and `n+1`
/// columns of sites (column 0 is the physical input, columns 1…n the
/// extension copies). `S_m` permutes rows across all columns; `S_n`
/// permutes columns 1…n. Site order: column-major, `(c, r) ↦ c·m + r`.
pub fn p_grid_action(m: usize, n: usize, local_dim: usize) -> Result<TensorAction, SymmetryError> {
    let sites = vec![local_dim; m * (n + 1)];
    TensorAction::build(sites, &[m, n], |factors| {
        let sigma = &factors[0]; // rows
        let tau = &factors[1]; // copy columns
        let mut img = vec![0usize; m * (n + 1)];
        for c in 0..=n {
            for r in 0..m {
                let new_c = if c == 0 { 0 } else { tau.0[c - 1] + 1 };
                img[c * m + r] = new_c * m + sigma.0[r];
            }
        }
        Perm(img)
    })
}

/// Extendibility action only: `S_n` permuting `n` contiguous blocks of
/// `block_sites` sites each, leaving `fixed_sites` leading sites alone.
pub fn copies_action(
    fixed_sites: &[usize],
    block_dims: &[usize],
    n: usize,
) -> Result<TensorAction, SymmetryError> {
    let mut site_dims = fixed_sites.to_vec();
    for _ in 0..n {
        site_dims.extend_from_slice(block_dims);
    }
    let f = fixed_sites.len();
    let b = block_dims.len();
    TensorAction::build(site_dims, &[n], |factors| {
        let tau = &factors[0];
        let mut img: Vec<usize> = (0..f).collect();
        img.resize(f + n * b, 0);
        for c in 0..n {
            for k in 0..b {
                img[f + c * b + k] = f + tau.0[c] * b + k;
            }
        }
        Perm(img)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_action_characters() {
        // 3×3 grid of qubits under S₃×S₂: the action characters on the
        // classes are 2^{#cycles on the 9 positions}.
        let action = p_grid_action(3, 2, 2).unwrap();
        assert_eq!(action.group_order(), 12);
        assert_eq!(action.total_dim(), 512);
        let mut by_class = vec![0.0; action.table.classes.len()];
        for el in &action.elements {
            by_class[action.class_of(el)] = action.action_character(el);
        }
        // Classes in product order for S₃ ⊢ {(3),(2,1),(1³)} × S₂ ⊢ {(2),(1²)}:
        // [(e,e) last within each factor]: partitions() puts [n] first, so
        // classes are [(3),(2)], [(3),(1,1)], [(2,1),(2)], … with (3) = a
        // 3-cycle class and (1,1,1) = identity.
        let mut chars: Vec<(Vec<Partition>, f64)> = action
            .table
            .classes
            .iter()
            .zip(&by_class)
            .map(|(c, &v)| (c.cycle_types.clone(), v))
            .collect();
        chars.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
        let lookup = |ct: &str| -> f64 {
            chars
                .iter()
                .find(|(c, _)| format!("{c:?}") == ct)
                .map(|(_, v)| *v)
                .unwrap()
        };
        // identity
        assert_eq!(lookup("[[1, 1, 1], [1, 1]]"), 512.0);
        // column swap only
        assert_eq!(lookup("[[1, 1, 1], [2]]"), 64.0);
        // row transposition only
        assert_eq!(lookup("[[2, 1], [1, 1]]"), 64.0);
        // both
        assert_eq!(lookup("[[2, 1], [2]]"), 32.0);
        // 3-cycle on rows
        assert_eq!(lookup("[[3], [1, 1]]"), 8.0);
        // 3-cycle and column swap
        assert_eq!(lookup("[[3], [2]]"), 4.0);
    }
}
