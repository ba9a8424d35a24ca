//! Character tables of symmetric groups and their direct products.
//!
//! S₂, S₃ and S₄ tables are built-in constants; larger symmetric groups
//! use the Murnaghan–Nakayama rule (cross-checked against the constants).

use std::collections::HashMap;

use super::SymmetryError;

/// A partition of n, parts descending.
pub type Partition = Vec<usize>;

/// All partitions of n in reverse-lexicographic order ([n] first).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Size of the conjugacy class with cycle type `mu` in S_n:
/// n!/z_mu with z_mu = Π i^{m_i} m_i!.
pub fn class_size(n: usize, mu: &Partition) -> u64 {
    let mut z = 1u64;
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for &part in mu {
        *counts.entry(part).or_insert(0) += 1;
    }
    for (&part, &count) in &counts {
        for _ in 0..count {
            z *= part as u64;
        }
        z *= factorial(count as usize);
    }
    factorial(n) / z
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

/// Murnaghan–Nakayama: χ_λ(μ) for λ, μ ⊢ n, in the beta-set formulation.
///
/// Removing a border strip of length k corresponds to replacing a beta
/// number b by b−k when b−k is not already present; the strip's sign is
/// (−1) to the number of beta numbers strictly between b−k and b.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> i64 {
    fn beta_set(lambda: &Partition) -> Vec<usize> {
        let r = lambda.len().max(1);
        let mut beta: Vec<usize> = (0..r)
            .map(|i| lambda.get(i).copied().unwrap_or(0) + (r - 1 - i))
            .collect();
        beta.sort_unstable_by(|a, b| b.cmp(a));
        beta
    }

    fn is_staircase(beta: &[usize]) -> bool {
        // Beta set of the empty partition: {r−1, …, 1, 0}.
        beta.iter().rev().enumerate().all(|(i, &b)| b == i)
    }

    fn rec(beta: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>) -> i64 {
        if mu.is_empty() {
            return if is_staircase(beta) { 1 } else { 0 };
        }
        let key = (beta.to_vec(), mu.to_vec());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let k = mu[0];
        let rest = &mu[1..];
        let mut total = 0i64;
        for (pos, &b) in beta.iter().enumerate() {
            if b < k || beta.contains(&(b - k)) {
                continue;
            }
            let target = b - k;
            let between = beta
                .iter()
                .filter(|&&x| x > target && x < b)
                .count();
            let sign = if between % 2 == 0 { 1 } else { -1 };
            let mut next: Vec<usize> = beta.to_vec();
            next[pos] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            total += sign * rec(&next, rest, memo);
        }
        memo.insert(key, total);
        total
    }

    let mut memo = HashMap::new();
    let mut mu_sorted = mu.clone();
    mu_sorted.sort_unstable_by(|a, b| b.cmp(a));
    rec(&beta_set(lambda), &mu_sorted, &mut memo)
}

/// Built-in table constants for S₂, S₃, S₄. Rows: irreps in `partitions`
/// order; columns: classes in `partitions` order, so the class of n-cycles
/// comes first and the identity class last.
fn builtin(n: usize) -> Option<Vec<Vec<i64>>> {
    match n {
        2 => Some(vec![
            vec![1, 1],   // (2): trivial
            vec![-1, 1],  // (1,1): sign
        ]),
        3 => Some(vec![
            vec![1, 1, 1],   // (3): trivial
            vec![-1, 0, 2],  // (2,1): standard
            vec![1, -1, 1],  // (1,1,1): sign
        ]),
        4 => Some(vec![
            vec![1, 1, 1, 1, 1],    // (4): trivial
            vec![-1, 0, -1, 1, 3],  // (3,1): standard
            vec![0, -1, 2, 0, 2],   // (2,2)
            vec![1, 0, -1, -1, 3],  // (2,1,1): standard ⊗ sign
            vec![-1, 1, 1, -1, 1],  // (1,1,1,1): sign
        ]),
        _ => None,
    }
}

/// One conjugacy class of a product of symmetric groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductClass {
    /// Cycle type per factor.
    pub cycle_types: Vec<Partition>,
    pub size: u64,
}

/// Character table of `S_{k1} × S_{k2} × …`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub factors: Vec<usize>,
    /// Irrep labels: one partition per factor.
    pub irreps: Vec<Vec<Partition>>,
    pub classes: Vec<ProductClass>,
    /// chars[irrep][class].
    pub chars: Vec<Vec<i64>>,
}

impl CharacterTable {
    /// Table of a single symmetric group S_n.
    pub fn symmetric(n: usize) -> Self {
        let parts = partitions(n);
        let chars: Vec<Vec<i64>> = if let Some(table) = builtin(n) {
            table
        } else {
            parts
                .iter()
                .map(|lam| parts.iter().map(|mu| mn_character(lam, mu)).collect())
                .collect()
        };
        let classes: Vec<ProductClass> = parts
            .iter()
            .map(|mu| ProductClass {
                cycle_types: vec![mu.clone()],
                size: class_size(n, mu),
            })
            .collect();
        CharacterTable {
            factors: vec![n],
            irreps: parts.into_iter().map(|p| vec![p]).collect(),
            classes,
            chars,
        }
    }

    /// Direct product of two tables (classes and characters multiply).
    pub fn product(&self, other: &CharacterTable) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(&other.factors);
        let mut irreps = Vec::new();
        let mut chars = Vec::new();
        for (i1, r1) in self.irreps.iter().enumerate() {
            for (i2, r2) in other.irreps.iter().enumerate() {
                let mut label = r1.clone();
                label.extend(r2.iter().cloned());
                irreps.push(label);
                let mut row = Vec::new();
                for c1 in 0..self.classes.len() {
                    for c2 in 0..other.classes.len() {
                        row.push(self.chars[i1][c1] * other.chars[i2][c2]);
                    }
                }
                chars.push(row);
            }
        }
        let mut classes = Vec::new();
        for c1 in &self.classes {
            for c2 in &other.classes {
                let mut ct = c1.cycle_types.clone();
                ct.extend(c2.cycle_types.iter().cloned());
                classes.push(ProductClass {
                    cycle_types: ct,
                    size: c1.size * c2.size,
                });
            }
        }
        CharacterTable {
            factors,
            irreps,
            classes,
            chars,
        }
    }

    /// Table for a list of factors.
    pub fn product_of(factors: &[usize]) -> Self {
        let mut t = CharacterTable::symmetric(factors[0]);
        for &f in &factors[1..] {
            t = t.product(&CharacterTable::symmetric(f));
        }
        t
    }

    pub fn group_order(&self) -> u64 {
        self.factors.iter().map(|&n| factorial(n)).product()
    }

    pub fn irrep_dim(&self, irrep: usize) -> usize {
        self.chars[irrep][self.identity_class()] as usize
    }

    fn identity_class(&self) -> usize {
        self.classes
            .iter()
            .position(|c| c.cycle_types.iter().all(|ct| ct.iter().all(|&p| p == 1)))
            .expect("identity class present")
    }

    /// Row orthogonality check under the class-weighted inner product.
    pub fn verify_orthogonality(&self) -> Result<(), SymmetryError> {
        let order = self.group_order() as f64;
        for i in 0..self.irreps.len() {
            for j in 0..self.irreps.len() {
                let mut acc = 0.0;
                for (k, cl) in self.classes.iter().enumerate() {
                    acc += cl.size as f64 * self.chars[i][k] as f64 * self.chars[j][k] as f64;
                }
                let expect = if i == j { order } else { 0.0 };
                if (acc - expect).abs() > 1e-6 {
                    return Err(SymmetryError::BadCharacterTable);
                }
            }
        }
        Ok(())
    }
}
