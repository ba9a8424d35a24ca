//! Permutations and finite permutation groups with breadth-first closure.

use std::collections::HashSet;

use super::SymmetryError;

/// A permutation of {0, …, degree−1} stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// From disjoint cycles over 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<usize> = (0..degree).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                img[cyc[w]] = cyc[(w + 1) % cyc.len()];
            }
        }
        Perm(img)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0usize; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            img[x] = i;
        }
        Perm(img)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycle type as a descending partition of the degree.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_type().len()
    }

    pub fn is_even(&self) -> bool {
        let n = self.0.len();
        (n - self.num_cycles()) % 2 == 0
    }

    /// Validity: image must be a bijection of {0, …, degree−1}.
    pub fn is_valid(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        for &x in &self.0 {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }
}

/// Order guard for full element enumeration.
pub const ORDER_GUARD: usize = 10_000_000;

/// A finite permutation group given by generators, with its elements
/// enumerated by breadth-first closure.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<Self, SymmetryError> {
        for g in &gens {
            if g.degree() != degree || !g.is_valid() {
                return Err(SymmetryError::InvalidGenerator);
            }
        }
        let elements = closure(degree, &gens, ORDER_GUARD)?;
        Ok(PermGroup {
            degree,
            generators: gens,
            elements,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    /// Full symmetric group on the given points (moving only those points).
    pub fn symmetric_on(degree: usize, points: &[usize]) -> Result<Self, SymmetryError> {
        let mut gens = Vec::new();
        for w in points.windows(2) {
            gens.push(Perm::from_cycles(degree, &[&[w[0], w[1]]]));
        }
        if gens.is_empty() {
            return Ok(Self::trivial(degree));
        }
        Self::from_generators(degree, gens)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.contains(p)
    }

    /// Product set {uv : u ∈ self, v ∈ other} (same degree).
    pub fn product_set(&self, other: &PermGroup) -> Vec<Perm> {
        let mut set = HashSet::new();
        for u in &self.elements {
            for v in &other.elements {
                set.insert(u.compose(v));
            }
        }
        let mut out: Vec<Perm> = set.into_iter().collect();
        out.sort();
        out
    }

    pub fn intersection_order(&self, other: &PermGroup) -> usize {
        let set: HashSet<&Perm> = self.elements.iter().collect();
        other.elements.iter().filter(|p| set.contains(p)).count()
    }
}

/// Breadth-first closure of a generating set.
pub fn closure(degree: usize, gens: &[Perm], guard: usize) -> Result<Vec<Perm>, SymmetryError> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let id = Perm::identity(degree);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if !seen.contains(&q) {
                if seen.len() >= guard {
                    return Err(SymmetryError::OrderGuardExceeded { guard });
                }
                seen.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
