//! Ordered labeled subsystems and multi-index arithmetic.
//!
//! The convention throughout the crate is row-major over the ordered
//! layout: the leftmost system is the slowest index.

use serde::{Deserialize, Serialize};

use super::QcoreError;

/// An ordered list of labeled subsystems with their dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemLayout {
    systems: Vec<(String, usize)>,
}

impl SystemLayout {
    pub fn new<S: Into<String>>(systems: Vec<(S, usize)>) -> Result<Self, QcoreError> {
        let systems: Vec<(String, usize)> =
            systems.into_iter().map(|(s, d)| (s.into(), d)).collect();
        for (label, dim) in &systems {
            if *dim == 0 {
                return Err(QcoreError::InvalidDimension {
                    label: label.clone(),
                });
            }
        }
        for i in 0..systems.len() {
            for j in i + 1..systems.len() {
                if systems[i].0 == systems[j].0 {
                    return Err(QcoreError::DuplicateLabel {
                        label: systems[i].0.clone(),
                    });
                }
            }
        }
        Ok(SystemLayout { systems })
    }

    /// Layout with a single subsystem.
    pub fn single<S: Into<String>>(label: S, dim: usize) -> Self {
        SystemLayout {
            systems: vec![(label.into(), dim)],
        }
    }

    /// `count` qubits labeled `prefix0`, `prefix1`, ...
    pub fn qubits(prefix: &str, count: usize) -> Self {
        SystemLayout {
            systems: (0..count).map(|i| (format!("{prefix}{i}"), 2)).collect(),
        }
    }

    pub fn num_systems(&self) -> usize {
        self.systems.len()
    }

    pub fn systems(&self) -> &[(String, usize)] {
        &self.systems
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.systems.iter().map(|(l, _)| l.as_str())
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.systems
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, d)| *d)
    }

    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.systems.iter().position(|(l, _)| l == label)
    }

    /// Product of subsystem dimensions.
    pub fn total_dim(&self) -> usize {
        self.systems.iter().map(|(_, d)| d).product()
    }

    /// Concatenation of two layouts (labels must stay unique).
    pub fn concat(&self, other: &SystemLayout) -> Result<SystemLayout, QcoreError> {
        let mut systems = self.systems.clone();
        systems.extend(other.systems.iter().cloned());
        SystemLayout::new(systems)
    }

    /// Layout restricted to the given positions, in the given order.
    pub fn select_positions(&self, positions: &[usize]) -> SystemLayout {
        SystemLayout {
            systems: positions.iter().map(|&p| self.systems[p].clone()).collect(),
        }
    }

    /// Decompose a flat index into per-system indices (row-major, leftmost slowest).
    pub fn multi_index(&self, mut index: usize, out: &mut [usize]) {
        debug_assert_eq!(out.len(), self.systems.len());
        for (k, (_, d)) in self.systems.iter().enumerate().rev() {
            out[k] = index % d;
            index /= d;
        }
    }

    /// Recompose a flat index from per-system indices.
    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.systems.len());
        let mut idx = 0;
        for (k, (_, d)) in self.systems.iter().enumerate() {
            debug_assert!(multi[k] < *d);
            idx = idx * d + multi[k];
        }
        idx
    }

    /// Positions of the given labels; error on an unknown label.
    pub fn positions_of(&self, labels: &[&str]) -> Result<Vec<usize>, QcoreError> {
        labels
            .iter()
            .map(|l| {
                self.position_of(l).ok_or_else(|| QcoreError::UnknownLabel {
                    label: (*l).to_string(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_is_bijective() {
        let layout =
            SystemLayout::new(vec![("a", 2), ("b", 3), ("c", 2)]).unwrap();
        assert_eq!(layout.total_dim(), 12);
        let mut seen = vec![false; 12];
        let mut multi = [0usize; 3];
        for i in 0..12 {
            layout.multi_index(i, &mut multi);
            let back = layout.flat_index(&multi);
            assert_eq!(back, i);
            assert!(!seen[back]);
            seen[back] = true;
        }
    }

    #[test]
    fn leftmost_is_slowest() {
        let layout = SystemLayout::new(vec![("a", 2), ("b", 2)]).unwrap();
        // |10> should be index 2 (a=1 slow, b=0 fast).
        assert_eq!(layout.flat_index(&[1, 0]), 2);
        assert_eq!(layout.flat_index(&[0, 1]), 1);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(SystemLayout::new(vec![("a", 2), ("a", 2)]).is_err());
    }
}
