//! Dense complex operators over labeled subsystems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::SystemLayout;
use super::QcoreError;

pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance used when the hermitian flag is set.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// PSD tolerance used by density-operator validity checks.
pub const PSD_TOL: f64 = 1e-10;

/// A dense operator together with the layout of the space it acts on.
#[derive(Debug, Clone)]
pub struct Op {
    layout: SystemLayout,
    entries: CMatrix,
    hermitian: bool,
}

impl Op {
    pub fn new(layout: SystemLayout, entries: CMatrix) -> Result<Self, QcoreError> {
        let d = layout.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(QcoreError::ShapeMismatch {
                expected: d,
                got: entries.nrows(),
            });
        }
        Ok(Op {
            layout,
            entries,
            hermitian: false,
        })
    }

    /// Construct and mark hermitian; fails if `‖A − A†‖_max` exceeds the tolerance.
    pub fn new_hermitian(layout: SystemLayout, entries: CMatrix) -> Result<Self, QcoreError> {
        let op = Op::new(layout, entries)?;
        let dev = op.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(QcoreError::NotHermitian { deviation: dev });
        }
        Ok(Op {
            hermitian: true,
            ..op
        })
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        Op {
            layout,
            entries: CMatrix::zeros(d, d),
            hermitian: true,
        }
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        Op {
            layout,
            entries: CMatrix::identity(d, d),
            hermitian: true,
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let a = &self.entries;
        let mut max = 0.0f64;
        for i in 0..a.nrows() {
            for j in i..a.ncols() {
                let dev = (a[(i, j)] - a[(j, i)].conj()).norm();
                if dev > max {
                    max = dev;
                }
            }
        }
        max
    }

    /// Relabel systems in place, keeping order and dimensions.
    pub fn relabeled(&self, labels: &[&str]) -> Result<Op, QcoreError> {
        let systems: Vec<(String, usize)> = labels
            .iter()
            .zip(self.layout.systems())
            .map(|(l, (_, d))| (l.to_string(), *d))
            .collect();
        if systems.len() != self.layout.num_systems() {
            return Err(QcoreError::ShapeMismatch {
                expected: self.layout.num_systems(),
                got: systems.len(),
            });
        }
        Ok(Op {
            layout: SystemLayout::new(systems)?,
            entries: self.entries.clone(),
            hermitian: self.hermitian,
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn scale(&self, c: Complex64) -> Op {
        Op {
            layout: self.layout.clone(),
            entries: &self.entries * c,
            hermitian: self.hermitian && c.im == 0.0,
        }
    }

    pub fn add(&self, other: &Op) -> Result<Op, QcoreError> {
        if self.layout != other.layout {
            return Err(QcoreError::LayoutMismatch);
        }
        Ok(Op {
            layout: self.layout.clone(),
            entries: &self.entries + &other.entries,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Op) -> Result<Op, QcoreError> {
        Ok(self.add(&other.scale(Complex64::new(-1.0, 0.0)))?)
    }

    pub fn matmul(&self, other: &Op) -> Result<Op, QcoreError> {
        if self.layout != other.layout {
            return Err(QcoreError::LayoutMismatch);
        }
        Ok(Op {
            layout: self.layout.clone(),
            entries: &self.entries * &other.entries,
            hermitian: false,
        })
    }

    pub fn dagger(&self) -> Op {
        Op {
            layout: self.layout.clone(),
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// Full transpose (in the computational basis of the layout).
    pub fn transpose(&self) -> Op {
        Op {
            layout: self.layout.clone(),
            entries: self.entries.transpose(),
            hermitian: false,
        }
    }

    /// Hilbert–Schmidt inner product `tr[A† B]`.
    pub fn hs_inner(&self, other: &Op) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.entries.ncols() {
            for i in 0..self.entries.nrows() {
                acc += self.entries[(i, j)].conj() * other.entries[(i, j)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of a hermitian operator, ascending.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        let sym = nalgebra::linalg::SymmetricEigen::new(self.entries.clone());
        let mut ev: Vec<f64> = sym.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Eigendecomposition of a hermitian operator: (eigenvalues, eigenvectors as columns).
    pub fn eig_hermitian(&self) -> (Vec<f64>, CMatrix) {
        let sym = nalgebra::linalg::SymmetricEigen::new(self.entries.clone());
        let ev: Vec<f64> = sym.eigenvalues.iter().copied().collect();
        (ev, sym.eigenvectors)
    }

    /// Check density-operator validity: hermitian, PSD and unit trace within tolerance.
    pub fn check_density(&self) -> Result<(), QcoreError> {
        let herm = self.hermiticity_deviation();
        if herm > HERMITICITY_TOL.max(1e-11) {
            return Err(QcoreError::NotHermitian { deviation: herm });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > PSD_TOL || tr.im.abs() > PSD_TOL {
            return Err(QcoreError::NotUnitTrace { trace: tr.re });
        }
        let min = self
            .eigenvalues_hermitian()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(QcoreError::NotPsd { min_eigenvalue: min });
        }
        Ok(())
    }
}
