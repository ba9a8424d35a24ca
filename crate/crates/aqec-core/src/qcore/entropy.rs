//! Von Neumann entropy and the product-marginal mutual-information bound.

use super::ops::partial_trace;
use super::op::{Op, PSD_TOL};
use super::QcoreError;

/// Von Neumann entropy in bits, with 0·log 0 = 0.
///
/// The input must be PSD within 1e-10 and have unit trace within 1e-10.
pub fn von_neumann_entropy(rho: &Op) -> Result<f64, QcoreError> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > PSD_TOL || tr.im.abs() > PSD_TOL {
        return Err(QcoreError::NotUnitTrace { trace: tr.re });
    }
    let ev = rho.eigenvalues_hermitian();
    if let Some(&min) = ev.first() {
        if min < -PSD_TOL {
            return Err(QcoreError::NotPsd { min_eigenvalue: min });
        }
    }
    let mut s = 0.0;
    for lambda in ev {
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s)
}

/// Outcome of the mutual-information bound check `I(AB:C) ≤ 2 log₂ d_A`.
#[derive(Debug, Clone, Copy)]
pub struct MutualInfoBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `I(AB:C) ≤ 2 log₂ d_A` for a tripartite state whose A-marginal
/// trace-out is a product state: `tr_A[ρ_ABC] = ρ_B ⊗ ρ_C` within 1e-8.
pub fn mutual_info_bound_check(
    rho_abc: &Op,
    a: &str,
    b: &str,
    c: &str,
) -> Result<MutualInfoBound, QcoreError> {
    let rho_bc = partial_trace(rho_abc, &[b, c])?;
    let rho_b = partial_trace(rho_abc, &[b])?;
    let rho_c = partial_trace(rho_abc, &[c])?;
    let product = super::ops::kron(&rho_b, &rho_c)?;
    let deviation = rho_bc.sub(&product)?.frobenius_norm();
    if deviation > 1e-8 {
        return Err(QcoreError::MarginalNotProduct { deviation });
    }

    let rho_ab = partial_trace(rho_abc, &[a, b])?;
    let s_ab = von_neumann_entropy(&rho_ab)?;
    let s_c = von_neumann_entropy(&rho_c)?;
    let s_abc = von_neumann_entropy(rho_abc)?;
    let lhs = s_ab + s_c - s_abc;
    let d_a = rho_abc
        .layout()
        .dim_of(a)
        .ok_or_else(|| QcoreError::UnknownLabel { label: a.into() })?;
    let rhs = 2.0 * (d_a as f64).log2();
    Ok(MutualInfoBound {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-8,
    })
}
