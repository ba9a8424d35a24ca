//! Tensor-operation checks against independent oracles.

use aqec_core::qcore::*;
use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qubit_op(label: &str, m: CMatrix) -> Op {
    Op::new(SystemLayout::single(label, 2), m).unwrap()
}

/// Random density operator on the given layout (seeded).
fn random_density(layout: SystemLayout, rng: &mut ChaCha8Rng) -> Op {
    let d = layout.total_dim();
    let mut g = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    Op::new_hermitian(layout, rho / tr).unwrap()
}

/// Random unitary via QR of a Gaussian matrix (seeded).
fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut g = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let qr = g.qr();
    qr.q()
}

#[test]
fn kron_identity_and_spectrum() {
    let i2 = Op::identity(SystemLayout::single("a", 2));
    let i2b = Op::identity(SystemLayout::single("b", 2));
    let i4 = kron(&i2, &i2b).unwrap();
    assert_eq!(i4.dim(), 4);
    assert_relative_eq!(i4.sub(&Op::identity(i4.layout().clone())).unwrap().frobenius_norm(), 0.0);

    let z1 = qubit_op("a", pauli::matrix_z());
    let z2 = qubit_op("b", pauli::matrix_z());
    let zz = kron(&z1, &z2).unwrap();
    let ev = zz.eigenvalues_hermitian();
    assert_eq!(ev.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count(), 2);
    assert_eq!(ev.iter().filter(|&&v| (v + 1.0).abs() < 1e-12).count(), 2);
}

#[test]
fn kron_basis_case() {
    let mut p0 = CMatrix::zeros(2, 2);
    p0[(0, 0)] = c(1.0, 0.0);
    let mut p1 = CMatrix::zeros(2, 2);
    p1[(1, 1)] = c(1.0, 0.0);
    let out = kron(&qubit_op("a", p0), &qubit_op("b", p1)).unwrap();
    // |01><01| = matrix unit at flat index 1 (a slow, b fast).
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == 1 && j == 1 { 1.0 } else { 0.0 };
            assert_relative_eq!(out.entries()[(i, j)].re, expect, epsilon = 1e-15);
        }
    }
}

#[test]
fn partial_trace_product_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rho = random_density(SystemLayout::single("A", 3), &mut rng);
    let sigma = random_density(SystemLayout::single("B", 2), &mut rng);
    let sigma_scaled = sigma.scale(c(0.7, 0.0));
    let joint = kron(&rho, &sigma_scaled).unwrap();
    let back = partial_trace(&joint, &["A"]).unwrap();
    let expect = rho.scale(c(0.7, 0.0));
    assert!(back.sub(&expect).unwrap().frobenius_norm() < 1e-12);
}

#[test]
fn partial_trace_max_entangled_marginal() {
    let phi = max_entangled(2).unwrap();
    let marg = partial_trace(&phi, &["ref"]).unwrap();
    let half_i = Op::identity(marg.layout().clone()).scale(c(0.5, 0.0));
    assert!(marg.sub(&half_i).unwrap().frobenius_norm() < 1e-14);
}

/// Oracle: direct index contraction for tr_{BC} on a random 3-system state.
#[test]
fn partial_trace_matches_direct_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let layout = SystemLayout::new(vec![("A", 2), ("B", 3), ("C", 2)]).unwrap();
    let rho = random_density(layout.clone(), &mut rng);

    // Direct contraction oracle: out[a,a'] = sum_{b,c} rho[(a,b,c),(a',b,c)].
    let mut oracle = CMatrix::zeros(2, 2);
    for a in 0..2 {
        for ap in 0..2 {
            let mut acc = c(0.0, 0.0);
            for b in 0..3 {
                for cc in 0..2 {
                    let i = layout.flat_index(&[a, b, cc]);
                    let j = layout.flat_index(&[ap, b, cc]);
                    acc += rho.entries()[(i, j)];
                }
            }
            oracle[(a, ap)] = acc;
        }
    }

    let nested = partial_trace(&partial_trace(&rho, &["A", "B"]).unwrap(), &["A"]).unwrap();
    let direct = partial_trace(&rho, &["A"]).unwrap();
    assert!((direct.entries() - &oracle).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-13);
    assert!(direct.sub(&nested).unwrap().frobenius_norm() < 1e-13);
    assert_relative_eq!(direct.trace().re, 1.0, epsilon = 1e-12);
}

#[test]
fn partial_trace_unknown_label_errors() {
    let phi = max_entangled(2).unwrap();
    assert!(partial_trace(&phi, &["nope"]).is_err());
}

#[test]
fn partial_transpose_product_factorizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rho = random_density(SystemLayout::single("A", 2), &mut rng);
    let sigma = random_density(SystemLayout::single("B", 3), &mut rng);
    let joint = kron(&rho, &sigma).unwrap();
    let pt = partial_transpose(&joint, &["B"]).unwrap();
    let expect = kron(&rho, &sigma.transpose()).unwrap();
    assert!(pt.sub(&expect).unwrap().frobenius_norm() < 1e-13);
}

/// Oracle: eigendecomposition. The partial transpose of Φ is the swap
/// operator divided by d, with minimum eigenvalue −1/2 for qubits.
#[test]
fn partial_transpose_max_entangled_spectrum() {
    let phi = max_entangled(2).unwrap();
    let pt = partial_transpose(&phi, &["out"]).unwrap();
    let ev = pt.eigenvalues_hermitian();
    assert_relative_eq!(ev[0], -0.5, epsilon = 1e-12);
    assert_relative_eq!(*ev.last().unwrap(), 0.5, epsilon = 1e-12);
    // Involution.
    let back = partial_transpose(&pt, &["out"]).unwrap();
    assert!(back.sub(&phi).unwrap().frobenius_norm() < 1e-14);
}

#[test]
fn permute_systems_swap_and_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rho = random_density(SystemLayout::single("A", 2), &mut rng);
    let sigma = random_density(SystemLayout::single("B", 2), &mut rng);
    let joint = kron(&rho, &sigma).unwrap();
    let swapped = permute_systems(&joint, &["B", "A"]).unwrap();
    let expect = kron(&sigma, &rho).unwrap();
    assert!(swapped.entries().clone() .iter().zip(expect.entries().iter()).all(|(a, b)| (a - b).norm() < 1e-13));

    // Identity permutation.
    let same = permute_systems(&joint, &["A", "B"]).unwrap();
    assert!(same.sub(&joint).unwrap().frobenius_norm() < 1e-15);

    // Composition on a random 3-qubit operator.
    let layout = SystemLayout::new(vec![("x", 2), ("y", 2), ("z", 2)]).unwrap();
    let op = random_density(layout, &mut rng);
    let p1 = permute_systems(&op, &["y", "z", "x"]).unwrap();
    let p2 = permute_systems(&p1, &["z", "x", "y"]).unwrap();
    // Applying (x,y,z)->(y,z,x) twice equals selecting ["z","x","y"] from the original.
    let direct = permute_systems(&op, &["z", "x", "y"]).unwrap();
    // p2 has layout in order z,x,y of p1's labels; compare entries against direct.
    assert!(p2.sub(&direct).unwrap().frobenius_norm() < 1e-13);

    // Spectrum preserved.
    let ev_a: Vec<f64> = op.eigenvalues_hermitian();
    let ev_b: Vec<f64> = p1.eigenvalues_hermitian();
    for (a, b) in ev_a.iter().zip(ev_b.iter()) {
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }
}

#[test]
fn max_entangled_cases() {
    let phi = max_entangled(2).unwrap();
    // Entries 1/2 at the four corners of the |00>,|11> block.
    for (i, j) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
        assert_relative_eq!(phi.entries()[(i, j)].re, 0.5, epsilon = 1e-15);
    }
    assert_relative_eq!(phi.trace().re, 1.0, epsilon = 1e-15);
    // Purity for d=3.
    let phi3 = max_entangled(3).unwrap();
    let sq = phi3.matmul(&phi3).unwrap();
    assert_relative_eq!(sq.trace().re, 1.0, epsilon = 1e-12);
    assert!(max_entangled(1).is_err());
}

#[test]
fn entropy_values() {
    let half_i = Op::identity(SystemLayout::single("A", 2)).scale(c(0.5, 0.0));
    assert_relative_eq!(von_neumann_entropy(&half_i).unwrap(), 1.0, epsilon = 1e-12);

    let mut pure = CMatrix::zeros(2, 2);
    pure[(0, 0)] = c(1.0, 0.0);
    let pure = Op::new_hermitian(SystemLayout::single("A", 2), pure).unwrap();
    assert_relative_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-12);

    let mut diag = CMatrix::zeros(2, 2);
    diag[(0, 0)] = c(0.75, 0.0);
    diag[(1, 1)] = c(0.25, 0.0);
    let diag = Op::new_hermitian(SystemLayout::single("A", 2), diag).unwrap();
    // Direct formula: -(3/4)log2(3/4) - (1/4)log2(1/4).
    let expect = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
    assert_relative_eq!(von_neumann_entropy(&diag).unwrap(), expect, epsilon = 1e-12);
    assert!((von_neumann_entropy(&diag).unwrap() - 0.811278).abs() < 1e-6);
}

#[test]
fn entropy_rejects_non_psd() {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = c(1.5, 0.0);
    m[(1, 1)] = c(-0.5, 0.0);
    let op = Op::new_hermitian(SystemLayout::single("A", 2), m).unwrap();
    assert!(von_neumann_entropy(&op).is_err());
}

#[test]
fn entropy_unitary_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let rho = random_density(SystemLayout::single("A", 4), &mut rng);
        let u = random_unitary(4, &mut rng);
        let rotated = conjugate(&rho, &u).unwrap();
        assert_relative_eq!(
            von_neumann_entropy(&rho).unwrap(),
            von_neumann_entropy(&rotated).unwrap(),
            epsilon = 1e-9
        );
    }
}

#[test]
fn mutual_info_bound_product_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let a = random_density(SystemLayout::single("A", 2), &mut rng);
    let b = random_density(SystemLayout::single("B", 2), &mut rng);
    let cc = random_density(SystemLayout::single("C", 2), &mut rng);
    let abc = kron(&kron(&a, &b).unwrap(), &cc).unwrap();
    let out = mutual_info_bound_check(&abc, "A", "B", "C").unwrap();
    assert!(out.lhs.abs() < 1e-9);
    assert!(out.holds);
}

#[test]
fn mutual_info_bound_max_entangled_ac() {
    // |psi>_AC maximally entangled, tensored with rho_B; I(AB:C) = 2 = 2 log2(2).
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let phi_ac = max_entangled(2).unwrap().relabeled(&["A", "C"]).unwrap();
    let rho_b = random_density(SystemLayout::single("B", 2), &mut rng);
    let joint = kron(&phi_ac, &rho_b).unwrap();
    let abc = permute_systems(&joint, &["A", "B", "C"]).unwrap();
    let out = mutual_info_bound_check(&abc, "A", "B", "C").unwrap();
    assert_relative_eq!(out.lhs, 2.0, epsilon = 1e-9);
    assert_relative_eq!(out.rhs, 2.0, epsilon = 1e-12);
    assert!(out.holds);
}

/// Classical mixtures correlating A with C only through A satisfy the
/// marginal precondition; the bound must hold for all of them.
#[test]
fn mutual_info_bound_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..50 {
        // rho = sum_k p_k |k><k|_A ⊗ rho_B ⊗ sigma_{C|k} with fixed rho_B.
        let rho_b = random_density(SystemLayout::single("B", 2), &mut rng);
        let sig0 = random_density(SystemLayout::single("C", 2), &mut rng);
        let sig1 = random_density(SystemLayout::single("C", 2), &mut rng);
        let p: f64 = rng.gen();
        // tr_A gives rho_B ⊗ (p sig0 + (1-p) sig1): a product state.
        let sig_mix = sig0.scale(c(p, 0.0)).add(&sig1.scale(c(1.0 - p, 0.0))).unwrap();
        let mut e0 = CMatrix::zeros(2, 2);
        e0[(0, 0)] = c(1.0, 0.0);
        let mut e1 = CMatrix::zeros(2, 2);
        e1[(1, 1)] = c(1.0, 0.0);
        let k0 = Op::new_hermitian(SystemLayout::single("A", 2), e0).unwrap();
        let k1 = Op::new_hermitian(SystemLayout::single("A", 2), e1).unwrap();
        // Correlate A with C only: both terms share the same C mixture so the
        // precondition holds exactly; A still carries classical randomness.
        let term0 = kron(&kron(&k0.scale(c(p, 0.0)), &rho_b).unwrap(), &sig_mix).unwrap();
        let term1 = kron(&kron(&k1.scale(c(1.0 - p, 0.0)), &rho_b).unwrap(), &sig_mix).unwrap();
        let abc = term0.add(&term1).unwrap();
        let out = mutual_info_bound_check(&abc, "A", "B", "C").unwrap();
        assert!(out.holds, "bound violated: {} > {}", out.lhs, out.rhs);
    }
}

/// Partial trace and partial transpose commute on disjoint subsets.
#[test]
fn ptrace_ptranspose_commute_disjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let layout = SystemLayout::new(vec![("A", 2), ("B", 2), ("C", 2)]).unwrap();
    for _ in 0..10 {
        let rho = random_density(layout.clone(), &mut rng);
        let a = partial_trace(&partial_transpose(&rho, &["B"]).unwrap(), &["B", "C"]).unwrap();
        let b = partial_transpose(&partial_trace(&rho, &["B", "C"]).unwrap(), &["B"]).unwrap();
        assert!(a.sub(&b).unwrap().max_abs() < 1e-12);
    }
}
