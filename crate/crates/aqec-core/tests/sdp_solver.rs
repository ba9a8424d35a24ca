//! Interior-point solver checks: analytic cases, a brute-force dual
//! oracle on random strictly feasible instances, scaling invariance, the
//! complex-to-real embedding, and the SDPA round trip.

use aqec_core::sdp::*;
use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// max tr[ρ M], tr ρ = 1, ρ ⪰ 0 for a 2×2 hermitian M given by entries.
fn eigenvalue_problem(m_entries: &[(usize, usize, Complex64)]) -> SdpProblem {
    let mut p = SdpProblem::new(vec![2]);
    for &(i, j, v) in m_entries {
        p.objective.blocks[0].add(i, j, v).unwrap();
    }
    let mut trace_row = BlockSparse::zeros(&[2]);
    trace_row.blocks[0].add(0, 0, c(1.0, 0.0)).unwrap();
    trace_row.blocks[0].add(1, 1, c(1.0, 0.0)).unwrap();
    p.push_constraint(trace_row, 1.0);
    p
}

#[test]
fn max_eigenvalue_z() {
    let p = eigenvalue_problem(&[(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))]);
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_relative_eq!(sol.primal_value, 1.0, epsilon = 1e-7);
    assert!(sol.dual_value >= sol.primal_value - 2e-8);
}

#[test]
fn max_eigenvalue_x() {
    let p = eigenvalue_problem(&[(0, 1, c(1.0, 0.0))]);
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_relative_eq!(sol.primal_value, 1.0, epsilon = 1e-7);
}

#[test]
fn max_eigenvalue_y_complex() {
    // M = Y has a genuinely complex objective; eigenvalue still 1.
    let p = eigenvalue_problem(&[(0, 1, c(0.0, -1.0))]);
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_relative_eq!(sol.primal_value, 1.0, epsilon = 1e-7);
    // Argmax state is (I + Y)/2; check the primal block.
    let x = &sol.primal[0];
    assert_relative_eq!(x[(0, 0)].re, 0.5, epsilon = 1e-5);
    assert_relative_eq!(x[(0, 1)].im, -0.5, epsilon = 1e-5);
}

fn random_herm(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let mut g = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    (&g + g.adjoint()) * c(0.5, 0.0)
}

fn herm_to_sparse(m: &DMatrix<Complex64>) -> SparseHerm {
    let mut s = SparseHerm::new(m.nrows());
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let v = if i == j { c(m[(i, j)].re, 0.0) } else { m[(i, j)] };
            if v.norm() > 0.0 {
                s.add(i, j, v).unwrap();
            }
        }
    }
    s
}

/// Brute-force oracle: minimize b·y over the dual feasible set
/// {y : Σ y_i A_i − C ⪰ 0}, by grid refinement to localize followed by a
/// damped-Newton descent on the dual log-barrier (independent of the
/// primal-dual solver path).
fn dual_descent_oracle(
    c_mat: &DMatrix<Complex64>,
    a_mats: &[DMatrix<Complex64>],
    b: &[f64],
    center: &[f64],
) -> f64 {
    let m = b.len();
    let z_of = |y: &[f64]| -> DMatrix<Complex64> {
        let mut z = -c_mat.clone();
        for (yi, ai) in y.iter().zip(a_mats) {
            z += ai * c(*yi, 0.0);
        }
        z
    };
    let min_eig = |z: &DMatrix<Complex64>| -> f64 {
        nalgebra::linalg::SymmetricEigen::new(z.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    let objective = |y: &[f64]| -> f64 { y.iter().zip(b).map(|(yi, bi)| yi * bi).sum() };

    // Coarse grid localization from the strictly feasible center.
    let mut best_y = center.to_vec();
    assert!(min_eig(&z_of(&best_y)) > 0.0, "oracle needs a strictly feasible center");
    let mut best = objective(&best_y);
    let steps = 2i64;
    let mut radius = 2.0;
    for _zoom in 0..6 {
        let mut idx = vec![-steps; m];
        loop {
            let y: Vec<f64> = (0..m)
                .map(|k| best_y[k] + idx[k] as f64 * radius / steps as f64)
                .collect();
            if min_eig(&z_of(&y)) > 1e-10 && objective(&y) < best {
                best = objective(&y);
                best_y = y;
            }
            let mut k = 0;
            loop {
                if k == m {
                    break;
                }
                idx[k] += 1;
                if idx[k] <= steps {
                    break;
                }
                idx[k] = -steps;
                k += 1;
            }
            if k == m {
                break;
            }
        }
        radius *= 0.5;
    }

    // Barrier descent: min b·y − μ log det Z(y), μ ↓ 0. Feasibility and
    // log-determinants via hermitian eigendecomposition (complex Cholesky
    // does not certify definiteness).
    let eig_of = |z: &DMatrix<Complex64>| -> Vec<f64> {
        nalgebra::linalg::SymmetricEigen::new(z.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    let barrier = |y: &[f64], mu: f64| -> Option<f64> {
        let evs = eig_of(&z_of(y));
        if evs.iter().any(|&v| v <= 0.0) {
            return None;
        }
        Some(objective(y) - mu * evs.iter().map(|v| v.ln()).sum::<f64>())
    };
    let mut y = best_y;
    let mut mu = 1.0;
    while mu > 1e-13 {
        for _newton in 0..60 {
            let z = z_of(&y);
            if min_eig(&z) <= 0.0 {
                break;
            }
            let eig = nalgebra::linalg::SymmetricEigen::new(z);
            let inv_vals: Vec<f64> = eig.eigenvalues.iter().map(|v| 1.0 / v).collect();
            let mut zinv = DMatrix::<Complex64>::zeros(c_mat.nrows(), c_mat.nrows());
            for (k, &iv) in inv_vals.iter().enumerate() {
                let col = eig.eigenvectors.column(k);
                for r in 0..c_mat.nrows() {
                    for s in 0..c_mat.nrows() {
                        zinv[(r, s)] += col[r] * col[s].conj() * c(iv, 0.0);
                    }
                }
            }
            let grad: Vec<f64> = (0..m)
                .map(|i| b[i] - mu * (&zinv * &a_mats[i]).trace().re)
                .collect();
            let mut hess = DMatrix::<f64>::zeros(m, m);
            let za: Vec<DMatrix<Complex64>> = a_mats.iter().map(|a| &zinv * a).collect();
            for i in 0..m {
                for j in i..m {
                    let v = mu * (&za[i] * &za[j]).trace().re;
                    hess[(i, j)] = v;
                    hess[(j, i)] = v;
                }
            }
            let g = DMatrix::<f64>::from_column_slice(m, 1, &grad);
            let Some(hchol) = nalgebra::linalg::Cholesky::new(hess) else { break };
            let dy = -hchol.solve(&g);
            let decrement: f64 = -(0..m).map(|i| grad[i] * dy[(i, 0)]).sum::<f64>();
            if decrement.abs() < 1e-16 {
                break;
            }
            let f0 = match barrier(&y, mu) {
                Some(v) => v,
                None => break,
            };
            let mut t = 1.0;
            let mut stepped = false;
            for _ in 0..60 {
                let cand: Vec<f64> = (0..m).map(|i| y[i] + t * dy[(i, 0)]).collect();
                if let Some(fc) = barrier(&cand, mu) {
                    if fc <= f0 - 0.25 * t * decrement.abs() {
                        y = cand;
                        stepped = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !stepped {
                break;
            }
        }
        mu *= 0.25;
    }
    objective(&y)
}

#[test]
fn random_strictly_feasible_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..3 {
        let d = 6;
        let m = 5;
        // Strictly feasible construction: A_1 = I with b_1 = 1 bounds the
        // feasible set; C shifted so y = large·e_1 is strictly dual feasible.
        let mut a_mats: Vec<DMatrix<Complex64>> = vec![DMatrix::identity(d, d)];
        for _ in 1..m {
            a_mats.push(random_herm(d, &mut rng));
        }
        let c_mat = random_herm(d, &mut rng);
        let b: Vec<f64> = std::iter::once(1.0)
            .chain((1..m).map(|_| rng.gen::<f64>() - 0.5))
            .collect();

        let mut p = SdpProblem::new(vec![d]);
        p.objective.blocks[0] = herm_to_sparse(&c_mat);
        for (ai, bi) in a_mats.iter().zip(&b) {
            let mut row = BlockSparse::zeros(&[d]);
            row.blocks[0] = herm_to_sparse(ai);
            p.push_constraint(row, *bi);
        }
        let sol = solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal, "trial {trial}");

        // Center the oracle on a feasible dual point: y = (λmax-ish, 0…).
        let shift = {
            let eig = nalgebra::linalg::SymmetricEigen::new(c_mat.clone());
            eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max) + 1.0
        };
        let mut center = vec![0.0; m];
        center[0] = shift;
        let oracle = dual_descent_oracle(&c_mat, &a_mats, &b, &center);
        assert!(
            (sol.primal_value - oracle).abs() < 1e-5,
            "trial {trial}: ipm {} vs oracle {}",
            sol.primal_value,
            oracle
        );
    }
}

#[test]
fn scaling_invariance() {
    // Well-separated objective spectrum keeps the argmax unique and
    // non-degenerate so the primal block is determined to solver accuracy.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = 4;
    let mut c_mat = random_herm(d, &mut rng) * c(0.05, 0.0);
    for i in 0..d {
        c_mat[(i, i)] += c(1.0 + 2.0 * i as f64, 0.0);
    }
    let mut p = SdpProblem::new(vec![d]);
    p.objective.blocks[0] = herm_to_sparse(&c_mat);
    let mut trace_row = BlockSparse::zeros(&[d]);
    for i in 0..d {
        trace_row.blocks[0].add(i, i, c(1.0, 0.0)).unwrap();
    }
    p.push_constraint(trace_row.clone(), 1.0);

    let sol1 = solve(&p, 1e-9).unwrap();
    let mut scaled = p.clone();
    scaled.objective.scale(3.5);
    let sol2 = solve(&scaled, 1e-9).unwrap();
    assert_relative_eq!(sol2.primal_value, 3.5 * sol1.primal_value, epsilon = 3.5 * 1e-6);
    // Argmax block unchanged (Frobenius).
    let diff = (&sol2.primal[0] - &sol1.primal[0])
        .map(|v| v.norm_sqr())
        .sum()
        .sqrt();
    assert!(diff < 1e-6, "argmax drifted by {diff}");
}

#[test]
fn dedup_removes_redundant_rows_and_detects_inconsistency() {
    let d = 3;
    let mut p = SdpProblem::new(vec![d]);
    p.objective.blocks[0].add(0, 0, c(1.0, 0.0)).unwrap();
    let mut r1 = BlockSparse::zeros(&[d]);
    for i in 0..d {
        r1.blocks[0].add(i, i, c(1.0, 0.0)).unwrap();
    }
    p.push_constraint(r1.clone(), 1.0);
    // Duplicate scaled row, consistent rhs.
    let mut r2 = r1.clone();
    r2.scale(2.0);
    p.push_constraint(r2, 2.0);
    let mut q = p.clone();
    let kept = q.deduplicate().unwrap();
    assert_eq!(kept.len(), 1);

    // Inconsistent duplicate must be flagged structurally infeasible.
    let mut r3 = r1.clone();
    r3.scale(2.0);
    p.push_constraint(r3, 3.0);
    assert!(matches!(p.deduplicate(), Err(SdpError::Infeasible { .. })));
}

#[test]
fn complex_block_exports_as_doubled_real_block() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let d = 3;
    let c_mat = random_herm(d, &mut rng);
    let mut p = SdpProblem::new(vec![d]);
    p.objective.blocks[0] = herm_to_sparse(&c_mat);
    let mut trace_row = BlockSparse::zeros(&[d]);
    for i in 0..d {
        trace_row.blocks[0].add(i, i, c(1.0, 0.0)).unwrap();
    }
    p.push_constraint(trace_row, 1.0);

    let dir = std::env::temp_dir().join("aqec_sdpa_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("complex_block.dat-s");
    export_sdpa(&p, &path).unwrap();
    let q = import_sdpa(&path).unwrap();
    assert_eq!(q.block_dims, vec![2 * d]);

    let sol_p = solve(&p, 1e-8).unwrap();
    let sol_q = solve(&q, 1e-8).unwrap();
    assert_relative_eq!(sol_p.primal_value, sol_q.primal_value, epsilon = 1e-6);
}

#[test]
fn sdpa_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let d = 3;
    let c_mat = random_herm(d, &mut rng);
    let mut p = SdpProblem::new(vec![d]);
    p.objective.blocks[0] = herm_to_sparse(&c_mat);
    let mut trace_row = BlockSparse::zeros(&[d]);
    for i in 0..d {
        trace_row.blocks[0].add(i, i, c(1.0, 0.0)).unwrap();
    }
    p.push_constraint(trace_row, 1.0);

    let dir = std::env::temp_dir().join("aqec_sdpa_test");
    std::fs::create_dir_all(&dir).unwrap();
    let f1 = dir.join("round1.dat-s");
    let f2 = dir.join("round2.dat-s");
    export_sdpa(&p, &f1).unwrap();
    let q1 = import_sdpa(&f1).unwrap();
    export_sdpa(&q1, &f2).unwrap();
    let q2 = import_sdpa(&f2).unwrap();
    assert_eq!(q1.canonical_hash(), q2.canonical_hash());
    // Files byte-identical apart from nothing: both canonical.
    let s1 = std::fs::read_to_string(&f1).unwrap();
    let s2 = std::fs::read_to_string(&f2).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn solution_file_round_trip() {
    let p = eigenvalue_problem(&[(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))]);
    let sol = solve(&p, 1e-8).unwrap();
    let dir = std::env::temp_dir().join("aqec_sdpa_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toy.result");
    export_solution(&sol, &path).unwrap();
    let back = import_sdpa_solution(&path, &p).unwrap();
    assert_relative_eq!(back.primal_value, sol.primal_value, epsilon = 1e-9);
}

#[test]
fn malformed_file_reports_line() {
    let dir = std::env::temp_dir().join("aqec_sdpa_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.dat-s");
    std::fs::write(&path, "\"comment\n2\n1\n2\n1.0 2.0\n0 1 1 oops 3.0\n").unwrap();
    match import_sdpa(&path) {
        Err(SdpError::Parse { line, .. }) => assert_eq!(line, 6),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn two_block_problem() {
    // Two blocks sharing a trace constraint: optimum picks the larger eigenvalue.
    let mut p = SdpProblem::new(vec![2, 2]);
    p.objective.blocks[0].add(0, 0, c(1.0, 0.0)).unwrap();
    p.objective.blocks[1].add(0, 0, c(2.0, 0.0)).unwrap();
    let mut row = BlockSparse::zeros(&[2, 2]);
    for b in 0..2 {
        for i in 0..2 {
            row.blocks[b].add(i, i, c(1.0, 0.0)).unwrap();
        }
    }
    p.push_constraint(row, 1.0);
    let sol = solve(&p, 1e-8).unwrap();
    assert_relative_eq!(sol.primal_value, 2.0, epsilon = 1e-6);
}
