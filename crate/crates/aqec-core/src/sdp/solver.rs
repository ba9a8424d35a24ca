//! Dense primal-dual path-following interior-point solver (HKM scaling
//! direction, Mehrotra predictor-corrector, dense Cholesky of the Schur
//! complement). Complex hermitian blocks are embedded as real symmetric
//! [[Re, −Im], [Im, Re]] blocks with coefficients halved.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::problem::{BlockSparse, SdpProblem, SparseHerm};
use super::SdpError;

/// Solver status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Inaccurate,
    Infeasible,
    Unbounded,
}

/// Solution of a block SDP: complex primal blocks, dual vector, values.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub primal: Vec<DMatrix<Complex64>>,
    pub dual: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
}

/// Hard guard on per-block dimension for the dense solver.
pub const MAX_BLOCK_DIM: usize = 600;
/// Iteration cap; hitting it yields `Inaccurate` with the best iterate.
const MAX_ITERS: usize = 120;

type RMatrix = DMatrix<f64>;

/// One constraint row in embedded real coordinates: per touched block,
/// a full-coordinate entry list (both triangles explicit).
#[derive(Debug, Clone)]
struct EmbRow {
    blocks: Vec<(usize, Vec<(usize, usize, f64)>)>,
}

fn embed_entries(h: &SparseHerm) -> Vec<(usize, usize, f64)> {
    let d = h.dim;
    let mut out = Vec::with_capacity(h.upper_entries().len() * 4);
    for &(i, j, v) in h.upper_entries() {
        let re = 0.5 * v.re;
        let im = 0.5 * v.im;
        if i == j {
            if re != 0.0 {
                out.push((i, i, re));
                out.push((i + d, i + d, re));
            }
        } else {
            if re != 0.0 {
                out.push((i, j, re));
                out.push((j, i, re));
                out.push((i + d, j + d, re));
                out.push((j + d, i + d, re));
            }
            if im != 0.0 {
                // [[Re, −Im], [Im, Re]] with Im(A) antisymmetric.
                out.push((i, j + d, -im));
                out.push((j, i + d, im));
                out.push((i + d, j, im));
                out.push((j + d, i, -im));
            }
        }
    }
    out
}

fn embed_row(row: &BlockSparse) -> EmbRow {
    let mut blocks = Vec::new();
    for (bi, blk) in row.blocks.iter().enumerate() {
        if !blk.is_empty() {
            let entries = embed_entries(blk);
            if !entries.is_empty() {
                blocks.push((bi, entries));
            }
        }
    }
    EmbRow { blocks }
}

fn sym_part(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

/// Maximum step α so that S + αD stays PSD (S ≻ 0 assumed).
fn step_to_boundary(s: &RMatrix, d: &RMatrix) -> f64 {
    let chol = match nalgebra::linalg::Cholesky::new(s.clone()) {
        Some(c) => c,
        None => return 0.0,
    };
    let l = chol.l();
    // W = L⁻¹ D L⁻ᵀ.
    let y = l.solve_lower_triangular(d).expect("L invertible");
    let w = l
        .solve_lower_triangular(&y.transpose())
        .expect("L invertible");
    let w = sym_part(&w);
    let eig = nalgebra::linalg::SymmetricEigen::new(w);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min >= -1e-14 {
        1e16
    } else {
        -1.0 / min
    }
}

/// Blocked parallel Cholesky in place on a row-major square buffer.
/// Returns false if a pivot drops below `eps`.
fn cholesky_in_place(a: &mut [f64], n: usize, eps: f64) -> bool {
    const NB: usize = 64;
    let mut k0 = 0;
    while k0 < n {
        let kb = NB.min(n - k0);
        // Factor diagonal panel (unblocked).
        for k in k0..k0 + kb {
            let mut d = a[k * n + k];
            for p in k0..k {
                d -= a[k * n + p] * a[k * n + p];
            }
            if d < eps {
                return false;
            }
            let d = d.sqrt();
            a[k * n + k] = d;
            for i in k + 1..n {
                let mut v = a[i * n + k];
                for p in k0..k {
                    v -= a[i * n + p] * a[k * n + p];
                }
                a[i * n + k] = v / d;
            }
        }
        // Trailing update: A[i,j] -= Σ_{p in panel} L[i,p] L[j,p], j > panel.
        let k1 = k0 + kb;
        if k1 < n {
            let panel: Vec<f64> = a[..].to_vec(); // snapshot for disjoint writes
            let rows: Vec<usize> = (k1..n).collect();
            let updates: Vec<(usize, Vec<f64>)> = rows
                .par_iter()
                .map(|&i| {
                    let mut row = vec![0.0f64; i + 1 - k1];
                    for (jj, j) in (k1..=i).enumerate() {
                        let mut acc = 0.0;
                        for p in k0..k1 {
                            acc += panel[i * n + p] * panel[j * n + p];
                        }
                        row[jj] = acc;
                    }
                    (i, row)
                })
                .collect();
            for (i, row) in updates {
                for (jj, j) in (k1..=i).enumerate() {
                    a[i * n + j] -= row[jj];
                }
            }
        }
        k0 += kb;
    }
    true
}

fn chol_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in 0..n {
        let mut v = x[i];
        for j in 0..i {
            v -= l[i * n + j] * x[j];
        }
        x[i] = v / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = x[i];
        for j in i + 1..n {
            v -= l[j * n + i] * x[j];
        }
        x[i] = v / l[i * n + i];
    }
    x
}

struct Workspace {
    dims: Vec<usize>,
    c: Vec<RMatrix>,
    rows: Vec<EmbRow>,
    b: Vec<f64>,
}

impl Workspace {
    fn dot_state(&self, row: &EmbRow, state: &[RMatrix]) -> f64 {
        let mut acc = 0.0;
        for (bi, entries) in &row.blocks {
            let m = &state[*bi];
            for &(r, c, v) in entries {
                acc += v * m[(r, c)];
            }
        }
        acc
    }

    fn add_scaled(&self, row: &EmbRow, scale: f64, out: &mut [RMatrix]) {
        for (bi, entries) in &row.blocks {
            let m = &mut out[*bi];
            for &(r, c, v) in entries {
                m[(r, c)] += scale * v;
            }
        }
    }
}

/// Solve a block SDP (maximization) to relative tolerance `tol`.
///
/// Presolve deduplicates dependent equality rows. Deterministic given
/// identical inputs: no randomized pivoting, fixed iteration schedule.
pub fn solve(problem: &SdpProblem, tol: f64) -> Result<SdpSolution, SdpError> {
    if tol < 1e-9 {
        return Err(SdpError::ToleranceTooTight { tol });
    }
    for &d in &problem.block_dims {
        if d > MAX_BLOCK_DIM {
            return Err(SdpError::BlockTooLarge { dim: d });
        }
    }
    let mut pre = problem.clone();
    pre.compress();
    pre.deduplicate()?;
    if pre.constraints.is_empty() {
        return Err(SdpError::NoConstraints);
    }

    let dims: Vec<usize> = pre.block_dims.iter().map(|&d| 2 * d).collect();
    let c: Vec<RMatrix> = pre
        .objective
        .blocks
        .iter()
        .zip(&dims)
        .map(|(blk, &d)| {
            let mut m = RMatrix::zeros(d, d);
            for (r, cc, v) in embed_entries(blk) {
                m[(r, cc)] += v;
            }
            m
        })
        .collect();
    let rows: Vec<EmbRow> = pre.constraints.iter().map(|(r, _)| embed_row(r)).collect();
    let b: Vec<f64> = pre.constraints.iter().map(|&(_, rhs)| rhs).collect();
    let ws = Workspace { dims, c, rows, b };
    let sol = ipm(&ws, tol);

    // Recover complex blocks and evaluate against the original data.
    let primal: Vec<DMatrix<Complex64>> = sol
        .x
        .iter()
        .zip(&pre.block_dims)
        .map(|(xt, &d)| {
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    let re = 0.5 * (xt[(i, j)] + xt[(i + d, j + d)]);
                    let im = 0.5 * (xt[(i + d, j)] - xt[(i, j + d)]);
                    m[(i, j)] = Complex64::new(re, im);
                }
            }
            // Hermitize against numerical drift.
            let mh = (m.clone() + m.adjoint()) * Complex64::new(0.5, 0.0);
            mh
        })
        .collect();

    let primal_value: f64 = problem
        .objective
        .blocks
        .iter()
        .zip(&primal)
        .map(|(cb, xb)| cb.dot_dense(xb))
        .sum();
    let dual_value = sol.dual_value;
    let gap = (primal_value - dual_value).abs() / (1.0 + primal_value.abs() + dual_value.abs());

    Ok(SdpSolution {
        primal,
        dual: sol.y,
        primal_value,
        dual_value,
        gap,
        status: sol.status,
        iterations: sol.iterations,
    })
}

struct IpmOut {
    x: Vec<RMatrix>,
    y: Vec<f64>,
    dual_value: f64,
    status: SdpStatus,
    iterations: usize,
}

fn ipm(ws: &Workspace, tol: f64) -> IpmOut {
    let m = ws.rows.len();
    let nb = ws.dims.len();
    let n_tot: usize = ws.dims.iter().sum();

    let b_scale = ws.b.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let c_scale = ws
        .c
        .iter()
        .map(|cb| cb.amax())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let init = b_scale.max(c_scale).max(1.0) * (n_tot as f64).sqrt().max(1.0);

    let mut x: Vec<RMatrix> = ws.dims.iter().map(|&d| RMatrix::identity(d, d) * init).collect();
    let mut z: Vec<RMatrix> = ws.dims.iter().map(|&d| RMatrix::identity(d, d) * init).collect();
    let mut y = vec![0.0f64; m];
    let mut status = SdpStatus::Inaccurate;
    let mut iters = 0;

    for iter in 0..MAX_ITERS {
        iters = iter + 1;
        // Residuals.
        let rp: Vec<f64> = (0..m).map(|i| ws.b[i] - ws.dot_state(&ws.rows[i], &x)).collect();
        let mut rd: Vec<RMatrix> = ws
            .c
            .iter()
            .zip(&z)
            .map(|(cb, zb)| cb + zb)
            .collect();
        for i in 0..m {
            ws.add_scaled(&ws.rows[i], -y[i], &mut rd);
        }
        let pobj: f64 = ws.c.iter().zip(&x).map(|(cb, xb)| cb.dot(xb)).sum();
        let dobj: f64 = ws.b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
        let mu: f64 = x.iter().zip(&z).map(|(xb, zb)| xb.dot(zb)).sum::<f64>() / n_tot as f64;

        let pfeas = rp.iter().fold(0.0f64, |a, &v| a.max(v.abs())) / (1.0 + b_scale);
        let dfeas = rd.iter().map(|r| r.amax()).fold(0.0f64, f64::max) / (1.0 + c_scale);
        let gap_rel = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        if pfeas <= tol && dfeas <= tol && gap_rel <= tol {
            status = SdpStatus::Optimal;
            break;
        }
        if pobj.abs() > 1e14 * (1.0 + b_scale) {
            status = SdpStatus::Unbounded;
            break;
        }

        // Factor Z blocks.
        let mut zinv: Vec<RMatrix> = Vec::with_capacity(nb);
        let mut ok = true;
        for zb in &z {
            match nalgebra::linalg::Cholesky::new(zb.clone()) {
                Some(ch) => zinv.push(ch.inverse()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }

        // Schur complement M[i][j] = Σ_b tr(A_i X A_j Zinv).
        let mut big_m = vec![0.0f64; m * m];
        let cols: Vec<(usize, Vec<f64>)> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut col = vec![0.0f64; j + 1];
                for (bi, entries_j) in &ws.rows[j].blocks {
                    let d = ws.dims[*bi];
                    let xb = &x[*bi];
                    let zib = &zinv[*bi];
                    // B = A_j Zinv restricted to touched rows.
                    let mut touched: Vec<usize> = entries_j.iter().map(|&(r, _, _)| r).collect();
                    touched.sort_unstable();
                    touched.dedup();
                    let mut bmat = vec![0.0f64; touched.len() * d];
                    for &(r, cc, v) in entries_j {
                        let ri = touched.binary_search(&r).unwrap();
                        for k in 0..d {
                            bmat[ri * d + k] += v * zib[(cc, k)];
                        }
                    }
                    // T = X B (only rows in `touched` of B contribute).
                    let mut t = vec![0.0f64; d * d];
                    for (ri, &r) in touched.iter().enumerate() {
                        for p in 0..d {
                            let xv = xb[(p, r)];
                            if xv == 0.0 {
                                continue;
                            }
                            let brow = &bmat[ri * d..(ri + 1) * d];
                            let trow = &mut t[p * d..(p + 1) * d];
                            for k in 0..d {
                                trow[k] += xv * brow[k];
                            }
                        }
                    }
                    // col[i] += tr(A_i T) for i ≤ j.
                    for i in 0..=j {
                        for (bi2, entries_i) in &ws.rows[i].blocks {
                            if bi2 == bi {
                                let mut acc = 0.0;
                                for &(r, cc, v) in entries_i {
                                    acc += v * t[cc * d + r];
                                }
                                col[i] += acc;
                            }
                        }
                    }
                }
                (j, col)
            })
            .collect();
        for (j, col) in cols {
            for (i, v) in col.into_iter().enumerate() {
                big_m[i * m + j] = v;
                big_m[j * m + i] = v;
            }
        }

        // Factor M with escalating ridge on failure.
        let trace_m: f64 = (0..m).map(|i| big_m[i * m + i]).sum::<f64>().max(1e-300);
        let mut lfac = big_m.clone();
        let mut ridge = 0.0;
        let mut factored = cholesky_in_place(&mut lfac, m, 1e-300);
        let mut attempts = 0;
        while !factored && attempts < 6 {
            ridge = if ridge == 0.0 { 1e-14 * trace_m / m as f64 } else { ridge * 100.0 };
            lfac = big_m.clone();
            for i in 0..m {
                lfac[i * m + i] += ridge;
            }
            factored = cholesky_in_place(&mut lfac, m, 1e-300);
            attempts += 1;
        }
        if !factored {
            break;
        }

        let solve_newton = |rc: &[RMatrix]| -> (Vec<RMatrix>, Vec<f64>, Vec<RMatrix>) {
            // rhs_i = Σ_b tr(A_ib (Rc Zinv + X Rd Zinv)) − b_i
            let inner: Vec<RMatrix> = (0..nb)
                .map(|bi| (&rc[bi] + &x[bi] * &rd[bi]) * &zinv[bi])
                .collect();
            let rhs: Vec<f64> = (0..m)
                .map(|i| ws.dot_state(&ws.rows[i], &inner) - ws.b[i])
                .collect();
            let dy = chol_solve(&lfac, m, &rhs);
            let mut dz: Vec<RMatrix> = rd.iter().map(|r| -r).collect();
            for i in 0..m {
                ws.add_scaled(&ws.rows[i], dy[i], &mut dz);
            }
            let dx: Vec<RMatrix> = (0..nb)
                .map(|bi| {
                    let raw = &rc[bi] * &zinv[bi] - &x[bi] - &x[bi] * &dz[bi] * &zinv[bi];
                    sym_part(&raw)
                })
                .collect();
            (dx, dy, dz)
        };

        // Predictor (affine scaling).
        let zero: Vec<RMatrix> = ws.dims.iter().map(|&d| RMatrix::zeros(d, d)).collect();
        let (dxa, _dya, dza) = solve_newton(&zero);
        let apa = x
            .iter()
            .zip(&dxa)
            .map(|(s, d)| step_to_boundary(s, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        let ada = z
            .iter()
            .zip(&dza)
            .map(|(s, d)| step_to_boundary(s, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        let mu_aff: f64 = x
            .iter()
            .zip(&dxa)
            .zip(z.iter().zip(&dza))
            .map(|((xb, dxb), (zb, dzb))| (xb + dxb * apa).dot(&(zb + dzb * ada)))
            .sum::<f64>()
            .max(0.0)
            / n_tot as f64;
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-8, 1.0);

        // Corrector.
        let rc: Vec<RMatrix> = (0..nb)
            .map(|bi| {
                let d = ws.dims[bi];
                RMatrix::identity(d, d) * (sigma * mu) - &dxa[bi] * &dza[bi]
            })
            .collect();
        let (dx, dy, dz) = solve_newton(&rc);
        let step_frac = 0.98;
        let ap = (step_frac
            * x.iter()
                .zip(&dx)
                .map(|(s, d)| step_to_boundary(s, d))
                .fold(f64::INFINITY, f64::min))
        .min(1.0);
        let ad = (step_frac
            * z.iter()
                .zip(&dz)
                .map(|(s, d)| step_to_boundary(s, d))
                .fold(f64::INFINITY, f64::min))
        .min(1.0);

        for bi in 0..nb {
            x[bi] += &dx[bi] * ap;
            z[bi] += &dz[bi] * ad;
        }
        for i in 0..m {
            y[i] += ad * dy[i];
        }
    }

    let dual_value: f64 = ws.b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
    IpmOut {
        x,
        y,
        dual_value,
        status,
        iterations: iters,
    }
}

