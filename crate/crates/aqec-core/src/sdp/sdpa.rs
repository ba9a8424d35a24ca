//! SDPA sparse file export/import for external cross-checking.
//!
//! Grammar (.dat-s): comment lines beginning with `"` or `*`, then the
//! number of constraints, the number of blocks, the block-size list
//! (negative sizes denote diagonal blocks), the rhs vector line, then
//! entry lines `matno blkno i j value` with 1-based upper-triangle
//! indices. `matno` 0 is the objective, `k ≥ 1` the k-th equality row.
//!
//! Complex hermitian blocks are exported through the real symmetric
//! [[Re, −Im], [Im, Re]] embedding (dimension doubled, coefficients
//! halved); purely real blocks are exported as-is, so re-exporting an
//! imported problem is byte-stable.
//!
//! The matching `.result` layout: one line with the dual vector, then
//! lines `1 blkno i j value` for the primal blocks and `2 blkno i j value`
//! for the dual slack blocks, 1-based upper-triangle indices.

use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::problem::{BlockSparse, SdpProblem, SparseHerm};
use super::solver::{SdpSolution, SdpStatus};
use super::SdpError;

fn block_is_real(h: &SparseHerm) -> bool {
    h.upper_entries().iter().all(|&(_, _, v)| v.im == 0.0)
}

/// Upper-triangle real entries of a block for export: either the block's
/// own entries (real block) or its embedded double-size form.
fn export_entries(h: &SparseHerm, embed: bool) -> Vec<(usize, usize, f64)> {
    if !embed {
        return h
            .upper_entries()
            .iter()
            .map(|&(i, j, v)| (i, j, v.re))
            .collect();
    }
    super::solver_embed_upper(h)
}

/// Export the problem in SDPA sparse format. Values are written with 17
/// significant digits so that re-importing reproduces every coefficient
/// bit-exactly.
pub fn export_sdpa(problem: &SdpProblem, path: &Path) -> Result<(), SdpError> {
    let mut p = problem.clone();
    p.compress();
    let embed_flags: Vec<bool> = (0..p.block_dims.len())
        .map(|bi| {
            !block_is_real(&p.objective.blocks[bi])
                || p.constraints
                    .iter()
                    .any(|(row, _)| !block_is_real(&row.blocks[bi]))
        })
        .collect();
    let out_dims: Vec<usize> = p
        .block_dims
        .iter()
        .zip(&embed_flags)
        .map(|(&d, &e)| if e { 2 * d } else { d })
        .collect();

    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(SdpError::Io)?);
    writeln!(f, "\"block SDP export (maximization, equality rows)").map_err(SdpError::Io)?;
    writeln!(f, "{}", p.constraints.len()).map_err(SdpError::Io)?;
    writeln!(f, "{}", out_dims.len()).map_err(SdpError::Io)?;
    let dims_line: Vec<String> = out_dims.iter().map(|d| d.to_string()).collect();
    writeln!(f, "{}", dims_line.join(" ")).map_err(SdpError::Io)?;
    let rhs_line: Vec<String> = p
        .constraints
        .iter()
        .map(|(_, rhs)| format!("{rhs:.16e}"))
        .collect();
    writeln!(f, "{}", rhs_line.join(" ")).map_err(SdpError::Io)?;

    let write_mat = |matno: usize, mat: &BlockSparse, f: &mut dyn Write| -> std::io::Result<()> {
        for (bi, blk) in mat.blocks.iter().enumerate() {
            let mut entries = export_entries(blk, embed_flags[bi]);
            entries.sort_by_key(|&(i, j, _)| (i, j));
            for (i, j, v) in entries {
                if v != 0.0 {
                    writeln!(f, "{matno} {} {} {} {v:.16e}", bi + 1, i + 1, j + 1)?;
                }
            }
        }
        Ok(())
    };
    write_mat(0, &p.objective, &mut f).map_err(SdpError::Io)?;
    for (k, (row, _)) in p.constraints.iter().enumerate() {
        write_mat(k + 1, row, &mut f).map_err(SdpError::Io)?;
    }
    Ok(())
}

fn parse_err(line_no: usize, detail: &str) -> SdpError {
    SdpError::Parse {
        line: line_no,
        detail: detail.to_string(),
    }
}

/// Import an SDPA sparse problem file.
pub fn import_sdpa(path: &Path) -> Result<SdpProblem, SdpError> {
    let file = std::fs::File::open(path).map_err(SdpError::Io)?;
    let reader = std::io::BufReader::new(file);
    let mut lines = Vec::new();
    for (no, line) in reader.lines().enumerate() {
        let line = line.map_err(SdpError::Io)?;
        let trimmed = line.trim().to_string();
        if trimmed.is_empty() || trimmed.starts_with('"') || trimmed.starts_with('*') {
            continue;
        }
        lines.push((no + 1, trimmed));
    }
    let mut it = lines.into_iter();
    let (no, m_line) = it.next().ok_or_else(|| parse_err(0, "missing constraint count"))?;
    let m: usize = m_line
        .split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(no, "bad constraint count"))?;
    let (no, nb_line) = it.next().ok_or_else(|| parse_err(0, "missing block count"))?;
    let nb: usize = nb_line
        .split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(no, "bad block count"))?;
    let (no, dims_line) = it.next().ok_or_else(|| parse_err(0, "missing block sizes"))?;
    let mut dims = Vec::with_capacity(nb);
    for tok in dims_line
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')' || c == '{' || c == '}')
        .filter(|t| !t.is_empty())
    {
        let v: i64 = tok.parse().map_err(|_| parse_err(no, "bad block size"))?;
        dims.push(v.unsigned_abs() as usize); // diagonal blocks held as full
    }
    if dims.len() != nb {
        return Err(parse_err(no, "block size count mismatch"));
    }
    let (no, rhs_line) = it.next().ok_or_else(|| parse_err(0, "missing rhs line"))?;
    let mut rhs = Vec::with_capacity(m);
    for tok in rhs_line
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
    {
        let v: f64 = tok.parse().map_err(|_| parse_err(no, "bad rhs value"))?;
        rhs.push(v);
    }
    if rhs.len() != m {
        return Err(parse_err(no, "rhs count mismatch"));
    }

    let mut problem = SdpProblem::new(dims.clone());
    let mut rows: Vec<BlockSparse> = (0..m).map(|_| BlockSparse::zeros(&dims)).collect();
    for (no, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(no, "entry line must be `matno blkno i j value`"));
        }
        let matno: usize = toks[0].parse().map_err(|_| parse_err(no, "bad matno"))?;
        let blkno: usize = toks[1].parse().map_err(|_| parse_err(no, "bad blkno"))?;
        let i: usize = toks[2].parse().map_err(|_| parse_err(no, "bad row index"))?;
        let j: usize = toks[3].parse().map_err(|_| parse_err(no, "bad col index"))?;
        let v: f64 = toks[4].parse().map_err(|_| parse_err(no, "bad value"))?;
        if matno > m || blkno == 0 || blkno > nb || i == 0 || j == 0 {
            return Err(parse_err(no, "index out of range"));
        }
        if i > j {
            return Err(parse_err(no, "entries must be upper-triangle (i ≤ j)"));
        }
        let target = if matno == 0 {
            &mut problem.objective.blocks[blkno - 1]
        } else {
            &mut rows[matno - 1].blocks[blkno - 1]
        };
        target
            .add(i - 1, j - 1, Complex64::new(v, 0.0))
            .map_err(|_| parse_err(no, "index exceeds block size"))?;
    }
    for (row, b) in rows.into_iter().zip(rhs) {
        problem.push_constraint(row, b);
    }
    problem.compress();
    Ok(problem)
}

/// Write a solution in the `.result` layout.
pub fn export_solution(sol: &SdpSolution, path: &Path) -> Result<(), SdpError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(SdpError::Io)?);
    let duals: Vec<String> = sol.dual.iter().map(|v| format!("{v:.16e}")).collect();
    writeln!(f, "{}", duals.join(" ")).map_err(SdpError::Io)?;
    for (bi, blk) in sol.primal.iter().enumerate() {
        for i in 0..blk.nrows() {
            for j in i..blk.ncols() {
                let v = blk[(i, j)].re;
                if v != 0.0 {
                    writeln!(f, "1 {} {} {} {v:.16e}", bi + 1, i + 1, j + 1).map_err(SdpError::Io)?;
                }
            }
        }
    }
    Ok(())
}

/// Import a `.result` solution file for the given problem (block dims and
/// objective come from the problem; status is reported as `Inaccurate`
/// since external certificates are not re-verified here).
pub fn import_sdpa_solution(path: &Path, problem: &SdpProblem) -> Result<SdpSolution, SdpError> {
    let file = std::fs::File::open(path).map_err(SdpError::Io)?;
    let reader = std::io::BufReader::new(file);
    let mut content = Vec::new();
    for (no, line) in reader.lines().enumerate() {
        let line = line.map_err(SdpError::Io)?;
        let t = line.trim().to_string();
        if t.is_empty() || t.starts_with('"') || t.starts_with('*') {
            continue;
        }
        content.push((no + 1, t));
    }
    let mut it = content.into_iter();
    let (no, dual_line) = it.next().ok_or_else(|| parse_err(0, "missing dual vector line"))?;
    let dual: Vec<f64> = dual_line
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(no, "bad dual value"))?;

    let mut primal: Vec<DMatrix<Complex64>> = problem
        .block_dims
        .iter()
        .map(|&d| DMatrix::zeros(d, d))
        .collect();
    for (no, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(no, "entry line must be `which blkno i j value`"));
        }
        let which: usize = toks[0].parse().map_err(|_| parse_err(no, "bad section"))?;
        let blkno: usize = toks[1].parse().map_err(|_| parse_err(no, "bad blkno"))?;
        let i: usize = toks[2].parse().map_err(|_| parse_err(no, "bad row"))?;
        let j: usize = toks[3].parse().map_err(|_| parse_err(no, "bad col"))?;
        let v: f64 = toks[4].parse().map_err(|_| parse_err(no, "bad value"))?;
        if which == 2 {
            continue; // dual slack entries are accepted and ignored
        }
        if which != 1 || blkno == 0 || blkno > primal.len() {
            return Err(parse_err(no, "bad section or block"));
        }
        let blk = &mut primal[blkno - 1];
        if i == 0 || j == 0 || i > blk.nrows() || j > blk.ncols() {
            return Err(parse_err(no, "index out of range"));
        }
        blk[(i - 1, j - 1)] = Complex64::new(v, 0.0);
        blk[(j - 1, i - 1)] = Complex64::new(v, 0.0);
    }
    let primal_value: f64 = problem
        .objective
        .blocks
        .iter()
        .zip(&primal)
        .map(|(cb, xb)| cb.dot_dense(xb))
        .sum();
    let dual_value: f64 = problem
        .constraints
        .iter()
        .zip(&dual)
        .map(|((_, b), y)| b * y)
        .sum();
    Ok(SdpSolution {
        primal,
        dual,
        primal_value,
        dual_value,
        gap: (primal_value - dual_value).abs() / (1.0 + primal_value.abs() + dual_value.abs()),
        status: SdpStatus::Inaccurate,
        iterations: 0,
    })
}
