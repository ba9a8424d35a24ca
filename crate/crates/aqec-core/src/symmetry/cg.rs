//! Concrete Clebsch–Gordan basis for the three-qubit `ū ⊗ u ⊗ u`
//! representation on the L-systems: eight unit vectors splitting the
//! space into a spin-3/2 quadruplet and two spin-1/2 doublets.

use num_complex::Complex64;

fn ket(bits: &str) -> usize {
    bits.chars().fold(0usize, |acc, c| (acc << 1) | (c as usize - '0' as usize))
}

/// The eight basis vectors, components over |abc⟩ with a the slowest bit.
pub fn cg_basis_lll() -> Vec<Vec<Complex64>> {
    let s2 = 1.0 / 2f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let mut vs = vec![vec![Complex64::new(0.0, 0.0); 8]; 8];
    let re = |x: f64| Complex64::new(x, 0.0);

    // v1 = |100>
    vs[0][ket("100")] = re(1.0);
    // v2 = (−|101> − |110> + |000>)/√3
    vs[1][ket("101")] = re(-s3);
    vs[1][ket("110")] = re(-s3);
    vs[1][ket("000")] = re(s3);
    // v3 = (−|111> + |001> + |010>)/√3
    vs[2][ket("111")] = re(-s3);
    vs[2][ket("001")] = re(s3);
    vs[2][ket("010")] = re(s3);
    // v4 = |011>
    vs[3][ket("011")] = re(1.0);
    // v5 = (−|101> − |110> − 2|000>)/√6
    vs[4][ket("101")] = re(-s6);
    vs[4][ket("110")] = re(-s6);
    vs[4][ket("000")] = re(-2.0 * s6);
    // v6 = (|001> + |010> + 2|111>)/√6
    vs[5][ket("001")] = re(s6);
    vs[5][ket("010")] = re(s6);
    vs[5][ket("111")] = re(2.0 * s6);
    // v7 = (−|101> + |110>)/√2
    vs[6][ket("101")] = re(-s2);
    vs[6][ket("110")] = re(s2);
    // v8 = (|010> − |001>)/√2
    vs[7][ket("010")] = re(s2);
    vs[7][ket("001")] = re(-s2);

    vs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_and_complete() {
        let vs = cg_basis_lll();
        for i in 0..8 {
            for j in 0..8 {
                let dot: Complex64 = (0..8).map(|k| vs[i][k].conj() * vs[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot.re - expect).abs() < 1e-12 && dot.im.abs() < 1e-12,
                    "⟨v{}|v{}⟩ = {dot}",
                    i + 1,
                    j + 1
                );
            }
        }
        // Completeness: the Gram matrix above being the identity on all 8
        // vectors already forces full rank in C^8.
    }

    #[test]
    fn v1_is_ket_100() {
        let vs = cg_basis_lll();
        assert!((vs[0][4].re - 1.0).abs() < 1e-15);
        assert_eq!(
            vs[0].iter().filter(|c| c.norm() > 0.0).count(),
            1
        );
    }

    /// Span split: v1…v4 and the pairs (v5, v6), (v7, v8) are invariant
    /// under ū ⊗ u ⊗ u for random SU(2) elements.
    #[test]
    fn blocks_are_invariant_under_twisted_action() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let vs = cg_basis_lll();
        for _ in 0..20 {
            let mut g = nalgebra::DMatrix::<Complex64>::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    g[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let mut u = g.qr().q();
            // Special-unitarize: divide by sqrt(det).
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            let phase = det.sqrt();
            u /= phase;
            let ubar = u.map(|v| v.conj());
            let rep = ubar.kronecker(&u).kronecker(&u);
            // Project rotated v's onto the complementary sector; must vanish.
            let sector_a: Vec<usize> = (0..4).collect();
            let sector_b: Vec<usize> = (4..8).collect();
            for (sector, other) in [(sector_a.clone(), sector_b.clone()), (sector_b, sector_a)] {
                for &k in &sector {
                    let mut rotated = vec![Complex64::new(0.0, 0.0); 8];
                    for r in 0..8 {
                        for c in 0..8 {
                            rotated[r] += rep[(r, c)] * vs[k][c];
                        }
                    }
                    for &o in &other {
                        let leak: Complex64 =
                            (0..8).map(|r| vs[o][r].conj() * rotated[r]).sum();
                        assert!(
                            leak.norm() < 1e-10,
                            "v{} leaks into v{} by {:.3e}",
                            k + 1,
                            o + 1,
                            leak.norm()
                        );
                    }
                }
            }
        }
    }
}
