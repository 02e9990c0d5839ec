//! Periodic XXZ Hamiltonian restricted to magnetization sectors.
//!
//! With S = sigma/2 the chain Hamiltonian has diagonal part
//! -jz * sum_bonds sigma_i sigma_j / 4 + b * sum_j sigma_j / 2 (sigma = +1
//! for bit 0, -1 for bit 1) and a flip-flop amplitude of exactly -jx/2
//! between configurations that swap 01 <-> 10 across one periodic bond.
//! Total magnetization commutes with H, so each weight-k sector closes.

use ndarray::Array2;

use crate::basis::{enumerate_sector, neighbor_pairs, SectorBasis, SiteCount};
use crate::error::Error;
use crate::Result;

/// One Hamiltonian instance. Energies are in units of Jz, so jz is pinned to
/// 1 and jx, b are the ratios Jx/Jz and b/Jz from the sweep axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub n: SiteCount,
    pub jx: f64,
    pub jz: f64,
    pub b: f64,
}

impl ChainParams {
    pub fn new(n: SiteCount, jx: f64, b: f64) -> Self {
        ChainParams { n, jx, jz: 1.0, b }
    }

    /// The ferromagnetic regime Jx > Jz > 0 assumed by the closed-form
    /// results. Construction outside it is allowed (boundary studies need
    /// jx near jz); callers surface `regime_warning` instead of failing.
    pub fn in_ferromagnetic_regime(&self) -> bool {
        self.jx > self.jz && self.jz > 0.0
    }

    pub fn regime_warning(&self) -> Option<String> {
        if self.in_ferromagnetic_regime() {
            None
        } else {
            Some(format!(
                "couplings jx={}, jz={} leave the ferromagnetic regime jx > jz > 0; \
                 closed-form sector windows do not apply",
                self.jx, self.jz
            ))
        }
    }
}

/// Dense symmetric matrix of H restricted to one weight-k sector.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    pub basis: SectorBasis,
    pub entries: Array2<f64>,
}

/// Diagonal matrix element of a configuration: Ising bond energy plus field.
pub fn diagonal_energy(state: u64, p: &ChainParams) -> f64 {
    let n = p.n.get();
    let sigma = |site: usize| -> f64 {
        if (state >> (site - 1)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let mut bond_sum = 0.0;
    for (i, j) in neighbor_pairs(p.n) {
        bond_sum += sigma(i) * sigma(j);
    }
    let field_sum: f64 = (1..=n).map(sigma).sum();
    -p.jz * bond_sum / 4.0 + p.b * field_sum / 2.0
}

pub fn build_sector(p: &ChainParams, k: usize) -> Result<SectorMatrix> {
    let basis = enumerate_sector(p.n, k)?;
    let m = basis.len();
    let mut entries = Array2::<f64>::zeros((m, m));
    let bonds = neighbor_pairs(p.n);
    for (r, &s) in basis.states.iter().enumerate() {
        entries[(r, r)] = diagonal_energy(s, p);
        for &(i, j) in &bonds {
            let mask = (1u64 << (i - 1)) | (1u64 << (j - 1));
            // exactly one of the two bond sites occupied: the flip-flop term
            // hops the excitation across the bond
            if (s >> (i - 1)) & 1 != (s >> (j - 1)) & 1 {
                let r2 = basis.rank(s ^ mask)?;
                entries[(r, r2)] = -p.jx / 2.0;
                entries[(r2, r)] = -p.jx / 2.0;
            }
        }
    }
    Ok(SectorMatrix { basis, entries })
}

/// Unrestricted 2^n matrix, the oracle the sector blocks are checked against.
pub fn build_full(p: &ChainParams) -> Result<Array2<f64>> {
    let n = p.n.get();
    if n > 8 {
        return Err(Error::FullMatrixCap { n });
    }
    let dim = 1usize << n;
    let mut h = Array2::<f64>::zeros((dim, dim));
    let bonds = neighbor_pairs(p.n);
    for s in 0..dim as u64 {
        h[(s as usize, s as usize)] = diagonal_energy(s, p);
        for &(i, j) in &bonds {
            let mask = (1u64 << (i - 1)) | (1u64 << (j - 1));
            if (s >> (i - 1)) & 1 != (s >> (j - 1)) & 1 {
                let s2 = (s ^ mask) as usize;
                h[(s as usize, s2)] = -p.jx / 2.0;
                h[(s2, s as usize)] = -p.jx / 2.0;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, jx: f64, b: f64) -> ChainParams {
        ChainParams::new(SiteCount::new(n).unwrap(), jx, b)
    }

    #[test]
    fn diagonal_energy_three_site_examples() {
        for &b in &[0.0, 0.3, -1.2] {
            let p = params(3, 2.0, b);
            assert_eq!(diagonal_energy(0b000, &p), -0.75 + 1.5 * b);
            assert_eq!(diagonal_energy(0b001, &p), 0.25 + 0.5 * b);
            assert_eq!(diagonal_energy(0b111, &p), -0.75 - 1.5 * b);
        }
    }

    #[test]
    fn regime_predicate() {
        assert!(params(4, 2.0, 0.0).in_ferromagnetic_regime());
        assert!(params(4, 1.0, 0.0).regime_warning().is_some());
        assert!(params(4, 0.5, 0.0).regime_warning().is_some());
    }

    #[test]
    fn sector_n3_k1_is_uniform_circulant() {
        let p = params(3, 2.0, 0.4);
        let m = build_sector(&p, 1).unwrap();
        assert_eq!(m.basis.states, vec![0b001, 0b010, 0b100]);
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 0.25 + 0.5 * 0.4 } else { -1.0 };
                assert!((m.entries[(r, c)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sector_k0_is_scalar() {
        for n in 3..=8 {
            let p = params(n, 1.7, -0.6);
            let m = build_sector(&p, 0).unwrap();
            assert_eq!(m.entries.dim(), (1, 1));
            let expect = -(n as f64) / 4.0 + (n as f64) * (-0.6) / 2.0;
            assert!((m.entries[(0, 0)] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn sector_n4_k1_hopping_is_ring_adjacency() {
        let p = params(4, 2.0, 0.0);
        let m = build_sector(&p, 1).unwrap();
        // states are 0001, 0010, 0100, 1000: the excitation hops around the
        // 4-cycle, so the off-diagonal pattern is the cycle adjacency matrix
        let adj = [
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ];
        for (r, row) in adj.iter().enumerate() {
            for (c, &hop) in row.iter().enumerate() {
                if r != c {
                    assert_eq!(m.entries[(r, c)], -hop);
                }
            }
        }
    }

    #[test]
    fn sector_matrix_exactly_symmetric_with_clean_off_diagonals() {
        let p = params(6, 2.3, -0.7);
        for k in 0..=6 {
            let m = build_sector(&p, k).unwrap();
            let sz = m.basis.len();
            for r in 0..sz {
                for c in 0..sz {
                    assert_eq!(m.entries[(r, c)], m.entries[(c, r)]);
                    if r != c {
                        let e = m.entries[(r, c)];
                        assert!(e == 0.0 || e == -p.jx / 2.0);
                    }
                }
            }
        }
    }

    #[test]
    fn sector_blocks_match_full_matrix() {
        for n in 3..=8 {
            let p = params(n, 1.8, 0.35);
            let full = build_full(&p).unwrap();
            for k in 0..=n {
                let m = build_sector(&p, k).unwrap();
                for (r, &s) in m.basis.states.iter().enumerate() {
                    for (c, &s2) in m.basis.states.iter().enumerate() {
                        assert_eq!(full[(s as usize, s2 as usize)], m.entries[(r, c)]);
                    }
                }
            }
            // entries connecting different sectors must vanish
            for s in 0..(1u64 << n) {
                for s2 in 0..(1u64 << n) {
                    if s.count_ones() != s2.count_ones() {
                        assert_eq!(full[(s as usize, s2 as usize)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn full_matrix_diagonal_when_jx_zero() {
        let p = params(3, 0.0, 0.9);
        let h = build_full(&p).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                if r != c {
                    assert_eq!(h[(r, c)], 0.0);
                }
            }
        }
    }

    #[test]
    fn full_matrix_capped_at_eight_sites() {
        let p = params(9, 2.0, 0.0);
        assert!(matches!(build_full(&p), Err(Error::FullMatrixCap { n: 9 })));
    }

    #[test]
    fn spin_flip_maps_sector_k_to_complement() {
        // complementing all bits maps the (b, k) block onto the (-b, n-k)
        // block entrywise, which underlies the reflection symmetry structure
        let n = 6;
        for k in 0..=n {
            let p_pos = params(n, 2.0, 0.55);
            let p_neg = params(n, 2.0, -0.55);
            let mk = build_sector(&p_pos, k).unwrap();
            let mc = build_sector(&p_neg, n - k).unwrap();
            let mask = (1u64 << n) - 1;
            for (r, &s) in mk.basis.states.iter().enumerate() {
                let rr = mc.basis.rank(!s & mask).unwrap();
                for (c, &s2) in mk.basis.states.iter().enumerate() {
                    let cc = mc.basis.rank(!s2 & mask).unwrap();
                    assert_eq!(mk.entries[(r, c)], mc.entries[(rr, cc)]);
                }
            }
        }
    }

    #[test]
    fn translation_leaves_sector_matrix_invariant() {
        let n = 6;
        let p = params(n, 2.0, -0.8);
        let rotate = |s: u64| ((s << 1) | (s >> (n - 1))) & ((1u64 << n) - 1);
        for k in 1..n {
            let m = build_sector(&p, k).unwrap();
            for (r, &s) in m.basis.states.iter().enumerate() {
                let rr = m.basis.rank(rotate(s)).unwrap();
                for (c, &s2) in m.basis.states.iter().enumerate() {
                    let cc = m.basis.rank(rotate(s2)).unwrap();
                    assert_eq!(m.entries[(r, c)], m.entries[(rr, cc)]);
                }
            }
        }
    }
}
