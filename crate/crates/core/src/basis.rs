//! Fixed-magnetization computational bases.
//!
//! Bit j-1 of a configuration word holds the spin at site j (site 1 is the
//! least significant bit). Bit value 1 encodes Sz = -1/2, so the excitation
//! number k of a sector is the Hamming weight, and k grows with the applied
//! field b.

use crate::error::Error;
use crate::Result;

/// Number of spins on the ring. Exact-diagonalization paths accept 3..=12;
/// below 3 the periodic bond sum double-counts, above 12 the largest sector
/// outgrows the dense eigensolver budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteCount(usize);

pub const MIN_SITES: usize = 3;
pub const MAX_SITES: usize = 12;

impl SiteCount {
    pub fn new(n: usize) -> Result<Self> {
        if (MIN_SITES..=MAX_SITES).contains(&n) {
            Ok(SiteCount(n))
        } else {
            Err(Error::SiteCount {
                n,
                min: MIN_SITES,
                max: MAX_SITES,
            })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for SiteCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    // multiply before dividing; each prefix product is itself a binomial
    // coefficient so the division is exact
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Ordered basis of the weight-k sector of an n-site chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub n: SiteCount,
    pub k: usize,
    /// All weight-k configurations in strictly ascending integer order.
    pub states: Vec<u64>,
}

pub fn enumerate_sector(n: SiteCount, k: usize) -> Result<SectorBasis> {
    let nn = n.get();
    if k > nn {
        return Err(Error::SectorRange { k, n: nn });
    }
    let count = binomial(nn, k) as usize;
    let mut states = Vec::with_capacity(count);
    if k == 0 {
        states.push(0);
    } else {
        // Gosper's hack walks the weight-k words in ascending order
        let mut v: u64 = (1u64 << k) - 1;
        let limit: u64 = 1u64 << nn;
        while v < limit {
            states.push(v);
            let t = v | (v - 1);
            v = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
        }
    }
    debug_assert_eq!(states.len(), count);
    Ok(SectorBasis { n, k, states })
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of a configuration in `states` by combinatorial (colex) ranking;
    /// O(n) with no search.
    pub fn rank(&self, state: u64) -> Result<usize> {
        if state.count_ones() as usize != self.k || state >> self.n.get() != 0 {
            return Err(Error::WeightMismatch {
                state,
                expected: self.k,
            });
        }
        let mut r: u64 = 0;
        let mut seen = 0usize;
        let mut rest = state;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            seen += 1;
            r += binomial(p, seen);
            rest &= rest - 1;
        }
        Ok(r as usize)
    }
}

/// The n periodic bonds (1,2), (2,3), ..., (n,1), 1-based site labels.
pub fn neighbor_pairs(n: SiteCount) -> Vec<(usize, usize)> {
    let nn = n.get();
    (1..=nn).map(|j| (j, j % nn + 1)).collect()
}
