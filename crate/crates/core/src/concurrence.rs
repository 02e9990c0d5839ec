//! Genuine multipartite entanglement concurrence of a pure ground state:
//! the square root of the minimum linear entropy 1 - Tr(rho_alpha^2) over
//! all bipartitions of the chain.

use ndarray::Array2;

use crate::basis::SiteCount;
use crate::error::Error;
use crate::spectral::GroundState;
use crate::Result;

/// One side of a split of sites {1..n} into a nonempty subset and its
/// complement. Stored as a bit mask with site j on bit j-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    mask: u64,
}

impl Bipartition {
    /// Builds from 1-based site indices; the subset must be nonempty, proper
    /// and duplicate-free.
    pub fn new(n: SiteCount, sites: &[usize]) -> Result<Self> {
        let nn = n.get();
        let mut mask = 0u64;
        for &s in sites {
            if s < 1 || s > nn {
                return Err(Error::Config(format!(
                    "site {s} outside chain of {nn} sites"
                )));
            }
            let bit = 1u64 << (s - 1);
            if mask & bit != 0 {
                return Err(Error::Config(format!("duplicate site {s} in subset")));
            }
            mask |= bit;
        }
        if mask == 0 {
            return Err(Error::Config("empty subset".into()));
        }
        if mask == (1u64 << nn) - 1 {
            return Err(Error::Config("subset covers the whole chain".into()));
        }
        Ok(Bipartition { n: nn, mask })
    }

    fn from_mask(n: usize, mask: u64) -> Self {
        Bipartition { n, mask }
    }

    /// 1-based site indices in ascending order.
    pub fn sites(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&s| self.mask >> (s - 1) & 1 == 1)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Subsets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition::from_mask(self.n, !self.mask & ((1u64 << self.n) - 1))
    }

    /// A subset is the canonical representative of its split when it is the
    /// smaller side, or at equal sizes the one whose site list is
    /// lexicographically smaller (the side containing site 1).
    pub fn is_canonical(&self) -> bool {
        let m = 2 * self.len();
        if m < self.n {
            true
        } else if m > self.n {
            false
        } else {
            self.mask & 1 == 1
        }
    }

    pub fn canonical(&self) -> Bipartition {
        if self.is_canonical() {
            self.clone()
        } else {
            self.complement()
        }
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sites = self.sites();
        let joined = sites
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("+");
        write!(f, "{joined}")
    }
}

/// All canonical bipartitions, sizes ascending and site lists in
/// lexicographic order within a size; 2^(n-1) - 1 in total.
pub fn enumerate_bipartitions(n: SiteCount) -> Vec<Bipartition> {
    let nn = n.get();
    let mut out = Vec::with_capacity((1usize << (nn - 1)) - 1);
    for m in 1..=nn / 2 {
        let mut idx: Vec<usize> = (1..=m).collect();
        loop {
            // at the balanced size only subsets containing site 1 are
            // canonical; they are exactly the lex-smaller sides
            if 2 * m < nn || idx[0] == 1 {
                let mask = idx.iter().fold(0u64, |acc, &s| acc | 1 << (s - 1));
                out.push(Bipartition::from_mask(nn, mask));
            }
            let mut i = m;
            while i > 0 && idx[i - 1] == nn - (m - i) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..m {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Purity Tr(rho_alpha^2) from raw (basis state, amplitude) pairs. The
/// amplitudes are packed into the bipartite matrix A indexed by the subset
/// and complement configurations; the purity is the squared Frobenius norm
/// of the Gram matrix of A (the sum of fourth powers of singular values).
pub fn reduced_purity_entries(n: SiteCount, entries: &[(u64, f64)], part: &Bipartition) -> f64 {
    let nn = n.get();
    assert_eq!(part.n, nn, "bipartition built for a different chain length");
    let alpha: Vec<usize> = part.sites().iter().map(|s| s - 1).collect();
    let beta: Vec<usize> = part.complement().sites().iter().map(|s| s - 1).collect();
    let rows = 1usize << alpha.len();
    let cols = 1usize << beta.len();
    let mut a = Array2::<f64>::zeros((rows, cols));
    for &(s, amp) in entries {
        let mut r = 0usize;
        for (i, &p) in alpha.iter().enumerate() {
            r |= ((s >> p) & 1) as usize * (1 << i);
        }
        let mut c = 0usize;
        for (i, &p) in beta.iter().enumerate() {
            c |= ((s >> p) & 1) as usize * (1 << i);
        }
        a[(r, c)] += amp;
    }
    // both Gram matrices share the nonzero spectrum; use the smaller
    let g = if rows <= cols {
        a.dot(&a.t())
    } else {
        a.t().dot(&a)
    };
    g.iter().map(|x| x * x).sum()
}

pub fn reduced_purity(g: &GroundState, part: &Bipartition) -> f64 {
    let entries: Vec<(u64, f64)> = g
        .basis
        .states
        .iter()
        .copied()
        .zip(g.amplitudes.iter().copied())
        .collect();
    reduced_purity_entries(g.n, &entries, part)
}

#[derive(Debug, Clone)]
pub struct ConcurrenceResult {
    /// sqrt of the minimal linear entropy over canonical bipartitions.
    pub value: f64,
    pub minimizing_partition: Bipartition,
    /// (bipartition, linear entropy) in enumeration order.
    pub per_partition: Vec<(Bipartition, f64)>,
}

/// Entropies this close count as tied; symmetry-equivalent partitions land
/// within rounding of each other and must report a stable representative.
const TIE_TOL: f64 = 1e-12;

/// GME concurrence of a normalized pure state. Minimal entropies tied
/// within rounding resolve to the lexicographically smallest site list.
pub fn gme_concurrence(g: &GroundState) -> ConcurrenceResult {
    let parts = enumerate_bipartitions(g.n);
    let mut per_partition = Vec::with_capacity(parts.len());
    for part in &parts {
        let entropy = (1.0 - reduced_purity(g, part)).max(0.0);
        per_partition.push((part.clone(), entropy));
    }
    let min_entropy = per_partition
        .iter()
        .map(|(_, e)| *e)
        .fold(f64::INFINITY, f64::min);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (i, (part, entropy)) in per_partition.iter().enumerate() {
        if *entropy <= min_entropy + TIE_TOL {
            let sites = part.sites();
            if best.as_ref().is_none_or(|(_, s)| sites < *s) {
                best = Some((i, sites));
            }
        }
    }
    let (idx, _) = best.expect("at least one bipartition for n >= 3");
    ConcurrenceResult {
        value: min_entropy.sqrt(),
        minimizing_partition: parts[idx].clone(),
        per_partition,
    }
}
