//! Sector ground states via cyclic Jacobi rotations, the global ground state
//! over all sectors, and the field values where the ground sector changes.

use ndarray::Array2;

use crate::basis::{binomial, SectorBasis, SiteCount};
use crate::error::Error;
use crate::hamiltonian::{build_sector, ChainParams, SectorMatrix};
use crate::Result;

/// Off-diagonal Frobenius target for the Jacobi sweep, relative to the
/// Frobenius norm of the input matrix.
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Degeneracy window for the global sector minimum.
fn tol_deg(e_min: f64) -> f64 {
    1e-9 * e_min.abs().max(1.0)
}

/// Global ground state of one parameter point. `amplitudes` follows the
/// ascending state order of `basis`; squared amplitudes are the ground-state
/// probabilities of the weight-k configurations.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub n: SiteCount,
    pub k: usize,
    pub basis: SectorBasis,
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    /// Another sector ties the minimum within 1e-9 * max(1, |E|); the state
    /// reported is the tie-broken (smallest k) one.
    pub degenerate: bool,
    /// Energy distance to the best competing sector.
    pub gap: f64,
}

/// Uniform-amplitude comparison state, fully symmetric over the weight-k
/// configurations. The chain ground states are generally not of this form
/// except at k <= 1.
#[derive(Debug, Clone, Copy)]
pub struct DickeState {
    pub n: SiteCount,
    pub k: usize,
}

impl DickeState {
    pub fn amplitude(&self) -> f64 {
        1.0 / (binomial(self.n.get(), self.k) as f64).sqrt()
    }

    pub fn overlap(&self, g: &GroundState) -> Result<f64> {
        if self.n != g.n || self.k != g.k {
            return Err(Error::Config(format!(
                "Dicke state ({}, {}) does not match ground sector ({}, {})",
                self.n, self.k, g.n, g.k
            )));
        }
        let a = self.amplitude();
        Ok(g.amplitudes.iter().map(|&c| a * c).sum())
    }
}

/// Full symmetric eigensystem by cyclic Jacobi rotations. Returns the
/// unsorted eigenvalues and, optionally, the matching eigenvector columns.
fn jacobi_eigh(mat: &Array2<f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Array2<f64>>)> {
    let m = mat.nrows();
    let mut a = mat.clone();
    let mut v = want_vectors.then(|| Array2::<f64>::eye(m));
    let fro: f64 = mat.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOL * fro;
    let off = |a: &Array2<f64>| -> f64 {
        let mut s = 0.0;
        for r in 0..m {
            for c in 0..m {
                if r != c {
                    s += a[(r, c)] * a[(r, c)];
                }
            }
        }
        s.sqrt()
    };
    if m <= 1 || fro == 0.0 || off(&a) <= target {
        return Ok((a.diag().to_vec(), v));
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        for p in 0..m - 1 {
            for q in p + 1..m {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for i in 0..m {
                    if i != p && i != q {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = c * aip - s * aiq;
                        a[(p, i)] = a[(i, p)];
                        a[(i, q)] = s * aip + c * aiq;
                        a[(q, i)] = a[(i, q)];
                    }
                }
                if let Some(v) = v.as_mut() {
                    for i in 0..m {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = c * vip - s * viq;
                        v[(i, q)] = s * vip + c * viq;
                    }
                }
            }
        }
        if off(&a) <= target {
            return Ok((a.diag().to_vec(), v));
        }
    }
    Err(Error::Convergence {
        residual: off(&a),
        target,
    })
}

/// Smallest eigenvalue of a sector block and its unit eigenvector, with the
/// sign fixed so the largest-magnitude amplitude is positive (magnitude ties
/// broken by lowest index).
pub fn sector_ground(m: &SectorMatrix) -> Result<(f64, Vec<f64>)> {
    let (values, vectors) = jacobi_eigh(&m.entries, true)?;
    let vectors = vectors.expect("requested vectors");
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    let mut vec: Vec<f64> = vectors.column(best).iter().copied().collect();
    let norm: f64 = vec.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut vec {
        *x /= norm;
    }
    let mut lead = 0;
    for i in 1..vec.len() {
        if vec[i].abs() > vec[lead].abs() {
            lead = i;
        }
    }
    if vec[lead] < 0.0 {
        for x in &mut vec {
            *x = -*x;
        }
    }
    Ok((values[best], vec))
}

/// Minimum over the per-sector ground energies, with deterministic tie-break
/// (smaller k) and a degeneracy flag when another sector lies within tol_deg.
pub fn global_ground(p: &ChainParams) -> Result<GroundState> {
    let n = p.n.get();
    let mut sectors = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let m = build_sector(p, k)?;
        let (energy, vec) = sector_ground(&m)?;
        sectors.push((energy, vec, m.basis));
    }
    let e_min = sectors
        .iter()
        .map(|(e, _, _)| *e)
        .fold(f64::INFINITY, f64::min);
    let tol = tol_deg(e_min);
    let tied: Vec<usize> = (0..=n).filter(|&k| sectors[k].0 <= e_min + tol).collect();
    let k = tied[0];
    let degenerate = tied.len() > 1;
    let gap = (0..=n)
        .filter(|&j| j != k)
        .map(|j| sectors[j].0)
        .fold(f64::INFINITY, f64::min)
        - sectors[k].0;
    let (energy, amplitudes, basis) = sectors.swap_remove(k);
    Ok(GroundState {
        n: p.n,
        k,
        basis,
        amplitudes,
        energy,
        degenerate,
        gap,
    })
}

/// Closed-form field window (b_low, b_high) on which the single-excitation
/// state is predicted to be the ground state: Jz-Jx < b < (N-3)(Jz-Jx)/(N-1).
pub fn sector_window_k1(p: &ChainParams) -> Result<(f64, f64)> {
    if p.jx <= p.jz {
        return Err(Error::WindowRegime { jx: p.jx, jz: p.jz });
    }
    let n = p.n.get() as f64;
    Ok((p.jz - p.jx, (n - 3.0) * (p.jz - p.jx) / (n - 1.0)))
}

/// Per-sector ground energies at b = 0 for fixed couplings. The field term
/// is b (n/2 - k) times identity within sector k, so the energy at any field
/// follows by a linear shift and a ground-sector probe costs O(n).
#[derive(Debug, Clone)]
pub struct SectorEnergyTable {
    n: usize,
    base: Vec<f64>,
}

impl SectorEnergyTable {
    pub fn new(p: &ChainParams) -> Result<Self> {
        let n = p.n.get();
        let zero_field = ChainParams { b: 0.0, ..*p };
        let mut base = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let m = build_sector(&zero_field, k)?;
            let (values, _) = jacobi_eigh(&m.entries, false)?;
            base.push(values.into_iter().fold(f64::INFINITY, f64::min));
        }
        Ok(Self { n, base })
    }

    /// Ground energy of sector k at field b.
    pub fn energy(&self, k: usize, b: f64) -> f64 {
        self.base[k] + b * (0.5 * self.n as f64 - k as f64)
    }

    /// Ground sector at field b, ties resolved toward smaller k.
    pub fn ground_sector(&self, b: f64) -> usize {
        let mut best = 0;
        for k in 1..=self.n {
            if self.energy(k, b) < self.energy(best, b) {
                best = k;
            }
        }
        best
    }
}

/// Field value where the ground sector crosses from k_left to k_right,
/// bisected to absolute tolerance 1e-6. The bracket endpoints must actually
/// sit in the named sectors.
pub fn locate_boundary(
    p: &ChainParams,
    k_left: usize,
    k_right: usize,
    b_lo: f64,
    b_hi: f64,
) -> Result<f64> {
    if b_lo >= b_hi || b_lo.is_nan() || b_hi.is_nan() {
        return Err(Error::Config(format!(
            "bracket endpoints must satisfy b_lo < b_hi, got [{b_lo}, {b_hi}]"
        )));
    }
    let table = SectorEnergyTable::new(p)?;
    let sector_at = |b: f64| -> Result<usize> { Ok(table.ground_sector(b)) };
    let at_lo = sector_at(b_lo)?;
    if at_lo != k_left {
        return Err(Error::Bracket {
            b: b_lo,
            expected: k_left,
            found: at_lo,
        });
    }
    let at_hi = sector_at(b_hi)?;
    if at_hi != k_right {
        return Err(Error::Bracket {
            b: b_hi,
            expected: k_right,
            found: at_hi,
        });
    }
    let (mut lo, mut hi) = (b_lo, b_hi);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if sector_at(mid)? == k_left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
