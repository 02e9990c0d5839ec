//! The 2n-term joint-measurement Bell operator, its ground-state expectation,
//! the closed-form single-excitation violation, and the angle optimizer.
//!
//! All measurements are rank-1 projectors onto real qubit vectors
//! parametrized by four angles: site 1 measures along a(theta1) or b(theta2),
//! sites 2..n share a'(theta3) or b'(theta4). A positive maximum of the
//! operator expectation over the angles certifies genuine multipartite
//! nonlocality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::spectral::GroundState;
use crate::Result;

use std::f64::consts::PI;

/// Values above this count as a violation; smaller positives are treated as
/// optimizer noise around exactly-zero cases.
pub const VIOLATION_THRESHOLD: f64 = 1e-9;

/// The analytic single-excitation formula stays numerically harmless far
/// beyond the exact-diagonalization range.
pub const MAX_ANALYTIC_SITES: usize = 64;
pub const MIN_ANALYTIC_SITES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
}

impl MeasurementAngles {
    pub fn new(theta1: f64, theta2: f64, theta3: f64, theta4: f64) -> Result<Self> {
        for &t in &[theta1, theta2, theta3, theta4] {
            if !(0.0..=PI).contains(&t) {
                return Err(Error::AngleRange { value: t });
            }
        }
        Ok(MeasurementAngles {
            theta1,
            theta2,
            theta3,
            theta4,
        })
    }

    fn from_array(t: [f64; 4]) -> Self {
        MeasurementAngles {
            theta1: t[0],
            theta2: t[1],
            theta3: t[2],
            theta4: t[3],
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.theta1, self.theta2, self.theta3, self.theta4]
    }
}

/// Real measurement vectors on the (|0>, |1>) basis. b_bar and b_prime_bar
/// are the exact orthogonal complements of b and b_prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementVectors {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub b_bar: [f64; 2],
    pub a_prime: [f64; 2],
    pub b_prime: [f64; 2],
    pub b_prime_bar: [f64; 2],
}

pub fn vectors_from_angles(t: &MeasurementAngles) -> MeasurementVectors {
    MeasurementVectors {
        a: [t.theta1.cos(), t.theta1.sin()],
        b: [t.theta2.cos(), t.theta2.sin()],
        b_bar: [t.theta2.sin(), -t.theta2.cos()],
        a_prime: [t.theta3.cos(), t.theta3.sin()],
        b_prime: [t.theta4.cos(), t.theta4.sin()],
        b_prime_bar: [t.theta4.sin(), -t.theta4.cos()],
    }
}

/// One projector product in the operator: sign times the rank-1 projectors
/// onto site_vectors[j] at site j+1.
#[derive(Debug, Clone)]
pub struct BellTerm {
    pub sign: f64,
    pub site_vectors: Vec<[f64; 2]>,
}

/// The 2n terms: the positive all-(a, a') term, the n terms replacing a->b
/// at site 1 or a'->b' at one site j >= 2, and the n-1 terms pairing
/// b_bar at site 1 with b_prime_bar at one site j >= 2.
pub fn bell_terms(n: usize, v: &MeasurementVectors) -> Vec<BellTerm> {
    let mut terms = Vec::with_capacity(2 * n);
    let all_a = |first: [f64; 2]| {
        let mut sv = vec![v.a_prime; n];
        sv[0] = first;
        sv
    };
    terms.push(BellTerm {
        sign: 1.0,
        site_vectors: all_a(v.a),
    });
    terms.push(BellTerm {
        sign: -1.0,
        site_vectors: all_a(v.b),
    });
    for j in 1..n {
        let mut sv = all_a(v.a);
        sv[j] = v.b_prime;
        terms.push(BellTerm {
            sign: -1.0,
            site_vectors: sv,
        });
    }
    for j in 1..n {
        let mut sv = all_a(v.b_bar);
        sv[j] = v.b_prime_bar;
        terms.push(BellTerm {
            sign: -1.0,
            site_vectors: sv,
        });
    }
    terms
}

/// Overlap of a product vector with the sector state: sum over basis states
/// of amplitude times the product of per-site vector components.
pub fn product_overlap(g: &GroundState, site_vectors: &[[f64; 2]]) -> Result<f64> {
    let n = g.n.get();
    if site_vectors.len() != n {
        return Err(Error::VectorLength {
            expected: n,
            got: site_vectors.len(),
        });
    }
    let mut total = 0.0;
    for (&s, &amp) in g.basis.states.iter().zip(&g.amplitudes) {
        let mut prod = amp;
        for (j, vec) in site_vectors.iter().enumerate() {
            prod *= vec[((s >> j) & 1) as usize];
        }
        total += prod;
    }
    Ok(total)
}

/// Operator expectation on the state: every term is a product of rank-1
/// projectors, so its expectation is the squared product overlap.
pub fn expectation(g: &GroundState, t: &MeasurementAngles) -> f64 {
    let v = vectors_from_angles(t);
    bell_terms(g.n.get(), &v)
        .iter()
        .map(|term| {
            let o = product_overlap(g, &term.site_vectors).expect("term has n site vectors");
            term.sign * o * o
        })
        .sum()
}

fn analytic_w_raw(n: usize, t: &[f64; 4]) -> f64 {
    let nf = n as f64;
    let (s1, c1) = t[0].sin_cos();
    let (s2, c2) = t[1].sin_cos();
    let (s3, c3) = t[2].sin_cos();
    let (s4, c4) = t[3].sin_cos();
    let p1 = c3.powi(n as i32 - 1);
    let p2 = c3.powi(n as i32 - 2);
    let p3 = c3.powi(n as i32 - 3);
    let b1 = s1 * p1 + (nf - 1.0) * s3 * c1 * p2;
    let b2 = s2 * p1 + (nf - 1.0) * s3 * c2 * p2;
    let b3 = s1 * c4 * p2 + s4 * c1 * p2 + (nf - 2.0) * s3 * c1 * c4 * p3;
    let b4 = s4 * c2 * p2 + s2 * c4 * p2 - (nf - 2.0) * s2 * s3 * s4 * p3;
    (b1 * b1 - b2 * b2 - (nf - 1.0) * (b3 * b3 + b4 * b4)) / nf
}

/// Closed-form violation of the uniform single-excitation (W-like) ground
/// state, valid whenever that state is the global ground state.
pub fn analytic_w(n: usize, t: &MeasurementAngles) -> Result<f64> {
    if !(MIN_ANALYTIC_SITES..=MAX_ANALYTIC_SITES).contains(&n) {
        return Err(Error::SiteCount {
            n,
            min: MIN_ANALYTIC_SITES,
            max: MAX_ANALYTIC_SITES,
        });
    }
    Ok(analytic_w_raw(n, &t.as_array()))
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    /// Number of seeded random starts added on top of the deterministic
    /// grid and structure seeds.
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub spread_tol: f64,
    pub value_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            seed: 42,
            max_iters: 2000,
            spread_tol: 1e-10,
            value_tol: 1e-8,
        }
    }
}

pub enum BellTarget<'a> {
    Ground(&'a GroundState),
    AnalyticW(usize),
}

#[derive(Debug, Clone)]
pub struct ViolationResult {
    /// Best expectation found; at least as large as the expectation at every
    /// angle probed during the run.
    pub value: f64,
    pub angles: MeasurementAngles,
    pub evaluations: u64,
    pub n: usize,
    /// Sector of the analyzed ground state; None for the analytic target.
    pub sector: Option<usize>,
    pub seed: u64,
}

impl ViolationResult {
    pub fn is_violation(&self) -> bool {
        self.value > VIOLATION_THRESHOLD
    }
}

fn clamp_angles(x: &[f64; 4]) -> [f64; 4] {
    [
        x[0].clamp(0.0, PI),
        x[1].clamp(0.0, PI),
        x[2].clamp(0.0, PI),
        x[3].clamp(0.0, PI),
    ]
}

/// Maximize over the clamped box [0, pi]^4 with the standard simplex moves
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). Returns the
/// best vertex and its value; terminates on value spread or iteration cap.
fn nelder_mead(
    f: &mut dyn FnMut(&[f64; 4]) -> f64,
    start: [f64; 4],
    step: f64,
    max_iters: usize,
    spread_tol: f64,
) -> ([f64; 4], f64) {
    let mut eval = |x: &[f64; 4]| f(&clamp_angles(x));
    let mut simplex: Vec<[f64; 4]> = Vec::with_capacity(5);
    simplex.push(start);
    for i in 0..4 {
        let mut v = start;
        v[i] = if v[i] + step <= PI {
            v[i] + step
        } else {
            v[i] - step
        };
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(&mut eval).collect();
    for _ in 0..max_iters {
        let mut order: Vec<usize> = (0..5).collect();
        order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
        simplex = order.iter().map(|&i| simplex[i]).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if vals[0] - vals[4] < spread_tol {
            break;
        }
        let mut centroid = [0.0f64; 4];
        for v in &simplex[..4] {
            for d in 0..4 {
                centroid[d] += v[d] / 4.0;
            }
        }
        let worst = simplex[4];
        let mut xr = [0.0f64; 4];
        for d in 0..4 {
            xr[d] = centroid[d] + (centroid[d] - worst[d]);
        }
        let fr = eval(&xr);
        if fr > vals[0] {
            let mut xe = [0.0f64; 4];
            for d in 0..4 {
                xe[d] = centroid[d] + 2.0 * (centroid[d] - worst[d]);
            }
            let fe = eval(&xe);
            if fe > fr {
                simplex[4] = xe;
                vals[4] = fe;
            } else {
                simplex[4] = xr;
                vals[4] = fr;
            }
        } else if fr > vals[3] {
            simplex[4] = xr;
            vals[4] = fr;
        } else {
            let mut xc = [0.0f64; 4];
            if fr > vals[4] {
                for d in 0..4 {
                    xc[d] = centroid[d] + 0.5 * (xr[d] - centroid[d]);
                }
            } else {
                for d in 0..4 {
                    xc[d] = centroid[d] - 0.5 * (centroid[d] - worst[d]);
                }
            }
            let fc = eval(&xc);
            if fc > fr.min(vals[4]) {
                simplex[4] = xc;
                vals[4] = fc;
            } else {
                let best = simplex[0];
                for i in 1..5 {
                    for d in 0..4 {
                        simplex[i][d] = best[d] + 0.5 * (simplex[i][d] - best[d]);
                    }
                    let v = simplex[i];
                    vals[i] = eval(&v);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..5 {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    (clamp_angles(&simplex[best]), vals[best])
}

fn wrap_pi(x: f64) -> f64 {
    x.rem_euclid(PI)
}

/// Start points for the multi-start search, each with a simplex step suited
/// to its basin scale.
fn seed_points(
    n: usize,
    cfg: &OptimizerConfig,
    f: &mut dyn FnMut(&[f64; 4]) -> f64,
) -> Vec<([f64; 4], f64)> {
    let mut seeds: Vec<([f64; 4], f64)> = Vec::new();
    let coarse = PI / 8.0;

    // coarse 9^4 grid scan, best 8 points by value then lexicographic angles
    let mut scored: Vec<(f64, [f64; 4])> = Vec::with_capacity(9 * 9 * 9 * 9);
    for i1 in 0..9 {
        for i2 in 0..9 {
            for i3 in 0..9 {
                for i4 in 0..9 {
                    let th = [
                        i1 as f64 * coarse,
                        i2 as f64 * coarse,
                        i3 as f64 * coarse,
                        i4 as f64 * coarse,
                    ];
                    scored.push((f(&th), th));
                }
            }
        }
    }
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then_with(|| a.1.partial_cmp(&b.1).unwrap())
    });
    for (_, th) in scored.into_iter().take(8) {
        seeds.push((th, coarse));
    }

    // the violation landscape concentrates near theta2 = theta1 - O(1/n)
    // with theta4 complementary and theta3 within O(1/n) of the boundary;
    // cover that family and its reflection and spin-flip images
    let push_variants = |seeds: &mut Vec<([f64; 4], f64)>, base: [f64; 4], step: f64| {
        let refl = [PI - base[0], PI - base[1], PI - base[2], PI - base[3]];
        let flip = [
            wrap_pi(PI / 2.0 - base[0]),
            wrap_pi(PI / 2.0 - base[1]),
            wrap_pi(PI / 2.0 - base[2]),
            wrap_pi(PI / 2.0 - base[3]),
        ];
        let flip_refl = [
            wrap_pi(PI / 2.0 + base[0]),
            wrap_pi(PI / 2.0 + base[1]),
            wrap_pi(PI / 2.0 + base[2]),
            wrap_pi(PI / 2.0 + base[3]),
        ];
        for v in [base, refl, flip, flip_refl] {
            seeds.push((clamp_angles(&v), step));
        }
    };
    let nf = n as f64;
    let d = 1.0 / (nf - 1.0);
    let t3 = 0.5 / nf;
    for k in 1..8 {
        let t1 = k as f64 * coarse;
        push_variants(&mut seeds, [t1, t1 - d, t3, PI - t1], coarse);
    }
    // narrow ridge representatives; the basin width scales like 1/n, so the
    // initial simplex must too
    let ridge_step = (0.35 / nf).max(0.004);
    for (a1, a2, c, a4) in [
        (0.98, 0.78, 0.5, 2.04),
        (0.95, 0.72, 0.8, 2.10),
        (1.0, 0.8, 0.35, 2.0),
    ] {
        push_variants(&mut seeds, [a1, a2, c / nf, a4], ridge_step);
    }

    // seeded random starts, one independent stream per index so a larger
    // restart budget extends rather than reshuffles the start list
    for i in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64 + 1);
        let th = [
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * PI,
        ];
        seeds.push((th, coarse));
    }
    seeds
}

/// Multi-start maximization of the operator expectation (or the analytic
/// single-excitation formula) over the four measurement angles.
pub fn maximize(target: BellTarget, cfg: &OptimizerConfig) -> Result<ViolationResult> {
    let (n, sector) = match &target {
        BellTarget::Ground(g) => (g.n.get(), Some(g.k)),
        BellTarget::AnalyticW(n) => {
            if !(MIN_ANALYTIC_SITES..=MAX_ANALYTIC_SITES).contains(n) {
                return Err(Error::SiteCount {
                    n: *n,
                    min: MIN_ANALYTIC_SITES,
                    max: MAX_ANALYTIC_SITES,
                });
            }
            (*n, None)
        }
    };
    let mut evaluations: u64 = 0;
    let mut objective = |th: &[f64; 4]| -> f64 {
        evaluations += 1;
        match &target {
            BellTarget::Ground(g) => expectation(g, &MeasurementAngles::from_array(*th)),
            BellTarget::AnalyticW(n) => analytic_w_raw(*n, th),
        }
    };
    let seeds = seed_points(n, cfg, &mut objective);
    let mut best_val = f64::NEG_INFINITY;
    let mut best_angles = [0.0f64; 4];
    for (start, step) in seeds {
        let (x, v) = nelder_mead(&mut objective, start, step, cfg.max_iters, cfg.spread_tol);
        // merge by value, then lexicographic angles, independent of ordering
        if v > best_val || (v == best_val && x < best_angles) {
            best_val = v;
            best_angles = x;
        }
    }
    Ok(ViolationResult {
        value: best_val,
        angles: MeasurementAngles::from_array(best_angles),
        evaluations,
        n,
        sector,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_sector, SiteCount};
    use crate::hamiltonian::ChainParams;
    use crate::spectral::global_ground;

    // frozen after cross-checking the optimizer output against an
    // independent multistart run and the 101^4 grid oracle (regenerate via
    // the ignored grid_oracle_brackets_goldens test)
    const GOLDEN_V4: f64 = 0.040569415021;
    const GOLDEN_V8: f64 = 0.013174227724;
    const GOLDEN_V16: f64 = 0.006482062995;

    fn angles(t1: f64, t2: f64, t3: f64, t4: f64) -> MeasurementAngles {
        MeasurementAngles::new(t1, t2, t3, t4).unwrap()
    }

    fn uniform_k1(n: usize) -> GroundState {
        let nn = SiteCount::new(n).unwrap();
        let basis = enumerate_sector(nn, 1).unwrap();
        let amp = 1.0 / (n as f64).sqrt();
        GroundState {
            n: nn,
            k: 1,
            amplitudes: vec![amp; basis.len()],
            basis,
            energy: 0.0,
            degenerate: false,
            gap: 0.0,
        }
    }

    fn product_k0(n: usize) -> GroundState {
        let nn = SiteCount::new(n).unwrap();
        let basis = enumerate_sector(nn, 0).unwrap();
        GroundState {
            n: nn,
            k: 0,
            amplitudes: vec![1.0],
            basis,
            energy: 0.0,
            degenerate: false,
            gap: 0.0,
        }
    }

    // deterministic angle sampler for property loops
    fn sample_angles(seed: u64, count: usize) -> Vec<MeasurementAngles> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                angles(
                    rng.gen::<f64>() * PI,
                    rng.gen::<f64>() * PI,
                    rng.gen::<f64>() * PI,
                    rng.gen::<f64>() * PI,
                )
            })
            .collect()
    }

    #[test]
    fn vectors_at_zero_angles() {
        let v = vectors_from_angles(&angles(0.0, 0.0, 0.0, 0.0));
        assert_eq!(v.a, [1.0, 0.0]);
        assert_eq!(v.b, [1.0, 0.0]);
        assert_eq!(v.a_prime, [1.0, 0.0]);
        assert_eq!(v.b_prime, [1.0, 0.0]);
        assert_eq!(v.b_bar, [0.0, -1.0]);
        assert_eq!(v.b_prime_bar, [0.0, -1.0]);
    }

    #[test]
    fn vectors_unit_norm_and_orthogonal() {
        for t in sample_angles(11, 50) {
            let v = vectors_from_angles(&t);
            for vec in [v.a, v.b, v.b_bar, v.a_prime, v.b_prime, v.b_prime_bar] {
                assert!((vec[0] * vec[0] + vec[1] * vec[1] - 1.0).abs() < 1e-15);
            }
            // same products subtracted, so exactly zero in floating point
            assert_eq!(v.b[0] * v.b_bar[0] + v.b[1] * v.b_bar[1], 0.0);
            assert_eq!(
                v.b_prime[0] * v.b_prime_bar[0] + v.b_prime[1] * v.b_prime_bar[1],
                0.0
            );
        }
        let v = vectors_from_angles(&angles(0.0, PI / 2.0, 0.0, 0.0));
        assert!((v.b[0]).abs() < 1e-16 && (v.b[1] - 1.0).abs() < 1e-16);
        assert!((v.b_bar[0] - 1.0).abs() < 1e-16 && v.b_bar[1].abs() < 1e-16);
    }

    #[test]
    fn angle_validation() {
        assert!(MeasurementAngles::new(-0.1, 0.0, 0.0, 0.0).is_err());
        assert!(MeasurementAngles::new(0.0, 0.0, PI + 0.1, 0.0).is_err());
        assert!(MeasurementAngles::new(0.0, PI, 0.5, 0.0).is_ok());
    }

    #[test]
    fn term_structure() {
        let v = vectors_from_angles(&angles(0.3, 0.7, 1.1, 1.9));
        let t3 = bell_terms(3, &v);
        assert_eq!(t3.len(), 6);
        let signs: Vec<f64> = t3.iter().map(|t| t.sign).collect();
        assert_eq!(signs, vec![1.0, -1.0, -1.0, -1.0, -1.0, -1.0]);

        let t6 = bell_terms(6, &v);
        assert_eq!(t6.len(), 12);
        let with_bar: Vec<&BellTerm> = t6
            .iter()
            .filter(|t| t.site_vectors[1..].contains(&v.b_prime_bar))
            .collect();
        assert_eq!(with_bar.len(), 5);
        for t in with_bar {
            assert_eq!(t.site_vectors[0], v.b_bar);
        }

        let t8 = bell_terms(8, &v);
        assert_eq!(t8[0].sign, 1.0);
        assert_eq!(t8[0].site_vectors[0], v.a);
        for j in 1..8 {
            assert_eq!(t8[0].site_vectors[j], v.a_prime);
        }
    }

    #[test]
    fn overlap_product_state() {
        let g = product_k0(3);
        for t in [0.4f64, 1.3] {
            let sv = vec![[t.cos(), t.sin()]; 3];
            let o = product_overlap(&g, &sv).unwrap();
            assert!((o - t.cos().powi(3)).abs() < 1e-15);
        }
    }

    #[test]
    fn overlap_uniform_single_excitation() {
        let g = uniform_k1(3);
        let t = 0.8f64;
        let sv = vec![[t.cos(), t.sin()]; 3];
        let o = product_overlap(&g, &sv).unwrap();
        let expect = 3f64.sqrt() * t.cos().powi(2) * t.sin();
        assert!((o - expect).abs() < 1e-15);

        let o0 = product_overlap(&g, &[[1.0, 0.0]; 3]).unwrap();
        assert_eq!(o0, 0.0);
    }

    #[test]
    fn overlap_length_mismatch() {
        let g = uniform_k1(3);
        assert!(product_overlap(&g, &[[1.0, 0.0]; 4]).is_err());
    }

    #[test]
    fn expectation_zero_angles_on_w_state() {
        let g = uniform_k1(6);
        assert_eq!(expectation(&g, &angles(0.0, 0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn expectation_nonpositive_when_measurements_coincide() {
        for (i, t) in sample_angles(5, 30).into_iter().enumerate() {
            let g = uniform_k1(4 + i % 4);
            let same = angles(t.theta1, t.theta1, t.theta3, t.theta3);
            assert!(expectation(&g, &same) <= 1e-14);
        }
    }

    #[test]
    fn expectation_within_operator_bounds() {
        let g = uniform_k1(5);
        for t in sample_angles(17, 100) {
            let e = expectation(&g, &t);
            assert!((-(2.0 * 5.0) - 1e-12..=1.0 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn analytic_matches_pipeline_on_uniform_states() {
        for n in 4..=8 {
            let g = uniform_k1(n);
            for t in sample_angles(n as u64, 40) {
                let lhs = expectation(&g, &t);
                let rhs = analytic_w(n, &t).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12, "n={n}: {lhs} vs {rhs} at {t:?}");
            }
        }
    }

    #[test]
    fn analytic_range_and_degenerate_cases() {
        assert!(analytic_w(3, &angles(0.1, 0.2, 0.3, 0.4)).is_err());
        assert!(analytic_w(65, &angles(0.1, 0.2, 0.3, 0.4)).is_err());
        assert_eq!(analytic_w(10, &angles(0.0, 0.0, 0.0, 0.0)).unwrap(), 0.0);
        for t in sample_angles(23, 30) {
            let same = angles(t.theta1, t.theta1, t.theta3, t.theta4);
            assert!(analytic_w(7, &same).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn maximize_product_state_finds_no_violation() {
        let p = ChainParams::new(SiteCount::new(6).unwrap(), 2.0, -1.5);
        let g = global_ground(&p).unwrap();
        assert_eq!(g.k, 0);
        let r = maximize(BellTarget::Ground(&g), &OptimizerConfig::default()).unwrap();
        assert!(r.value <= VIOLATION_THRESHOLD);
        assert!(!r.is_violation());
    }

    #[test]
    fn maximize_analytic_goldens() {
        let cfg = OptimizerConfig::default();
        for (n, golden) in [(4, GOLDEN_V4), (8, GOLDEN_V8), (16, GOLDEN_V16)] {
            let r = maximize(BellTarget::AnalyticW(n), &cfg).unwrap();
            assert!(r.value > 0.0);
            assert!(
                (r.value - golden).abs() <= 1e-6,
                "n={n}: {} vs golden {golden}",
                r.value
            );
        }
    }

    #[test]
    fn maximize_is_deterministic_and_monotone_in_restarts() {
        let g = uniform_k1(6);
        let cfg8 = OptimizerConfig::default();
        let r1 = maximize(BellTarget::Ground(&g), &cfg8).unwrap();
        let r2 = maximize(BellTarget::Ground(&g), &cfg8).unwrap();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.angles, r2.angles);
        assert_eq!(r1.evaluations, r2.evaluations);

        let mut last = f64::NEG_INFINITY;
        for restarts in [0, 2, 8, 16] {
            let cfg = OptimizerConfig {
                restarts,
                ..OptimizerConfig::default()
            };
            let r = maximize(BellTarget::Ground(&g), &cfg).unwrap();
            assert!(r.value >= last);
            last = r.value;
        }
    }

    #[test]
    fn maximize_counts_at_least_the_grid() {
        let r = maximize(BellTarget::AnalyticW(6), &OptimizerConfig::default()).unwrap();
        assert!(r.evaluations > 9u64.pow(4));
        assert!(r.sector.is_none());
        assert_eq!(r.n, 6);
    }

    #[test]
    fn value_dominates_expectation_at_reported_angles() {
        let g = uniform_k1(7);
        let r = maximize(BellTarget::Ground(&g), &OptimizerConfig::default()).unwrap();
        assert!(r.value >= expectation(&g, &r.angles) - 1e-15);
    }

    #[test]
    fn cross_path_consistency_at_six_sites() {
        let p = ChainParams::new(SiteCount::new(6).unwrap(), 2.0, -0.8);
        let g = global_ground(&p).unwrap();
        assert_eq!(g.k, 1);
        let cfg = OptimizerConfig::default();
        let ed = maximize(BellTarget::Ground(&g), &cfg).unwrap();
        let an = maximize(BellTarget::AnalyticW(6), &cfg).unwrap();
        assert!((ed.value - an.value).abs() <= 1e-6);
    }

    #[test]
    fn plateau_same_sector_same_result() {
        let mk = |b: f64| {
            let p = ChainParams::new(SiteCount::new(6).unwrap(), 2.0, b);
            global_ground(&p).unwrap()
        };
        let (g1, g2) = (mk(-0.9), mk(-0.7));
        assert_eq!(g1.k, 1);
        assert_eq!(g2.k, 1);
        let cfg = OptimizerConfig::default();
        let r1 = maximize(BellTarget::Ground(&g1), &cfg).unwrap();
        let r2 = maximize(BellTarget::Ground(&g2), &cfg).unwrap();
        // the field term only shifts the sector diagonal, so the states
        // agree except for last-bit rounding in the rotation angles
        assert!((r1.value - r2.value).abs() <= 1e-10);
        for (a, b) in r1.angles.as_array().iter().zip(r2.angles.as_array()) {
            assert!((a - b).abs() <= 1e-5);
        }
    }

    #[test]
    fn reflection_pairs_agree_at_six_sites() {
        // mirrored fields put the ground state in the complementary sector
        let pairs = [(-0.8, 1), (-0.5, 2), (-0.1, 3)];
        for (b, k) in pairs {
            let g = global_ground(&ChainParams::new(SiteCount::new(6).unwrap(), 2.0, b)).unwrap();
            let gm = global_ground(&ChainParams::new(SiteCount::new(6).unwrap(), 2.0, -b)).unwrap();
            assert_eq!(g.k, k);
            assert_eq!(gm.k, 6 - k);
            let cfg = OptimizerConfig::default();
            let r = maximize(BellTarget::Ground(&g), &cfg).unwrap();
            let rm = maximize(BellTarget::Ground(&gm), &cfg).unwrap();
            assert!(
                (r.value - rm.value).abs() <= 1e-6,
                "k={k}: {} vs {}",
                r.value,
                rm.value
            );
        }
    }

    /// Regenerates the frozen goldens: exhaustive 101^4 grid scan bracketing
    /// the optimizer value from below. Run with --ignored; takes minutes.
    #[test]
    #[ignore]
    fn grid_oracle_brackets_goldens() {
        for (n, golden) in [(4, GOLDEN_V4), (8, GOLDEN_V8), (16, GOLDEN_V16)] {
            let mut grid_max = f64::NEG_INFINITY;
            let m = 101;
            let h = PI / (m as f64 - 1.0);
            for i1 in 0..m {
                for i2 in 0..m {
                    for i3 in 0..m {
                        for i4 in 0..m {
                            let v = analytic_w_raw(
                                n,
                                &[i1 as f64 * h, i2 as f64 * h, i3 as f64 * h, i4 as f64 * h],
                            );
                            if v > grid_max {
                                grid_max = v;
                            }
                        }
                    }
                }
            }
            // the grid undershoots the smooth maximum by O(h^2) curvature
            assert!(
                grid_max <= golden + 1e-12 && golden <= grid_max + 2e-3,
                "n={n}: grid {grid_max} vs golden {golden}"
            );
        }
    }
}
