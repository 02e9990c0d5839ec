use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site count {n} outside supported range {min}..={max}")]
    SiteCount { n: usize, min: usize, max: usize },

    #[error("excitation number {k} out of range for {n} sites")]
    SectorRange { k: usize, n: usize },

    #[error("state {state:#b} does not have Hamming weight {expected}")]
    WeightMismatch { state: u64, expected: usize },

    #[error("expected {expected} site vectors, got {got}")]
    VectorLength { expected: usize, got: usize },

    #[error("angle {value} outside [0, pi]")]
    AngleRange { value: f64 },

    #[error("full-space matrix capped at 8 sites, got {n}")]
    FullMatrixCap { n: usize },

    #[error("k=1 sector window requires jx > jz, got jx={jx}, jz={jz}")]
    WindowRegime { jx: f64, jz: f64 },

    #[error("eigensolver stalled at off-diagonal residual {residual:.3e} (target {target:.3e})")]
    Convergence { residual: f64, target: f64 },

    #[error("boundary bracket invalid: sector is {found} at b={b}, expected {expected}")]
    Bracket {
        b: f64,
        expected: usize,
        found: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
