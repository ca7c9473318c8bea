use num_complex::Complex64;

/// Error type shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{context}: input must be finite")]
    NonFinite { context: &'static str },

    #[error("source strength must be finite and nonnegative, got {a}")]
    InvalidSource { a: f64 },

    #[error(
        "the two-band support is only defined for a > 1 (or the a = 0 semicircle); got a = {a}"
    )]
    UnsupportedRegime { a: f64 },

    #[error("interval [{lo}, {hi}] is {reason}")]
    BadInterval { lo: f64, hi: f64, reason: &'static str },

    #[error(
        "interval [{lo}, {hi}] is not strictly inside the bulk: bands are \
         ({z2}, {z1}) and its mirror with margin {margin}; pick intervals inside \
         the bands reported by support_edges"
    )]
    BulkIntervalRequired {
        lo: f64,
        hi: f64,
        z2: f64,
        z1: f64,
        margin: f64,
    },

    #[error("eta = {eta} is below the admissible floor {floor}")]
    EtaTooSmall { eta: f64, floor: f64 },

    #[error(
        "fixed-point solve at z = {z} stopped after {iterations} iterations \
         with residual {residual:.3e}"
    )]
    FixedPointDiverged {
        z: Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error(
        "boundary values at x = {x} did not settle along the eta sequence: \
         last change {change:.3e} (likely near a support edge)"
    )]
    BoundaryNotSettled { x: f64, change: f64 },

    #[error("matrix dimension must be even and at least 2, got {n}")]
    OddDimension { n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("QL iteration exceeded {sweeps} sweeps at eigenvalue index {index}")]
    EigenSweepBudget { index: usize, sweeps: usize },

    #[error(
        "spectrum too clustered for a first-order derivative check: \
         min gap {gap:.3e} is not above 10 h = {threshold:.3e}"
    )]
    ClusteredSpectrum { gap: f64, threshold: f64 },

    #[error("index out of range: {context} = {index}, n = {n}")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        n: usize,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
