use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no integer sector realizes n = {n}, p = {p} on L = {l} sites")]
    NonIntegerSector { l: usize, n: f64, p: f64 },

    #[error("filling n = {n} cannot carry polarization p = {p} (majority species would exceed one per site)")]
    InfeasibleFilling { n: f64, p: f64 },

    #[error("variational point (n_d = {n_d}, l_h = {l_h}) is infeasible at n = {n}: {reason}")]
    InfeasiblePoint {
        n: f64,
        n_d: f64,
        l_h: f64,
        reason: &'static str,
    },

    #[error("exact solution requires delta_g = -t (got delta_g = {delta_g}); use the ED engine instead")]
    IntegrablePointRequired { delta_g: f64 },

    #[error("stationarity argument {x} lies outside [-1, 1]; optimum is on the boundary")]
    NoInteriorSolution { x: f64 },

    #[error("no phase rule matches (n = {n}, p = {p}, n_d = {n_d}, l_h = {l_h})")]
    UnclassifiablePoint { n: f64, p: f64, n_d: f64, l_h: f64 },

    #[error("scan cell (delta = {delta}, p = {p}) failed: {source}")]
    ScanCell {
        delta: f64,
        p: f64,
        source: Box<Error>,
    },

    #[error("sector dimension {dimension} exceeds the limit {limit}")]
    DimensionTooLarge { dimension: u128, limit: u128 },

    #[error("vector of length {got} does not match basis dimension {expected}")]
    BasisMismatch { expected: usize, got: usize },

    #[error("Lanczos did not converge: e0 = {e0}, residual = {residual} after {iterations} iterations")]
    NotConverged {
        e0: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("structure factor has imaginary residue {residue} at k = {k}")]
    ImaginaryResidue { k: usize, residue: f64 },

    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
