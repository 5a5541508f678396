use std::fmt;
use std::path::PathBuf;

use flp_core::Error as CoreError;

/// Everything that ends a run, with its process exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: Option<PathBuf>, source: std::io::Error },
    Serialize(String),
    Solver(CoreError),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Serialize(_) => 4,
            CliError::Solver(e) => match e {
                CoreError::InvalidParameter(_) => 10,
                CoreError::NonIntegerSector { .. } => 11,
                CoreError::InfeasibleFilling { .. } => 12,
                CoreError::InfeasiblePoint { .. } => 13,
                CoreError::IntegrablePointRequired { .. } => 14,
                CoreError::NoInteriorSolution { .. } => 15,
                CoreError::UnclassifiablePoint { .. } => 16,
                CoreError::ScanCell { .. } => 17,
                CoreError::DimensionTooLarge { .. } => 18,
                CoreError::BasisMismatch { .. } => 19,
                CoreError::NotConverged { .. } => 20,
                CoreError::ImaginaryResidue { .. } => 21,
                CoreError::Checkpoint(_) => 22,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io { path: Some(p), source } => write!(f, "{}: {source}", p.display()),
            CliError::Io { path: None, source } => write!(f, "stdout: {source}"),
            CliError::Serialize(m) => write!(f, "serialization failed: {m}"),
            CliError::Solver(CoreError::ImaginaryResidue { k, residue }) => write!(
                f,
                "structure factor has imaginary residue {residue} at k = {k} (degenerate ground state? try another --site or seed set)"
            ),
            CliError::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Solver(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
