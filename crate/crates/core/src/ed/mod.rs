//! Sector-resolved exact diagonalization of the full correlated-hopping
//! Hamiltonian on periodic chains.

mod basis;
mod checkpoint;
mod dense;
mod hamiltonian;
mod lanczos;
mod tridiag;

pub use basis::{binomial, SectorBasis, SpeciesBasis, DEFAULT_MAX_DIMENSION};
pub use checkpoint::{read_checkpoint, write_checkpoint, MAGIC};
pub use dense::{dense_ground_state, dense_oracle, dense_spectrum, DENSE_MAX_DIMENSION};
pub use hamiltonian::{apply_hamiltonian, translate, Hamiltonian, HopAmplitudes, LinearOperator, StateVector};
pub use lanczos::{
    ground_state_lanczos, ground_state_lanczos_from, lowest_eigenpair, random_start, LanczosOptions,
    LanczosReport,
};
