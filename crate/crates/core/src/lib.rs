//! Ground-state toolkit for the correlated-hopping (Simon–Aligia) Hubbard chain
//! with imbalanced species.
//!
//! - [`lattice`]: coupling conventions and finite-lattice sectors.
//! - [`exact`]: thermodynamic-limit variational solution at the integrable
//!   point `g = 0` and Δ–p phase-diagram scans.
//! - [`ed`]: matrix-free exact diagonalization (Lanczos + dense oracle).
//! - [`observables`]: pair density, density correlations, charge structure
//!   factor and charge gap.

pub mod ed;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod observables;

pub use error::{Error, Result};
pub use lattice::{FillingSpec, ModelParams, Sector};
