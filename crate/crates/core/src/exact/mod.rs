//! Exact ground state at the integrable point `δg = −t` (`g = 0`).
//!
//! There the doublon number is conserved and the ground state is a
//! phase-separated two-fluid state: a core of length `L_h` holding `N_d`
//! dressed molecules plus `L_h − N_d` unpaired atoms, and a shell of single
//! atoms. Both fluids are free spinless bands, so in the thermodynamic limit
//! the energy per site is a closed function of `(n_d, l_h)`, minimized here
//! subject to the pair cap `n_d ≤ n(1 − p)/2`.
//!
//! The core band enters with `|t_ad|`: on a bipartite chain the sign of a
//! uniform hopping is a gauge choice.

mod functional;
mod minimize;
mod phase;
mod scan;

pub use functional::{densities, energy_functional, stationary_pair_density, VariationalPoint};
pub use minimize::{
    critical_polarization, minimize_ground_state, nd_of_p, ExactSolution, ExactSolver,
    MinimizerConfig, CONSTRAINT_TIE_TOL, ENERGY_TIE_TOL,
};
pub use phase::{classify_phase, PhaseLabel, CLASSIFY_TOL};
pub use scan::{linspace, scan_phase_diagram, AnalyticLines, PhaseDiagramGrid};
