//! Ground-state observables: pair density, density–density correlations
//! from one reference site, the static charge structure factor and the
//! charge gap. All expectations are diagonal in the occupation basis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ed::{ground_state_lanczos, LanczosOptions, SectorBasis, StateVector};
use crate::error::{Error, Result};
use crate::lattice::{ModelParams, Sector};

/// Largest tolerated imaginary part of `N(q)`.
pub const IMAGINARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSet {
    pub n_d: f64,
    /// Reference site of the correlator.
    pub j: usize,
    /// `C(r) = ⟨n_j n_{j+r}⟩ − ⟨n_j⟩⟨n_{j+r}⟩`, `r = 0..L`.
    pub corr: Vec<f64>,
    /// `N(q_k)` at `q_k = 2πk/L`, `k = 0..L`.
    pub nq: Vec<f64>,
    pub peak_q: f64,
}

/// Everything at once, with the correlator measured from site `j`.
pub fn measure(state: &StateVector, basis: &SectorBasis, j: usize) -> Result<ObservableSet> {
    let n_d = pair_density(state, basis)?;
    let corr = density_correlations(state, basis, j)?;
    let nq = structure_factor(&corr)?;
    let peak_q = peak_momentum(&nq);
    Ok(ObservableSet {
        n_d,
        j,
        corr,
        nq,
        peak_q,
    })
}

/// Doubly occupied sites per site, `(1/L) Σ_i ⟨n_{i↑} n_{i↓}⟩`.
pub fn pair_density(state: &StateVector, basis: &SectorBasis) -> Result<f64> {
    state.check_basis(basis)?;
    let total: f64 = basis
        .states()
        .zip(state.amplitudes())
        .map(|((up, dn), a)| a * a * (up & dn).count_ones() as f64)
        .sum();
    Ok(total / basis.l() as f64)
}

/// Connected density correlator from site `j`, sites taken mod `L`.
pub fn density_correlations(state: &StateVector, basis: &SectorBasis, j: usize) -> Result<Vec<f64>> {
    state.check_basis(basis)?;
    let l = basis.l();
    if j >= l {
        return Err(Error::InvalidParameter(format!("reference site {j} outside 0..{l}")));
    }
    let mut pair = vec![0.0; l];
    let mut mean = vec![0.0; l];
    let mut occ = vec![0.0; l];
    for ((up, dn), a) in basis.states().zip(state.amplitudes()) {
        let w = a * a;
        if w == 0.0 {
            continue;
        }
        for (i, o) in occ.iter_mut().enumerate() {
            *o = (((up >> i) & 1) + ((dn >> i) & 1)) as f64;
        }
        let nj = occ[j];
        for r in 0..l {
            let ni = occ[(j + r) % l];
            mean[r] += w * ni;
            pair[r] += w * nj * ni;
        }
    }
    let nj = mean[0];
    Ok((0..l).map(|r| pair[r] - nj * mean[r]).collect())
}

/// `N(q_k) = Σ_r e^{i q_k r} C(r)` on the `L` ring momenta; fails if any
/// imaginary part exceeds [`IMAGINARY_TOL`].
pub fn structure_factor(corr: &[f64]) -> Result<Vec<f64>> {
    let l = corr.len();
    (0..l)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (r, c) in corr.iter().enumerate() {
                // reduce k·r mod L first so the phase stays exact for large rings
                let phase = 2.0 * PI * ((k * r) % l) as f64 / l as f64;
                re += c * phase.cos();
                im += c * phase.sin();
            }
            if im.abs() > IMAGINARY_TOL {
                return Err(Error::ImaginaryResidue { k, residue: im });
            }
            Ok(re)
        })
        .collect()
}

/// Index `k ∈ 1..=L/2` of the largest `N(q_k)`; ties go to the smaller `k`.
pub fn peak_index(nq: &[f64]) -> usize {
    let half = nq.len() / 2;
    let mut best = 1.min(half);
    for k in 1..=half {
        if nq[k] > nq[best] {
            best = k;
        }
    }
    best
}

/// Momentum `2πk/L` of [`peak_index`].
pub fn peak_momentum(nq: &[f64]) -> f64 {
    2.0 * PI * peak_index(nq) as f64 / nq.len() as f64
}

/// Sector with `total` atoms split as evenly as possible, majority up.
pub fn balanced_sector(l: usize, total: usize) -> Result<Sector> {
    if total > 2 * l {
        return Err(Error::InvalidParameter(format!("{total} atoms do not fit on {l} sites")));
    }
    Sector::new(l, total - total / 2, total / 2)
}

/// `E₀(N+1) + E₀(N−1) − 2E₀(N)` from three Lanczos ground states.
pub fn charge_gap(params: &ModelParams, l: usize, n_atoms: usize, options: &LanczosOptions) -> Result<f64> {
    if n_atoms == 0 || n_atoms + 1 > 2 * l {
        return Err(Error::InvalidParameter(format!(
            "charge gap needs 0 < N < 2L, got N = {n_atoms} on L = {l}"
        )));
    }
    let e0 = |total: usize| -> Result<f64> {
        let basis = SectorBasis::new(balanced_sector(l, total)?)?;
        Ok(ground_state_lanczos(params, &basis, options)?.0.e0)
    };
    Ok(e0(n_atoms + 1)? + e0(n_atoms - 1)? - 2.0 * e0(n_atoms)?)
}
