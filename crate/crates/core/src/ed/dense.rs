//! Explicit diagonalization of small sectors, used as a verification oracle.

use faer::{Mat, Side};

use super::basis::SectorBasis;
use super::hamiltonian::{Hamiltonian, HopAmplitudes, StateVector};
use crate::error::{Error, Result};
use crate::lattice::ModelParams;

pub const DENSE_MAX_DIMENSION: usize = 4000;

fn assemble(hops: HopAmplitudes, basis: &SectorBasis) -> Result<Mat<f64>> {
    let dim = basis.dimension();
    if dim > DENSE_MAX_DIMENSION {
        return Err(Error::DimensionTooLarge {
            dimension: dim as u128,
            limit: DENSE_MAX_DIMENSION as u128,
        });
    }
    let m = Hamiltonian::with_amplitudes(hops, basis).to_dense();
    Ok(Mat::from_fn(dim, dim, |i, j| m[i * dim + j]))
}

fn failed() -> Error {
    Error::InvalidParameter("dense eigensolver did not converge".into())
}

/// Full spectrum, ascending.
pub fn dense_oracle(params: &ModelParams, basis: &SectorBasis) -> Result<Vec<f64>> {
    dense_spectrum(HopAmplitudes::from_params(params), basis)
}

/// Spectrum for raw hopping amplitudes (allows sign-flipped hops).
pub fn dense_spectrum(hops: HopAmplitudes, basis: &SectorBasis) -> Result<Vec<f64>> {
    let mut vals = assemble(hops, basis)?
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| failed())?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Lowest eigenpair by dense diagonalization.
pub fn dense_ground_state(params: &ModelParams, basis: &SectorBasis) -> Result<(f64, StateVector)> {
    let eig = assemble(HopAmplitudes::from_params(params), basis)?
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| failed())?;
    let s = eig.S().column_vector();
    let k = (0..s.nrows()).min_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap_or(0);
    let v: Vec<f64> = eig.U().col(k).iter().copied().collect();
    Ok((s[k], StateVector::new(basis, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Sector;

    fn basis(l: usize, u: usize, d: usize) -> SectorBasis {
        SectorBasis::new(Sector::new(l, u, d).unwrap()).unwrap()
    }

    #[test]
    fn vacuum() {
        let params = ModelParams::new(0.3, 0.2, 1.0).unwrap();
        assert_eq!(dense_oracle(&params, &basis(2, 0, 0)).unwrap(), vec![0.0]);
    }

    #[test]
    fn two_site_hubbard() {
        // hand diagonalization of the (1, 1) block on one bond:
        // {Δ/2 − √((Δ/2)² + 4t²), 0, Δ, Δ/2 + √((Δ/2)² + 4t²)}
        for delta in [-3.0, 0.0, 0.7, 4.0] {
            let params = ModelParams::new(0.0, 0.0, delta).unwrap();
            let vals = dense_oracle(&params, &basis(2, 1, 1)).unwrap();
            let r = ((delta / 2.0) * (delta / 2.0) + 4.0).sqrt();
            let mut expect = vec![delta / 2.0 - r, 0.0, delta, delta / 2.0 + r];
            expect.sort_by(f64::total_cmp);
            for (a, b) in vals.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-12, "Δ = {delta}: {vals:?} vs {expect:?}");
            }
        }
    }

    #[test]
    fn species_exchange_symmetry() {
        let params = ModelParams::new(-0.7, 0.4, 0.9).unwrap();
        for (l, a, b) in [(4, 3, 1), (5, 3, 2), (6, 4, 1)] {
            let x = dense_oracle(&params, &basis(l, a, b)).unwrap();
            let y = dense_oracle(&params, &basis(l, b, a)).unwrap();
            for (p, q) in x.iter().zip(&y) {
                assert!((p - q).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn too_large() {
        let params = ModelParams::new(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            dense_oracle(&params, &basis(8, 4, 4)),
            Err(Error::DimensionTooLarge { .. })
        ));
    }
}
