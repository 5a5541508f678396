//! Lanczos ground state with full reorthogonalization and explicit restarts.
//!
//! Each cycle keeps every Krylov vector (up to the cap) and orthogonalizes
//! the new direction against all of them, repeating the pass once when it
//! cancels most of the vector. When the cap is reached the
//! cycle restarts from its Ritz vector. Convergence is judged on the explicit
//! residual `‖Hx − e₀x‖` of the normalized Ritz vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basis::SectorBasis;
use super::hamiltonian::{dot, Hamiltonian, LinearOperator, StateVector};
use super::tridiag::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::lattice::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    /// Target for the explicit residual norm.
    pub tol: f64,
    /// Cap on Hamiltonian applications.
    pub max_iter: usize,
    /// Cap on stored Krylov vectors per cycle.
    pub krylov_cap: usize,
    /// Memory available for Krylov vectors; lowers the cap on large sectors.
    pub memory_budget_bytes: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 3000,
            krylov_cap: 400,
            memory_budget_bytes: 1 << 28,
            seed: 0,
        }
    }
}

impl LanczosOptions {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    fn cap_for(&self, dim: usize) -> usize {
        let by_memory = self.memory_budget_bytes / (8 * dim.max(1));
        self.krylov_cap.min(by_memory).max(8).min(dim.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosReport {
    pub e0: f64,
    /// Hamiltonian applications, including residual checks.
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Deterministic random start vector for `seed`.
pub fn random_start(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn ground_state_lanczos(
    params: &ModelParams,
    basis: &SectorBasis,
    options: &LanczosOptions,
) -> Result<(LanczosReport, StateVector)> {
    let start = random_start(basis.dimension(), options.seed);
    ground_state_lanczos_from(params, basis, StateVector::new(basis, start)?, options)
}

pub fn ground_state_lanczos_from(
    params: &ModelParams,
    basis: &SectorBasis,
    start: StateVector,
    options: &LanczosOptions,
) -> Result<(LanczosReport, StateVector)> {
    start.check_basis(basis)?;
    let h = Hamiltonian::new(params, basis);
    let (report, x) = lowest_eigenpair(&h, start.into_amplitudes(), options);
    if !report.converged {
        return Err(Error::NotConverged {
            e0: report.e0,
            residual: report.residual,
            iterations: report.iterations,
        });
    }
    Ok((report, StateVector::new(basis, x)?))
}

/// Lowest eigenpair of a real symmetric operator. Always returns the best
/// estimate; `converged` tells whether the residual target was met.
pub fn lowest_eigenpair<H: LinearOperator>(op: &H, start: Vec<f64>, options: &LanczosOptions) -> (LanczosReport, Vec<f64>) {
    let dim = op.dim();
    assert_eq!(start.len(), dim);
    let cap = options.cap_for(dim);

    let mut x = start;
    if normalize(&mut x) == 0.0 {
        x = random_start(dim, options.seed);
        normalize(&mut x);
    }
    let mut matvecs = 0usize;
    let mut hx = vec![0.0; dim];

    loop {
        let cycle = krylov_cycle(op, &x, cap, options, &mut matvecs);
        x = cycle;
        normalize(&mut x);

        op.apply(&x, &mut hx);
        matvecs += 1;
        let e0 = dot(&x, &hx);
        let residual = hx
            .iter()
            .zip(&x)
            .map(|(h, v)| (h - e0 * v).powi(2))
            .sum::<f64>()
            .sqrt();
        let report = LanczosReport {
            e0,
            iterations: matvecs,
            residual,
            converged: residual <= options.tol,
        };
        if report.converged || matvecs >= options.max_iter {
            return (report, x);
        }
    }
}

/// One Lanczos cycle from the unit vector `v0`; returns the lowest Ritz vector.
fn krylov_cycle<H: LinearOperator>(op: &H, v0: &[f64], cap: usize, options: &LanczosOptions, matvecs: &mut usize) -> Vec<f64> {
    let dim = op.dim();
    let mut vs: Vec<Vec<f64>> = vec![v0.to_vec()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];

    loop {
        let j = vs.len() - 1;
        op.apply(&vs[j], &mut w);
        *matvecs += 1;
        let alpha = dot(&w, &vs[j]);
        axpy(-alpha, &vs[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &vs[j - 1], &mut w);
        }
        // a second pass only when the first one removed most of `w`
        let mut beta = dot(&w, &w).sqrt();
        for _ in 0..2 {
            let before = beta;
            for q in &vs {
                let c = dot(&w, q);
                axpy(-c, q, &mut w);
            }
            beta = dot(&w, &w).sqrt();
            if beta > std::f64::consts::FRAC_1_SQRT_2 * before {
                break;
            }
        }
        alphas.push(alpha);

        let scale = alphas.iter().chain(&betas).fold(1.0f64, |m, a| m.max(a.abs()));
        let exhausted = beta <= 1e-13 * scale;
        let last = vs.len() >= cap || *matvecs + 1 >= options.max_iter;
        let converged = if exhausted || last {
            true
        } else {
            match tridiagonal_eigen(&alphas, &betas, &[j]) {
                Some((vals, z)) => {
                    let k = argmin(&vals);
                    beta * z[0][k].abs() <= 0.1 * options.tol
                }
                None => false,
            }
        };
        if converged {
            return ritz_vector(&vs, &alphas, &betas);
        }
        betas.push(beta);
        let inv = 1.0 / beta;
        let next: Vec<f64> = w.iter().map(|x| x * inv).collect();
        vs.push(next);
    }
}

fn ritz_vector(vs: &[Vec<f64>], alphas: &[f64], betas: &[f64]) -> Vec<f64> {
    let m = alphas.len();
    let rows: Vec<usize> = (0..m).collect();
    let (vals, z) = tridiagonal_eigen(alphas, &betas[..m - 1], &rows)
        .expect("tridiagonal QL failed to converge");
    let k = argmin(&vals);
    let mut x = vec![0.0; vs[0].len()];
    for (i, v) in vs.iter().take(m).enumerate() {
        axpy(z[i][k], v, &mut x);
    }
    x
}

fn argmin(vals: &[f64]) -> usize {
    vals.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Sector;

    struct Diag(Vec<f64>);

    impl LinearOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for ((y, x), d) in y.iter_mut().zip(x).zip(&self.0) {
                *y = d * x;
            }
        }
    }

    #[test]
    fn diagonal_operator() {
        let d: Vec<f64> = (0..500).map(|i| ((i * 37) % 500) as f64 * 0.01 - 1.0).collect();
        let (rep, x) = lowest_eigenpair(&Diag(d.clone()), random_start(500, 1), &LanczosOptions::default());
        assert!(rep.converged);
        assert!((rep.e0 + 1.0).abs() < 1e-12);
        let i = d.iter().position(|&v| v == -1.0).unwrap();
        assert!((x[i].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn restarts_with_a_small_cap() {
        let d: Vec<f64> = (0..300).map(|i| (i as f64).sqrt()).collect();
        let opts = LanczosOptions {
            krylov_cap: 10,
            ..LanczosOptions::default()
        };
        let (rep, _) = lowest_eigenpair(&Diag(d), random_start(300, 2), &opts);
        assert!(rep.converged, "{rep:?}");
        assert!(rep.e0.abs() < 1e-12);
    }

    #[test]
    fn single_free_particle_on_a_ring() {
        let params = ModelParams::new(0.0, 0.0, 0.0).unwrap();
        let basis = SectorBasis::new(Sector::new(3, 1, 0).unwrap()).unwrap();
        let (rep, v) = ground_state_lanczos(&params, &basis, &LanczosOptions::default()).unwrap();
        assert!((rep.e0 + 2.0).abs() < 1e-10);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(rep.residual <= 1e-10);
    }

    #[test]
    fn vacuum_sector() {
        let params = ModelParams::new(-0.5, 0.1, 2.0).unwrap();
        let basis = SectorBasis::new(Sector::new(2, 0, 0).unwrap()).unwrap();
        let (rep, _) = ground_state_lanczos(&params, &basis, &LanczosOptions::default()).unwrap();
        assert_eq!(rep.e0, 0.0);
    }

    #[test]
    fn non_convergence_is_reported_with_best_estimate() {
        let params = ModelParams::new(-0.8, 0.0, 0.0).unwrap();
        let basis = SectorBasis::new(Sector::new(8, 4, 4).unwrap()).unwrap();
        let opts = LanczosOptions {
            max_iter: 5,
            ..LanczosOptions::default()
        };
        match ground_state_lanczos(&params, &basis, &opts) {
            Err(Error::NotConverged { e0, residual, iterations }) => {
                assert!(e0.is_finite() && residual > 1e-10);
                assert!(iterations <= 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seed_determinism() {
        let params = ModelParams::new(-0.8, 0.0, 0.0).unwrap();
        let basis = SectorBasis::new(Sector::new(8, 4, 3).unwrap()).unwrap();
        let opts = LanczosOptions::default().with_seed(42);
        let (a, va) = ground_state_lanczos(&params, &basis, &opts).unwrap();
        let (b, vb) = ground_state_lanczos(&params, &basis, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(va, vb);
    }
}
