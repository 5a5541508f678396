use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::minimize::{Column, ExactSolution, MinimizerConfig};
use super::phase::{PhaseLabel, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::lattice::ModelParams;

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(min < max) {
        return Err(Error::InvalidParameter(format!(
            "axis needs steps >= 2 and min < max, got [{min}, {max}] with {steps} steps"
        )));
    }
    let last = steps - 1;
    Ok((0..steps)
        .map(|i| if i == last { max } else { min + (max - min) * i as f64 / last as f64 })
        .collect())
}

/// One [`ExactSolution`] per `(Δ, p)` cell, stored Δ-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagramGrid {
    pub n: f64,
    pub params: ModelParams,
    pub delta_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub cells: Vec<ExactSolution>,
}

/// The three analytic boundaries of the Δ–p diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticLines {
    /// Core density `n_h = 2` (SF0/SFP switch inside the coexistence region),
    /// as `(Δ, p)` midpoints between the adjacent columns that straddle it.
    pub core_saturation: Vec<[f64; 2]>,
    /// Onset of breached pairs, `n̄_d = n(1 − p)/2`, i.e. `(Δ, p_c(Δ))` for
    /// every column with `p_c < 1`.
    pub breached_pair: Vec<[f64; 2]>,
    /// Smallest Δ from which on `n̄_d = l̄_h = 0` (uniform normal state).
    pub delta_c: Option<f64>,
}

impl PhaseDiagramGrid {
    pub fn cell(&self, i_delta: usize, i_p: usize) -> &ExactSolution {
        &self.cells[i_delta * self.p_axis.len() + i_p]
    }

    pub fn column(&self, i_delta: usize) -> &[ExactSolution] {
        let np = self.p_axis.len();
        &self.cells[i_delta * np..(i_delta + 1) * np]
    }

    pub fn labels(&self) -> BTreeSet<PhaseLabel> {
        self.cells.iter().map(|c| c.label).collect()
    }

    /// `p_c` per Δ column.
    pub fn critical_polarizations(&self) -> Vec<f64> {
        (0..self.delta_axis.len()).map(|i| self.cell(i, 0).p_c).collect()
    }

    /// Per column, the smallest scanned `p` whose cell is in the breached-pair
    /// regime.
    pub fn breached_onset(&self) -> Vec<Option<f64>> {
        (0..self.delta_axis.len())
            .map(|i| {
                self.column(i)
                    .iter()
                    .find(|c| c.constraint_active)
                    .map(|c| c.p)
            })
            .collect()
    }

    pub fn delta_c(&self) -> Option<f64> {
        let uniform = |i: usize| self.cell(i, 0).optimum.n_d <= CLASSIFY_TOL;
        let nd = self.delta_axis.len();
        let first = (0..nd).rev().take_while(|&i| uniform(i)).last()?;
        Some(self.delta_axis[first])
    }

    pub fn analytic_lines(&self) -> AnalyticLines {
        let saturated = |c: &ExactSolution| {
            c.label.is_coexistence() && c.n_h.is_some_and(|h| h >= 2.0 - CLASSIFY_TOL)
        };
        let mut core_saturation = Vec::new();
        for i in 1..self.delta_axis.len() {
            for (j, &p) in self.p_axis.iter().enumerate() {
                let (a, b) = (self.cell(i - 1, j), self.cell(i, j));
                let both_ps = a.label.is_coexistence() && b.label.is_coexistence();
                if both_ps && saturated(a) != saturated(b) {
                    let mid = 0.5 * (self.delta_axis[i - 1] + self.delta_axis[i]);
                    core_saturation.push([mid, p]);
                }
            }
        }
        let breached_pair = self
            .delta_axis
            .iter()
            .zip(self.critical_polarizations())
            .filter(|&(_, pc)| pc < 1.0)
            .map(|(&d, pc)| [d, pc])
            .collect();
        AnalyticLines {
            core_saturation,
            breached_pair,
            delta_c: self.delta_c(),
        }
    }
}

/// Solves every cell of the Δ–p plane at filling `n`; `template` supplies
/// `(t, δg, δt)` and its Δ is ignored. Columns run in parallel on the current
/// rayon pool; the result does not depend on the pool size.
pub fn scan_phase_diagram(
    n: f64,
    template: &ModelParams,
    delta_axis: &[f64],
    p_axis: &[f64],
    config: MinimizerConfig,
) -> Result<PhaseDiagramGrid> {
    for axis in [delta_axis, p_axis] {
        if axis.len() < 2 || axis.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "scan axes need at least 2 strictly increasing values".into(),
            ));
        }
    }
    let columns: Vec<Vec<ExactSolution>> = delta_axis
        .par_iter()
        .map(|&delta| {
            let cell_err = |p: f64, e: Error| Error::ScanCell {
                delta,
                p,
                source: Box::new(e),
            };
            let params = template.with_delta(delta).map_err(|e| cell_err(p_axis[0], e))?;
            let column = Column::new(n, &params, config).map_err(|e| cell_err(p_axis[0], e))?;
            p_axis
                .iter()
                .map(|&p| column.solve(p).map_err(|e| cell_err(p, e)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(PhaseDiagramGrid {
        n,
        params: *template,
        delta_axis: delta_axis.to_vec(),
        p_axis: p_axis.to_vec(),
        cells: columns.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::minimize::ExactSolver;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(-6.0, 3.0, 121).unwrap();
        assert_eq!(v.len(), 121);
        assert_eq!(v[0], -6.0);
        assert_eq!(v[120], 3.0);
        assert!((v[12] + 5.1).abs() < 1e-12);
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(linspace(1.0, 0.0, 5).is_err());
    }

    #[test]
    fn corner_scan_equals_point_solves() {
        let template = ModelParams::new(-1.0, 0.4, 0.0).unwrap();
        let deltas = [-2.0, 1.0];
        let ps = [0.0, 0.8];
        let grid = scan_phase_diagram(0.9, &template, &deltas, &ps, MinimizerConfig::default()).unwrap();
        assert_eq!(grid.cells.len(), 4);
        let solver = ExactSolver::default();
        for (i, &d) in deltas.iter().enumerate() {
            for (j, &p) in ps.iter().enumerate() {
                let point = solver
                    .minimize_ground_state(0.9, p, &template.with_delta(d).unwrap())
                    .unwrap();
                assert_eq!(grid.cell(i, j), &point);
            }
        }
    }

    #[test]
    fn cell_errors_carry_coordinates() {
        let template = ModelParams::new(-1.0, 0.4, 0.0).unwrap();
        let err = scan_phase_diagram(1.6, &template, &[-1.0, 0.0], &[0.0, 0.9], MinimizerConfig::default())
            .unwrap_err();
        match err {
            Error::ScanCell { p, source, .. } => {
                assert_eq!(p, 0.9);
                assert!(matches!(*source, Error::InfeasibleFilling { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_increasing_axes() {
        let template = ModelParams::new(-1.0, 0.4, 0.0).unwrap();
        let r = scan_phase_diagram(0.9, &template, &[0.0, 0.0], &[0.0, 1.0], MinimizerConfig::default());
        assert!(r.is_err());
    }
}
