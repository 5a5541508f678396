//! Constrained minimization of the two-fluid energy.
//!
//! The feasible polytope is mapped onto the rectangle `(n_d, s) ∈ [lo, cap] × [0, 1]`
//! with `l_h = n_d + s·(min(1, n − n_d) − n_d)`, so every face of the polytope is
//! a coordinate line. A coarse grid on that rectangle seeds a handful of
//! coordinate-descent refinements and the lowest result wins.

use serde::{Deserialize, Serialize};

use super::functional::{energy_unchecked, raw_densities, VariationalPoint};
use super::phase::{classify_phase, PhaseLabel, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::lattice::ModelParams;

/// Energies closer than this are a tie, broken toward larger `n_d`, then larger `l_h`.
pub const ENERGY_TIE_TOL: f64 = 1e-12;
/// `constraint_active` is set only when `p > p_c + CONSTRAINT_TIE_TOL`.
pub const CONSTRAINT_TIE_TOL: f64 = 1e-9;

/// Minimum decrease for a descent move; below it the energy is rounding noise.
const ACCEPT_EPS: f64 = 4.0 * f64::EPSILON;
const MAX_DESCENT_MOVES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerConfig {
    /// Coarse grid points per axis.
    pub grid: usize,
    /// Coordinate-descent stops once both step sizes drop below this.
    pub step: f64,
    /// Number of grid minima refined.
    pub candidates: usize,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            step: 1e-10,
            candidates: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub n: f64,
    pub p: f64,
    /// Energy per site in units of `t`.
    pub e_gs: f64,
    pub point: VariationalPoint,
    /// The unpolarized (`p = 0`) optimum `(n̄_d, l̄_h)`.
    pub optimum: VariationalPoint,
    pub n_l: Option<f64>,
    pub n_h: Option<f64>,
    pub p_c: f64,
    pub label: PhaseLabel,
    /// Breached-pair regime: the pair cap `n_d ≤ n(1 − p)/2` binds.
    pub constraint_active: bool,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    n_d: f64,
    s: f64,
    l_h: f64,
    e: f64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.e < other.e - ENERGY_TIE_TOL {
            return true;
        }
        if self.e > other.e + ENERGY_TIE_TOL {
            return false;
        }
        (self.n_d, self.l_h) > (other.n_d, other.l_h)
    }
}

/// Energy surface at fixed `(n, |t_ad|, Δ)` tabulated on the coarse grid over
/// the pair range allowed at `p = 0`. Constrained solves reuse it by masking
/// columns above the cap and adding the cap line itself.
#[derive(Debug, Clone)]
pub(crate) struct Landscape {
    n: f64,
    t_ad: f64,
    delta: f64,
    lo: f64,
    hi: f64,
    nd_axis: Vec<f64>,
    s_axis: Vec<f64>,
    /// Row-major `[i_nd][i_s]`.
    energy: Vec<f64>,
    config: MinimizerConfig,
}

impl Landscape {
    pub(crate) fn new(n: f64, params: &ModelParams, config: MinimizerConfig) -> Result<Self> {
        check_exact_inputs(n, params)?;
        if config.grid < 2 || !(config.step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "minimizer needs grid >= 2 and step > 0, got grid = {}, step = {}",
                config.grid, config.step
            )));
        }
        let t_ad = params.t_ad().abs() / params.t();
        let delta = params.delta() / params.t();
        let lo = (n - 1.0).max(0.0);
        let hi = n / 2.0;
        let nd_axis = axis(lo, hi, config.grid);
        let s_axis = axis(0.0, 1.0, config.grid);
        let mut energy = Vec::with_capacity(nd_axis.len() * s_axis.len());
        for &nd in &nd_axis {
            for &s in &s_axis {
                energy.push(energy_unchecked(n, t_ad, delta, nd, core_fraction(n, nd, s)));
            }
        }
        Ok(Self {
            n,
            t_ad,
            delta,
            lo,
            hi,
            nd_axis,
            s_axis,
            energy,
            config,
        })
    }

    fn eval(&self, n_d: f64, s: f64) -> Candidate {
        let l_h = core_fraction(self.n, n_d, s);
        Candidate {
            n_d,
            s,
            l_h,
            e: energy_unchecked(self.n, self.t_ad, self.delta, n_d, l_h),
        }
    }

    /// Global minimum over the polytope with `n_d ≤ cap`.
    fn minimize(&self, cap: f64) -> Candidate {
        let cap = cap.min(self.hi);
        let ns = self.s_axis.len();
        let cols = self.nd_axis.iter().take_while(|&&nd| nd <= cap).count();
        let at = |i: usize, j: usize| self.energy[i * ns + j];

        let mut seeds: Vec<Candidate> = Vec::new();
        let push_local_minima = |cands: &mut Vec<Candidate>, rows: usize, e: &dyn Fn(usize, usize) -> f64, nd: &dyn Fn(usize) -> f64| {
            for i in 0..rows {
                for j in 0..ns {
                    let here = e(i, j);
                    let mut is_min = true;
                    'nbr: for di in -1i64..=1 {
                        for dj in -1i64..=1 {
                            let (ii, jj) = (i as i64 + di, j as i64 + dj);
                            if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= rows as i64 || jj >= ns as i64 {
                                continue;
                            }
                            if e(ii as usize, jj as usize) < here {
                                is_min = false;
                                break 'nbr;
                            }
                        }
                    }
                    if is_min {
                        let s = self.s_axis[j];
                        let n_d = nd(i);
                        cands.push(Candidate {
                            n_d,
                            s,
                            l_h: core_fraction(self.n, n_d, s),
                            e: here,
                        });
                    }
                }
            }
        };

        push_local_minima(&mut seeds, cols, &|i, j| at(i, j), &|i| self.nd_axis[i]);

        // The cap line is a face of the constrained polytope; tabulate it unless
        // it coincides with the last grid column.
        let on_grid = cols > 0 && self.nd_axis[cols - 1] == cap;
        if !on_grid {
            let line: Vec<f64> = self.s_axis.iter().map(|&s| self.eval(cap, s).e).collect();
            push_local_minima(&mut seeds, 1, &|_, j| line[j], &|_| cap);
        }

        // Tie-preferred seed: the largest (n_d, l_h) within the tie window of the best.
        let best_e = seeds.iter().map(|c| c.e).fold(f64::INFINITY, f64::min);
        let mut tie_pick: Option<Candidate> = None;
        for c in seeds.iter().filter(|c| c.e <= best_e + ENERGY_TIE_TOL) {
            if tie_pick.map_or(true, |t| (c.n_d, c.l_h) > (t.n_d, t.l_h)) {
                tie_pick = Some(*c);
            }
        }

        seeds.sort_by(|a, b| a.e.total_cmp(&b.e));
        seeds.truncate(self.config.candidates.max(1));
        seeds.extend(tie_pick);

        let h_nd = if self.nd_axis.len() > 1 {
            self.nd_axis[1] - self.nd_axis[0]
        } else {
            0.0
        };
        let h_s = self.s_axis[1] - self.s_axis[0];

        let mut best: Option<Candidate> = None;
        for seed in seeds {
            let c = self.descend(seed, cap, h_nd, h_s);
            if best.map_or(true, |b| c.beats(&b)) {
                best = Some(c);
            }
        }
        best.expect("the coarse grid always has a minimum")
    }

    fn descend(&self, start: Candidate, cap: f64, mut h_nd: f64, mut h_s: f64) -> Candidate {
        let mut cur = start;
        let step = self.config.step;
        let lo = self.lo;
        if cap - lo <= 0.0 {
            h_nd = 0.0;
        }
        for _ in 0..MAX_DESCENT_MOVES {
            if h_nd < step && h_s < step {
                break;
            }
            let mut next: Option<Candidate> = None;
            let moves = [
                (cur.n_d + h_nd, cur.s),
                (cur.n_d - h_nd, cur.s),
                (cur.n_d, cur.s + h_s),
                (cur.n_d, cur.s - h_s),
            ];
            for (nd, s) in moves {
                let nd = nd.clamp(lo, cap);
                let s = s.clamp(0.0, 1.0);
                if (nd, s) == (cur.n_d, cur.s) {
                    continue;
                }
                let c = self.eval(nd, s);
                let threshold = cur.e - ACCEPT_EPS * cur.e.abs().max(1.0);
                if c.e < threshold && next.map_or(true, |b| c.e < b.e) {
                    next = Some(c);
                }
            }
            match next {
                Some(c) => cur = c,
                None => {
                    h_nd /= 2.0;
                    h_s /= 2.0;
                }
            }
        }
        cur
    }
}

fn axis(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if hi - lo <= 0.0 {
        return vec![lo];
    }
    let last = points - 1;
    (0..points)
        .map(|i| if i == last { hi } else { lo + (hi - lo) * i as f64 / last as f64 })
        .collect()
}

#[inline]
fn core_fraction(n: f64, n_d: f64, s: f64) -> f64 {
    let top = (n - n_d).min(1.0);
    if s >= 1.0 {
        top
    } else {
        n_d + s * (top - n_d)
    }
}

fn check_exact_inputs(n: f64, params: &ModelParams) -> Result<()> {
    if !params.is_integrable() {
        return Err(Error::IntegrablePointRequired {
            delta_g: params.delta_g(),
        });
    }
    if !(n > 0.0 && n < 2.0) {
        return Err(Error::InvalidParameter(format!("exact solver needs 0 < n < 2, got {n}")));
    }
    Ok(())
}

/// `p_c = 1 − 2n̄_d/n`, clamped to `[0, 1]`.
fn pc_from_optimum(n: f64, nd_bar: f64) -> f64 {
    (1.0 - 2.0 * nd_bar / n).clamp(0.0, 1.0)
}

/// All solves at one `(n, couplings)`; the `p = 0` optimum is computed once.
#[derive(Debug, Clone)]
pub(crate) struct Column {
    landscape: Landscape,
    unconstrained: Candidate,
    p_c: f64,
    t: f64,
}

impl Column {
    pub(crate) fn new(n: f64, params: &ModelParams, config: MinimizerConfig) -> Result<Self> {
        let landscape = Landscape::new(n, params, config)?;
        let unconstrained = landscape.minimize(landscape.hi);
        let p_c = pc_from_optimum(n, unconstrained.n_d);
        Ok(Self {
            landscape,
            unconstrained,
            p_c,
            t: params.t(),
        })
    }

    pub(crate) fn p_c(&self) -> f64 {
        self.p_c
    }

    pub(crate) fn solve(&self, p: f64) -> Result<ExactSolution> {
        let n = self.landscape.n;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("polarization must lie in [0, 1], got {p}")));
        }
        let cap = n * (1.0 - p) / 2.0;
        if cap < self.landscape.lo - super::functional::FEASIBILITY_TOL {
            return Err(Error::InfeasibleFilling { n, p });
        }
        let cap = cap.max(self.landscape.lo);

        let constraint_active = p > self.p_c + CONSTRAINT_TIE_TOL;
        let best = if constraint_active {
            self.landscape.minimize(cap)
        } else if self.unconstrained.n_d > cap {
            // p within the tie window above p_c: project onto the cap.
            self.landscape.eval(cap, self.unconstrained.s)
        } else {
            self.unconstrained
        };

        let point = VariationalPoint::new(best.n_d, best.l_h);
        point.check(n, Some(p))?;
        let (n_l, n_h) = raw_densities(n, best.n_d, best.l_h);
        let u = self.unconstrained;
        let mut sol = ExactSolution {
            n,
            p,
            e_gs: best.e * self.t,
            point,
            optimum: VariationalPoint::new(u.n_d, u.l_h),
            n_l,
            n_h,
            p_c: self.p_c,
            label: PhaseLabel::NP,
            constraint_active,
        };
        sol.label = classify_phase(n, p, &sol, CLASSIFY_TOL)?;
        Ok(sol)
    }
}

/// Exact thermodynamic-limit solver at `δg = −t`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSolver {
    pub config: MinimizerConfig,
}

impl ExactSolver {
    pub fn new(config: MinimizerConfig) -> Self {
        Self { config }
    }

    pub fn minimize_ground_state(&self, n: f64, p: f64, params: &ModelParams) -> Result<ExactSolution> {
        Column::new(n, params, self.config)?.solve(p)
    }

    pub fn critical_polarization(&self, n: f64, params: &ModelParams) -> Result<f64> {
        Ok(Column::new(n, params, self.config)?.p_c())
    }

    /// Pair density along the polarization axis: `n̄_d` up to `p_c`, then
    /// the cap `n(1 − p)/2`.
    pub fn nd_of_p(&self, n: f64, p: f64, params: &ModelParams) -> Result<f64> {
        Ok(self.minimize_ground_state(n, p, params)?.point.n_d)
    }

    /// `n_d(p)` for several polarizations sharing one `p = 0` solve.
    pub fn nd_curve(&self, n: f64, ps: &[f64], params: &ModelParams) -> Result<Vec<f64>> {
        let column = Column::new(n, params, self.config)?;
        ps.iter().map(|&p| Ok(column.solve(p)?.point.n_d)).collect()
    }
}

pub fn minimize_ground_state(n: f64, p: f64, params: &ModelParams) -> Result<ExactSolution> {
    ExactSolver::default().minimize_ground_state(n, p, params)
}

pub fn critical_polarization(n: f64, params: &ModelParams) -> Result<f64> {
    ExactSolver::default().critical_polarization(n, params)
}

pub fn nd_of_p(n: f64, p: f64, params: &ModelParams) -> Result<f64> {
    ExactSolver::default().nd_of_p(n, p, params)
}
