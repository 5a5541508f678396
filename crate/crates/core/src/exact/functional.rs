use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::ModelParams;

pub(crate) const FEASIBILITY_TOL: f64 = 1e-12;

/// Pair density `n_d = N_d/L` and core fraction `l_h = L_h/L` of the
/// two-fluid ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalPoint {
    pub n_d: f64,
    pub l_h: f64,
}

impl VariationalPoint {
    pub fn new(n_d: f64, l_h: f64) -> Self {
        Self { n_d, l_h }
    }

    /// Checks the polytope at filling `n`, optionally with the pair cap
    /// `n_d ≤ n(1 − p)/2`.
    pub fn check(&self, n: f64, p: Option<f64>) -> Result<()> {
        let tol = FEASIBILITY_TOL;
        let fail = |reason| {
            Err(Error::InfeasiblePoint {
                n,
                n_d: self.n_d,
                l_h: self.l_h,
                reason,
            })
        };
        if !(self.n_d.is_finite() && self.l_h.is_finite()) {
            return fail("non-finite coordinates");
        }
        if self.n_d < -tol {
            return fail("n_d < 0");
        }
        if self.n_d > self.l_h + tol {
            return fail("n_d > l_h (core density above 2)");
        }
        if self.l_h > 1.0 + tol {
            return fail("l_h > 1");
        }
        if self.l_h > n - self.n_d + tol {
            return fail("l_h > n - n_d (negative low-phase density)");
        }
        if self.n_d < n - 1.0 - tol {
            return fail("n_d < n - 1 (low-phase density above 1)");
        }
        if let Some(p) = p {
            if self.n_d > n * (1.0 - p) / 2.0 + tol {
                return fail("n_d > n(1-p)/2 (more pairs than minority atoms)");
            }
        }
        Ok(())
    }
}

/// Low- and high-phase densities; `None` where the phase has zero extent.
pub fn densities(n: f64, point: VariationalPoint) -> Result<(Option<f64>, Option<f64>)> {
    point.check(n, None)?;
    Ok(raw_densities(n, point.n_d, point.l_h))
}

pub(crate) fn raw_densities(n: f64, n_d: f64, l_h: f64) -> (Option<f64>, Option<f64>) {
    let n_l = (l_h < 1.0).then(|| 1.0 - (1.0 - n + n_d) / (1.0 - l_h));
    let n_h = (l_h > 0.0).then(|| 1.0 + n_d / l_h);
    (n_l, n_h)
}

/// Thermodynamic-limit energy per site of the two-fluid state.
///
/// The high-density core is a band of unpaired atoms hopping with `|t_ad|`
/// through a background of dressed molecules; the shell is a band of single
/// atoms hopping with `t` through empty sites.
pub fn energy_functional(n: f64, params: &ModelParams, point: VariationalPoint) -> Result<f64> {
    point.check(n, None)?;
    let t_ad = params.t_ad().abs() / params.t();
    Ok(energy_unchecked(n, t_ad, params.delta() / params.t(), point.n_d, point.l_h) * params.t())
}

/// Energy in units of `t`; `t_ad` is the core band magnitude.
#[inline]
pub(crate) fn energy_unchecked(n: f64, t_ad: f64, delta: f64, n_d: f64, l_h: f64) -> f64 {
    let (n_l, n_h) = raw_densities(n, n_d, l_h);
    let low = n_l.map_or(0.0, |n_l| (1.0 - l_h) * (PI * n_l).sin());
    let high = n_h.map_or(0.0, |n_h| l_h * t_ad * (PI * (2.0 - n_h)).sin());
    -2.0 / PI * (low + high) + delta * n_d
}

/// Interior solution of `∂e/∂n_d = 0` at fixed `(n_l, l_h)`:
/// `n_d = (l_h/π)·arccos((Δ + 2cos πn_l)/(2|t_ad|))`.
pub fn stationary_pair_density(n_l: f64, l_h: f64, params: &ModelParams) -> Result<f64> {
    if !(l_h > 0.0 && l_h < 1.0) {
        return Err(Error::InvalidParameter(format!("l_h must lie in (0, 1), got {l_h}")));
    }
    let t = params.t();
    let t_ad = params.t_ad().abs() / t;
    let x = (params.delta() / t + 2.0 * (PI * n_l).cos()) / (2.0 * t_ad);
    if x.is_nan() || x.abs() > 1.0 + 1e-12 {
        return Err(Error::NoInteriorSolution { x });
    }
    Ok(l_h / PI * x.clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(delta_t: f64, delta: f64) -> ModelParams {
        ModelParams::new(-1.0, delta_t, delta).unwrap()
    }

    #[test]
    fn density_examples() {
        let (n_l, n_h) = densities(0.9, VariationalPoint::new(0.45, 0.45)).unwrap();
        assert!(n_l.unwrap().abs() < 1e-15);
        assert_eq!(n_h, Some(2.0));

        let (n_l, n_h) = densities(0.9, VariationalPoint::new(0.2, 0.4)).unwrap();
        assert!((n_l.unwrap() - 0.5).abs() < 1e-15);
        assert!((n_h.unwrap() - 1.5).abs() < 1e-15);

        let (n_l, n_h) = densities(1.0, VariationalPoint::new(0.0, 0.0)).unwrap();
        assert_eq!(n_l, Some(1.0));
        assert_eq!(n_h, None);

        let (n_l, n_h) = densities(1.5, VariationalPoint::new(0.5, 1.0)).unwrap();
        assert_eq!(n_l, None);
        assert_eq!(n_h, Some(1.5));
    }

    #[test]
    fn infeasible_points_are_rejected() {
        for (n, nd, lh) in [
            (0.9, 0.3, 0.2),  // n_d > l_h
            (0.9, 0.1, 0.85), // l_h > n - n_d
            (1.5, 0.2, 0.8),  // n_d < n - 1
            (0.9, -0.1, 0.2),
            (1.9, 0.95, 1.2),
        ] {
            assert!(matches!(
                densities(n, VariationalPoint::new(nd, lh)),
                Err(Error::InfeasiblePoint { .. })
            ));
        }
        assert!(VariationalPoint::new(0.3, 0.4).check(0.9, Some(0.5)).is_err());
        assert!(VariationalPoint::new(0.2, 0.4).check(0.9, Some(0.5)).is_ok());
    }

    #[test]
    fn energy_examples() {
        let e = energy_functional(0.5, &params(0.4, 3.7), VariationalPoint::new(0.0, 0.0)).unwrap();
        assert!((e + 2.0 / PI).abs() < 1e-15);
        assert!((e + 0.636_619_772_367_581_3).abs() < 1e-15);

        let e = energy_functional(1.0, &params(0.4, -10.0), VariationalPoint::new(0.5, 0.5)).unwrap();
        assert!((e + 5.0).abs() < 1e-14);
    }

    #[test]
    fn energy_matches_extended_precision_evaluation() {
        // n = 0.9, Δ = 0, |t_ad| = 0.6, (n_d, l_h) = (0.2, 0.4): n_l = 1/2, n_h = 3/2,
        // e = −(2/π)[0.6·sin(π/2) + 0.4·0.6·sin(π/2)]; 40-digit evaluation:
        // −0.5347606087887683281834494449316482564358
        let e = energy_functional(0.9, &params(0.4, 0.0), VariationalPoint::new(0.2, 0.4)).unwrap();
        assert!((e + 0.534_760_608_788_768_33).abs() < 1e-14, "{e}");
    }

    #[test]
    fn degenerate_limits_are_continuous() {
        let p = params(0.4, 0.3);
        let at = |nd, lh| energy_functional(0.9, &p, VariationalPoint::new(nd, lh)).unwrap();
        assert!((at(0.0, 0.0) - at(0.0, 1e-9)).abs() < 1e-8);
        let q = params(0.4, 0.3);
        let near = energy_functional(1.4, &q, VariationalPoint::new(0.4, 1.0 - 1e-10)).unwrap();
        let edge = energy_functional(1.4, &q, VariationalPoint::new(0.4, 1.0)).unwrap();
        assert!((near - edge).abs() < 1e-8);
    }

    #[test]
    fn stationary_domain_edges() {
        let p = params(0.4, -10.0);
        assert!(matches!(
            stationary_pair_density(0.5, 0.3, &p),
            Err(Error::NoInteriorSolution { .. })
        ));

        let n_l: f64 = 0.37;
        let delta = -2.0 * (PI * n_l).cos() + 2.0 * 0.6;
        let p = params(0.4, delta);
        let nd = stationary_pair_density(n_l, 0.3, &p).unwrap();
        assert!(nd.abs() < 1e-6, "{nd}");
    }
}
