use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::functional::VariationalPoint;
use super::minimize::ExactSolution;
use crate::error::{Error, Result};

/// Equality tolerance in `(n_d, l_h, n_l)` used by [`classify_phase`].
pub const CLASSIFY_TOL: f64 = 1e-6;

/// Ground-state phases of the exact solution.
///
/// `SF` is a superfluid of dressed molecules (`0`: unpolarized, `P`: with
/// unpaired atoms), `N` a normal Fermi liquid of single atoms (`P`: partly,
/// `FP`: fully polarized). `_plus_` labels are phase-separated coexistence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum PhaseLabel {
    SF0,
    SF0_plus_NFP,
    SF0_plus_NP,
    SFP_plus_NP,
    SFP_plus_NFP,
    NP,
    SFP_uniform,
    Insulator,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 8] = [
        PhaseLabel::SF0,
        PhaseLabel::SF0_plus_NFP,
        PhaseLabel::SF0_plus_NP,
        PhaseLabel::SFP_plus_NP,
        PhaseLabel::SFP_plus_NFP,
        PhaseLabel::NP,
        PhaseLabel::SFP_uniform,
        PhaseLabel::Insulator,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::SF0 => "SF0",
            PhaseLabel::SF0_plus_NFP => "SF0_plus_NFP",
            PhaseLabel::SF0_plus_NP => "SF0_plus_NP",
            PhaseLabel::SFP_plus_NP => "SFP_plus_NP",
            PhaseLabel::SFP_plus_NFP => "SFP_plus_NFP",
            PhaseLabel::NP => "NP",
            PhaseLabel::SFP_uniform => "SFP_uniform",
            PhaseLabel::Insulator => "Insulator",
        }
    }

    /// Two coexisting phases of different density.
    pub fn is_coexistence(&self) -> bool {
        matches!(
            self,
            PhaseLabel::SF0_plus_NFP
                | PhaseLabel::SF0_plus_NP
                | PhaseLabel::SFP_plus_NP
                | PhaseLabel::SFP_plus_NFP
        )
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PhaseLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown phase label {s:?}")))
    }
}

/// Labels an optimum of the exact solver.
///
/// Rules, in order, with equalities at `tol`:
/// 1. no coexistence (`l_h = 0`, `l_h = 1` or `n_l = n_h`): `NP` below unit
///    filling, `Insulator` at `n = 1`, `SFP_uniform` above;
/// 2. core made of pairs only (`n_d = l_h`): `SF0` when the shell is empty and
///    `p = 0`, `SF0_plus_NFP` when the pair cap binds, `SF0_plus_NP` otherwise;
/// 3. core with unpaired atoms (`n_d < l_h`): `SFP_plus_NFP` when the pair cap
///    binds (breached pairs), `SFP_plus_NP` otherwise.
pub fn classify_phase(n: f64, p: f64, sol: &ExactSolution, tol: f64) -> Result<PhaseLabel> {
    let VariationalPoint { n_d, l_h } = sol.point;
    let unclassifiable = || Error::UnclassifiablePoint { n, p, n_d, l_h };
    let near = |a: f64, b: f64| (a - b).abs() <= tol;

    let same_density = matches!((sol.n_l, sol.n_h), (Some(a), Some(b)) if near(a, b));
    if l_h <= tol || l_h >= 1.0 - tol || same_density {
        return Ok(if near(n, 1.0) {
            PhaseLabel::Insulator
        } else if n < 1.0 {
            PhaseLabel::NP
        } else {
            PhaseLabel::SFP_uniform
        });
    }

    let n_l = sol.n_l.ok_or_else(unclassifiable)?;
    if near(n_d, l_h) {
        if near(n_l, 0.0) {
            return if p <= tol { Ok(PhaseLabel::SF0) } else { Err(unclassifiable()) };
        }
        return Ok(if sol.constraint_active {
            PhaseLabel::SF0_plus_NFP
        } else {
            PhaseLabel::SF0_plus_NP
        });
    }
    if n_d < l_h {
        return Ok(if sol.constraint_active {
            PhaseLabel::SFP_plus_NFP
        } else {
            PhaseLabel::SFP_plus_NP
        });
    }
    Err(unclassifiable())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(n: f64, p: f64, n_d: f64, l_h: f64, active: bool) -> ExactSolution {
        let (n_l, n_h) = super::super::functional::raw_densities(n, n_d, l_h);
        ExactSolution {
            n,
            p,
            e_gs: 0.0,
            point: VariationalPoint::new(n_d, l_h),
            optimum: VariationalPoint::new(n_d, l_h),
            n_l,
            n_h,
            p_c: 0.0,
            label: PhaseLabel::NP,
            constraint_active: active,
        }
    }

    fn label(n: f64, p: f64, n_d: f64, l_h: f64, active: bool) -> PhaseLabel {
        classify_phase(n, p, &sol(n, p, n_d, l_h, active), CLASSIFY_TOL).unwrap()
    }

    #[test]
    fn rules() {
        assert_eq!(label(1.0, 0.0, 0.5, 0.5, false), PhaseLabel::SF0);
        assert_eq!(label(1.0, 0.0, 0.0, 0.0, false), PhaseLabel::Insulator);
        assert_eq!(label(1.0, 0.0, 0.0, 0.6, false), PhaseLabel::Insulator);
        assert_eq!(label(0.9, 0.3, 0.0, 0.0, false), PhaseLabel::NP);
        assert_eq!(label(1.4, 0.0, 0.4, 1.0, false), PhaseLabel::SFP_uniform);
        assert_eq!(label(0.9, 0.2, 0.3, 0.3, true), PhaseLabel::SF0_plus_NFP);
        assert_eq!(label(0.9, 0.1, 0.3, 0.3, false), PhaseLabel::SF0_plus_NP);
        assert_eq!(label(0.9, 0.1, 0.2, 0.35, false), PhaseLabel::SFP_plus_NP);
        assert_eq!(label(0.9, 0.7, 0.135, 0.3, true), PhaseLabel::SFP_plus_NFP);
    }

    #[test]
    fn fully_paired_core_with_empty_shell_needs_zero_polarization() {
        let s = sol(0.9, 0.2, 0.45, 0.45, true);
        assert!(matches!(
            classify_phase(0.9, 0.2, &s, CLASSIFY_TOL),
            Err(Error::UnclassifiablePoint { .. })
        ));
    }

    #[test]
    fn label_names_round_trip() {
        for l in PhaseLabel::ALL {
            assert_eq!(l.as_str().parse::<PhaseLabel>().unwrap(), l);
        }
    }
}
