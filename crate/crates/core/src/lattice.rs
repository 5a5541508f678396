//! Coupling conventions, filling bookkeeping and finite-lattice sectors.
//!
//! All energies are in units of the bare hopping `t`. The hopping amplitude of
//! a species between two neighbouring sites depends on how many atoms of the
//! opposite species sit on those two sites: `t` for none, `g = t + δg` for one
//! and `t_ad = t + 2δg + δt` for two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    t: f64,
    delta_g: f64,
    delta_t: f64,
    delta: f64,
}

impl ModelParams {
    /// Couplings with `t = 1`.
    pub fn new(delta_g: f64, delta_t: f64, delta: f64) -> Result<Self> {
        Self::with_t(1.0, delta_g, delta_t, delta)
    }

    pub fn with_t(t: f64, delta_g: f64, delta_t: f64, delta: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        for (name, v) in [("delta_g", delta_g), ("delta_t", delta_t), ("delta", delta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            t,
            delta_g,
            delta_t,
            delta,
        })
    }

    /// Builds the couplings from the physical tunnelling rates `g` and `t_ad`.
    pub fn from_couplings(t: f64, g: f64, t_ad: f64, delta: f64) -> Result<Self> {
        let delta_g = g - t;
        let delta_t = t_ad + t - 2.0 * g;
        Self::with_t(t, delta_g, delta_t, delta)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn delta_g(&self) -> f64 {
        self.delta_g
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Dressed-molecule detuning Δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::with_t(self.t, self.delta_g, self.delta_t, delta)
    }

    /// `(g, t_ad)`, always recomputed from `(t, δg, δt)`.
    pub fn derive_couplings(&self) -> (f64, f64) {
        let g = self.delta_g + self.t;
        let t_ad = self.delta_t + 2.0 * g - self.t;
        (g, t_ad)
    }

    pub fn g(&self) -> f64 {
        self.derive_couplings().0
    }

    pub fn t_ad(&self) -> f64 {
        self.derive_couplings().1
    }

    /// `δg = −t`, where the doublon number is conserved.
    pub fn is_integrable(&self) -> bool {
        (self.delta_g + self.t).abs() <= 1e-12
    }
}

/// Average filling `n = N/L` and imbalance `p = (N↑ − N↓)/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillingSpec {
    n: f64,
    p: f64,
}

impl FillingSpec {
    /// Negative `p` is folded onto `|p|` by exchanging the species.
    pub fn new(n: f64, p: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&n) {
            return Err(Error::InvalidParameter(format!("filling n must lie in [0, 2], got {n}")));
        }
        if !(-1.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("polarization p must lie in [-1, 1], got {p}")));
        }
        Ok(Self { n, p: p.abs() })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Fixed particle numbers on an `L`-site chain. [`sector_for`] always puts the
/// majority in `n_up`; the reversed order is accepted for species-exchange checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sector {
    l: usize,
    n_up: usize,
    n_dn: usize,
}

impl Sector {
    pub fn new(l: usize, n_up: usize, n_dn: usize) -> Result<Self> {
        if l == 0 || l > 32 {
            return Err(Error::InvalidParameter(format!("L must lie in 1..=32, got {l}")));
        }
        if n_up > l || n_dn > l {
            return Err(Error::InvalidParameter(format!(
                "species counts ({n_up}, {n_dn}) exceed L = {l}"
            )));
        }
        Ok(Self { l, n_up, n_dn })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_dn(&self) -> usize {
        self.n_dn
    }

    pub fn n_total(&self) -> usize {
        self.n_up + self.n_dn
    }

    pub fn filling(&self) -> f64 {
        self.n_total() as f64 / self.l as f64
    }

    /// `|N↑ − N↓| / N`, zero for the empty sector.
    pub fn polarization(&self) -> f64 {
        match self.n_total() {
            0 => 0.0,
            n => self.n_up.abs_diff(self.n_dn) as f64 / n as f64,
        }
    }

    /// The same sector with the species exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            l: self.l,
            n_up: self.n_dn,
            n_dn: self.n_up,
        }
    }
}

/// The sector realizing `(n, p)` exactly on `l` sites.
pub fn sector_for(l: usize, spec: FillingSpec) -> Result<Sector> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("L must be at least 2, got {l}")));
    }
    let err = || Error::NonIntegerSector {
        l,
        n: spec.n(),
        p: spec.p(),
    };
    let total = spec.n() * l as f64;
    let n = total.round();
    if (total - n).abs() > COMMENSURATE_TOL {
        return Err(err());
    }
    let up = n * (1.0 + spec.p()) / 2.0;
    let dn = n * (1.0 - spec.p()) / 2.0;
    let (up_r, dn_r) = (up.round(), dn.round());
    if (up - up_r).abs() > COMMENSURATE_TOL || (dn - dn_r).abs() > COMMENSURATE_TOL {
        return Err(err());
    }
    Sector::new(l, up_r as usize, dn_r as usize)
}
