//! Matrix-free action of the correlated-hopping Hamiltonian on a sector.
//!
//! Modes are ordered all-up (sites `0..L`) then all-down, so a nearest-neighbour
//! hop carries no fermionic sign except across the periodic bond `(L−1, 0)`,
//! where it picks up `(−1)^(N_σ − 1)`. `L = 2` uses a single open bond.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::lattice::{ModelParams, Sector};

/// Amplitude vector over a [`SectorBasis`]. All matrix elements are real, so
/// amplitudes are stored as `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    sector: Sector,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: &SectorBasis, amplitudes: Vec<f64>) -> Result<Self> {
        basis.check_len(amplitudes.len())?;
        Ok(Self {
            sector: basis.sector(),
            amplitudes,
        })
    }

    pub fn zeros(basis: &SectorBasis) -> Self {
        Self {
            sector: basis.sector(),
            amplitudes: vec![0.0; basis.dimension()],
        }
    }

    /// Unit vector on basis state `index`.
    pub fn basis_state(basis: &SectorBasis, index: usize) -> Self {
        let mut v = Self::zeros(basis);
        v.amplitudes[index] = 1.0;
        v
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        dot(&self.amplitudes, &self.amplitudes).sqrt()
    }

    pub(crate) fn check_basis(&self, basis: &SectorBasis) -> Result<()> {
        basis.check_len(self.amplitudes.len())?;
        if self.sector != basis.sector() {
            return Err(Error::BasisMismatch {
                expected: basis.dimension(),
                got: self.amplitudes.len(),
            });
        }
        Ok(())
    }
}

/// A real symmetric operator known only through its action.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Hopping amplitudes indexed by the number of opposite-species atoms on the
/// two sites of a bond: `[t, g, t_ad]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopAmplitudes {
    pub by_opposite: [f64; 3],
    pub delta: f64,
}

impl HopAmplitudes {
    pub fn from_params(params: &ModelParams) -> Self {
        let (g, t_ad) = params.derive_couplings();
        Self {
            by_opposite: [params.t(), g, t_ad],
            delta: params.delta(),
        }
    }

    /// All three hopping amplitudes with flipped sign.
    pub fn negated(self) -> Self {
        Self {
            by_opposite: self.by_opposite.map(|a| -a),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bond {
    a: u32,
    b: u32,
    wraps: bool,
}

/// Single-species moves out of one mask: target rank, bond mask and the
/// boundary sign.
#[derive(Debug, Clone, Copy)]
struct Move {
    target: u32,
    pair: u32,
    sign: f64,
}

/// Moves of every mask of one species, flattened with offsets.
struct MoveTable {
    start: Vec<usize>,
    moves: Vec<Move>,
}

impl MoveTable {
    fn new(species: &super::basis::SpeciesBasis, bonds: &[Bond], wrap_sign: f64) -> Self {
        let mut start = Vec::with_capacity(species.len() + 1);
        let mut moves = Vec::new();
        start.push(0);
        for &m in species.masks() {
            for bond in bonds {
                let pair = (1u32 << bond.a) | (1u32 << bond.b);
                if (m & pair).count_ones() == 1 {
                    let target = species.index_of(m ^ pair).expect("hop leaves sector") as u32;
                    let sign = if bond.wraps { wrap_sign } else { 1.0 };
                    moves.push(Move { target, pair, sign });
                }
            }
            start.push(moves.len());
        }
        Self { start, moves }
    }

    #[inline]
    fn of(&self, i: usize) -> &[Move] {
        &self.moves[self.start[i]..self.start[i + 1]]
    }
}

pub struct Hamiltonian<'a> {
    basis: &'a SectorBasis,
    hops: HopAmplitudes,
    bonds: Vec<Bond>,
    /// `(−1)^(N_σ − 1)` for the wrapping bond, per species.
    wrap_sign: [f64; 2],
    up_moves: MoveTable,
    dn_moves: MoveTable,
}

impl<'a> Hamiltonian<'a> {
    pub fn new(params: &ModelParams, basis: &'a SectorBasis) -> Self {
        Self::with_amplitudes(HopAmplitudes::from_params(params), basis)
    }

    pub fn with_amplitudes(hops: HopAmplitudes, basis: &'a SectorBasis) -> Self {
        let l = basis.l() as u32;
        let bonds = match l {
            0 | 1 => Vec::new(),
            2 => vec![Bond {
                a: 0,
                b: 1,
                wraps: false,
            }],
            _ => (0..l)
                .map(|i| Bond {
                    a: i,
                    b: (i + 1) % l,
                    wraps: i + 1 == l,
                })
                .collect(),
        };
        let parity = |n: usize| if n % 2 == 1 { 1.0 } else { -1.0 };
        let s = basis.sector();
        let wrap_sign = [parity(s.n_up()), parity(s.n_dn())];
        Self {
            basis,
            hops,
            up_moves: MoveTable::new(basis.up(), &bonds, wrap_sign[0]),
            dn_moves: MoveTable::new(basis.dn(), &bonds, wrap_sign[1]),
            bonds,
            wrap_sign,
        }
    }

    pub fn basis(&self) -> &SectorBasis {
        self.basis
    }

    #[inline]
    pub fn diagonal(&self, up: u32, dn: u32) -> f64 {
        self.hops.delta * (up & dn).count_ones() as f64
    }

    /// Calls `f(target, ⟨target|H|state⟩)` for every off-diagonal element in
    /// the column of basis state `(up, dn)`.
    #[inline]
    pub fn for_each_hop(&self, up: u32, dn: u32, mut f: impl FnMut(usize, f64)) {
        let basis = self.basis;
        let n_dn = basis.dn().len();
        let i_up = basis.up().index_of(up).expect("up mask outside basis");
        let i_dn = basis.dn().index_of(dn).expect("down mask outside basis");
        for bond in &self.bonds {
            let pair = (1u32 << bond.a) | (1u32 << bond.b);
            // up species hopping, down atoms as spectators
            if (up & pair).count_ones() == 1 {
                let k = (dn & pair).count_ones() as usize;
                let mut amp = -self.hops.by_opposite[k];
                if bond.wraps {
                    amp *= self.wrap_sign[0];
                }
                if amp != 0.0 {
                    let j = basis.up().index_of(up ^ pair).expect("hop leaves sector");
                    f(j * n_dn + i_dn, amp);
                }
            }
            if (dn & pair).count_ones() == 1 {
                let k = (up & pair).count_ones() as usize;
                let mut amp = -self.hops.by_opposite[k];
                if bond.wraps {
                    amp *= self.wrap_sign[1];
                }
                if amp != 0.0 {
                    let j = basis.dn().index_of(dn ^ pair).expect("hop leaves sector");
                    f(i_up * n_dn + j, amp);
                }
            }
        }
    }

    /// Explicit matrix, row-major. Test and oracle use only.
    pub fn to_dense(&self) -> Vec<f64> {
        let dim = self.basis.dimension();
        let mut m = vec![0.0; dim * dim];
        for (col, (up, dn)) in self.basis.states().enumerate() {
            m[col * dim + col] += self.diagonal(up, dn);
            self.for_each_hop(up, dn, |row, amp| m[row * dim + col] += amp);
        }
        m
    }
}

impl LinearOperator for Hamiltonian<'_> {
    fn dim(&self) -> usize {
        self.basis.dimension()
    }

    /// `y = H x` computed one up-mask row at a time. Up hops stream whole
    /// rows of `x`; down hops stay inside the current row.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let basis = self.basis;
        let n_dn = basis.dn().len();
        let dn_masks = basis.dn().masks();
        let amp = self.hops.by_opposite.map(|a| -a);
        y.par_chunks_mut(n_dn)
            .zip(basis.up().masks().par_iter())
            .enumerate()
            .for_each(|(i_up, (row, &up))| {
                let x_row = &x[i_up * n_dn..(i_up + 1) * n_dn];
                for (i_dn, (slot, &dn)) in row.iter_mut().zip(dn_masks).enumerate() {
                    let mut acc = self.diagonal(up, dn) * x_row[i_dn];
                    for mv in self.dn_moves.of(i_dn) {
                        let k = (up & mv.pair).count_ones() as usize;
                        acc += amp[k] * mv.sign * x_row[mv.target as usize];
                    }
                    *slot = acc;
                }
                for mv in self.up_moves.of(i_up) {
                    let t = mv.target as usize;
                    let src = &x[t * n_dn..(t + 1) * n_dn];
                    for ((slot, &dn), &xv) in row.iter_mut().zip(dn_masks).zip(src) {
                        let k = (dn & mv.pair).count_ones() as usize;
                        *slot += amp[k] * mv.sign * xv;
                    }
                }
            });
    }
}

pub fn apply_hamiltonian(params: &ModelParams, basis: &SectorBasis, v: &StateVector) -> Result<StateVector> {
    v.check_basis(basis)?;
    let mut out = StateVector::zeros(basis);
    Hamiltonian::new(params, basis).apply(v.amplitudes(), out.amplitudes_mut());
    Ok(out)
}

/// Image of `v` under the one-site translation `i → i + 1 (mod L)`.
pub fn translate(basis: &SectorBasis, v: &StateVector) -> Result<StateVector> {
    v.check_basis(basis)?;
    let l = basis.l() as u32;
    let full = if l == 32 { u32::MAX } else { (1u32 << l) - 1 };
    let shift = |m: u32| -> (u32, f64) {
        let top = (m >> (l - 1)) & 1;
        let shifted = ((m << 1) & full) | top;
        // the atom crossing the boundary passes the other N_σ − 1 atoms
        let sign = if top == 1 && m.count_ones() % 2 == 0 { -1.0 } else { 1.0 };
        (shifted, sign)
    };
    let mut out = StateVector::zeros(basis);
    for (i, (up, dn)) in basis.states().enumerate() {
        let (u2, su) = shift(up);
        let (d2, sd) = shift(dn);
        let j = basis.index_of(u2, d2).expect("translation preserves particle numbers");
        out.amplitudes[j] = su * sd * v.amplitudes[i];
    }
    Ok(out)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
