//! Binary checkpoint of a state vector.
//!
//! Layout: magic `FLP1`, then `L`, `N↑`, `N↓`, `dimension` as little-endian
//! `u64`, then `dimension` little-endian `f64` amplitudes.

use std::io::{Read, Write};

use super::basis::SectorBasis;
use super::hamiltonian::StateVector;
use crate::error::{Error, Result};
use crate::lattice::Sector;

pub const MAGIC: &[u8; 4] = b"FLP1";

fn io_err(e: std::io::Error) -> Error {
    Error::Checkpoint(e.to_string())
}

pub fn write_checkpoint<W: Write>(mut w: W, v: &StateVector) -> Result<()> {
    let s = v.sector();
    w.write_all(MAGIC).map_err(io_err)?;
    for x in [s.l(), s.n_up(), s.n_dn(), v.amplitudes().len()] {
        w.write_all(&(x as u64).to_le_bytes()).map_err(io_err)?;
    }
    for a in v.amplitudes() {
        w.write_all(&a.to_le_bytes()).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Reads a checkpoint and checks it against `basis`.
pub fn read_checkpoint<R: Read>(mut r: R, basis: &SectorBasis) -> Result<StateVector> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io_err)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint(format!("bad magic {magic:?}")));
    }
    let mut word = [0u8; 8];
    let mut header = [0u64; 4];
    for h in header.iter_mut() {
        r.read_exact(&mut word).map_err(io_err)?;
        *h = u64::from_le_bytes(word);
    }
    let [l, up, dn, dim] = header.map(|x| x as usize);
    let sector = Sector::new(l, up, dn)?;
    if sector != basis.sector() || dim != basis.dimension() {
        return Err(Error::Checkpoint(format!(
            "checkpoint sector (L={l}, N_up={up}, N_dn={dn}, dim={dim}) does not match the basis"
        )));
    }
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        r.read_exact(&mut word).map_err(io_err)?;
        amps.push(f64::from_le_bytes(word));
    }
    StateVector::new(basis, amps)
}
