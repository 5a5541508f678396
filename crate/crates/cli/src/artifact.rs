//! Output records and their CSV/JSON encodings. Floats use Rust's shortest
//! round-trip formatting in CSV and `serde_json`'s in JSON, so every value
//! parses back bit-exactly and identical inputs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use flp_core::exact::{AnalyticLines, ExactSolution, PhaseDiagramGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn new<P: Serialize>(command: &str, parameters: &P, tolerances: &[(&str, f64)]) -> CliResult<Self> {
        Ok(Self {
            tool: "flp".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            parameters: serde_json::to_value(parameters).map_err(|e| CliError::Serialize(e.to_string()))?,
            tolerances: tolerances.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactArtifact {
    pub provenance: Provenance,
    pub solution: ExactSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinesArtifact {
    pub provenance: Provenance,
    pub lines: AnalyticLines,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdArtifact {
    pub provenance: Provenance,
    pub l: usize,
    pub n_up: usize,
    pub n_dn: usize,
    pub dimension: usize,
    pub seed: u64,
    pub e0: f64,
    pub iterations: usize,
    pub residual: f64,
    pub n_d: f64,
    pub site: usize,
    pub corr: Vec<f64>,
    pub q: Vec<f64>,
    pub nq: Vec<f64>,
    pub peak_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFactorArtifact {
    pub provenance: Provenance,
    pub l: usize,
    pub n_up: usize,
    pub n_dn: usize,
    pub site: usize,
    pub seeds: Vec<u64>,
    /// Seed-averaged `C(r)` measured from `site`.
    pub corr: Vec<f64>,
    pub q: Vec<f64>,
    /// Seed-averaged `N(q)`.
    pub nq: Vec<f64>,
    pub peak_q: f64,
    /// Largest spread `max − min` of `N(q_k)` over seeds, taken over `k`.
    pub spread: f64,
    pub n_d: f64,
    pub n_d_spread: f64,
    pub e0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapArtifact {
    pub provenance: Provenance,
    pub l: usize,
    pub n_atoms: usize,
    pub e_minus: f64,
    pub e0: f64,
    pub e_plus: f64,
    pub gap: f64,
}

pub fn json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const SCAN_HEADER: &str = "delta,p,n_d,l_h,n_l,n_h,e_gs,p_c,phase";

pub fn scan_csv(grid: &PhaseDiagramGrid) -> String {
    let mut s = String::with_capacity(96 * grid.cells.len());
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for (i, delta) in grid.delta_axis.iter().enumerate() {
        for c in grid.column(i) {
            let _ = writeln!(
                s,
                "{delta},{},{},{},{},{},{},{},{}",
                c.p,
                c.point.n_d,
                c.point.l_h,
                opt(c.n_l),
                opt(c.n_h),
                c.e_gs,
                c.p_c,
                c.label
            );
        }
    }
    s
}

pub fn exact_csv(delta: f64, c: &ExactSolution) -> String {
    format!(
        "n,p,delta,n_d,l_h,n_l,n_h,e_gs,p_c,phase,constraint_active\n{},{},{delta},{},{},{},{},{},{},{},{}\n",
        c.n,
        c.p,
        c.point.n_d,
        c.point.l_h,
        opt(c.n_l),
        opt(c.n_h),
        c.e_gs,
        c.p_c,
        c.label,
        c.constraint_active
    )
}

/// Two-column CSV.
pub fn pairs_csv(header: &str, xs: &[f64], ys: &[f64]) -> String {
    let mut s = format!("{header}\n");
    for (x, y) in xs.iter().zip(ys) {
        let _ = writeln!(s, "{x},{y}");
    }
    s
}

pub fn ed_csv(a: &EdArtifact) -> String {
    format!(
        "L,n_up,n_dn,dimension,seed,e0,iterations,residual,n_d,peak_q\n{},{},{},{},{},{},{},{},{},{}\n",
        a.l, a.n_up, a.n_dn, a.dimension, a.seed, a.e0, a.iterations, a.residual, a.n_d, a.peak_q
    )
}

pub fn gap_csv(a: &GapArtifact) -> String {
    format!(
        "L,n_atoms,e_minus,e0,e_plus,gap\n{},{},{},{},{},{}\n",
        a.l, a.n_atoms, a.e_minus, a.e0, a.e_plus, a.gap
    )
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
            path: Some(p.to_path_buf()),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: None, source })
        }
    }
}
