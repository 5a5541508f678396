use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;

use flp_core::ed::{
    ground_state_lanczos, write_checkpoint, LanczosOptions, SectorBasis, StateVector, DEFAULT_MAX_DIMENSION,
};
use flp_core::exact::{linspace, scan_phase_diagram, ExactSolver, MinimizerConfig, CLASSIFY_TOL, CONSTRAINT_TIE_TOL};
use flp_core::lattice::sector_for;
use flp_core::observables::{balanced_sector, measure};
use flp_core::{FillingSpec, ModelParams, Sector};
use rayon::prelude::*;

use crate::args::*;
use crate::artifact::*;
use crate::error::{CliError, CliResult};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn check_filling(n: f64, p: f64) -> CliResult<()> {
    check((0.0..=2.0).contains(&n), || format!("--n must lie in [0, 2], got {n}"))?;
    check((0.0..=1.0).contains(&p), || format!("--p must lie in [0, 1], got {p}"))
}

fn check_axis(name: &str, min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    check(min.is_finite() && max.is_finite() && min < max, || {
        format!("--{name}-min must be below --{name}-max, got [{min}, {max}]")
    })?;
    check(steps >= 2, || format!("--{name}-steps must be at least 2, got {steps}"))?;
    Ok(linspace(min, max, steps)?)
}

fn model(m: &Model, delta: f64) -> CliResult<ModelParams> {
    check(m.t > 0.0 && m.t.is_finite(), || format!("--t must be positive, got {}", m.t))?;
    ModelParams::with_t(m.t, m.delta_g, m.delta_t, delta).map_err(|e| usage(e.to_string()))
}

fn minimizer(m: &Minimizer) -> CliResult<MinimizerConfig> {
    check(m.grid >= 2, || format!("--grid must be at least 2, got {}", m.grid))?;
    Ok(MinimizerConfig {
        grid: m.grid,
        ..MinimizerConfig::default()
    })
}

fn exact_tolerances(c: &MinimizerConfig) -> Vec<(&'static str, f64)> {
    vec![
        ("grid", c.grid as f64),
        ("step", c.step),
        ("classify", CLASSIFY_TOL),
        ("constraint_tie", CONSTRAINT_TIE_TOL),
    ]
}

fn lanczos(l: &Lanczos, seed: u64) -> CliResult<LanczosOptions> {
    check(l.tol > 0.0 && l.tol.is_finite(), || format!("--tol must be positive, got {}", l.tol))?;
    check(l.max_iter >= 1, || "--max-iter must be at least 1".into())?;
    check(l.krylov_cap >= 2, || format!("--krylov-cap must be at least 2, got {}", l.krylov_cap))?;
    check(l.memory_mib >= 1, || "--memory-mib must be at least 1".into())?;
    Ok(LanczosOptions {
        tol: l.tol,
        max_iter: l.max_iter,
        krylov_cap: l.krylov_cap,
        memory_budget_bytes: l.memory_mib << 20,
        seed,
    })
}

fn lanczos_tolerances(o: &LanczosOptions) -> Vec<(&'static str, f64)> {
    vec![
        ("residual", o.tol),
        ("max_iter", o.max_iter as f64),
        ("krylov_cap", o.krylov_cap as f64),
        ("memory_budget_bytes", o.memory_budget_bytes as f64),
    ]
}

fn basis(sector: Sector, allow_large: bool) -> CliResult<SectorBasis> {
    let limit = if allow_large { usize::MAX } else { DEFAULT_MAX_DIMENSION };
    Ok(SectorBasis::with_limit(sector, limit)?)
}

/// Sector of a ring run; commensurability failures are usage errors.
fn ring_sector(r: &Ring) -> CliResult<Sector> {
    check_filling(r.n, r.p)?;
    let spec = FillingSpec::new(r.n, r.p).map_err(|e| usage(e.to_string()))?;
    sector_for(r.l as usize, spec).map_err(|e| usage(e.to_string()))
}

fn ring_site(site: Option<usize>, l: usize) -> CliResult<usize> {
    let j = site.unwrap_or(l / 2);
    check(j < l, || format!("--site must lie in 0..{l}, got {j}"))?;
    Ok(j)
}

fn momenta(l: usize) -> Vec<f64> {
    (0..l).map(|k| 2.0 * PI * k as f64 / l as f64).collect()
}

pub fn execute(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| usage(format!("--jobs: {e}")))?;
    }
    match cli.command {
        Command::Exact(a) => exact(&a),
        Command::Scan(a) => scan(&a),
        Command::PcCurve(a) => pc_curve(&a),
        Command::NdCurve(a) => nd_curve(&a),
        Command::Ed(a) => ed(&a),
        Command::StructureFactor(a) => structure_factor(&a),
        Command::Gap(a) => gap(&a),
    }
}

fn exact(a: &ExactArgs) -> CliResult<()> {
    check_filling(a.n, a.p)?;
    let params = model(&a.model, a.delta)?;
    let config = minimizer(&a.minimizer)?;
    let solution = ExactSolver::new(config).minimize_ground_state(a.n, a.p, &params)?;
    let bytes = match a.format {
        Format::Csv => exact_csv(a.delta, &solution).into_bytes(),
        Format::Json => json(&ExactArtifact {
            provenance: Provenance::new("exact", a, &exact_tolerances(&config))?,
            solution,
        })?,
    };
    emit(a.out.as_deref(), &bytes)
}

fn scan(a: &ScanArgs) -> CliResult<()> {
    check((0.0..=2.0).contains(&a.n), || format!("--n must lie in [0, 2], got {}", a.n))?;
    let deltas = check_axis("delta", a.delta_min, a.delta_max, a.delta_steps)?;
    check(a.p_min >= 0.0 && a.p_max <= 1.0, || "--p-min/--p-max must lie in [0, 1]".into())?;
    let ps = check_axis("p", a.p_min, a.p_max, a.p_steps)?;
    let template = model(&a.model, 0.0)?;
    let config = minimizer(&a.minimizer)?;
    let grid = scan_phase_diagram(a.n, &template, &deltas, &ps, config)?;
    emit(a.out.as_deref(), scan_csv(&grid).as_bytes())?;
    if let Some(path) = &a.lines {
        let artifact = LinesArtifact {
            provenance: Provenance::new("scan", a, &exact_tolerances(&config))?,
            lines: grid.analytic_lines(),
        };
        emit(Some(path), &json(&artifact)?)?;
    }
    Ok(())
}

fn pc_curve(a: &PcCurveArgs) -> CliResult<()> {
    check(a.n_min >= 0.0 && a.n_max <= 2.0, || "--n-min/--n-max must lie in [0, 2]".into())?;
    let ns = check_axis("n", a.n_min, a.n_max, a.n_steps)?;
    let params = model(&a.model, a.delta)?;
    let solver = ExactSolver::new(minimizer(&a.minimizer)?);
    let pcs = ns
        .par_iter()
        .map(|&n| solver.critical_polarization(n, &params))
        .collect::<Result<Vec<_>, _>>()?;
    emit(a.out.as_deref(), pairs_csv("n,p_c", &ns, &pcs).as_bytes())
}

fn nd_curve(a: &NdCurveArgs) -> CliResult<()> {
    check((0.0..=2.0).contains(&a.n), || format!("--n must lie in [0, 2], got {}", a.n))?;
    check(a.p_min >= 0.0 && a.p_max <= 1.0, || "--p-min/--p-max must lie in [0, 1]".into())?;
    let ps = check_axis("p", a.p_min, a.p_max, a.p_steps)?;
    let params = model(&a.model, a.delta)?;
    let nds = ExactSolver::new(minimizer(&a.minimizer)?).nd_curve(a.n, &ps, &params)?;
    emit(a.out.as_deref(), pairs_csv("p,n_d", &ps, &nds).as_bytes())
}

fn ground_state(r: &Ring, opts: &LanczosOptions) -> CliResult<(SectorBasis, flp_core::ed::LanczosReport, StateVector)> {
    let sector = ring_sector(r)?;
    let params = model(&r.model, r.delta)?;
    let b = basis(sector, r.lanczos.allow_large)?;
    let (report, psi) = ground_state_lanczos(&params, &b, opts)?;
    Ok((b, report, psi))
}

fn ed(a: &EdArgs) -> CliResult<()> {
    let l = a.ring.l as usize;
    let site = ring_site(a.site, l)?;
    let opts = lanczos(&a.ring.lanczos, a.seed)?;
    let (b, report, psi) = ground_state(&a.ring, &opts)?;
    let set = measure(&psi, &b, site)?;
    if let Some(path) = &a.checkpoint {
        let io = |source| CliError::Io {
            path: Some(path.clone()),
            source,
        };
        let file = File::create(path).map_err(io)?;
        write_checkpoint(BufWriter::new(file), &psi)?;
    }
    let s = b.sector();
    let artifact = EdArtifact {
        provenance: Provenance::new("ed", a, &lanczos_tolerances(&opts))?,
        l,
        n_up: s.n_up(),
        n_dn: s.n_dn(),
        dimension: b.dimension(),
        seed: a.seed,
        e0: report.e0,
        iterations: report.iterations,
        residual: report.residual,
        n_d: set.n_d,
        site,
        corr: set.corr,
        q: momenta(l),
        nq: set.nq,
        peak_q: set.peak_q,
    };
    let bytes = match a.format {
        Format::Csv => ed_csv(&artifact).into_bytes(),
        Format::Json => json(&artifact)?,
    };
    emit(a.out.as_deref(), &bytes)
}

fn structure_factor(a: &StructureFactorArgs) -> CliResult<()> {
    let l = a.ring.l as usize;
    let site = ring_site(a.site, l)?;
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|i| a.seed_base + i).collect();
    let base = lanczos(&a.ring.lanczos, a.seed_base)?;

    let mut runs = Vec::with_capacity(seeds.len());
    let mut sector = None;
    for &seed in &seeds {
        let (b, report, psi) = ground_state(&a.ring, &base.with_seed(seed))?;
        runs.push((report.e0, measure(&psi, &b, site)?));
        sector = Some(b.sector());
    }
    let s = sector.expect("at least one seed");
    let count = runs.len() as f64;
    let mean = |f: &dyn Fn(usize) -> f64| (0..runs.len()).map(f).sum::<f64>() / count;
    let range = |f: &dyn Fn(usize) -> f64| {
        let (lo, hi) = (0..runs.len()).map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        hi - lo
    };
    let nq: Vec<f64> = (0..l).map(|k| mean(&|i| runs[i].1.nq[k])).collect();
    let corr: Vec<f64> = (0..l).map(|r| mean(&|i| runs[i].1.corr[r])).collect();
    let spread = (0..l).map(|k| range(&|i| runs[i].1.nq[k])).fold(0.0, f64::max);
    let artifact = StructureFactorArtifact {
        provenance: Provenance::new("structure-factor", a, &lanczos_tolerances(&base))?,
        l,
        n_up: s.n_up(),
        n_dn: s.n_dn(),
        site,
        peak_q: flp_core::observables::peak_momentum(&nq),
        corr,
        q: momenta(l),
        nq,
        spread,
        n_d: mean(&|i| runs[i].1.n_d),
        n_d_spread: range(&|i| runs[i].1.n_d),
        e0: mean(&|i| runs[i].0),
        seeds,
    };
    emit(a.out.as_deref(), &json(&artifact)?)
}

fn gap(a: &GapArgs) -> CliResult<()> {
    let l = a.l as usize;
    check((0.0..=2.0).contains(&a.n), || format!("--n must lie in [0, 2], got {}", a.n))?;
    let total = a.n * l as f64;
    let n_atoms = total.round() as usize;
    check((total - total.round()).abs() <= 1e-9, || {
        format!("n·L = {total} is not an integer for n = {}, L = {l}", a.n)
    })?;
    check(n_atoms >= 1 && n_atoms < 2 * l, || {
        format!("the gap needs 0 < N < 2L, got N = {n_atoms} on L = {l}")
    })?;
    let params = model(&a.model, a.delta)?;
    let opts = lanczos(&a.lanczos, a.seed)?;
    let e0 = |n: usize| -> CliResult<f64> {
        let b = basis(balanced_sector(l, n)?, a.lanczos.allow_large)?;
        Ok(ground_state_lanczos(&params, &b, &opts)?.0.e0)
    };
    let (e_minus, e_mid, e_plus) = (e0(n_atoms - 1)?, e0(n_atoms)?, e0(n_atoms + 1)?);
    let artifact = GapArtifact {
        provenance: Provenance::new("gap", a, &lanczos_tolerances(&opts))?,
        l,
        n_atoms,
        e_minus,
        e0: e_mid,
        e_plus,
        gap: e_plus + e_minus - 2.0 * e_mid,
    };
    let bytes = match a.format {
        Format::Csv => gap_csv(&artifact).into_bytes(),
        Format::Json => json(&artifact)?,
    };
    emit(a.out.as_deref(), &bytes)
}
