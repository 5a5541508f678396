use std::path::Path;
use std::process::{Command, Output};

use flp_cli::artifact::{EdArtifact, ExactArtifact, GapArtifact, LinesArtifact, StructureFactorArtifact, SCAN_HEADER};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn flp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flp"))
        .args(args)
        .env_remove("FLP_JOBS")
        .output()
        .expect("spawn flp")
}

fn ok(args: &[&str]) -> String {
    let out = flp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let out = flp(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

/// Parses, re-serializes and compares: JSON artifacts must survive a round trip.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> T {
    let value: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<T>(&again).unwrap(), value);
    value
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn every_command_has_help_with_defaults() {
    let top = ok(&["--help"]);
    for cmd in ["exact", "scan", "pc-curve", "nd-curve", "ed", "structure-factor", "gap"] {
        assert!(top.contains(cmd), "{cmd} missing from top-level help");
        let help = ok(&[cmd, "--help"]);
        assert!(help.contains("Usage: flp"), "{cmd}");
    }
    assert!(ok(&["scan", "--help"]).contains("[default: 512]"));
    let ed = ok(&["ed", "--help"]);
    assert!(ed.contains("[default: 1e-10]") && ed.contains("[default: 12]") && ed.contains("[default: csv]"));
    assert!(ok(&["structure-factor", "--help"]).contains("[default: 4]"));
}

#[test]
fn exact_point_as_csv_and_json() {
    let args = ["exact", "--n", "0.9", "--p", "0.2", "--delta", "0.0", "--delta-g", "-1.0", "--delta-t", "0.4"];
    let csv = ok(&args);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,p,delta,n_d,l_h,n_l,n_h,e_gs,p_c,phase,constraint_active");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 11);
    assert_eq!(row[0], "0.9");

    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let artifact: ExactArtifact = round_trip(&ok(&with_json));
    assert_eq!(artifact.provenance.command, "exact");
    assert_eq!(artifact.provenance.version, env!("CARGO_PKG_VERSION"));
    assert_eq!(artifact.solution.n, 0.9);
    assert!(artifact.provenance.tolerances.contains_key("step"));
}

#[test]
fn scan_writes_one_row_per_cell_and_lines() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let lines = dir.path().join("lines.json");
    ok(&[
        "scan", "--n", "0.9", "--delta-min", "-6", "--delta-max", "4", "--delta-steps", "6", "--p-steps", "5",
        "--delta-t", "0.4", "--grid", "128", "--out", path_str(&csv), "--lines", path_str(&lines),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next().unwrap(), SCAN_HEADER);
    assert_eq!(rows.clone().count(), 30);
    assert!(rows.all(|r| r.split(',').count() == 9));
    let artifact: LinesArtifact = round_trip(&std::fs::read_to_string(&lines).unwrap());
    assert!(artifact.lines.delta_c.is_some());
}

#[test]
fn curves_have_their_schemas() {
    let nd = ok(&["nd-curve", "--n", "1", "--delta-t", "0.4", "--p-steps", "11"]);
    let mut it = nd.lines();
    assert_eq!(it.next(), Some("p,n_d"));
    let values: Vec<f64> = it.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 11);
    assert_eq!(values[0], values[1]);
    assert_eq!(*values.last().unwrap(), 0.0);

    let pc = ok(&["pc-curve", "--n-min", "0.5", "--n-max", "1.5", "--n-steps", "3", "--delta-t", "0.4"]);
    let mut it = pc.lines();
    assert_eq!(it.next(), Some("n,p_c"));
    assert_eq!(it.count(), 3);
}

#[test]
fn ed_json_checkpoint_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("psi.flp");
    let json = ok(&[
        "ed", "--L", "6", "--n", "1", "--delta-g", "-0.8", "--format", "json", "--checkpoint", path_str(&ckpt),
    ]);
    let a: EdArtifact = round_trip(&json);
    assert_eq!((a.l, a.n_up, a.n_dn, a.dimension, a.site), (6, 3, 3, 400, 3));
    assert_eq!(a.nq.len(), 6);
    assert!(a.nq[0].abs() < 1e-10);
    assert!(a.residual <= 1e-10);
    let bytes = std::fs::read(&ckpt).unwrap();
    assert_eq!(&bytes[..4], b"FLP1");
    assert_eq!(bytes.len(), 4 + 4 * 8 + 400 * 8);

    let csv = ok(&["ed", "--L", "6", "--n", "1", "--delta-g", "-0.8"]);
    assert!(csv.starts_with("L,n_up,n_dn,dimension,seed,e0,"));
}

#[test]
fn structure_factor_is_deterministic_across_job_counts() {
    let args = ["structure-factor", "--L", "8", "--n", "1", "--p", "0.25", "--delta-g", "-0.8", "--seeds", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_flp")).args(args).env("FLP_JOBS", "1").output().unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_flp")).args(args).arg("--jobs").arg("2").output().unwrap();
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["q", "nq", "peak_q", "seeds", "spread"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    let a: StructureFactorArtifact = round_trip(&text);
    assert_eq!(a.seeds, vec![0, 1, 2]);
    assert_eq!(a.nq.len(), 8);
    assert!(a.spread < 1e-8);
}

#[test]
fn gap_reports_three_energies() {
    let a: GapArtifact = round_trip(&ok(&[
        "gap", "--L", "6", "--n", "1", "--delta-g", "0", "--delta", "4", "--format", "json",
    ]));
    assert_eq!(a.n_atoms, 6);
    assert!((a.gap - (a.e_plus + a.e_minus - 2.0 * a.e0)).abs() < 1e-15);
    assert!(a.gap > 0.0);
}

#[test]
fn errors_map_to_distinct_exit_codes() {
    let cases: [(&[&str], i32); 7] = [
        (&["ed", "--L", "10", "--n", "1", "--p", "0.05"], 2),
        (&["exact", "--n", "0.9", "--bogus"], 2),
        (&["exact", "--n", "2.5"], 2),
        (&["exact", "--n", "1.6", "--p", "0.5"], 12),
        (&["exact", "--n", "0.9", "--delta-g", "-0.8"], 14),
        (&["scan", "--n", "1.6", "--delta-steps", "2", "--p-steps", "2", "--grid", "16"], 17),
        (&["ed", "--L", "16", "--n", "1"], 18),
    ];
    for (args, code) in cases {
        let (got, stderr) = exit_code(args);
        assert_eq!(got, code, "{args:?}: {stderr}");
        if code != 2 || !args.contains(&"--bogus") {
            assert_eq!(stderr.trim_end().lines().count(), 1, "{args:?}: {stderr}");
        }
    }
}
