//! The command-line front end: subcommands, output formats and exit codes.

use std::process::Command;

fn kdvh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kdvh")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn hierarchy_gen_formats() {
    let (code, text, _) = kdvh(&["hierarchy", "gen", "--l", "2"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("G_2 = u_{4x} + 5/3*u*u_xx + 5/6*u_x^2 + 5/18*u^3"));
    let (_, json, _) = kdvh(&["hierarchy", "gen", "--l", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["l"], 1);
    assert_eq!(v["rank"], "5/2");
    let (_, tex, _) = kdvh(&["hierarchy", "gen", "--l", "1", "--latex"]);
    assert!(tex.contains("\\frac{1}{2} u^{2}"));
    let (code, _, _) = kdvh(&["hierarchy", "gen", "--l", "1", "--json", "--latex"]);
    assert_eq!(code, 2);
}

#[test]
fn ibp_alpha_json_and_verification() {
    let (code, out, _) = kdvh(&["ibp", "alpha", "--l", "3", "--verify"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!({"l": 3, "alphas": ["7", "-14", "7"], "verified": true}));
}

#[test]
fn energy_build_checks_threshold() {
    let (code, out, _) = kdvh(&["energy", "build", "--l", "2", "--s", "4", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gammas"][0], serde_json::json!(["-3/10", "1/5"]));
    assert_eq!(v["diagnostics"]["resonant_residue"], 0);
    let (code, _, err) = kdvh(&["energy", "build", "--l", "2", "--s", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("threshold"));
}

#[test]
fn solve_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let manifest = dir.path().join("run.json");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "flow.kind = model\nflow.l = 2\ngrid.N = 32\ntime.dt = 0.01\ntime.T = 0.05\n\
             diagnostics.s = 4\ndiagnostics.every = 1\noutput.path = {}\n",
            csv.display()
        ),
    )
    .unwrap();
    let (code, out, _) = kdvh(&["solve", "--config", cfg.to_str().unwrap(), "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"PASS\""));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,l2,hs,H0,H1,H2,Es"));
    assert_eq!(lines.count(), 6);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["config"]["grid.N"], "32");
    assert_eq!(m["outputs"][csv.display().to_string()], kdvh::lab::sha256_hex(text.as_bytes()));
}

#[test]
fn experiments_report_verdicts() {
    let (code, csv, summary) = kdvh(&["exp", "scaling", "--set", "grid.N=32", "--set", "time.dt=0.01"]);
    assert_eq!(code, 0, "{summary}");
    assert!(csv.starts_with("lambda,t,t_scaled,max_rel_error"));
    // An unreachable threshold turns the verdict into FAIL (exit 1).
    let (code, _, _) = kdvh(&["exp", "mu-cauchy", "--set", "grid.N=32", "--set", "time.T=0.1", "--set", "threshold.slope=3"]);
    assert_eq!(code, 1);
    let (code, _, err) = kdvh(&["exp", "conservation", "--set", "grid.n=32"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key"));
}

#[test]
fn symbolic_outputs_are_reproducible() {
    let a = kdvh(&["energy", "build", "--l", "3", "--json"]).1;
    let b = kdvh(&["energy", "build", "--l", "3", "--json"]).1;
    assert_eq!(a, b);
}
