use std::process::Command;

use qhabiro::cli::{run, verify_identity, IDENTITIES};
use qhabiro::knot::Registry;
use qhabiro::QSeries;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qhabiro").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_pentagonal() {
    let (code, out, _) = call(&["verify", "pentagonal", "--prec", "50"]);
    assert_eq!((code, out.as_str()), (0, "OK: defect 0 to O(q^50)\n"));
}

#[test]
fn every_identity_holds() {
    let reg = Registry::new();
    for name in IDENTITIES {
        let r = verify_identity(&reg, name, 25).unwrap();
        assert!(r.ok, "{name}: {}", r.detail);
    }
    assert!(verify_identity(&reg, "nonsense", 10).is_err());
}

#[test]
fn divergent_surgery_exits_two() {
    let (code, out, err) = call(&["surgery", "--knot", "4_1", "-p", "5", "-a", "0", "--method", "fk"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("divergent or undecidable"), "{err}");
    let (code, out, _) = call(&["--json", "surgery", "--knot", "4_1", "-p", "5", "-a", "0", "--method", "fk"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "divergent");
}

#[test]
fn residue_json_matches_table() {
    let (code, out, _) = call(&["residues", "--knot", "3_1r", "-j", "0", "--prec", "10", "--json"]);
    assert_eq!(code, 0);
    let s: QSeries = serde_json::from_str(&out).unwrap();
    assert_eq!(s, QSeries::from_ints_trunc(1, &[1, 1, 3, 6, 12, 21, 38, 63, 106], 10));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap() + "\n", out);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(call(&["bogus"]).0, 1);
    assert_eq!(call(&["surgery", "--knot", "4_1"]).0, 1);
    assert_eq!(call(&["residues", "--knot", "4_1", "--prec", "ten"]).0, 1);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("connect-sum"));
}

#[test]
fn domain_errors_exit_two() {
    assert_eq!(call(&["residues", "--knot", "9_99", "-j", "0"]).0, 2);
    assert_eq!(call(&["surgery", "--knot", "4_1", "-p", "0"]).0, 2);
    assert_eq!(call(&["surgery", "--knot", "4_1", "-p", "-2", "--method", "magic"]).0, 2);
    assert_eq!(call(&["verify", "nonsense"]).0, 2);
    assert_eq!(call(&["--prec", "0", "knot", "--list"]).0, 2);
}

#[test]
fn surgery_text_output() {
    let (code, out, _) = call(&["surgery", "--knot", "3_1l", "-p", "-1", "--method", "residues", "--prec", "10"]);
    assert_eq!(code, 0);
    assert_eq!(out, "Zhat = q^(-1) * (1 - q - q^3 - q^7 + q^8 + O(q^10))\n");
    let (_, out, _) = call(&["--json", "surgery", "--knot", "unknot", "-p", "-3", "-a", "1", "--prec", "5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["two_power"], -1);
    assert_eq!(v["delta"], "1/3");
}

#[test]
fn other_commands() {
    assert_eq!(call(&["park-poly", "-p", "3", "-a", "0", "-k", "2"]).1, "q^-3 + q^-2 + 1\n");
    assert_eq!(call(&["park-poly", "-p", "3", "-a", "0", "-k", "2", "--method", "residue"]).1, "q^-3 + q^-2 + 1\n");
    let (_, out, _) = call(&["knot", "--knot", "4_1", "--k-max", "2", "--prec", "5"]);
    assert!(out.contains("LBC constant: -1") && out.contains("f[2] = q^-1 + 3 + q + O(q^5)"), "{out}");
    let (_, out, _) = call(&["transform", "--knot", "4_1", "--direction", "f-to-a", "--k-max", "3", "--prec", "5"]);
    assert_eq!(out.lines().filter(|l| l.ends_with("= 1 + O(q^5)")).count(), 4, "{out}");
    let (_, out, _) = call(&["connect-sum", "3_1l", "3_1l", "--depth", "4", "--prec", "6"]);
    assert!(out.contains("LBC bound with C = -4: holds"), "{out}");
    assert_eq!(call(&["asympt", "--mode", "quotient", "--depth", "3"]).1, "(1, 9, 513, 109593)\n");
    let (_, out, _) = call(&["asympt", "--mode", "csv", "--n-max", "3"]);
    assert!(out.starts_with("n,re,im,modulus,normalized\n") && out.lines().count() == 4, "{out}");
    let (code, out, _) = call(&["--jobs", "2", "asympt", "--mode", "period", "--n-max", "20"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("period 5"), "{out}");
}

#[test]
fn knot_files() {
    let path = std::env::temp_dir().join(format!("qhabiro-cli-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"name": "granny", "generator": {"kind": "composite", "summands": ["3_1l", "3_1l"]}}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["--knots", p, "--json", "knot", "--knot", "granny", "--k-max", "1", "--prec", "4"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lbc"], -4);
    assert_eq!(call(&["--knots", "/nonexistent/knots.json", "knot", "--list"]).0, 2);
}

#[test]
fn binary_reads_precision_from_environment() {
    let bin = env!("CARGO_BIN_EXE_qhabiro");
    let run_bin = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(bin);
        c.args(["residues", "--knot", "3_1r", "-j", "0"]).args(extra);
        match env {
            Some(v) => c.env("QHABIRO_PREC", v),
            None => c.env_remove("QHABIRO_PREC"),
        };
        let o = c.output().unwrap();
        (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
    };
    assert_eq!(run_bin(Some("5"), &[]), (0, "q + q^2 + 3*q^3 + 6*q^4 + O(q^5)\n".into()));
    assert_eq!(run_bin(Some("5"), &["--prec", "3"]), (0, "q + q^2 + O(q^3)\n".into()));
    assert_eq!(run_bin(None, &["--prec", "3"]).0, 0);
    let o = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn progress_goes_to_stderr_only() {
    let quiet = call(&["verify", "pentagonal", "--prec", "20"]);
    let loud = call(&["-v", "verify", "pentagonal", "--prec", "20"]);
    assert_eq!(quiet.1, loud.1);
    assert!(quiet.2.is_empty());
    assert!(loud.2.contains("checking pentagonal"));
    assert_eq!(call(&["asympt", "--mode", "period", "--bits", "32"]).0, 2);
}
