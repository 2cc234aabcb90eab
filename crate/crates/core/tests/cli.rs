use std::path::Path;
use std::process::Command;

use cotorsion::cli::run;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cotorsion").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn dir_arg(d: &Path) -> String {
    d.to_str().unwrap().to_string()
}

#[test]
fn pd_of_the_simple_at_b_is_one() {
    let (code, out, _) = cli(&["pd", "--module", "S_b", "--algebra", "T2F2"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let (code, out, _) = cli(&["pd", "--module", "S1", "--algebra", "NAK3"]);
    assert_eq!((code, out.as_str()), (0, "2\n"));
}

#[test]
fn json_output_is_machine_readable() {
    let (code, out, _) = cli(&["--json", "ext", "--module", "S_b", "--other", "S_a"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(cli(&["pd", "--module", "nope"]).0, 2);
    assert_eq!(cli(&["--prime", "4", "pd", "--module", "A"]).0, 2);
    assert_eq!(
        cli(&["--prime", "11", "--algebra", "T2", "pd", "--module", "A"]).0,
        2
    );
    assert_eq!(cli(&["no-such-command"]).0, 2);
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(cli(&["check-cert", bad.to_str().unwrap()]).0, 2);
    assert_eq!(cli(&["validate", bad.to_str().unwrap()]).0, 2);
}

#[test]
fn family_names_resolve_by_prime() {
    let (code, out, _) = cli(&[
        "--algebra",
        "T2",
        "--prime",
        "3",
        "--json",
        "pd",
        "--module",
        "A",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["algebra"], "T2F3");
}

#[test]
fn validate_flags_a_non_associative_table() {
    assert_eq!(cli(&["validate"]).0, 0);
    let d = tempfile::tempdir().unwrap();
    let path = d.path().join("alg.json");
    let mut spec = cotorsion::library::algebra("T2F2").unwrap().to_spec();
    // e12 * e12 = e12 keeps the unit but (e12 e22) e12 != e12 (e22 e12).
    spec.mul[1][1] = vec![0, 1, 0];
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    let (code, out, _) = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL"));
}

#[test]
fn tampered_filtration_is_rejected_with_its_degree() {
    let d = tempfile::tempdir().unwrap();
    let dir = dir_arg(d.path());
    let (code, _, err) = cli(&[
        "--out-dir",
        &dir,
        "--kappa",
        "6",
        "--seed",
        "4",
        "dw-filtrate",
        "--n",
        "1",
    ]);
    assert_eq!(code, 0, "{err}");
    let path = d.path().join("complex_filtration-dw-random.json");
    assert_eq!(cli(&["check-cert", path.to_str().unwrap()]).0, 0);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let steps = v["witness"]["steps"].as_array_mut().unwrap();
    let (a, m) = steps
        .iter()
        .enumerate()
        .find_map(|(a, s)| {
            s["inclusion"]
                .as_array()
                .unwrap()
                .iter()
                .position(|c| c.get(0).and_then(|r| r.get(0)).is_some())
                .map(|m| (a, m))
        })
        .unwrap();
    let cell = &mut steps[a]["inclusion"][m][0][0];
    *cell = Value::from(1 - cell.as_u64().unwrap());
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let (code, out, _) = cli(&["check-cert", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains(&format!("degree {m}")), "{out}");
}

#[test]
fn identical_inputs_and_seed_give_identical_reports() {
    let d = tempfile::tempdir().unwrap();
    let dir = dir_arg(d.path());
    let runs: Vec<(String, Vec<u8>)> = (0..2)
        .map(|_| {
            let (code, out, err) = cli(&[
                "--out-dir",
                &dir,
                "--seed",
                "9",
                "--json",
                "staircase",
                "--track",
                "flat",
                "--algebra",
                "NAK3",
            ]);
            assert_eq!(code, 0, "{err}");
            let cert = std::fs::read(d.path().join("staircase-flat-random-exact.json")).unwrap();
            (out, cert)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let seq = cli(&[
        "--out-dir",
        &dir,
        "--seed",
        "9",
        "--json",
        "--sequential",
        "lift",
        "--count",
        "6",
    ]);
    let par = cli(&[
        "--out-dir",
        &dir,
        "--seed",
        "9",
        "--json",
        "lift",
        "--count",
        "6",
    ]);
    assert_eq!(seq, par);
}

#[test]
fn demo_passes_and_prints_a_table() {
    let d = tempfile::tempdir().unwrap();
    let (code, out, err) = cli(&["--out-dir", &dir_arg(d.path()), "demo"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("T2F2") && out.contains("NAK3"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn out_dir_comes_from_the_environment() {
    let d = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_cotorsion"))
        .args(["filtrate-module", "--module", "P_b"])
        .env("COTORSION_OUT_DIR", d.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    let path = d.path().join("module_filtration-P_b.json");
    let out = Command::new(env!("CARGO_BIN_EXE_cotorsion"))
        .arg("check-cert")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn violations_exit_one() {
    let (code, out, _) = cli(&[
        "check-cotorsion",
        "--a",
        "{S_b}",
        "--b",
        "{S_a}",
        "--universe",
        "modules",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("Ext^1(S_b, S_a)"), "{out}");
    assert_eq!(
        cli(&[
            "lift",
            "--count",
            "3",
            "--obstructed",
            "--a",
            "all",
            "--b",
            "all"
        ])
        .0,
        0
    );
}
