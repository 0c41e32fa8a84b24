use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env_remove("HECKE_P")
        .env_remove("HECKE_SEED")
        .env_remove("HECKE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stderr)
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn mult_lists_the_zero_weight_twice() {
    let out = hecke(&["mult", "--datum", "gl3", "--weight", "1,0,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dimension"], 8);
    let zero = v["multiplicities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["weight"] == json!([0, 0, 0]))
        .unwrap();
    assert_eq!(zero["mult"], 2);
}

#[test]
fn commcheck_example() {
    let out = hecke(&["mf", "commcheck", "--p", "5", "--ell", "2", "--k", "12", "--N", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"ok": true}));
}

#[test]
fn manifest_is_printed_with_the_default_seed() {
    let out = hecke(&["rootdatum", "--datum", "gsp4"]);
    let lines = stderr_lines(&out);
    let m = &lines.last().unwrap()["manifest"];
    assert_eq!(m["config"]["seed"], 20_240_601);
    assert_eq!(m["exit_code"], 0);
    assert_eq!(stdout_json(&out)["weyl_order"], 8);
}

#[test]
fn exit_codes() {
    let domain = hecke(&["mult", "--datum", "gl2", "--weight", "0,1"]);
    assert_eq!(domain.status.code(), Some(2));
    let err = &stderr_lines(&domain)[0]["error"];
    assert_eq!(err["precondition"], "dominant");
    assert!(domain.stdout.is_empty());

    let resource = hecke(&["adm", "constituents", "--siegel", "3", "--depth", "17"]);
    assert_eq!(resource.status.code(), Some(3));

    assert_eq!(hecke(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(hecke(&["mult", "--weight", "1,0"]).status.code(), Some(64));
    assert_eq!(hecke(&["--help"]).status.code(), Some(0));
}

#[test]
fn extension_errors_name_the_degree() {
    let psi = json!({
        "datum": "gl2", "p": 7, "k": 1, "q": 2, "sqrt_q": 3,
        "values": [{"weight": [1, 0], "value": 0}, {"weight": [1, 1], "value": 1}]
    });
    let path = scratch("psi_irreducible.json");
    std::fs::write(&path, psi.to_string()).unwrap();
    let out = hecke(&["param", "recover", "--datum", "gl2", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = &stderr_lines(&out)[0]["error"];
    assert_eq!(err["kind"], "extend_field");
    assert_eq!(err["needed"], 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["param", "eval", "--datum", "gl3", "--p", "11", "--ext-degree", "2", "--q", "3", "--cutoff", "1,0,0;1,1,0;1,1,1", "--seed", "7"];
    let a = hecke(&args);
    let b = hecke(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = hecke(&args[..args.len() - 2]);
    assert_ne!(a.stdout, c.stdout, "the seed selects the point");
}

#[test]
fn config_file_and_environment_precedence() {
    let path = scratch("config.json");
    std::fs::write(&path, r#"{"p": 7, "ell": [2], "N": 10, "k": 12}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let p_of = |out: &Output| stderr_lines(out).last().unwrap()["manifest"]["config"]["p"].clone();

    let from_file = hecke(&["mf", "commcheck", "--config", cfg]);
    assert_eq!(p_of(&from_file), 7);

    let from_env = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["mf", "commcheck", "--config", cfg])
        .env("HECKE_P", "5")
        .output()
        .unwrap();
    assert_eq!(p_of(&from_env), 5);

    let from_cli = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["mf", "commcheck", "--config", cfg, "--p", "11"])
        .env("HECKE_P", "5")
        .output()
        .unwrap();
    assert_eq!(p_of(&from_cli), 11);
    assert_eq!(stdout_json(&from_cli), json!({"ok": true}));
}

#[test]
fn satake_documents_round_trip_through_files() {
    let image = hecke(&["satake", "--datum", "gsp4", "--weight", "2,2,1"]);
    assert_eq!(image.status.code(), Some(0));
    let path = scratch("image.json");
    std::fs::write(&path, &image.stdout).unwrap();
    let back = hecke(&["satake-inv", "--datum", "gsp4", "--input", path.to_str().unwrap()]);
    let v = stdout_json(&back);
    assert_eq!(
        v,
        json!({"datum": "gsp4", "terms": [{"weight": [2, 2, 1], "coeff": [{"v": 0, "c": 1}]}]})
    );
}

#[test]
fn hecke_product_of_gl2_generators() {
    let out = hecke(&["hecke-mul", "--datum", "gl2", "--weight", "1,0", "--weight", "1,0"]);
    let v = stdout_json(&out);
    assert_eq!(
        v["terms"],
        json!([
            {"weight": [2, 0], "coeff": [{"v": 0, "c": 1}]},
            {"weight": [1, 1], "coeff": [{"v": 0, "c": 1}, {"v": 2, "c": 1}]}
        ])
    );
}

#[test]
fn twist_example_passes() {
    let out = hecke(&[
        "param", "check-twist", "--datum", "gl2", "--p", "7", "--coords", "3;5", "--q", "2",
        "--cutoff", "2,0;1,0;1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["eigensystem_level"], true);
    assert_eq!(v["twisted_orbit"], json!([[3, 6], [6, 3]]));

    let bad = hecke(&[
        "param", "check-twist", "--datum", "gl2", "--p", "7", "--coords", "3;5", "--q", "2",
        "--cutoff", "2,0;1,0;1,1", "--perturb", "2,0",
    ]);
    let v = stdout_json(&bad);
    assert_eq!(v["eigensystem_failures"], json!([[2, 0]]));
    assert_eq!(v["parameter_level"], false);
}

#[test]
fn admissibility_modes_disagree_on_3_1() {
    let tensor = stdout_json(&hecke(&["adm", "check", "--weight", "3,1", "--mode", "tensor"]));
    let sym = stdout_json(&hecke(&["adm", "check", "--weight", "3,1", "--mode", "sym"]));
    assert_eq!(tensor["constituent"], true);
    assert_eq!(sym["constituent"], false);
    assert_eq!(sym["admissible"], false);
}

#[test]
fn text_format_is_aligned() {
    let out = hecke(&["mf", "filtration", "--p", "5", "--k", "12", "--N", "20", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "filtration  12\nweight      12\n");
}

#[test]
fn selftest_reports_counts() {
    let out = hecke(&["selftest", "--criterion", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], 1);
    assert_eq!(v["failed"], 0);
}
