use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    (out.status.code().unwrap(), err)
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn classify_reproduces_the_golden_table() {
    let golden = include_str!("golden/classes.tsv");
    for line in golden.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let v = json_out(&["classify", cols[0]]);
        assert_eq!(v["symbol"], cols[1], "{}", cols[0]);
        let codim = match &v["codim"] {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => panic!("codim {:?}", other),
        };
        assert_eq!(codim, cols[2], "{}", cols[0]);
    }
}

#[test]
fn classify_reports_the_linear_coefficient() {
    let v = json_out(&["classify", "-3y + y^2"]);
    assert_eq!(v["class"], "A0");
    assert_eq!(v["a"], "-3");
}

#[test]
fn exit_codes() {
    let (code, err) = error_of(&["classify", "0"]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "Undetermined");

    let (code, err) = error_of(&["classify", "y/2"]);
    assert_eq!(code, 1);
    assert_eq!(err["error"], "ParseError");
    assert!(err["message"].as_str().unwrap().contains("byte 1"));

    let (code, err) = error_of(&["linmap", "-y + y^2"]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "ResonantMultiplier");

    let (code, err) = error_of(&["normalize", "y^2 + y^3"]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "Obstructed");

    let (code, err) = error_of(&["frobnicate"]);
    assert_eq!(code, 1);
    assert_eq!(err["error"], "Usage");

    let (code, _) = error_of(&["classify", "x*y"]);
    assert_eq!(code, 1);

    assert!(run(&["--help"]).status.success());
}

#[test]
fn normalize_certifies() {
    let v = json_out(&["normalize", "x + x^3"]);
    assert_eq!(v["certificate"]["verified"], true);
    let v = json_out(&["normalize", "-4y^3 + y^6", "--order", "8"]);
    assert_eq!(v["class"]["class"], "A2");
    assert_eq!(v["class"]["sign"], -1);
}

#[test]
fn field_and_lift() {
    let v = json_out(&["field", "y^2"]);
    assert_eq!(v["residual_zero"], true);
    assert_eq!(v["field"]["kind"], "liouville");
    let v = json_out(&["lift", "y^2", "--c", "1/2"]);
    assert_eq!(v["strictly_contact"], true);
}

#[test]
fn equilibria_of_the_saddle_pair() {
    let v = json_out(&["equilibria", "y + y^2", "--range", "-2,2"]);
    let eq = v.as_array().unwrap();
    assert_eq!(eq.len(), 2);
    assert_eq!(eq[0]["location"][1], "-1");
    let csv = run(&["equilibria", "y^2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("x,y,type"));
    assert!(text.contains("DegenerateLine"));
}

#[test]
fn transversality_ranks() {
    assert_eq!(json_out(&["transversal", "--family", "Q"])["rank"], 1);
    assert_eq!(json_out(&["transversal", "--family", "T"])["rank"], 2);
}

#[test]
fn basis_and_ad_matrix() {
    let v = json_out(&["basis3d", "--degree", "1"]);
    assert_eq!(v["total"], 9);
    assert_eq!(v["counts"], serde_json::json!([6, 2, 1]));
    let v = json_out(&["admatrix", "--degree", "3", "--a", "2"]);
    assert_eq!(v["diagonal"], true);
    assert_eq!(v["size"], 30);
    let (code, err) = error_of(&["admatrix", "--degree", "2", "--a", "0"]);
    assert_eq!((code, err["error"].as_str()), (1, Some("ZeroLinearPart")));
}

#[test]
fn linearizations() {
    let v = json_out(&["linearize3d", "1,1/2,-1", "--order", "6"]);
    assert_eq!(v["routes_agree"], true);
    let v = json_out(&["linmap", "1/3y + y^2 - y^3"]);
    assert_eq!(v["residual_zero"], true);
    assert_eq!(v["a"], "3");
}

#[test]
fn sweep_flags_the_transition() {
    let v = json_out(&["sweep", "--family", "Q", "--grid", "-1:1:3"]);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert_eq!(points[1]["summary"]["lines"], 1);
    assert_eq!(v["bifurcations"][0]["at"], 1);
    let v = json_out(&["sweep", "--family", "T", "--grid", "-1:1:3,0"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    let (code, _) = error_of(&["sweep", "--family", "T", "--grid", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn portrait_writes_svg_and_csv() {
    let svg = scratch("q.svg");
    let v = json_out(&[
        "portrait",
        "--family",
        "Q",
        "--params",
        "1",
        "--seeds",
        "3x3",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(v["curves"], 18);
    assert_eq!(v["saddles"], 2);
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"));
    assert!(body.contains("polyline"));

    let out = run(&[
        "portrait", "--family", "Q", "--params", "0", "--seeds", "2x2", "--t", "1", "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("curve,t,x,y\n"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let cfg = scratch("portrait.conf");
    std::fs::write(&cfg, "order = 6\nseeds = 2x2\nt = 1\nstep = 0.05\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json_out(&["classify", "y^2", "--config", c]);
    assert_eq!(v["germ"].as_array().unwrap().len(), 7);
    let v = json_out(&["classify", "y^2", "--config", c, "--order", "4"]);
    assert_eq!(v["germ"].as_array().unwrap().len(), 5);
    let svg = scratch("cfg.svg");
    let v = json_out(&[
        "portrait",
        "--family",
        "T",
        "--params",
        "0,0",
        "--config",
        c,
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(v["curves"], 8);

    let bad = scratch("bad.conf");
    std::fs::write(&bad, "colour = red\n").unwrap();
    assert_eq!(
        error_of(&["classify", "y", "--config", bad.to_str().unwrap()]).0,
        1
    );
}

#[test]
fn verify_passes() {
    let v = json_out(&["verify", "--samples", "5", "--seed", "7"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["verify", "--samples", "4", "--seed", "3"],
        vec!["sweep", "--family", "T", "--grid", "-1:1:5,-1:1:5"],
        vec![
            "portrait", "--family", "Q", "--params", "1/2", "--seeds", "3x3",
        ],
        vec!["basis3d", "--degree", "2"],
    ];
    for args in &runs {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{:?}", args);
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}
