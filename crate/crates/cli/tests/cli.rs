use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn descriptor_path(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/descriptors").join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_crystal-pde")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value, String) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, _) = run(&full);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"));
    (code, v, out)
}

#[test]
fn unoriented_bordism_in_degree_four() {
    let (code, out, _) = run(&["bordism", "unoriented", "--n", "4"]);
    assert_eq!((code, out.trim()), (0, "Z/2 x Z/2"));
}

#[test]
fn navier_stokes_classification_json() {
    let path = descriptor_path("navier_stokes.desc");
    let (code, v, _) = json(&["pde", "classify", &path]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "ExtendedZeroCrystal");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["caveats", "crystal", "singular_bordism", "verdict", "weak_bordism"]);
    assert!(v["crystal"]["dimension"].is_u64());
}

#[test]
fn point_group_verification_exit_codes() {
    let (code, v, _) = json(&["tables", "pointgroup", "C_3", "--verify"]);
    assert_eq!(code, 2);
    let lagrange = v["mismatches"].as_array().unwrap().iter().filter(|m| m["class"] == "LagrangeViolationInPaper").count();
    assert_eq!(lagrange, 1);
    assert_eq!(run(&["tables", "pointgroup", "C_3", "--verify", "--expect-known-errata"]).0, 0);
    assert_eq!(run(&["tables", "pointgroup", "O", "--verify"]).0, 0);
}

#[test]
fn full_validation_passes_only_with_known_errata() {
    let (code, out, _) = run(&["tables", "validate"]);
    assert_eq!(code, 2);
    assert!(out.contains("15P 11F 9I = 35"));
    assert_eq!(run(&["tables", "validate", "--expect-known-errata"]).0, 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["bordism", "unoriented"],
        &["bordism", "unoriented", "--n", "4", "--colour"],
        &["pde", "symbol", "x.pde", "--corpus", "heat"],
        &["pde", "classify"],
        &["--format", "yaml", "bordism", "unoriented", "--n", "1"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn input_errors_are_diagnostics() {
    let (code, out, err) = run(&["tables", "pointgroup", "C_5"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error: unknown point group"));
    assert!(!err.contains("panicked"));
    assert_eq!(run(&["pde", "classify", "/nonexistent.desc"]).0, 1);
    assert_eq!(run(&["bordism", "oriented", "--n", "9"]).0, 1);
}

#[test]
fn every_subcommand_has_help() {
    let paths: &[&[&str]] = &[
        &[],
        &["bordism"],
        &["bordism", "unoriented"],
        &["bordism", "oriented"],
        &["bordism", "relative"],
        &["bordism", "crystal-group"],
        &["tables"],
        &["tables", "pointgroup"],
        &["tables", "spacegroups"],
        &["tables", "wallpaper"],
        &["tables", "validate"],
        &["cohomology"],
        &["symmorphic"],
        &["pde"],
        &["pde", "symbol"],
        &["pde", "involutivity"],
        &["pde", "classify"],
        &["pde", "singular-classify"],
        &["pde", "verify-solution"],
    ];
    for p in paths {
        let mut args = p.to_vec();
        args.push("--help");
        let (code, out, _) = run(&args);
        assert_eq!(code, 0, "{p:?}");
        assert!(out.contains("Usage:"), "{p:?}");
    }
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

#[test]
fn json_output_round_trips_without_floats() {
    let ricci = descriptor_path("ricci_flow.desc");
    let singular = descriptor_path("singular_component.desc");
    let cases: &[&[&str]] = &[
        &["bordism", "unoriented", "--n", "6"],
        &["bordism", "oriented", "--n", "8"],
        &["bordism", "relative", "--betti", "1,1,1", "--p", "2"],
        &["bordism", "crystal-group", "--group", "Z/2"],
        &["tables", "pointgroup", "D_4h"],
        &["tables", "pointgroup", "D_6", "--verify"],
        &["tables", "spacegroups"],
        &["tables", "wallpaper"],
        &["tables", "wallpaper", "p4m"],
        &["tables", "validate"],
        &["cohomology", "--group", "C_2v", "--module", "sign", "--coefficients", "Z/2", "--degree", "2"],
        &["symmorphic", "pmg"],
        &["pde", "symbol", "--corpus", "pressure", "--cartan"],
        &["pde", "involutivity", "--corpus", "heat", "--alternate"],
        &["pde", "classify", &ricci],
        &["pde", "singular-classify", &singular, "--compare", "0,1"],
        &["pde", "verify-solution", "--corpus", "heat", "--section", "x^2 + 2*t"],
    ];
    for args in cases {
        let (_, v, raw) = json(args);
        let again = serde_json::to_string_pretty(&serde_json::from_str::<Value>(&raw).unwrap()).unwrap();
        assert_eq!(raw.trim_end(), again, "{args:?}");
        assert!(!has_float(&v), "{args:?}");
    }
}

#[test]
fn symmorphism_and_cohomology() {
    assert_eq!(run(&["symmorphic", "p4g"]).1.trim(), "p4g: not symmorphic");
    let (_, v, _) = json(&["symmorphic", "p4m"]);
    assert_eq!(v["symmorphic"], true);
    let (_, out, _) = run(&["cohomology", "--group", "C_4", "--degree", "2"]);
    assert!(out.trim().ends_with("= Z/4"));
    let (_, v, _) = json(&["cohomology", "--group", "C_6", "--degree", "3"]);
    assert_eq!(v["cohomology"], "0");
}

#[test]
fn pde_dimensions_and_solutions() {
    let (_, v, _) = json(&["pde", "symbol", "--corpus", "continuity"]);
    assert_eq!(v["equation_dim"], 14);
    assert_eq!(v["prolonged_equation_dim"], 29);
    let (_, v, _) = json(&["pde", "symbol", "--corpus", "singular_component", "--cartan"]);
    assert_eq!(v["cartan_distribution"]["dimension"], 5);
    assert_eq!(run(&["pde", "verify-solution", "--corpus", "dalembert", "--section", "x*y"]).0, 0);
    let (code, v, _) = json(&["pde", "verify-solution", "--corpus", "heat", "--section", "x^2"]);
    assert_eq!(code, 2);
    assert_eq!(v["residuals"][0], "-2");
}

#[test]
fn seed_changes_samples_but_not_dimensions() {
    let a = json(&["pde", "symbol", "--corpus", "pressure", "--seed", "1"]).1;
    let b = json(&["pde", "symbol", "--corpus", "pressure", "--seed", "2"]).1;
    assert_eq!(a["symbol_filtration"], b["symbol_filtration"]);
}
