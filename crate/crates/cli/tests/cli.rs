//! End-to-end tests of the binary: exit codes, file round-trips, and
//! report determinism.

use std::process::Command;

use superhh::field::{FieldSpec, Fp, Rat, Scalar};
use superhh_cli::format::{CategoryFile, IdempotentsFile};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superhh"))
}

const POINT_FILE: &str = r#"
objects = ["*"]

[field]
kind = "rationals"

[[morphisms]]
id = "1"
source = "*"
target = "*"
parity = 0

[identities]
"*" = "1"
"#;

#[test]
fn parse_point_file() {
    let file = CategoryFile::from_str(POINT_FILE).unwrap();
    let cat = file.to_category::<Rat>().unwrap();
    assert_eq!(cat.object_count(), 1);
    assert_eq!(cat.basis_count(), 1);
}

#[test]
fn fraction_coefficients_over_prime_field() {
    // "1/3" over F_5 is 1 · 3^{-1} = 2
    let text = r#"
objects = ["*"]

[field]
kind = "prime"
characteristic = 5

[[morphisms]]
id = "1"
source = "*"
target = "*"
parity = 0

[[morphisms]]
id = "g"
source = "*"
target = "*"
parity = 0

[identities]
"*" = "1"

[[compositions]]
first = "g"
then = "g"
terms = [["1", "1/3"]]
"#;
    let file = CategoryFile::from_str(text).unwrap();
    let cat = file.to_category::<Fp>().unwrap();
    let g = cat.morphism_index("g").unwrap();
    let expansion = cat.compose(g, g).unwrap();
    let spec = FieldSpec::prime(5).unwrap();
    assert_eq!(expansion.entries(), &[(0usize, Fp::from_int(&spec, 2))]);
}

#[test]
fn missing_identity_is_diagnosed_with_object_name() {
    let text = r#"
objects = ["X"]

[field]
kind = "rationals"

[[morphisms]]
id = "1X"
source = "X"
target = "X"
parity = 0

[identities]
"#;
    let file = CategoryFile::from_str(text).unwrap();
    let err = file.to_category::<Rat>().unwrap_err().to_string();
    assert!(err.contains("X"), "diagnostic should name the object: {err}");
}

#[test]
fn unknown_fields_are_rejected() {
    let text = POINT_FILE.replace("[identities]", "surprise = 1\n\n[identities]");
    assert!(CategoryFile::from_str(&text).is_err());
}

#[test]
fn serialization_round_trips() {
    let spec = FieldSpec::rationals();
    for name in superhh::BUILTIN_NAMES {
        let cat: superhh::RatCategory = superhh::builtin(name, spec).unwrap();
        let text = CategoryFile::from_category(&cat).to_toml().unwrap();
        let reparsed = CategoryFile::from_str(&text)
            .unwrap()
            .to_category::<Rat>()
            .unwrap();
        assert!(cat.same_presentation(&reparsed), "{name} round-trip");
    }
}

#[test]
fn exit_code_zero_on_success() {
    let out = bin().args(["hh", "@point", "--max-degree", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_code_one_on_check_failure() {
    // an invalid category: compose(x, x) declared with a parity-violating term
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        r#"
objects = ["*"]

[field]
kind = "rationals"

[[morphisms]]
id = "1"
source = "*"
target = "*"
parity = 0

[[morphisms]]
id = "x"
source = "*"
target = "*"
parity = 1

[identities]
"*" = "1"

[[compositions]]
first = "x"
then = "x"
terms = [["x", "1"]]
"#,
    )
    .unwrap();
    // `validate` reports the violations and exits 1
    let out = bin().args(["validate", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("parity"));
    // other commands reject the invalid input at load time: exit 2
    let out = bin().args(["hh", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // a real check failure: identities under a deliberately wrong convention
    let out = bin()
        .args([
            "verify-identities",
            "@clifford1",
            "@clifford1",
            "--max-degree",
            "2",
            "--convention",
            "nokoszul-homological",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn exit_code_two_on_usage_error() {
    let out = bin().args(["hh", "@no_such_builtin"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = bin()
            .args([
                "verify-identities",
                "@clifford1",
                "@dual_odd",
                "--max-degree",
                "2",
                "--seed",
                "5",
                "--json",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let mut ja: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mut jb: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    ja["timings_ms"] = serde_json::Value::Null;
    jb["timings_ms"] = serde_json::Value::Null;
    assert_eq!(ja, jb);
}

#[test]
fn derived_categories_flow_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("trunc.toml");
    let out = bin()
        .args(["mat", "@point", "--length", "2", "--out", t.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin()
        .args(["hh", t.to_str().unwrap(), "--max-degree", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(stdout.contains("HH"), "{stdout}");
}

#[test]
fn idempotent_fragment_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let idems = dir.path().join("idems.toml");
    std::fs::write(
        &idems,
        r#"
[[idempotents]]
object = "*"
terms = [["e00", "1"]]
"#,
    )
    .unwrap();
    let out = bin()
        .args(["idem", "@mat11", "--idempotents", idems.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn idempotents_resolve_against_category() {
    let spec = FieldSpec::rationals();
    let cat: superhh::RatCategory = superhh::builtin("mat11", spec).unwrap();
    let file = IdempotentsFile::from_str(
        r#"
[[idempotents]]
object = "*"
terms = [["e00", "1"]]
"#,
    )
    .unwrap();
    let resolved = file.resolve(&cat).unwrap();
    assert_eq!(resolved.len(), 1);
    assert_eq!(resolved[0].0, 0);
}

#[test]
fn gysin_connes_command_passes_on_builtin() {
    let out = bin()
        .args(["gysin-connes", "@dual_odd", "--max-degree", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(stdout.contains("defect"));
}

#[test]
fn prime_field_builtins_work() {
    let out = bin().args(["hh", "@clifford1", "--prime", "7", "--max-degree", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(stdout.contains("F_7"), "{stdout}");
}
