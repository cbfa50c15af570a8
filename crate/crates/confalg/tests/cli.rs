use confalg::cli::Manifest;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(file)
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_confalg")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn scratch(name: &str, m: &Manifest) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, m.to_json()).unwrap();
    path
}

fn load(file: &str) -> Manifest {
    Manifest::from_json(&std::fs::read_to_string(data(file)).unwrap()).unwrap()
}

#[test]
fn virasoro_manifest_has_the_expected_bracket() {
    let m = load("virasoro.json");
    let s = &m.structures[0];
    assert_eq!((s.name.as_str(), s.kind), ("Vir", confalg::cli::Kind::Lie));
    let bracket = m.maps.iter().find(|f| f.name == s.maps["bracket"]).unwrap();
    assert_eq!(bracket.table.len(), 1);
    assert_eq!(bracket.table[0].inputs, ["l", "l"]);
    assert_eq!(bracket.table[0].value, [("l".to_string(), "D + 2*L1".to_string())]);
}

#[test]
fn check_lie_on_virasoro_passes() {
    let (code, r) = run(&["check-lie", data("virasoro.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["status"], "pass");
}

#[test]
fn broken_associative_algebra_exits_1_with_a_witness() {
    let mut m = load("cur-dual-numbers.json");
    let mult = m.maps.iter_mut().find(|f| f.name == "Cur(Q[e]).mult").unwrap();
    assert!(mult.table.iter().all(|e| e.inputs != ["x", "x"]), "x·x = 0 in the dual numbers");
    mult.table.push(confalg::cli::EntrySpec { inputs: vec!["x".into(), "x".into()], value: vec![("1".into(), "L1".into())] });
    let path = scratch("broken-assoc.json", &m);
    let (code, r) = run(&["check-assoc", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{r}");
    assert_eq!(r["status"], "fail");
    assert_eq!(r["failure"]["inputs"].as_array().unwrap().len(), 3);
    assert!(!r["failure"]["value"].as_str().unwrap().is_empty());
}

#[test]
fn transfer_writes_higher_products() {
    let (code, r) = run(&["transfer", data("contraction-rank3.json").to_str().unwrap(), "--up-to", "4"]);
    assert_eq!(code, 0, "{r}");
    let names: Vec<&str> = r["output"]["maps"].as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    for theta in ["theta2", "theta3", "theta4"] {
        assert!(names.contains(&theta), "{names:?}");
    }
    let out = Manifest::from_json(&r["output"].to_string()).unwrap();
    let path = scratch("transferred.json", &out);
    let (code, r) = run(&["check-ainf", path.to_str().unwrap(), "--up-to", "4"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn out_flag_writes_the_manifest() {
    let dest = Path::new(env!("CARGO_TARGET_TMPDIR")).join("skew-out.json");
    let _ = std::fs::remove_file(&dest);
    let (code, r) = run(&["skew", data("cur-mat2.json").to_str().unwrap(), "--out", dest.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert!(r.get("output").is_none());
    let (code, r) = run(&["check-lie", dest.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn bundled_manifests_round_trip() {
    for file in [
        "virasoro.json",
        "cur-sl2.json",
        "cur-mat2.json",
        "cur-dual-numbers.json",
        "phi-extension.json",
        "skeletal-3cocycle.json",
        "contraction-rank3.json",
        "two-algebra-roundtrip.json",
    ] {
        let (code, r) = run(&["roundtrip", data(file).to_str().unwrap()]);
        assert_eq!(code, 0, "{file}: {r}");
        let text = std::fs::read_to_string(data(file)).unwrap();
        assert_eq!(Manifest::from_json(&text).unwrap().to_json(), text, "{file}");
    }
}

#[test]
fn unknown_generator_is_named() {
    let mut m = load("virasoro.json");
    m.maps[0].table[0].inputs[1] = "q".into();
    let path = scratch("unknown-gen.json", &m);
    let (code, r) = run(&["check-lie", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let err = r["error"].as_str().unwrap();
    assert!(err.contains("`q`") && err.contains("maps[0]"), "{err}");
}

#[test]
fn dangling_reference_is_located() {
    let mut m = load("virasoro.json");
    m.structures[1].refs.insert("algebra".into(), "Witt".into());
    let path = scratch("dangling.json", &m);
    let (code, r) = run(&["check-lie", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let err = r["error"].as_str().unwrap();
    assert!(err.contains("structures[1]") && err.contains("Witt"), "{err}");
}

#[test]
fn arity_mismatch_is_rejected() {
    let mut m = load("virasoro.json");
    m.maps[0].table[0].inputs.push("l".into());
    let path = scratch("arity.json", &m);
    let (code, r) = run(&["check-lie", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("arity 2"), "{r}");
}

#[test]
fn syntax_errors_report_a_line() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("syntax.json");
    std::fs::write(&path, "{\n  \"modules\": [\n    {\"name\": \"M\",}\n  ]\n}\n").unwrap();
    let (code, r) = run(&["check-lie", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("line 3"), "{r}");
}

#[test]
fn empty_manifest_is_valid() {
    let path = scratch("empty.json", &Manifest::default());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\n  \"modules\": [],\n  \"maps\": [],\n  \"structures\": []\n}\n");
    let (code, r) = run(&["roundtrip", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    let (code, r) = run(&["check-lie", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{r}");
}

#[test]
fn missing_up_to_is_an_input_error() {
    let (code, r) = run(&["check-ainf", data("phi-extension.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("--up-to"), "{r}");
}

#[test]
fn unknown_command_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_confalg")).args(["check-everything", "x.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cocycle_and_skeletal() {
    let (code, r) = run(&["cocycle", data("cur-dual-numbers.json").to_str().unwrap()]);
    assert_eq!(code, 1, "a random 2-cochain is not a cocycle: {r}");
    let (code, r) = run(&["skeletal", data("skeletal-3cocycle.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    let kinds: Vec<&str> = r["output"]["structures"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["ainf", "two_term"]);
}

#[test]
fn seeded_differentials_square_to_zero() {
    for (cmd, file) in [("delta", "cur-mat2.json"), ("lie-delta", "virasoro.json"), ("lie-delta", "cur-sl2.json")] {
        for n in ["1", "2"] {
            let (code, r) = run(&[cmd, data(file).to_str().unwrap(), "--seed", "7", "--up-to", n]);
            assert_eq!(code, 0, "{cmd} {file}: {r}");
        }
    }
}

#[test]
fn hh_ranks_are_reported() {
    let (code, r) = run(&["hh-ranks", data("cur-dual-numbers.json").to_str().unwrap(), "--up-to", "2"]);
    assert_eq!(code, 0, "{r}");
    let ranks = r["ranks"].as_array().unwrap();
    assert_eq!(ranks.len(), 3);
    for row in ranks {
        assert_eq!(row["domain"].as_u64().unwrap(), row["rank"].as_u64().unwrap() + row["kernel"].as_u64().unwrap());
    }
}

#[test]
fn functors_between_two_term_structures_and_two_algebras() {
    let (code, r) = run(&["functor-s", data("phi-extension.json").to_str().unwrap(), "--structure", "A_phi.2term"]);
    assert_eq!(code, 0, "{r}");
    assert!(r["items"].as_array().unwrap().iter().all(|i| i["status"] == "pass"));
    let (code, r) = run(&["functor-t", data("two-algebra-roundtrip.json").to_str().unwrap(), "--structure", "S(doubled)"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn wrong_structure_kind_is_an_input_error() {
    let (code, r) = run(&["check-assoc", data("virasoro.json").to_str().unwrap(), "--structure", "Vir"]);
    assert_eq!(code, 2, "{r}");
}
