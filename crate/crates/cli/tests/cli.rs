use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use arithdyn::maps::{zoo_get, zoo_list};
use arithdyn_cli::MapDocument;
use serde_json::Value;

fn arithdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(args)
        .env_remove("ARITHDYN_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = arithdyn(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout_of(&a)).unwrap()
}

fn error_of(args: &[&str]) -> (i32, Value) {
    let out = arithdyn(args);
    assert!(!out.status.success(), "{args:?} should fail");
    let err: Value = serde_json::from_slice(&out.stderr).expect("errors are JSON on stderr");
    (out.status.code().unwrap(), err["error"].clone())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn gs02_degree_table() {
    let t = stdout_of(&["degseq", "--zoo", "gs02", "--param", "d=2", "--nmax", "3"]);
    let rows: Vec<Vec<&str>> = t.lines().skip_while(|l| !l.starts_with("n ")).skip(2).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows, vec![vec!["1", "3"], vec!["2", "9"], vec!["3", "27"]]);
    let inv = json_of(&["degseq", "--zoo", "gs02", "--param", "d=2", "--nmax", "2", "--inverse"]);
    assert_eq!(inv["rows"], serde_json::json!([[1, 7], [2, 49]]));
}

#[test]
fn lemma_golden_ratio() {
    let j = json_of(&["lemma", "3", "1", "1", "1"]);
    let s = &j["summary"];
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    for key in ["alpha", "beta"] {
        let v = s[key].as_f64().unwrap();
        assert!((v - golden).abs() < 1e-9 && format!("{v:.5}") == "2.61803", "{key} = {v}");
    }
    for key in ["alpha_identity_residual", "beta_identity_residual", "cross_residual"] {
        assert!(s[key].as_f64().unwrap() < 1e-9, "{key}");
    }
}

#[test]
fn henon_orbit_table() {
    let t = stdout_of(&["orbit", "--zoo", "henon", "--param", "a=1,b=0", "--point", "(1,2)", "--nmax", "3"]);
    let table: Vec<&str> = t.lines().skip_while(|l| !l.starts_with("n ")).skip(2).collect();
    assert_eq!(table.len(), 4);
    assert!(table[3].starts_with("3  (27, 734)"), "{}", table[3]);
}

#[test]
fn zoo_maps_round_trip_through_documents() {
    let mut params: Vec<(&str, Vec<(&str, &str)>)> = zoo_list().iter().map(|f| (f.name, vec![])).collect();
    params.extend([
        ("henon", vec![("a", "-2/3"), ("b", "5")]),
        ("gs02", vec![("d", "3")]),
        ("monomial", vec![("m", "[[2,1],[0,3]]")]),
        ("shift", vec![("n", "3"), ("c", "-1/2")]),
        ("power", vec![("n", "3"), ("d", "1")]),
    ]);
    for (name, ps) in params {
        let ps: BTreeMap<String, String> = ps.into_iter().map(|(k, v)| (k.into(), v.into())).collect();
        let z = zoo_get(name, &ps).unwrap();
        let doc = MapDocument::from_zoo(&z);
        let text = doc.to_toml();
        let back = MapDocument::parse(&text, "roundtrip.toml").unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(back.map, z.map, "{name}");
        assert_eq!(back.inverse, z.inverse, "{name}");
        assert_eq!(back.document, doc, "{name}");
    }
}

#[test]
fn map_files_drive_commands() {
    let path = scratch(
        "henon.toml",
        "name = \"h\"\ndimension = 2\nvariables = [\"x\", \"y\"]\ncomponents = [\"y\", \"y^2 + x - 1\"]\ninverse_components = [\"y - x^2 + 1\", \"x\"]\n",
    );
    let j = json_of(&["topdeg", "--map", path.to_str().unwrap()]);
    assert_eq!(j["summary"]["value"], 1);
    assert_eq!(j["summary"]["method"], "birational-unit");
}

fn numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(a) => a.iter().for_each(|x| numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| numbers(x, out)),
        _ => {}
    }
}

#[test]
fn table_and_json_carry_the_same_numbers() {
    let runs: [&[&str]; 4] = [
        &["arithdeg", "--zoo", "henon", "--point", "(1,2)", "--nmax", "12"],
        &["periodic", "--zoo", "henon", "--param", "a=1,b=-1", "--height-bound", "log(3)", "--period-bound", "2"],
        &["topdeg", "--zoo", "power", "--method", "fiber-sampling", "--seed", "5"],
        &["lemma", "2.5", "2", "1", "0.5", "--zoo", "henon", "--point", "(1,2)", "--nmax", "6"],
    ];
    for args in runs {
        let j = json_of(args);
        let table = stdout_of(args);
        let mut expected = vec![];
        numbers(&j["summary"], &mut expected);
        numbers(&j["rows"], &mut expected);
        assert!(!expected.is_empty());
        let cells: Vec<&str> = table
            .lines()
            .flat_map(|l| {
                let l = l.split_once(": ").map_or(l, |(_, v)| v);
                l.split(|c: char| c.is_whitespace() || c == '[' || c == ']' || c == ',').filter(|s| !s.is_empty()).collect::<Vec<_>>()
            })
            .collect();
        for n in &expected {
            assert!(cells.contains(&n.as_str()), "{args:?}: {n} missing from the table");
        }
        // every number in the table also comes from the JSON
        let all: Vec<&str> = cells.iter().copied().filter(|c| c.parse::<f64>().is_ok()).collect();
        let mut in_json = vec![];
        numbers(&j, &mut in_json);
        let title_numbers: Vec<&str> = table.lines().next().unwrap().split(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-')).collect();
        for c in all {
            assert!(in_json.iter().any(|n| n == c) || title_numbers.contains(&c), "{args:?}: {c} not in JSON");
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    let args = ["topdeg", "--zoo", "henon", "--method", "fiber-sampling", "--seed", "42", "--format", "json"];
    let (a, b) = (stdout_of(&args), stdout_of(&args));
    assert_eq!(a, b);
    let other = stdout_of(&["topdeg", "--zoo", "henon", "--method", "fiber-sampling", "--seed", "43", "--format", "json"]);
    assert_ne!(a, other, "the seed reaches the sampler");
}

#[test]
fn parse_errors_carry_line_and_column() {
    let path = scratch("bad.toml", "dimension = 1\nvariables = [\"x\"]\ncomponents = [\"x + * 2\"]\n");
    let (code, err) = error_of(&["degseq", "--map", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(err["kind"], "parse");
    assert_eq!((err["line"].as_u64(), err["column"].as_u64()), (Some(3), Some(20)));

    let path = scratch("broken.toml", "dimension = 1\nvariables = [\"x\"]\ncomponents = 5\n");
    let (_, err) = error_of(&["degseq", "--map", path.to_str().unwrap()]);
    assert_eq!(err["kind"], "parse");
    assert_eq!((err["line"].as_u64(), err["column"].as_u64()), (Some(3), Some(14)));
}

#[test]
fn cap_refusals_name_the_cap() {
    let (code, err) = error_of(&["periodic", "--zoo", "henon", "--height-bound", "log(100)", "--enumeration-cap", "1000"]);
    assert_eq!(code, 3);
    assert_eq!(err["cap"], "enumeration_cap");
    let (_, err) = error_of(&["arithdeg", "--zoo", "henon", "--point", "(1,2)", "--nmax", "30", "--coordinate-digit-cap", "1"]);
    assert_eq!(err["cap"], "coordinate_digit_cap");
}

#[test]
fn usage_errors_are_structured() {
    let (code, err) = error_of(&["orbit", "--point", "(1,2)"]);
    assert_eq!((code, err["kind"].as_str()), (2, Some("usage")));
    let (_, err) = error_of(&["orbit", "--zoo", "nope", "--point", "(1)"]);
    assert_eq!(err["kind"], "invalid-input");
    let (_, err) = error_of(&["frobnicate"]);
    assert_eq!(err["kind"], "usage");
}

#[test]
fn config_file_then_flags() {
    let path = scratch("run.toml", "n_max = 2\nformat = \"csv\"\n");
    let out = Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(["degseq", "--zoo", "henon"])
        .env("ARITHDYN_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,degree\n1,2\n2,4\n");
    let out = Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(["degseq", "--zoo", "henon", "--nmax", "3"])
        .env("ARITHDYN_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,degree\n1,2\n2,4\n3,8\n");
}

#[test]
fn experiments_from_the_examples() {
    let d = json_of(&["density", "--zoo", "power", "--point", "(2,4)", "--degree", "2", "--nmax", "5"]);
    assert_eq!(d["summary"]["curve"], "x^2 - y");
    let r = json_of(&["dml", "--zoo", "identity", "--point", "(0,5)", "--poly", "x", "--nmax", "10"]);
    assert_eq!(r["rows"], serde_json::json!([["progression", 1, 1]]));
    let f = json_of(&["orbit", "--zoo", "shift", "--point", "(0)", "--nmax", "2", "--full"]);
    let idx: Vec<i64> = f["rows"].as_array().unwrap().iter().map(|r| r[0].as_i64().unwrap()).collect();
    assert_eq!(idx, vec![-2, -1, 0, 1, 2]);
    let p = json_of(&["arithdeg", "--zoo", "henon", "--point", "(1,2)", "--nmax", "12", "--power", "2"]);
    assert!(p["summary"]["power_ratio_discrepancy"].as_f64().unwrap() <= 0.1);
    let h = json_of(&["dyndeg", "--zoo", "henon", "--nmax", "4"]);
    assert_eq!(h["summary"]["delta1_exact"], 2);
    assert_eq!(h["summary"]["delta1_dominates"], true);
    let c = json_of(&["orbit", "--zoo", "cremona", "--point", "[1:0:0]", "--nmax", "3"]);
    assert_eq!(c["summary"]["indeterminacy_index"], 0);
}
