use std::path::PathBuf;
use std::process::{Command, Output};

use tamegamma::{Ring, SFraction};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamegamma")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_doc(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("tamegamma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const UNRAMIFIED: &str = r#"{"field": {"p": 3, "f": 1, "ell": 7}, "ring": "Q",
    "representation": {"phi": [["2"]], "sigma": [["1"]]}}"#;

const QUADRATIC: &str = r#"{"field": {"p": 3, "f": 1, "ell": 7}, "ring": "Q",
    "representation": {"phi": [["1"]], "sigma": [["-1"]]}}"#;

fn parses_to(ring: &Ring, printed: &str, expected: &str) -> bool {
    let a = SFraction::parse(ring, printed.trim()).unwrap();
    a.equals(&SFraction::parse(ring, expected).unwrap())
}

#[test]
fn unramified_gamma() {
    let input = temp_doc("unramified.json", UNRAMIFIED);
    let o = bin(&["compute", "--input", &input, "--factor", "gamma"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("(-6*X"), "{out}");
    // ε = 1, L = 1/(1 − 2X), L^∨ at 1/(3X) = 1/(1 − 1/(6X))
    assert!(parses_to(&Ring::rationals(), &out, "-6*X*(1 - 2*X)/(1 - 6*X)"));
}

#[test]
fn unramified_l_and_conductors() {
    let input = temp_doc("unramified-l.json", UNRAMIFIED);
    let l = stdout(&bin(&["compute", "--input", &input, "--factor", "l"]));
    assert!(parses_to(&Ring::rationals(), &l, "1/(1 - 2*X)"));
    assert_eq!(stdout(&bin(&["compute", "--input", &input, "--factor", "swan"])).trim(), "0");
    assert_eq!(stdout(&bin(&["compute", "--input", &input, "--factor", "artin"])).trim(), "0");
    // ε₀ = ε·det(−Φ | ρ^I)·X = −2X
    let e0 = stdout(&bin(&["compute", "--input", &input, "--factor", "epsilon0"]));
    assert!(parses_to(&Ring::rationals(), &e0, "-2*X"));
}

#[test]
fn quadratic_epsilon0_is_gauss_sum() {
    let input = temp_doc("quadratic.json", QUADRATIC);
    let o = bin(&["compute", "--input", &input, "--factor", "epsilon0"]);
    assert!(o.status.success());
    // Σ_{a ∈ 𝔽₃^×} χ̄(a)ζ₃^a = ζ₃ − ζ₃², at X^{dim}
    let ring = Ring::cyclotomic(3).unwrap();
    assert!(parses_to(&ring, &stdout(&o), "(z3 - z3^2)*X"));
}

#[test]
fn swan_fixtures() {
    let tame = bin(&["compute", "--input", &fixture("swan/tame-ramified.json"), "--factor", "swan"]);
    assert_eq!(stdout(&tame).trim(), "0");
    let wild = bin(&["compute", "--input", &fixture("swan/p-cyclic.json"), "--factor", "swan"]);
    assert_eq!(stdout(&wild).trim(), "1");
    let artin = bin(&["compute", "--input", &fixture("swan/p-cyclic.json"), "--factor", "artin"]);
    assert_eq!(stdout(&artin).trim(), "3");
    let frac = bin(&["compute", "--input", &fixture("swan/fractional-jump.json"), "--factor", "swan"]);
    assert_eq!(frac.status.code(), Some(3));
}

#[test]
fn fiber_specs() {
    let input = fixture("families/04-trace-T-q3.json");
    let by_name = stdout(&bin(&["compute", "--input", &input, "--factor", "gamma", "--fiber", "T=3"]));
    let json = r#"{"name": "three", "ring": "Q", "hom": {"T": "3"}}"#;
    let by_json = stdout(&bin(&["compute", "--input", &input, "--factor", "gamma", "--fiber", json]));
    let by_assignment = stdout(&bin(&["compute", "--input", &input, "--factor", "gamma", "--fiber", "T=3@Q"]));
    assert_eq!(by_name, by_json);
    assert_eq!(by_name, by_assignment);
    let unknown = bin(&["compute", "--input", &input, "--factor", "gamma", "--fiber", "nowhere"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn specialize_characteristic_zero_and_mod_seven() {
    let input = fixture("families/05-trace-T-q5.json");
    for fiber in ["T=0", "T=4 mod 7"] {
        let o = bin(&["specialize", "--input", &input, "--fiber", fiber, "--factor", "gamma"]);
        assert!(o.status.success(), "{fiber}: {}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(out.lines().any(|l| l == "verdict: equal"), "{out}");
        let sides: Vec<&str> = out.lines().filter_map(|l| l.split_once(": ").map(|(_, v)| v.trim())).collect();
        assert_eq!(sides[0], sides[1]);
    }
}

#[test]
fn corrupted_document_exits_3() {
    let bad = UNRAMIFIED.replace(r#"[["1"]]"#, r#"[["-1"]]"#).replace(r#"[["2"]]"#, r#"[["2", "1"], ["0", "1"]]"#);
    let input = temp_doc("corrupted.json", &bad);
    let o = bin(&["compute", "--input", &input, "--factor", "gamma"]);
    assert_eq!(o.status.code(), Some(3));
    let relation = UNRAMIFIED.replace(r#""phi": [["2"]], "sigma": [["1"]]"#, r#""phi": [["2", "1"], ["0", "1"]], "sigma": [["-1", "0"], ["0", "1"]]"#);
    let input = temp_doc("relation.json", &relation);
    let o = bin(&["compute", "--input", &input, "--factor", "gamma"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("RelationViolated"));
}

#[test]
fn parse_errors_exit_2() {
    let input = temp_doc("broken.json", "{ not json");
    assert_eq!(bin(&["compute", "--input", &input, "--factor", "l"]).status.code(), Some(2));
    let syntax = UNRAMIFIED.replace(r#"[["2"]]"#, r#"[["2 +* 1"]]"#);
    let input = temp_doc("syntax.json", &syntax);
    assert_eq!(bin(&["compute", "--input", &input, "--factor", "l"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_thm61() {
    let o = bin(&["verify", "--suite", "thm61", "--trials", "200", "--seed", "42"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "thm61: 200/200 pass");
}

#[test]
fn verify_gauss_and_interpolation() {
    let o = bin(&["verify", "--suite", "gauss", "--trials", "50"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "gauss: 50/50 pass");
    let o = bin(&["verify", "--suite", "interpolation"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", "--suite", "multiplicativity", "--trials", "6", "--seed", "9", "--dimmax", "4", "--json"];
    let a = bin(&args);
    let b = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<&str> = std::str::from_utf8(&a.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 7);
    let ids: Vec<String> = lines[..6]
        .iter()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn failing_case_exits_1_with_document() {
    // a characteristic-ℓ fiber without a lift cannot be checked
    let family = r#"{"field": {"p": 3, "f": 1, "ell": 5}, "ring": "Q[T]",
        "representation": {"phi": [["T"]], "sigma": [["1"]]},
        "fibers": [{"name": "T=1 mod 5", "ring": "GF(5)", "hom": {"T": "1"}}]}"#;
    let input = temp_doc("unliftable.json", family);
    let o = bin(&["verify", "--suite", "interpolation", "--input", &input]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL"), "{out}");
    assert!(out.contains("document:"), "{out}");
    assert!(out.trim_end().ends_with("interpolation: 0/1 pass"), "{out}");
}
