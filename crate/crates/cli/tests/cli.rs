use std::process::{Command, Output};

use serde_json::Value;

fn idyll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idyll")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = idyll(&all);
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn sign_multiplicities_from_rational_input() {
    let f = "72 - 6*x - 7*x^2 + x^3";
    for (at, m) in [("1", 2), ("-1", 1)] {
        let v = json(&["mult", "--rational", "-i", "sign", "-p", f, "-a", at, "--engine", "both"]);
        assert_eq!(v["multiplicity"], m);
        assert_eq!(v["text"], "1 - x - x^2 + x^3");
    }
}

#[test]
fn certificate_is_verified() {
    let v = json(&["mult", "-i", "trop", "-p", "2 + 1*x + 0*x^2 + 0*x^3", "-a", "1", "--certificate"]);
    assert_eq!(v["multiplicity"], 2);
    assert_eq!(v["certificate"]["verified"], true);
    assert_eq!(v["certificate"]["quotients"].as_array().unwrap().len(), 2);
}

#[test]
fn tropical_roots_with_prime() {
    let o = idyll(&["roots", "-i", "trop", "--prime", "2", "-p", "72 - 6*x - 7*x^2 + x^3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 (mult 1)\n1 (mult 1)\n2 (mult 1)\nsum of multiplicities 3 <= degree 3\n");
}

#[test]
fn newton_formats() {
    let f = "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5";
    let v = json(&["newton", "-i", "trop", "-p", f]);
    let slopes: Vec<String> =
        v["newton"]["edges"].as_array().unwrap().iter().map(|e| e["slope"].as_str().unwrap().to_string()).collect();
    assert_eq!(slopes, ["-1", "0", "1/2"]);
    let svg = stdout(&idyll(&["newton", "-i", "trop", "-p", f, "--format", "svg"]));
    assert!(svg.starts_with("<svg"));
    let ascii = idyll(&["newton", "-i", "trop", "-p", f, "--format", "ascii"]);
    assert!(ascii.status.success());
}

#[test]
fn initial_form_and_lift() {
    let f = "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5";
    let v = json(&["initial-form", "-i", "trop", "-p", f, "-a", "0"]);
    assert_eq!(v["base_form"]["idyll"], "krasner");
    let o = idyll(&["lift", "-i", "trop-real", "-p", "1 - x + 1^1*x^2", "-a", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verified: true"));
    let o = idyll(&["lift", "-i", "trop", "-p", "2 + 1*x + 0*x^2 + 0*x^3", "-a", "1", "--quotient", "1 + x"]);
    assert!(o.status.success());
}

#[test]
fn rank_override() {
    let f = "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4";
    let v = json(&["mult", "-i", "trop", "--rank", "2", "-p", f, "-a", "(1,1)", "--engine", "both"]);
    assert_eq!(v["multiplicity"], 2);
    let v = json(&["degree-bound", "-i", "trop", "--rank", "2", "-p", f]);
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["report"]["sum"], 4);
}

#[test]
fn divide_lists_quotients() {
    let o = idyll(&["divide", "-i", "krasner", "-p", "x^2 + x^5", "-a", "1"]);
    assert!(stdout(&o).lines().any(|l| l == "x^2 + x^3 + x^4"));
}

#[test]
fn exit_codes() {
    assert_eq!(idyll(&["mult", "-i", "sign", "-p", "x + x", "-a", "1"]).status.code(), Some(2));
    assert_eq!(idyll(&["mult", "-i", "nowhere", "-p", "x", "-a", "1"]).status.code(), Some(2));
    assert_eq!(idyll(&["demo", "nowhere"]).status.code(), Some(2));
    assert_eq!(idyll(&["bogus"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_idyll"))
        .args(["mult", "-i", "trop", "-p", "0 + 0*x + 0*x^2 + 0*x^3 + 0*x^4 + 0*x^5 + 0*x^6", "-a", "0"])
        .env("IDYLL_SEARCH_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn demos_pass() {
    let v = json(&["demo", "all"]);
    assert_eq!(v["pass"], true);
    assert!(idyll(&["demo", "catalan"]).status.success());
}

#[test]
fn axioms_and_product_control() {
    let v = json(&["axioms", "-i", "TR", "--product"]);
    assert_eq!(v["pass"], true);
    assert!(!v["product_differences"].as_array().unwrap().is_empty());
    let v = json(&["axioms", "-i", "ext:quot:GF(5)/{1,4}:1"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_agrees() {
    let o = idyll(&["verify", "--sweeps", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
}
