use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use serde_json::Value;

use moncore::{FieldSpec, MonomialIdeal, RingContext};
use moncore_cli::parse::{parse_ideal_file, render_ideal_file};
use moncore_cli::{run_args, Outcome};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Outcome {
    run_args(std::iter::once("moncore").chain(args.iter().copied()))
}

/// A scratch ideal file under the target directory.
fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

#[test]
fn parse_errors_exit_1_with_position() {
    let p = scratch("bad_char.ideal", "ring x, y\nchar 4\ngens x^2, y^2\n");
    let out = cli(&["core", p.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains(":2:6: characteristic must be 0 or prime"), "{}", out.stderr);

    let p = scratch("gens_first.ideal", "gens x\nring x\n");
    let out = cli(&["closure", p.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["exit"], 1);

    let p = scratch("unknown_var.ideal", "ring x, y\ngens x^2, w*y\n");
    let out = cli(&["closure", p.to_str().unwrap()]);
    assert!(out.stderr.contains(":2:11: unknown variable 'w'"), "{}", out.stderr);

    assert_eq!(cli(&["closure", "/nonexistent/file.ideal"]).code, 1);
    assert_eq!(cli(&["frobnicate"]).code, 1);
    assert_eq!(cli(&["core", &data("ex2.ideal"), "--char", "9"]).code, 1);
}

#[test]
fn json_schema() {
    let out = cli(&["core", &data("ex2.ideal"), "--json"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    for key in ["command", "input_sha256", "ring", "char", "generators", "method", "flags", "t", "r"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["ring"], serde_json::json!(["x", "y"]));
    assert_eq!(v["char"], 0);
    assert_eq!(v["method"], "colon");
    assert_eq!(v["generators"].as_array().unwrap().len(), 10);
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("timing_ms").is_none());
    let timed = json(&cli(&["core", &data("ex2.ideal"), "--json", "--timing"]));
    assert!(timed.get("timing_ms").is_some());
}

#[test]
fn char_override_and_default() {
    let out = json(&cli(&["core", &data("ex2.ideal"), "--json", "--char", "2", "--method", "mono"]));
    assert_eq!(out["char"], 2);
    assert_eq!(out["generators"].as_array().unwrap().len(), 9);
    let p = scratch("no_char.ideal", "ring x, y\ngens x^2, y^3\n");
    let out = json(&cli(&["closure", p.to_str().unwrap(), "--json"]));
    assert_eq!(out["char"], 65537);
}

#[test]
fn colon_refuses_when_hypotheses_fail() {
    let out = cli(&["core", &data("ex2_char2.ideal"), "--method", "colon"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("hypotheses not met"));
}

#[test]
fn no_monomial_reduction_is_a_hypothesis_failure() {
    let p = scratch("no_red.ideal", "ring x, y\nchar 0\ngens x^4, x*y, y^4\n");
    let out = cli(&["core", p.to_str().unwrap()]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    let out = cli(&["rednum", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    let p = scratch("not_zero_dim.ideal", "ring x, y\nchar 0\ngens x^4, x*y\n");
    assert_eq!(cli(&["core", p.to_str().unwrap()]).code, 2);
}

#[test]
fn rednum_and_reduction_flag() {
    assert_eq!(cli(&["rednum", &data("ex2.ideal")]).stdout, "2\n");
    assert_eq!(cli(&["rednum", &data("ex2.ideal"), "--reduction", "x^6, y^9"]).stdout, "2\n");
    let out = cli(&["rednum", &data("ex2.ideal"), "--reduction", "x^7, y^9"]);
    assert_eq!(out.code, 2);
    let out = cli(&["rednum", &data("ex2.ideal"), "--reduction", "x^6, q"]);
    assert_eq!(out.code, 1);
}

#[test]
fn adjoint_closure_fci() {
    let m2 = scratch("m2.ideal", "ring x, y\nchar 0\ngens x^2, x*y, y^2\n");
    let m2 = m2.to_str().unwrap();
    assert_eq!(cli(&["adjoint", m2, "--power", "2"]).stdout, "y^3\nx*y^2\nx^2*y\nx^3\n");
    assert_eq!(cli(&["adjoint", m2, "--power", "2", "--method", "colon"]).stdout, "y^3\nx*y^2\nx^2*y\nx^3\n");
    assert_eq!(cli(&["adjoint", m2, "--power", "1", "--method", "colon"]).code, 1);
    assert_eq!(cli(&["closure", &data("ex2.ideal")]).code, 0);
    let p = scratch("fci.ideal", "ring x, y\nchar 0\ngens x^3, x^2*y, y^3\n");
    assert_eq!(cli(&["fci", p.to_str().unwrap()]).stdout, "y^3\nx*y^2\nx^2*y\nx^3\n");
}

#[test]
fn formula_command() {
    let p = scratch("d2.ideal", "ring x, y\nchar 0\ngens x^4, x^2*y^2, y^4\n");
    let out = cli(&["formula", p.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["cross_check"], "agree");
    assert_eq!(v["shape"]["delta"], 2);
    assert!(v.get("fci").is_none());

    let p = scratch("d3.ideal", "ring x, y, z\nchar 0\ngens x^4, y^4, z^4, x^3*y, x^2*z^2, y^2*z^2\n");
    let v = json(&cli(&["formula", p.to_str().unwrap(), "--json"]));
    assert_eq!(v["cross_check"], "agree");
    assert_eq!((v["shape"]["a"].as_u64(), v["shape"]["c"].as_u64()), (Some(1), Some(2)));

    let p = scratch(
        "d3a2.ideal",
        "ring x, y, z\nchar 0\ngens x^30, y^30, z^30, x^6*y^24, x^10*z^20, y^15*z^15\n",
    );
    let out = cli(&["formula", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("requires a = 1"));
}

#[test]
fn weighted_and_decompose() {
    let out = cli(&["weighted", "--weights", "2,3", "--n", "6"]);
    assert_eq!(out.code, 0);
    let v = json(&cli(&["weighted", "--weights", "2,3,5", "--n", "30", "--json"]));
    assert_eq!(v["degree"], 81);
    let out = cli(&["weighted", "--weights", "30,35,42", "--n", "210"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("normality hypothesis not established"));
    assert_eq!(cli(&["weighted", "--weights", "2,3", "--n", "5"]).code, 2);

    assert_eq!(cli(&["decompose", "--t", "7", "--n", "5", "--k", "3"]).stdout, "alpha -1\nbeta 4\n");
    assert_eq!(cli(&["decompose", "--t", "-3", "--n", "5", "--k", "3"]).code, 0);
    assert_eq!(cli(&["decompose", "--t", "7", "--n", "4", "--k", "2"]).code, 1);
    assert_eq!(cli(&["decompose", "--t", "1", "--n", "5", "--k", "3", "--alpha-nonneg"]).code, 2);
}

#[test]
fn check_command() {
    for prop in ["colon-lemma", "comes-out"] {
        let out = cli(&["check", &data("ex2.ideal"), "--property", prop, "--i", "2"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "true\n"));
    }
    let m2 = scratch("m2_check.ideal", "ring x, y\nchar 0\ngens x^2, x*y, y^2\n");
    let out = cli(&["check", m2.to_str().unwrap(), "--property", "adj-hypothesis"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "true\n"));
    let out = cli(&["check", &data("ex3.ideal"), "--property", "adj-hypothesis"]);
    assert_eq!((out.code, out.stdout.as_str()), (2, "false\n"));
    assert_eq!(cli(&["check", &data("ex2.ideal"), "--property", "colon-lemma", "--t", "1"]).code, 1);
}

#[test]
fn file_round_trip_of_command_output() {
    let out = cli(&["core", &data("ex3.ideal")]);
    let text = format!("ring x, y, z\ngens {}\n", out.stdout.lines().collect::<Vec<_>>().join(", "));
    let parsed = parse_ideal_file(&text).unwrap();
    let expected = cli(&["core", &data("ex3.ideal"), "--json"]);
    let gens: Vec<Vec<u64>> = serde_json::from_value(json(&expected)["generators"].clone()).unwrap();
    assert_eq!(parsed.ideal, MonomialIdeal::minimalize(&parsed.ring, gens));
}

fn arb_ideal() -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=4, prop::sample::select(vec![0u64, 2, 65537])).prop_flat_map(|(d, c)| {
        prop::collection::vec(prop::collection::vec(0u64..20, d), 1..6).prop_map(move |gens| {
            let ring = Arc::new(RingContext::standard(d, FieldSpec::from_characteristic(c).unwrap()));
            MonomialIdeal::minimalize(&ring, gens)
        })
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(i in arb_ideal()) {
        let back = parse_ideal_file(&render_ideal_file(&i)).unwrap();
        prop_assert_eq!(back.ideal, i.clone());
        prop_assert_eq!(back.ring.as_ref(), i.ring().as_ref());
    }

    #[test]
    fn printed_generators_parse_back(i in arb_ideal()) {
        let text = format!("ring {}\ngens {}\n", i.ring().names().join(", "), i.format_gens().join(",\n  "));
        let back = parse_ideal_file(&text).unwrap();
        prop_assert_eq!(back.ideal.gens(), i.gens());
    }
}
