use std::process::Command as Proc;

use proptest::prelude::*;
use serde_json::Value;
use surftop::{error_json, exit_code, render_json, run, svg, Command, Settings, Verb};
use surftop_core::ring::qi;
use surftop_core::{parse_polynomial, Error, MPoly, Var};

const S1: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/2";
const S2: &str = "(x^2+y^2-1)^2+z^2";
const S5: &str = "x^2+y^2+z^2+2*x*y*z-1";
const S6: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/4";
const SPHERE: &str = "x^2+y^2+z^2-1";
const WHITNEY: &str = "x^2-y^2*z";
const EMPTY: &str = "x^2+y^2+z^2+1";
const FIXTURES: [&str; 7] = [S1, S2, S5, S6, SPHERE, WHITNEY, EMPTY];

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_surftop"))
}

fn report(verb: Verb, text: &str) -> Value {
    run(&Command::inline(verb, text)).unwrap().report
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

fn assert_valid(s: &jsonschema::JSONSchema, v: &Value, what: &str) {
    if let Err(errs) = s.validate(v) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what}: {}", msgs.join("; "));
    }
}

#[test]
fn verb_examples() {
    assert_eq!(report(Verb::Connect, S6)["chains"], 8);
    assert_eq!(report(Verb::Compact, S1)["compact"], true);
    assert_eq!(report(Verb::Reality, EMPTY)["real_part"], "empty");
}

#[test]
fn binary_exit_codes_and_error_objects() {
    let out = bin().args(["reality", "-e", EMPTY]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["real_part"], "empty");

    let out = bin().args(["levels", "-e", "x^-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["name"], "ParseError");
    assert_eq!(v["error"]["position"], 2);

    let out = bin().args(["levels", "-e", "(z-1)*(x^2+y^2-1)"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["name"], "PlanarComponentInAxis");

    let out = bin().args(["plot", "-e", S5]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_table() {
    assert_eq!(exit_code(&Error::HypothesesUnreachable(16)), 2);
    assert_eq!(exit_code(&Error::NormalizationFailed(32)), 2);
    assert_eq!(exit_code(&Error::PlanarComponentInAxis(Var::Z)), 2);
    assert_eq!(exit_code(&Error::PrecisionExhausted("x".into())), 3);
    assert_eq!(exit_code(&Error::ParseError { pos: 0, expected: "x".into() }), 1);
    assert_eq!(error_json(&Error::PrecisionExhausted("x".into()))["error"]["name"], "PrecisionExhausted");
}

#[test]
fn reports_validate_against_the_schema() {
    let s = schema();
    for f in FIXTURES {
        assert_valid(&s, &report(Verb::All, f), f);
    }
    for v in [Verb::Levels, Verb::Reality, Verb::Compact, Verb::Box, Verb::Connect] {
        assert_valid(&s, &report(v, S5), &format!("{v:?}"));
    }
    assert_valid(&s, &error_json(&Error::ParseError { pos: 3, expected: "a term".into() }), "parse error");
    assert_valid(&s, &error_json(&Error::FxVanished([0.0, 1.0, 2.0])), "path error");
    let mut timed = Command::inline(Verb::Levels, S1);
    timed.timing = true;
    assert_valid(&s, &run(&timed).unwrap().report, "timing");
}

#[test]
fn reruns_are_byte_identical() {
    for f in FIXTURES {
        let a = render_json(&report(Verb::All, f));
        let b = render_json(&report(Verb::All, f));
        assert_eq!(a, b, "{f}");
    }
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("{i}.json"));
            let st = bin().args(["connect", "--seed", "7", "-e", S5, "--json"]).arg(&p).status().unwrap();
            assert!(st.success());
            std::fs::read(&p).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn config_file_sits_under_the_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("surftop.conf");
    std::fs::write(&cfg, "# defaults\naxis = x\nseed = 5\neps-fx = 1e-7\ntol = 1e-11\n").unwrap();
    let out = bin().args(["levels", "--axis", "y", "-e", SPHERE, "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["axis"], "y");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["eps_fx"], 1e-7);
    assert_eq!(v["levels"]["axis"], "y");

    let mut s = Settings::default();
    assert!(s.merge_text("nonsense").is_err());
    assert!(s.merge_text("colour = red").is_err());
    assert!(s.merge_text("seed = -1").is_err());
}

#[test]
fn input_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s1.poly");
    std::fs::write(&p, format!("{S1}\n")).unwrap();
    let out = bin().arg("levels").arg(&p).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["source"], "file");
    assert_eq!(v["levels"]["critical_values"].as_array().unwrap().len(), 6);
}

fn figure(verb: Verb, text: &str) -> String {
    let mut cmd = Command::inline(verb, text);
    cmd.figure = true;
    svg::render(run(&cmd).unwrap().figure.as_ref().unwrap())
}

fn count(doc: &str, needle: &str) -> usize {
    doc.matches(needle).count()
}

#[test]
fn svg_panels_and_chains() {
    let s5 = figure(Verb::Connect, S5);
    assert_eq!(count(&s5, r#"class="panel""#), 5);
    assert_eq!(count(&s5, r#"class="chain""#), 1);
    assert!(count(&s5, "stroke-dasharray") >= 1);

    let s6 = figure(Verb::Connect, S6);
    assert_eq!(count(&s6, r#"class="chain""#), 8);

    let empty = figure(Verb::Plot, EMPTY);
    assert_eq!(count(&empty, r#"class="panel""#), 1);
    assert!(empty.contains(">empty</text>"));

    let levels_only = figure(Verb::Plot, S1);
    assert_eq!(count(&levels_only, r#"class="panel""#), 13);
    assert_eq!(count(&levels_only, r#"class="chain""#), 0);
    for doc in [&s5, &s6, &empty] {
        assert!(doc.contains(r#"version="1.1""#));
        assert!(!doc.contains("href"));
    }
    assert_eq!(figure(Verb::Connect, S6), s6);
}

#[test]
fn svg_written_by_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s5.svg");
    let st = bin().args(["plot", "-e", S5, "--svg"]).arg(&p).status().unwrap();
    assert!(st.success());
    let doc = std::fs::read_to_string(&p).unwrap();
    assert!(doc.starts_with("<?xml"));
    assert_eq!(count(&doc, r#"class="panel""#), 5);
}

#[test]
fn grammar_examples() {
    let s1 = parse_polynomial(S1).unwrap();
    let x = MPoly::var(Var::X);
    let sq = |v: Var| MPoly::var(v).pow(2).sub(&MPoly::one()).pow(2);
    assert_eq!(s1, sq(Var::X).add(&sq(Var::Y)).add(&sq(Var::Z)).sub(&MPoly::constant(surftop_core::ring::q(3, 2))));
    assert_eq!(parse_polynomial(" x ^ 2 ").unwrap(), x.pow(2));
    assert!(matches!(parse_polynomial("x^-1"), Err(Error::ParseError { .. })));
    assert!(matches!(parse_polynomial("2x"), Err(Error::ParseError { .. })));
    assert!(parse_polynomial("x^2+").is_err());
}

fn small_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..=4, 0u32..=4, 0u32..=4), -40i64..=40, 1i64..=9), 0..=7).prop_map(|terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, ((a, b, c), n, d)| {
            acc.add(&MPoly::term(surftop_core::ring::q(n, d), [a, b, c]))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rendering_parses_back(p in small_poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text).unwrap(), p.clone());
        let spaced = text.replace('+', " + ").replace('*', " * ");
        prop_assert_eq!(parse_polynomial(&spaced).unwrap(), p);
    }

    #[test]
    fn integer_polynomials_render_without_denominators(k in -50i64..=50) {
        let p = MPoly::term(qi(k), [1, 0, 2]);
        prop_assert!(!p.to_string().contains('/'));
    }
}
