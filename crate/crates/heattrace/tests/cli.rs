use std::path::PathBuf;
use std::process::{Command, Output};

use heattrace::format::{parse_datum, serialize_datum};
use heattrace::runner::{chamber_table, pool, trace_sweep, TGrid};
use heattrace_core::catalog;
use heattrace_core::chambers::choose_positive_system;
use heattrace_core::heattrace::Numerics;
use heattrace_core::rootdata::HighestWeight;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heattrace"))
        .args(args)
        .env_remove("HEATTRACE_THREADS")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("heattrace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_sl2r_weight_one() {
    let v = json(&run(&["analyze", "--group", "sl2R", "--weight", "1"]));
    let c = &v["constants"];
    assert_eq!(c["beta1_bar"].as_f64(), Some(-0.5));
    assert_eq!(c["gamma2_bar"].as_f64(), Some(-0.5));
    let a = c["alpha0_bar"]["value"].as_f64().unwrap();
    let bound = 3.0 * c["alpha0_bar"]["err"].as_f64().unwrap();
    let want = 1.0 / (2f64.sqrt() * std::f64::consts::PI.powf(1.5));
    assert!((a - want).abs() <= bound, "{a} vs {want}");
    assert_eq!(v["meta"]["seed"].as_u64(), Some(20_240_601));
    assert!(v["meta"]["tie_break"].is_array());
}

#[test]
fn fit_sl2r_weight_two_reports_deviations() {
    let v = json(&run(&["fit", "--group", "sl2R", "--weight", "2", "--t", "40:400:12"]));
    let f = &v["fitted"];
    assert!((f["alpha"].as_f64().unwrap() * std::f64::consts::PI - 1.0).abs() < 1e-6);
    assert!(f["beta"].as_f64().unwrap().abs() < 1e-6);
    assert!(f["gamma"].as_f64().unwrap().abs() < 1e-8);
    assert!(v["deviations"]["alpha_rel"].is_number());
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_passes_on_sl2r() {
    let out = run(&["verify", "--group", "sl2R", "--mc-samples", "65536"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["passed"].as_bool(), Some(true));
}

#[test]
fn identical_arguments_give_identical_files() {
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    for p in [&a, &b] {
        let out = run(&["trace", "--group", "sl3R", "--weight", "1", "--t", "1:50:6", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().next(), Some("t,trace,trace_err,asymptote,ratio"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--group", "no-such-group"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--group", "sl2R", "--weight", "1,2"]).status.code(), Some(2));
    // Not k-dominant integral: sl3R needs lambda in the integral lattice of its compact root.
    assert_eq!(run(&["analyze", "--group", "sl3R", "--weight", "0.3"]).status.code(), Some(2));
    assert_eq!(run(&["trace", "--group", "sl2R", "--t", "40:900:5"]).status.code(), Some(2));
    assert_eq!(run(&["fit", "--group", "sl2R", "--t", "40:400:3"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "list"]).status.code(), Some(0));
}

#[test]
fn datum_files_are_accepted_and_bad_ones_rejected() {
    let good = scratch("b2.json");
    let d = catalog::builtin("b2-test").unwrap().datum;
    std::fs::write(&good, serialize_datum(&d)).unwrap();
    let v = json(&run(&["analyze", "--group", good.to_str().unwrap(), "--mc-samples", "65536"]));
    assert_eq!(v["meta"]["group"], "b2-test");

    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\", \"rank\": 1, \"dim_a\": 0, \"dim_tg\": 0, \"roots\": [{\"coords\": [1.0], \"mult_p\": 0, \"mult_k\": 0}]}").unwrap();
    let out = run(&["analyze", "--group", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("roots[0]"));
}

#[test]
fn weight_files_match_the_flag() {
    let w = scratch("w.json");
    std::fs::write(&w, "{\"lambda\": [1.0], \"lambda_a\": [0.0]}").unwrap();
    let a = run(&["analyze", "--group", "sl3R", "--weight", w.to_str().unwrap(), "--mc-samples", "65536"]);
    let b = run(&["analyze", "--group", "sl3R", "--weight", "1", "--weight-a", "0", "--mc-samples", "65536"]);
    assert_eq!(json(&a), json(&b));
}

#[test]
fn catalog_round_trips_through_the_file_format() {
    for e in catalog::all() {
        let text = serialize_datum(&e.datum);
        let back = parse_datum(&text).unwrap();
        assert_eq!(serialize_datum(&back), text);
    }
}

#[test]
fn results_do_not_depend_on_the_worker_count() {
    let num = Numerics {
        mc_samples: 1 << 16,
        ..Numerics::default()
    };
    for name in ["sl3R", "b2-test"] {
        let d = catalog::builtin(name).unwrap().datum;
        let hw = HighestWeight::new(&vec![0.0; d.r0]);
        let ps = choose_positive_system(&d, None, &hw).unwrap();
        let ts = TGrid { t_min: 1.0, t_max: 100.0, count: 7 }.points();
        let (one, four) = (pool(Some(1)), pool(Some(4)));
        let a = trace_sweep(&one, &ps, &hw, &ts, &num).unwrap();
        let b = trace_sweep(&four, &ps, &hw, &ts, &num).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.trace.to_f64().to_bits(), y.trace.to_f64().to_bits());
            assert_eq!(x.trace.err_f64().to_bits(), y.trace.err_f64().to_bits());
        }
        let a = chamber_table(&one, &ps, &hw, &num).unwrap();
        let b = chamber_table(&four, &ps, &hw, &num).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.alpha_w.to_f64().to_bits(), y.alpha_w.to_f64().to_bits());
        }
    }
}
