use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fpindex"));
    for a in args {
        if a.ends_with(".json") {
            cmd.arg(fixture(a));
        } else {
            cmd.arg(a);
        }
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, s) = run(args);
    (code, serde_json::from_str(&s).unwrap_or_else(|e| panic!("{e}: {s}")))
}

#[test]
fn small_fixture_indices() {
    let (code, v) = run_json(&["index", "fig1_k.json", "fig1_kt.json", "identity_map.json"]);
    assert_eq!((code, v["eta"].as_i64()), (0, Some(0)));
    let (code, v) = run_json(&["index", "fig2_k.json", "fig2_kt.json", "identity_map.json"]);
    assert_eq!((code, v["eta"].as_i64(), v["crossings"].as_i64()), (0, Some(-1), Some(4)));
}

#[test]
fn identity_self_map_is_rejected() {
    let (code, v) = run_json(&["index", "fig1_k.json", "fig1_k.json", "identity_map.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["reason"], "HasFixedPoint");
}

#[test]
fn missing_and_malformed_inputs() {
    let (code, v) = run_json(&["index", "nope.json", "fig1_kt.json", "identity_map.json"]);
    assert_eq!((code, v["reason"].as_str()), (2, Some("Unreadable")));
    let (code, v) = run_json(&["index", "fig1_k.json", "fig1_kt.json", "fig1_constraints.json"]);
    assert_eq!((code, v["reason"].as_str()), (2, Some("MalformedInput")));
    let (code, v) = run_json(&["incompat", "overlay_two_a.json", "overlay_two_b.json", "overlay_two_corr.json", "--epsilon", "x"]);
    assert_eq!((code, v["reason"].as_str()), (2, Some("MalformedInput")));
}

#[test]
fn prescribe_disjoint_and_boxed() {
    let (code, v) = run_json(&["prescribe", "fig1_k.json", "fig1_kt.json", "fig1_constraints.json"]);
    assert_eq!((code, v["w"].as_i64(), v["depth"].as_i64()), (0, Some(0), Some(0)));
    let (code, v) = run_json(&["prescribe", "two_bump_k.json", "two_bump_kt.json", "two_bump_boxed_constraints.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["depth"].as_i64(), Some(1));
    assert!(v["w"].as_i64().unwrap() >= 0);
    assert_eq!(v["w"], v["eta"]);
}

#[test]
fn twelve_crossing_trace_matches_golden() {
    let (code, s) = run(&["prescribe", "twelve_k.json", "twelve_kt.json", "twelve_constraints.json"]);
    assert_eq!(code, 0);
    let golden = std::fs::read_to_string(fixture("golden/twelve_trace.json")).unwrap();
    assert_eq!(s, golden);
}

#[test]
fn torus_dumps_match_golden() {
    for (c, k, kt, g) in [
        ("two_bump_boxed_constraints.json", "two_bump_k.json", "two_bump_kt.json", "golden/two_bump_boxed.dump"),
        ("twelve_constraints.json", "twelve_k.json", "twelve_kt.json", "golden/twelve.dump"),
    ] {
        let (code, v) = run_json(&["torus", k, kt, c]);
        assert_eq!(code, 0);
        assert_eq!(v["dump"].as_str().unwrap(), std::fs::read_to_string(fixture(g)).unwrap());
        let w: Vec<i64> = v["local_windings"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        let names = v["names"].as_array().unwrap();
        for (n, w) in names.iter().zip(w) {
            assert_eq!(w, if n.as_str().unwrap().contains('~') { -1 } else { 1 });
        }
    }
}

#[test]
fn cut_reports() {
    let (code, v) = run_json(&["cut", "fig2_k.json", "fig2_kt.json"]);
    assert_eq!((code, v["cuts"].as_bool()), (0, Some(true)));
    let (code, v) = run_json(&["cut", "two_bump_k.json", "two_bump_kt.json"]);
    assert_eq!((code, v["cuts"].as_bool()), (0, Some(false)));
}

#[test]
fn incompat_overlays() {
    for name in ["overlay_two", "overlay_three"] {
        let (a, b, c) = (format!("{name}_a.json"), format!("{name}_b.json"), format!("{name}_corr.json"));
        let (code, v) = run_json(&["incompat", &a, &b, &c]);
        assert_eq!(code, 0, "{v}");
        assert!(v["cutting_index"].is_u64());
        let cert = &v["certificate"];
        assert_eq!(cert["additivity_holds"], true);
        assert!(cert["interstices"].as_array().unwrap().iter().all(|f| f["eta"].as_i64().unwrap() >= 0));
    }
}

#[test]
fn epsilon_translation() {
    let args = |e: &'static str| ["incompat", "overlay_unshifted_a.json", "overlay_unshifted_b.json", "overlay_two_corr.json", "--epsilon", e];
    let (code, v) = run_json(&args("0"));
    assert_eq!((code, v["reason"].as_str()), (2, Some("HypothesesNotMet")));
    let (code, v) = run_json(&args("1/7"));
    assert_eq!(code, 0);
    assert_eq!(v["cutting_index"].as_u64(), Some(1));
}

#[test]
fn empty_packings_degenerate() {
    let (code, v) = run_json(&["incompat", "overlay_empty_a.json", "overlay_empty_b.json", "empty_corr.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["degenerate"], true);
    assert_eq!(v["certificate"]["corner_achievable"], serde_json::json!([-1]));
}

#[test]
fn renders_are_svg() {
    let cases: [&[&str]; 4] = [
        &["render", "pair", "fig2_k.json", "fig2_kt.json"],
        &["render", "arrangement", "fig2_k.json", "fig2_kt.json"],
        &["render", "torus", "two_bump_k.json", "two_bump_kt.json", "two_bump_boxed_constraints.json"],
        &["render", "overlay", "overlay_two_a.json", "overlay_two_b.json"],
    ];
    for args in cases {
        let (code, s) = run(args);
        assert_eq!(code, 0, "{args:?}");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"), "{args:?}");
    }
    let (code, v) = run_json(&["render", "pair", "fig2_k.json"]);
    assert_eq!((code, v["reason"].as_str()), (2, Some("MalformedInput")));
}

#[test]
fn svg_and_out_flags_write_files() {
    let dir = std::env::temp_dir().join(format!("fpindex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (svg, out) = (dir.join("t.svg"), dir.join("r.json"));
    let (code, s) = run(&[
        "prescribe",
        "two_bump_k.json",
        "two_bump_kt.json",
        "two_bump_boxed_constraints.json",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!((code, s.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["depth"].as_i64(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "5", "--trials", "20"]);
    let b = run(&["selftest", "--seed", "5", "--trials", "20"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}
