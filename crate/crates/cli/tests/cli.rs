use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rsup_core::format::parse_generator;
use rsup_core::EventId;
use serde_json::Value;

const WITNESS: &str = "11,30,11,30,31,22,11,30,11,30";
const DRAINED: &str = "11,30,11,30,31,22,11,30,11,30,23,31,20,31,20,31";

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/small_factory/manifest.toml")
}

fn rsup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsup")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sync_matches_golden_product() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ab.json");
    let run = rsup(&["sync", s(&fixture("a.json")), s(&fixture("b.json")), "-o", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(read(&out), read(&fixture("ab.golden.json")));
    assert_eq!(read(&dir.path().join("ab.map.json")), read(&fixture("ab.golden.map.json")));
}

#[test]
fn sync_of_one_file_renumbers_canonically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    assert_eq!(code(&rsup(&["sync", s(&fixture("shuffled.json")), "-o", s(&out)])), 0);
    let g = parse_generator(&read(&out), "s").unwrap();
    assert_eq!(g.state_count(), 3);
    assert_eq!(g.initial(), Some(0));
    let edges: Vec<_> = g.transitions().map(|(a, e, b)| (a, e.0, b)).collect();
    assert_eq!(edges, vec![(0, 1, 1), (0, 3, 2), (1, 1, 0), (2, 3, 0)]);
    assert!(g.is_marked(2) && !g.is_marked(0));
}

#[test]
fn exit_codes_for_bad_input_and_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let conflict = rsup(&["sync", s(&fixture("a.json")), s(&fixture("conflict.json")), "-o", s(&out)]);
    assert_eq!(code(&conflict), 3);
    let wide = rsup(&["supcon", s(&fixture("dead_plant.json")), s(&fixture("wide_spec.json")), "-o", s(&out)]);
    assert_eq!(code(&wide), 3);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    let parse = rsup(&["dot", s(&bad)]);
    assert_eq!(code(&parse), 2);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("bad.json"));
    assert_eq!(code(&rsup(&["sync", s(&dir.path().join("missing.json")), "-o", s(&out)])), 2);
    assert_eq!(code(&rsup(&["rsup", s(&dir.path().join("missing.toml")), "--outdir", s(dir.path())])), 2);
    assert_eq!(code(&rsup(&["frobnicate"])), 2);
}

#[test]
fn empty_supcon_result_warns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.json");
    let run = rsup(&["supcon", s(&fixture("dead_plant.json")), s(&fixture("no_two.json")), "-o", s(&out)]);
    assert_eq!(code(&run), 0);
    assert!(String::from_utf8_lossy(&run.stderr).contains("warning: supervisor is empty"));
    let g = parse_generator(&read(&out), "e").unwrap();
    assert!(g.is_empty());
    let dot = rsup(&["dot", s(&out)]);
    assert_eq!(String::from_utf8_lossy(&dot.stdout), "digraph \"supcon(P,E)\" {\n}\n");
}

#[test]
fn rsup_summary_for_the_factory() {
    let dir = tempfile::tempdir().unwrap();
    let run = rsup(&["rsup", s(&manifest()), "--outdir", s(dir.path()), "--json"]);
    assert_eq!(code(&run), 0);
    let summary = json(&run);
    assert_eq!(summary["rsup_states"], 78);
    assert_eq!(summary["rsup_transitions"], 270);
    assert_eq!(summary["controllable"], true);
    assert_eq!(summary["nonblocking"], true);
    let written: Value = serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    assert_eq!(written, summary);
    for file in ["RS.json", "GMode.json", "GMode.map.json", "SPEC.json", "RSUP.json", "RSUP.map.json", "RSUP.disabled.json"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }

    // supcon on the written plant and spec reproduces the supervisor.
    let again = dir.path().join("again.json");
    let gmode = dir.path().join("GMode.json");
    let spec = dir.path().join("SPEC.json");
    assert_eq!(code(&rsup(&["supcon", s(&gmode), s(&spec), "-o", s(&again)])), 0);
    let a = parse_generator(&read(&again), "a").unwrap().with_name("x");
    let b = parse_generator(&read(&dir.path().join("RSUP.json")), "b").unwrap().with_name("x");
    assert_eq!(a, b);
}

#[test]
fn one_way_rsup_drops_the_reverse_switch() {
    let dir = tempfile::tempdir().unwrap();
    let run = rsup(&["rsup", s(&manifest()), "--one-way", "--outdir", s(dir.path()), "--json"]);
    assert_eq!(code(&run), 0);
    assert_eq!(json(&run)["switch_events"], serde_json::json!([91]));
    let sup = parse_generator(&read(&dir.path().join("RSUP.json")), "RSUP").unwrap();
    assert!(!sup.transitions().any(|(_, e, _)| e == EventId(93)));

    let solve = rsup(&["solve", s(&manifest()), "--one-way", "--from", "11,30", "--event", "93"]);
    assert_eq!(code(&solve), 1);
    assert!(String::from_utf8_lossy(&solve.stdout).contains("event nowhere enabled"));
}

#[test]
fn single_mode_manifest_matches_classical_synthesis() {
    let dir = tempfile::tempdir().unwrap();
    let src = manifest();
    let fixtures = src.parent().unwrap();
    for file in ["M1.json", "M2.json", "BUF1.json"] {
        fs::copy(fixtures.join(file), dir.path().join(file)).unwrap();
    }
    let single = dir.path().join("single.toml");
    fs::write(
        &single,
        "components = [\"M1.json\", \"M2.json\"]\nspecs = [\"BUF1.json\"]\ninitial = \"C1\"\n\n\
         [[configurations]]\nname = \"C1\"\nmembers = [\"M1\", \"M2\", \"BUF1\"]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&rsup(&["rsup", s(&single), "--outdir", s(&out)])), 0);

    let p = |n: &str| dir.path().join(n);
    assert_eq!(code(&rsup(&["sync", s(&p("M1.json")), s(&p("M2.json")), "-o", s(&p("plant.json"))])), 0);
    assert_eq!(code(&rsup(&["allevents", s(&p("plant.json")), "-o", s(&p("all.json"))])), 0);
    assert_eq!(code(&rsup(&["sync", s(&p("all.json")), s(&p("BUF1.json")), "-o", s(&p("spec.json"))])), 0);
    assert_eq!(code(&rsup(&["supcon", s(&p("plant.json")), s(&p("spec.json")), "-o", s(&p("sup.json"))])), 0);

    let classical = parse_generator(&read(&p("sup.json")), "sup").unwrap();
    let rsup_g = parse_generator(&read(&out.join("RSUP.json")), "RSUP").unwrap();
    assert_eq!(classical.with_name("x"), rsup_g.with_name("x"));
}

#[test]
fn solve_reproduces_the_drain_path() {
    let run = rsup(&["solve", s(&manifest()), "--from", WITNESS, "--event", "91", "--to", DRAINED]);
    assert_eq!(code(&run), 0);
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.contains("verdict: SOLVABLE"));
    assert!(text.contains("shortest: 23 31 20 31 20 31"));
    assert!(text.contains("at target: disable {11}; force 91 preempting {20, 22}"));

    let run = rsup(&["solve", s(&manifest()), "--from", WITNESS, "--event", "91", "--to", DRAINED, "--json"]);
    let report = json(&run);
    assert_eq!(report["verdict"], "SOLVABLE");
    let path = &report["targets"][0]["solution"]["paths"][0];
    assert_eq!(path["events"], serde_json::json!([23, 31, 20, 31, 20, 31]));
    let conditions: Vec<&str> = path["steps"].as_array().unwrap().iter().map(|s| s["condition"].as_str().unwrap()).collect();
    assert_eq!(conditions, ["BFC-1", "BFC-1", "BFC-4", "BFC-2", "BFC-4", "BFC-2"]);

    // Without a target the switch can fire at the current state.
    let here = rsup(&["solve", s(&manifest()), "--from", WITNESS, "--event", "91", "--json"]);
    assert_eq!(code(&here), 0);
    assert_eq!(json(&here)["targets"][0]["solution"]["paths"][0]["events"], serde_json::json!([]));
}

#[test]
fn solve_input_errors() {
    let m = manifest();
    assert_eq!(code(&rsup(&["solve", s(&m), "--from", "11,99", "--event", "91"])), 2);
    assert_eq!(code(&rsup(&["solve", s(&m), "--from", "#500", "--event", "91"])), 2);
    assert_eq!(code(&rsup(&["solve", s(&m), "--from", "11", "--event", "11"])), 2);
    assert_eq!(code(&rsup(&["solve", s(&m), "--from", "11", "--event", "91", "--mode", "fast"])), 2);
}

fn path_set(report: &Value) -> BTreeSet<String> {
    report["targets"][0]["solution"]["paths"].as_array().unwrap().iter().map(|p| p.to_string()).collect()
}

#[test]
fn literal_mode_reports_a_subset() {
    let m = manifest();
    let args = ["solve", s(&m), "--from", "#64", "--event", "91", "--to", DRAINED, "--json"];
    let all = path_set(&json(&rsup(&args)));
    let mut literal_args = args.to_vec();
    literal_args.extend(["--mode", "paper-literal"]);
    let literal = path_set(&json(&rsup(&literal_args)));
    assert_eq!(all.len(), 3);
    assert!(!literal.is_empty() && literal.is_subset(&all) && literal.len() < all.len());
}

#[test]
fn dot_of_the_binary_rs_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let rs = dir.path().join("rs.json");
    assert_eq!(code(&rsup(&["rs-build", s(&manifest()), "-o", s(&rs)])), 0);
    let dot = rsup(&["dot", s(&rs), "--bundle"]);
    assert_eq!(String::from_utf8_lossy(&dot.stdout), read(&fixture("rs.golden.dot")));
    let plain = rsup(&["dot", s(&rs)]);
    let edges = String::from_utf8_lossy(&plain.stdout).lines().filter(|l| l.contains("->") && !l.contains("__init")).count();
    assert_eq!(edges, 22);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert_eq!(code(&rsup(&["rsup", s(&manifest()), "--outdir", s(dir.path())])), 0);
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 9);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
    let solve = || rsup(&["solve", s(&manifest()), "--from", WITNESS, "--event", "91", "--to", DRAINED]).stdout;
    assert_eq!(solve(), solve());
}
