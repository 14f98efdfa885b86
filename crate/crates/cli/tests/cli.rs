use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const BRANCHED: &str = "\
vertex u1 -2
vertex u2 -6
vertex u3 -2
vertex v1 -4
vertex v2 -3
edge u1 u2
edge u2 u3
edge u2 v1
edge v1 v2
";

/// Centre of Euler -2 with three neighbours: e + d = 1 at `c`.
const BAD_STAR: &str = "\
vertex c -2
vertex a -2
vertex b -2
vertex d -2
edge c a
edge c b
edge c d
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plumbob"))
}

fn write_tree(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lens_prints_expansion_and_tree() {
    let o = run(&["lens", "7", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("[-2, -4]"), "{s}");
    assert!(s.contains("vertex v1 -2") && s.contains("edge v1 v2"), "{s}");
}

#[test]
fn lens_rejects_non_coprime() {
    assert_eq!(run(&["lens", "6", "4"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["validate"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent/tree"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = write_tree(dir.path(), "junk.txt", "vertex a\n");
    assert_eq!(run(&["rollup", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_vertex_exits_1_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let star = write_tree(dir.path(), "star.txt", BAD_STAR);
    let star = star.to_str().unwrap();
    for cmd in ["validate", "rollup", "openbook", "legendrian", "check"] {
        let o = run(&[cmd, star]);
        assert_eq!(o.status.code(), Some(1), "{cmd}");
    }
    assert!(stdout(&run(&["validate", star])).contains("violation          c"));
}

#[test]
fn check_passes_on_branched_example() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    let o = run(&["check", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn injected_linking_fault_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    let o = run(&["check", t.to_str().unwrap(), "--fault-q", "1,2", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn routes_give_identical_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    let codes: Vec<serde_json::Value> = ["tree", "edges", "plan"]
        .iter()
        .map(|r| {
            let o = run(&["openbook", t.to_str().unwrap(), "--route", r, "--json"]);
            assert_eq!(o.status.code(), Some(0));
            let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            v["canonical_code"].clone()
        })
        .collect();
    assert!(codes[0].is_string());
    assert_eq!(codes[0], codes[1]);
    assert_eq!(codes[0], codes[2]);
}

#[test]
fn reads_stdin() {
    let mut child = bin()
        .args(["rollup", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(BRANCHED.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chains"][0]["framings"], serde_json::json!([-2, -6, -6]));
    assert_eq!(v["chains"][1]["attachment"]["position"], 2);
}

#[test]
fn conjugate_negates_c1() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    let t = t.to_str().unwrap();
    let get = |extra: &[&str]| {
        let mut args = vec!["legendrian", t, "--json"];
        args.extend_from_slice(extra);
        let v: serde_json::Value = serde_json::from_slice(&run(&args).stdout).unwrap();
        v["c1"]["per_component"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect::<Vec<_>>()
    };
    let plain = get(&[]);
    let conj = get(&["--conjugate"]);
    assert_eq!(plain, vec![0, -4, -4, -2, -3]);
    assert!(plain.iter().zip(&conj).all(|(a, b)| *a == -b));
}

#[test]
fn homology_reports_cyclic_group() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    let o = run(&["homology", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_1 = Z/208"));
}

#[test]
fn render_writes_parseable_svg() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_tree(dir.path(), "t.txt", BRANCHED);
    for what in ["tree", "page", "front"] {
        let out = dir.path().join(format!("{what}.svg"));
        let o = run(&["render", t.to_str().unwrap(), "--what", what, "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{what}");
        let text = std::fs::read_to_string(&out).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let again = dir.path().join(format!("{what}2.svg"));
        run(&["render", t.to_str().unwrap(), "--what", what, "-o", again.to_str().unwrap()]);
        assert_eq!(std::fs::read(&again).unwrap(), text.as_bytes(), "{what} is not deterministic");
    }
}
