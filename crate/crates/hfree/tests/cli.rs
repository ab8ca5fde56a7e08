use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use hfree::patterns::{build_pattern, PatternId};
use hfree::Graph;

fn hfree(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hfree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn scratch(name: &str, g: &Graph) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, g.to_text()).unwrap();
    p
}

fn pattern(id: PatternId) -> String {
    build_pattern(id).unwrap().to_text()
}

#[test]
fn detect_reports() {
    let k4 = scratch("k4.graph", &Graph::complete(4));
    let o = hfree(&["detect", "--family", "H:1", k4.to_str().unwrap()], None);
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "FREE".into()));

    let o = hfree(&["detect", "--family", "A", "-"], Some(&pattern(PatternId::AGraph)));
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "FOUND".into()));
    assert!(stdout(&o).contains("map [0,1,2,3,4,5]"));

    let k23 = pattern(PatternId::Kb(2, 3));
    let k23out = hfree(&["generate", "star3-from-3col", "-"], Some(&k23));
    let o = hfree(&["detect", "--family", "H:odd", "-"], Some(&stdout(&k23out)));
    assert_eq!(first_line(&o), "FREE");
}

#[test]
fn solve_verdicts_and_exit_codes() {
    let o = hfree(&["solve", "c5col-h3", "-"], Some(&pattern(PatternId::Flower(3))));
    assert_eq!((o.status.code(), first_line(&o)), (Some(1), "NO".into()));
    assert!(stdout(&o).contains("witness flower:3"));

    let o = hfree(&["solve", "hamilton-h1", "--emit-cert", "-"], Some(&Graph::cycle(6).to_text()));
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "YES".into()));
    assert!(stdout(&o).contains("ham_cycle"));

    let theta = pattern(PatternId::Theta { alpha: 2, i: 4, beta: 3, j: 6 });
    let o = hfree(&["solve", "star3-bip", "-"], Some(&theta));
    assert_eq!(first_line(&o), "NO");
    assert!(stdout(&o).contains("witness theta:2x4+3x6"));

    let h1 = pattern(PatternId::H(1));
    let o = hfree(&["solve", "hamilton-h1", "-"], Some(&h1));
    assert_eq!((o.status.code(), first_line(&o)), (Some(2), "PROMISE VIOLATION".into()));
    let o = hfree(&["solve", "hamilton-h1", "--trust", "-"], Some(&h1));
    assert_eq!(o.status.code(), Some(1));

    let two = Graph::path(4).disjoint_union(&Graph::path(4)).to_text();
    let o = hfree(&["solve", "kidp-h2", "--pairs", "0,3;4,7", "-"], Some(&two));
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "YES".into()));
    let o = hfree(&["solve", "kidp-h2", "-"], Some(&two));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(hfree(&["solve", "c5col-h3", "-"], Some("3 2\n0 1\n")).status.code(), Some(2));
    assert_eq!(hfree(&["solve", "nonsense", "-"], Some("1 0\n")).status.code(), Some(2));
    assert_eq!(hfree(&["detect", "--family", "H:x", "-"], Some("1 0\n")).status.code(), Some(2));
    assert_eq!(hfree(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn json_is_one_object() {
    let o = hfree(&["--json", "solve", "c5col-h3", "-"], Some(&pattern(PatternId::K(3))));
    let text = stdout(&o);
    assert_eq!(text.trim().lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "NO");
    assert_eq!(v["witness"]["map"], serde_json::json!([0, 1, 2]));
}

#[test]
fn generate_kinds() {
    let o = hfree(&["generate", "pattern", "E3"], None);
    assert_eq!(Graph::parse(&stdout(&o)).unwrap(), build_pattern(PatternId::E3).unwrap());

    let k5 = Graph::complete(5);
    let o = hfree(&["generate", "subdivide", "--k", "2", "-"], Some(&k5.to_text()));
    assert_eq!(Graph::parse(&stdout(&o)).unwrap(), k5.k_subdivide(2));

    let dir = scratch("unused.graph", &Graph::empty(1)).parent().unwrap().to_path_buf();
    let cnf = dir.join("f.cnf");
    std::fs::write(&cnf, "p cnf 3 2\n1 2 3 0\n-1 -2 3 0\n").unwrap();
    let out = dir.join("g.graph");
    let o = hfree(
        &["generate", "2idp-sat", "--cnf", cnf.to_str().unwrap(), "--ell", "5", "-o", out.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let g = Graph::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(g.max_degree() <= 3);
    let layout: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("g.graph.layout.json")).unwrap()).unwrap();
    let x = layout["labels"]["x"].as_u64().unwrap() as usize;
    assert_eq!(g.degree(x), 2);

    let args = ["generate", "random-free", "--n", "12", "--p", "0.4", "--family", "H:2", "--seed", "3"];
    assert_eq!(stdout(&hfree(&args, None)), stdout(&hfree(&args, None)));
    assert_eq!(hfree(&["generate", "star3-bip-girth", "--girth", "5", "-"], Some("1 0\n")).status.code(), Some(2));
}

#[test]
fn harness_agrees() {
    for (problem, trials, size, seed) in [("kidp-h2", "200", "10", "1"), ("c5col-h3", "500", "12", "2"), ("star3", "200", "12", "3")] {
        let o = hfree(&["harness", problem, "--trials", trials, "--size", size, "--seed", seed], None);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(first_line(&o), format!("{trials}/{trials} agree"));
    }
}

#[test]
fn oracle_and_verify() {
    let c6 = Graph::cycle(6).to_text();
    let o = hfree(&["oracle", "hole", "--x", "0", "--y", "3", "-"], Some(&c6));
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "YES".into()));
    let o = hfree(&["oracle", "c5-critical", "-"], Some(&pattern(PatternId::Flower(4))));
    assert_eq!((o.status.code(), first_line(&o)), (Some(1), "NO".into()));

    let g = scratch("p4.graph", &Graph::path(4));
    let cert = g.with_extension("json");
    std::fs::write(&cert, "{\"colouring\":[1,2,1,2]}").unwrap();
    let o = hfree(&["verify", "star", g.to_str().unwrap(), cert.to_str().unwrap()], None);
    assert_eq!((o.status.code(), first_line(&o)), (Some(1), "INVALID".into()));
    std::fs::write(&cert, "[1,2,3,1]").unwrap();
    let o = hfree(&["verify", "star", g.to_str().unwrap(), cert.to_str().unwrap()], None);
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "VALID".into()));
}
