use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CHAIN2: &str = "a b\na < b\n";
const IDENTITY_MOD2: &str = "ring: zmod:2\na a : a a 1\na b : a b 1\nb b : b b 1\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fi-lie"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().expect("temp dir"),
        }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).expect("write fixture");
        path_str(&path)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn path_str(p: &Path) -> String {
    p.to_str().expect("utf-8 path").to_string()
}

#[test]
fn counterexample_reports_non_proper() {
    for (n, m) in [(3, 2), (4, 3), (5, 4)] {
        let out = run(&["counterexample", "--n", &n.to_string()]);
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        assert!(text.contains(&format!("Lie {n}-derivation: yes; proper: no")), "{text}");
        assert!(text.contains(&format!("zmod:{m}")), "{text}");
    }
}

#[test]
fn counterexample_needs_n_at_least_three() {
    assert_eq!(code(&run(&["counterexample", "--n", "2"])), 2);
}

#[test]
fn zero_map_is_lie_derivation() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let map = ws.file("zero.map", "ring: zmod:7\n");
    let out = run(&["verify", "lie", "--n", "2", "--ring", "zmod:7", "--poset", &poset, "--map", &map]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: holds"));
}

#[test]
fn identity_is_not_a_derivation() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let map = ws.file("id.map", IDENTITY_MOD2);
    let out = run(&["verify", "derivation", "--ring", "zmod:2", "--poset", &poset, "--map", &map]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: fails"));
}

#[test]
fn identity_mod_two_is_not_proper() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let map = ws.file("id.map", IDENTITY_MOD2);
    let out = run(&["proper", "--n", "3", "--ring", "zmod:2", "--poset", &poset, "--map", &map]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("proper: no"));
}

#[test]
fn decompose_reports_torsion_and_writes_parts() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let map = ws.file("id.map", IDENTITY_MOD2);
    let d = path_str(&ws.path("d.map"));
    let tau = path_str(&ws.path("tau.map"));
    let out = run(&[
        "decompose", "--n", "3", "--ring", "zmod:2", "--poset", &poset, "--map", &map, "--out-d", &d,
        "--out-tau", &tau,
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("hypothesis failure: torsion"));
    assert_eq!(std::fs::read_to_string(&d).unwrap(), "ring: zmod:2\na b : a b 1\n");
    assert_eq!(std::fs::read_to_string(&tau).unwrap(), "ring: zmod:2\na a : a a 1\nb b : b b 1\n");

    // the derivation part passes the derivation check on its own
    let out = run(&["verify", "derivation", "--ring", "zmod:2", "--poset", &poset, "--map", &d]);
    assert_eq!(code(&out), 0);
}

#[test]
fn proper_witness_round_trips() {
    let ws = Workspace::new();
    let poset = ws.file("c3.poset", "x y z\nx < y\ny < z\n");
    let space = path_str(&ws.path("space.maps"));
    let out = run(&["space", "--n", "3", "--ring", "zmod:5", "--poset", &poset, "--out", &space]);
    assert_eq!(code(&out), 0);

    // ad(e(x,y)) is an inner derivation, hence a proper Lie 3-derivation
    let map = ws.file(
        "ad.map",
        "ring: zmod:5\nx x : x y 4\ny y : x y 1\ny z : x z 1\n",
    );
    let d = path_str(&ws.path("d.map"));
    let tau = path_str(&ws.path("tau.map"));
    let out = run(&[
        "proper", "--n", "3", "--ring", "zmod:5", "--poset", &poset, "--map", &map, "--out-d", &d, "--out-tau", &tau,
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("proper: yes"));
    let out = run(&["verify", "derivation", "--ring", "zmod:5", "--poset", &poset, "--map", &d]);
    assert_eq!(code(&out), 0);
}

#[test]
fn product_of_elements() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let e = ws.file("e.el", "ring: zmod:5\na b 2\nb b 1\n");
    let out = run(&["mul", "--ring", "zmod:5", &poset, &e, &e]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "ring: zmod:5\na b 2\nb b 1\n");
}

#[test]
fn commutator_of_idempotents() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let x = ws.file("x.el", "ring: int\na a 1\n");
    let y = ws.file("y.el", "ring: int\na b 1\n");
    let out = run(&["pn", "--n", "2", "--ring", "int", &poset, &x, &y]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "ring: int\na b 1\n");
}

#[test]
fn guard_exceeded_exits_four() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let map = ws.file("id.map", IDENTITY_MOD2);
    let out = run(&[
        "--tuple-guard", "3", "verify", "lie", "--n", "3", "--ring", "zmod:2", "--poset", &poset, "--map", &map,
    ]);
    assert_eq!(code(&out), 4);
    let out = run(&["--enum-guard", "10", "oracle", "enumerate", "--n", "2", "--ring", "zmod:2", "--poset", &poset]);
    assert_eq!(code(&out), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["verify", "lie", "--ring", "zmod:2"])), 2);
    assert_eq!(code(&run(&["lemma", "NOSUCH", "--trials", "1", "--seed", "0", "--ring", "zmod:5", "--random-size", "3"])), 2);
}

#[test]
fn input_errors_exit_three() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let bad_poset = ws.file("bad.poset", "a b\na < c\n");
    let map = ws.file("id.map", IDENTITY_MOD2);
    let missing = path_str(&ws.path("missing.map"));
    let wrong_ring = ws.file("z.map", "ring: int\na a : a a 1\n");
    for (p, m) in [(&bad_poset, &map), (&poset, &missing), (&poset, &wrong_ring)] {
        let out = run(&["verify", "lie", "--n", "2", "--ring", "zmod:2", "--poset", p, "--map", m]);
        assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn oracle_matches_solver() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let out = run(&["oracle", "enumerate", "--n", "3", "--ring", "zmod:2", "--poset", &poset]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = run(&["oracle", "enumerate", "--n", "2", "--ring", "zmod:2", "--poset", &poset, "--derivations"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn lemma_demo_is_a_hypothesis_violation() {
    let ws = Workspace::new();
    let poset = ws.file("c2.poset", CHAIN2);
    let out = run(&[
        "lemma", "DIAGCONST", "--trials", "1", "--seed", "0", "--ring", "zmod:2", "--poset", &poset, "--identity",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("DIAGCONST: hypothesis violation\n"));
}

#[test]
fn output_is_deterministic_across_jobs() {
    let args = ["lemma", "THEOREM", "--trials", "20", "--seed", "11", "--ring", "zmod:5", "--random-size", "3"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let again = run(&args);
    let mut with_jobs = vec!["--jobs", "3"];
    with_jobs.extend(args);
    let parallel = run(&with_jobs);
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, parallel.stdout);
}
