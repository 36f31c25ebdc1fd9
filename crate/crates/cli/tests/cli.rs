//! End-to-end tests of the binary: exit codes, report text, emitted files,
//! DOT exports, and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_finmet");

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("finmet-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let Output { status, stdout, stderr } = Command::new(BIN).args(args).output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

const MAX3: &str = r#"{"labels":["0","1","2"],"neutral":"0",
"table":[["0","1","2"],["1","1","2"],["2","2","2"]]}"#;

const SIERPINSKI: &str = r#"{"points":["a","b"],"opens":[[],["a"],["a","b"]]}"#;

fn clique_space() -> String {
    let labels: Vec<String> =
        (0..9).map(|i| format!("{}{}", ["a", "b", "c"][i / 3], i % 3 + 1)).collect();
    let d: Vec<Vec<String>> = (0..9)
        .map(|x| {
            (0..9)
                .map(|y| if x == y { "0" } else if x / 3 == y / 3 { "1" } else { "2" }.to_string())
                .collect()
        })
        .collect();
    format!(
        r#"{{"points":{},"mvs":{MAX3},"d":{}}}"#,
        serde_json::to_string(&labels).unwrap(),
        serde_json::to_string(&d).unwrap()
    )
}

#[test]
fn check_mvs_classifies_and_rejects() {
    let dir = workdir("check-mvs");
    let good = write(&dir, "max3.json", MAX3);
    let (code, out, _) = run(&["check-mvs", &good]);
    assert_eq!(code, 0);
    assert!(out.contains("commutative, atom-free, not strictly atom-free"));
    assert!(out.contains("verdict: PASS"));

    // 1 + 1 = 0 breaks (M3): clause failure, exit 1.
    let bad = write(
        &dir,
        "bad.json",
        r#"{"labels":["0","1"],"neutral":"0","table":[["0","1"],["1","0"]]}"#,
    );
    let (code, out, _) = run(&["check-mvs", &bad]);
    assert_eq!(code, 1);
    assert!(out.contains("M3"));
    assert!(out.contains("verdict: FAIL"));

    // Malformed JSON is a usage error, exit 2.
    let broken = write(&dir, "broken.json", "{nope");
    let (code, _, err) = run(&["check-mvs", &broken]);
    assert_eq!(code, 2);
    assert!(err.contains("error:"));
}

#[test]
fn alexandrov_emits_reingestible_space() {
    let dir = workdir("alexandrov");
    let topo = write(&dir, "sier.json", SIERPINSKI);
    let out_path = dir.join("space.json");
    let (code, out, _) =
        run(&["alexandrov", &topo, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] Thm 1.10: T_f = T"));
    // The emitted model re-ingests.
    let (code, out, _) = run(&["check-qmf", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("strict: yes"));
}

#[test]
fn roundtrip_clique_passes_every_clause() {
    let dir = workdir("roundtrip");
    let space = write(&dir, "clique.json", &clique_space());
    let (code, out, _) = run(&["roundtrip", &space]);
    assert_eq!(code, 0, "stdout:\n{out}");
    assert!(out.contains("[PASS] Thm 2.13: (Q4) (V,+) is atom-free"));
    assert!(out.contains("[PASS] Thm 2.14: T_f = T_U"));
    assert!(out.contains("verdict: PASS"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn dot_exports() {
    let dir = workdir("dot");
    // Sierpiński specialization preorder: single edge b -> a.
    let topo = write(&dir, "sier.json", SIERPINSKI);
    let space = dir.join("space.json");
    run(&["alexandrov", &topo, "--out", space.to_str().unwrap()]);
    let (code, out, _) = run(&["check-qmf", space.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"b\" -> \"a\";"));
    assert!(!out.contains("\"a\" -> \"b\";"));

    // Discrete 2-point open-set lattice: 4 nodes, diamond.
    let discrete = write(
        &dir,
        "disc.json",
        &format!(r#"{{"points":["a","b"],"mvs":{MAX3},"d":[["0","2"],["2","0"]]}}"#),
    );
    let (code, out, _) = run(&["topology", &discrete, "--format", "dot"]);
    assert_eq!(code, 0);
    for node in ["\"{}\"", "\"{a}\"", "\"{b}\"", "\"{a,b}\""] {
        assert!(out.contains(node), "missing {node} in {out}");
    }

    // Entourage value set of the clique space: 3-node chain.
    let clique = write(&dir, "clique.json", &clique_space());
    let (code, out, _) = run(&["entourage-mvs", &clique, "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"U0\" -> \"U_1\";"));
    assert!(out.contains("\"U_1\" -> \"U_2\";"));
    assert!(!out.contains("\"U0\" -> \"U_2\";"));
}

#[test]
fn glue_over_open_cover() {
    let dir = workdir("glue");
    // All opens of the topology generated by {1,2} and {2,3}.
    let topo = write(
        &dir,
        "t.json",
        r#"{"points":["1","2","3"],"opens":[[],["2"],["1","2"],["2","3"],["1","2","3"]]}"#,
    );
    let left = write(
        &dir,
        "left.json",
        &format!(r#"{{"points":["1","2"],"mvs":{MAX3},"d":[["0","1"],["2","0"]]}}"#),
    );
    let right = write(
        &dir,
        "right.json",
        &format!(r#"{{"points":["2","3"],"mvs":{MAX3},"d":[["0","2"],["1","0"]]}}"#),
    );
    let out_path = dir.join("glued.json");
    let (code, out, _) =
        run(&["glue", &topo, &left, &right, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "stdout:\n{out}");
    assert!(out.contains("[PASS] Thm 1.8: glued f over M-infinity induces T"));
    assert!(out.contains("strictness propagates"));
    // f(1,2) = 1 and f(2,1) = inf in the emitted model.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["d"][0][1], "1");
    assert_eq!(doc["d"][1][0], "inf");
    // The emitted model re-ingests.
    let (code, _, _) = run(&["check-qmf", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn base_commands() {
    let dir = workdir("base");
    let base = write(
        &dir,
        "base.json",
        r#"{"points":["a","b"],"implicit_diagonal":true,
"entourages":[{"name":"U0","pairs":[]},{"name":"U1","pairs":[["a","b"],["b","a"]]}]}"#,
    );
    let (code, out, _) = run(&["qu-base", &base]);
    assert_eq!(code, 0);
    for axiom in ["UB1", "UB2", "UB3"] {
        assert!(out.contains(&format!("({axiom}) holds")));
    }
    assert!(out.contains("generates a uniformity: yes"));

    let (code, out, _) = run(&["base-topology", &base]);
    assert_eq!(code, 0);
    assert!(out.contains("U(a) = {a}"));

    // Metrization takes the first entourage as U0.
    let (code, out, _) = run(&["metrize-from-base", &base]);
    assert_eq!(code, 0, "stdout:\n{out}");
    assert!(out.contains("[PASS] Thm 2.14: T_f = T_U"));

    let clique = write(&dir, "clique.json", &clique_space());
    let out_path = dir.join("derived.json");
    let (code, out, _) =
        run(&["base-from-qmf", &clique, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("base topology equals the quasimetric topology"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["entourages"].as_array().unwrap().len(), 2);
    assert_eq!(doc["entourages"][0]["name"], "U_1");
}

#[test]
fn space_transformations() {
    let dir = workdir("transform");
    let clique = write(&dir, "clique.json", &clique_space());
    let (code, _, _) = run(&["restrict", &clique, "--points", "a1,a2,b1"]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["restrict", &clique, "--points", "zz"]);
    assert_eq!(code, 2);
    assert!(err.contains("zz"));

    let (code, _, _) = run(&[
        "pullback", &clique, "--points", "x,y,z", "--map", "a1,a1,b1",
    ]);
    assert_eq!(code, 0);

    let sier = write(&dir, "sier.json", SIERPINSKI);
    let space = dir.join("space.json");
    run(&["alexandrov", &sier, "--out", space.to_str().unwrap()]);
    let (code, out, _) =
        run(&["product", space.to_str().unwrap(), space.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] Thm 1.9"));
}

#[test]
fn convexity_commands() {
    let dir = workdir("convex");
    // Two points at distance 2 over max3: full fails (1 missing), not convex.
    let two = write(
        &dir,
        "two.json",
        &format!(r#"{{"points":["a","b"],"mvs":{MAX3},"d":[["0","2"],["2","0"]]}}"#),
    );
    let (code, out, _) = run(&["full-convex", &two]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: FAIL"));

    let (code, out, _) = run(&["embed-full", &two]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] Lemma 2.10"));

    // One stage keeps old distances but does not reach convexity on this
    // space: a flagged partial result, still exit 0.
    let out_path = dir.join("stage1.json");
    let (code, out, _) = run(&[
        "convexify", &two, "--max-stages", "1", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stdout:\n{out}");
    assert!(out.contains("1 stage(s); distances between original points unchanged"));
    assert!(out.contains("partial: budget reached"));
    // The original points and their distance survive in the emitted model.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let points = doc["points"].as_array().unwrap();
    // Stage points are quadruples; the old points sit at (x,0,0,x).
    let a = points.iter().position(|p| p == "(a,0,0,a)").unwrap();
    let b = points.iter().position(|p| p == "(b,0,0,b)").unwrap();
    assert_eq!(doc["d"][a][b], "2");

    // An already-convex space needs zero stages.
    let point = write(
        &dir,
        "point.json",
        &format!(r#"{{"points":["a"],"mvs":{MAX3},"d":[["0"]]}}"#),
    );
    let (code, out, _) = run(&["convexify", &point]);
    assert_eq!(code, 0);
    assert!(out.contains("0 stage(s)"));
    assert!(out.contains("result is convex"));
}

#[test]
fn enumeration_commands() {
    let (code, out, _) = run(&["enumerate-mvs", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("1 table(s)"));

    let (code, out, _) = run(&["enumerate-topologies", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("both enumeration paths count 29"));

    let (code, _, _) = run(&["enumerate-topologies", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn json_report_mirrors_text() {
    let dir = workdir("json");
    let good = write(&dir, "max3.json", MAX3);
    let (code, out, _) = run(&["check-mvs", &good, "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "PASS");
    assert_eq!(doc["clauses"][0]["status"], "pass");
    assert_eq!(doc["clauses"][0]["anchor"], "Def 1.1");
}

#[test]
fn seeded_random_source_is_deterministic() {
    let (c1, o1, _) = run(&["topology", "random:n=5,k=3", "--seed", "42"]);
    let (c2, o2, _) = run(&["topology", "random:n=5,k=3", "--seed", "42"]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(o1, o2);

    let (code, _, err) = run(&["topology", "random:n=0,k=3"]);
    assert_eq!(code, 2);
    assert!(err.contains("random source"));
}
