use std::path::Path;
use std::process::{Command, Output};

fn muchnik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_muchnik"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ipc_refutes_excluded_middle() {
    let o = muchnik(&["ipc", "p | ~p", "--max-height", "3"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["height"], 2);
    assert_eq!(
        v["countermodel"]["valuation"]["p"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn ipc_bound_is_reported_for_theorems() {
    let o = muchnik(&["ipc", "p -> q -> p", "--max-height", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["verdict"], "valid-up-to-bound");
}

#[test]
fn check_modes() {
    assert_eq!(
        code(&muchnik(&[
            "check",
            "p -> p",
            "--algebra",
            "upsets:diamond"
        ])),
        0
    );
    assert_eq!(code(&muchnik(&["check", "p | ~p", "--frame", "fork"])), 1);
    assert_eq!(
        code(&muchnik(&[
            "check", "~p | ~~p", "--frame", "chain:3", "--mode", "algebra"
        ])),
        0
    );
    assert_eq!(
        code(&muchnik(&[
            "check",
            "p",
            "--algebra",
            "upsets:fork",
            "--mode",
            "frame"
        ])),
        2
    );
}

#[test]
fn split_build_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let pm = dir.path().join("pm.json");
    let trace = dir.path().join("trace.jsonl");
    let o = muchnik(&[
        "split",
        "build",
        "--height",
        "2",
        "--steps",
        "8",
        "--seed",
        "7",
        "--trace",
        path_str(&trace),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&pm, &o.stdout).unwrap();
    assert_eq!(code(&muchnik(&["pmorphism", "verify", path_str(&pm)])), 0);
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), 17);
    for l in lines.lines() {
        serde_json::from_str::<serde_json::Value>(l).unwrap();
    }
}

#[test]
fn split_build_is_deterministic() {
    let args = ["split", "build", "--height", "3", "--seed", "11"];
    assert_eq!(muchnik(&args).stdout, muchnik(&args).stdout);
}

#[test]
fn too_few_steps_fail_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.json");
    let o = muchnik(&[
        "split",
        "build",
        "--height",
        "4",
        "--steps",
        "1",
        "--window",
        "1",
        "--partial-out",
        path_str(&partial),
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("000"));
    let p: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(partial).unwrap()).unwrap();
    assert_eq!(p["pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn corrupted_pmorphism_is_rejected() {
    let o = muchnik(&[
        "pmorphism",
        "search",
        "--source",
        "fork",
        "--target",
        "chain:2",
    ]);
    assert_eq!(code(&o), 0);
    let mut v = stdout_json(&o);
    v["map"][2][1] = "a".into();
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, v.to_string()).unwrap();
    let o = muchnik(&["--json", "pmorphism", "verify", path_str(&f)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["violations"][0]["kind"], "back");
    assert_eq!(
        code(&muchnik(&[
            "pmorphism",
            "search",
            "--source",
            "chain:3",
            "--target",
            "fork"
        ])),
        1
    );
}

#[test]
fn algebra_commands() {
    assert_eq!(code(&muchnik(&["algebra", "verify", "upsets:tree:3"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("alg.json");
    let dump = muchnik(&["algebra", "dump", "upsets:fork"]);
    std::fs::write(&f, &dump.stdout).unwrap();
    let o = muchnik(&["--json", "algebra", "quotient", path_str(&f), "--by", "{0}"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["isomorphic_to_interval"], true);
    let mut alg = stdout_json(&dump);
    alg["imp"][0][1] = 0.into();
    alg["imp"][1][0] = 1.into();
    std::fs::write(&f, alg.to_string()).unwrap();
    assert_eq!(code(&muchnik(&["algebra", "verify", path_str(&f)])), 1);
}

#[test]
fn frame_commands() {
    let o = muchnik(&["--json", "upsets", "fork"]);
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), 5);
    assert_eq!(code(&muchnik(&["muchnik", "iso-check", "diamond"])), 0);
    assert_eq!(code(&muchnik(&["theory", "tree:2"])), 0);
    assert_eq!(code(&muchnik(&["split", "verify", "--depth", "8"])), 0);
}

#[test]
fn dot_exports() {
    let o = muchnik(&["export-dot", "frame", "fork"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("digraph frame"));
    assert_eq!(text.matches(" -> ").count(), 2);

    let dir = tempfile::tempdir().unwrap();
    let ipc = dir.path().join("ipc.json");
    std::fs::write(&ipc, muchnik(&["ipc", "p | ~p"]).stdout).unwrap();
    let out = dir.path().join("cm.dot");
    assert_eq!(
        code(&muchnik(&[
            "export-dot",
            "countermodel",
            path_str(&ipc),
            "-o",
            path_str(&out)
        ])),
        0
    );
    assert!(std::fs::read_to_string(out).unwrap().contains("{p}"));
    assert_eq!(
        code(&muchnik(&[
            "export-dot",
            "frame",
            "fork",
            "-o",
            "/nonexistent/dir/x.dot"
        ])),
        2
    );
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(code(&muchnik(&["ipc", "p ->"])), 2);
    assert_eq!(code(&muchnik(&["upsets", "/no/such/file.json"])), 2);
    assert_eq!(code(&muchnik(&["split", "build", "--height", "0"])), 2);
    assert_eq!(code(&muchnik(&["frobnicate"])), 2);
    let o = muchnik(&["ipc", "p ->"]);
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}
