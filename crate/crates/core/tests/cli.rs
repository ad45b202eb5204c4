use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tmcat::*;

fn tmcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmcat")).args(args).output().unwrap()
}

fn tmcat_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tmcat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn assert_malformed(o: &Output) {
    assert_eq!(o.status.code(), Some(2), "{}", stdout(o));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn catalog_index_zero() {
    let o = tmcat(&["catalog", "--index", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 2);
    let names: Vec<&str> = recs.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["disk(3)", "disk(4)"]);
    let variants: Vec<u64> = recs.iter().map(|r| r["components"][0]["variants"].as_u64().unwrap()).collect();
    assert_eq!(variants, [4, 3]);
    assert!(recs.iter().all(|r| r["schema"] == "tmcat/1"));

    let text = stdout(&tmcat(&["catalog", "--index", "0"]));
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("disk(3)"));
}

#[test]
fn farey_text_and_json() {
    let o = tmcat(&["farey", "0/1", "2/5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
    let o = tmcat(&["farey", "-1/2", "1/0", "--format", "json"]);
    let rec = &json_lines(&o)[0];
    assert_eq!(rec["distance"], 2);
    assert_eq!(rec["schema"], "tmcat/1");
}

#[test]
fn verify_rejects_an_index_two_annulus_at_index_one() {
    let annulus = enumerate_connected(2, &CatalogOptions::default())
        .into_iter()
        .find(|c| c.genus == 0 && c.lengths() == vec![3, 8])
        .unwrap();
    let mut rec = CatalogRecord::from_candidate(&annulus, None);
    rec.index = 1;
    rec.components[0].piece_index = Some(1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("annulus.json");
    std::fs::write(&path, serde_json::to_string(&rec).unwrap()).unwrap();

    let o = tmcat(&["verify", "--index", "1", "--format", "json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = &json_lines(&o)[0]["report"];
    assert_eq!(report["pass"], false);
    let failed: Vec<&str> = report["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["clause"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"clause-4"), "{failed:?}");

    let text = stdout(&tmcat(&["verify", "--index", "1", path.to_str().unwrap()]));
    assert!(text.contains("overall: fail"));
}

#[test]
fn emitted_records_reverify() {
    for n in 0..=3 {
        for mode in [&["--labeled"][..], &["--configurations", "--disk-cap", "1"][..]] {
            let idx = n.to_string();
            let mut args = vec!["catalog", "--index", &idx, "--format", "json", "--flag-extras"];
            args.extend_from_slice(mode);
            let o = tmcat(&args);
            assert_eq!(o.status.code(), Some(0));
            let lines = stdout(&o);
            assert!(!lines.is_empty());
            for line in lines.lines().take(200) {
                let v = tmcat_stdin(&["verify", "--index", &idx, "--format", "json"], line);
                assert_eq!(v.status.code(), Some(0), "{line}");
                assert_eq!(json_lines(&v)[0]["report"]["pass"], true);
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["catalog", "--index", "2", "--format", "json", "--labeled"][..],
        &["catalog", "--index", "1", "--configurations"][..],
        &["loops", "--max-length", "16"][..],
    ] {
        assert_eq!(tmcat(args).stdout, tmcat(args).stdout);
    }
}

#[test]
fn malformed_inputs_exit_two() {
    assert_malformed(&tmcat(&["farey", "1/x", "2/5"]));
    assert_malformed(&tmcat(&["farey", "0/0", "2/5"]));
    assert_malformed(&tmcat(&["catalog", "--index", "99"]));
    assert_malformed(&tmcat(&["catalog"]));
    assert_malformed(&tmcat(&["complex", "index", "/nonexistent/complex.txt"]));
    assert_malformed(&tmcat_stdin(&["verify", "--index", "1"], "{not json"));
    assert_malformed(&tmcat(&[
        "barrier",
        "--omega-x",
        "1/0",
        "--omega-y",
        "0/1",
        "--map",
        "2,0;0,1",
        "--index",
        "1",
    ]));
    assert_malformed(&tmcat(&["no-such-command"]));
}

#[test]
fn barrier_exit_codes() {
    let holds = tmcat(&["barrier", "--omega-x", "1/0", "--omega-y", "0/1", "--index", "0"]);
    assert_eq!(holds.status.code(), Some(0));
    let fails =
        tmcat(&["barrier", "--omega-x", "1/0", "--omega-y", "0/1", "--index", "1", "--format", "json"]);
    assert_eq!(fails.status.code(), Some(1));
    assert_eq!(json_lines(&fails)[0]["verdict"]["holds"], false);
}

#[test]
fn complex_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.txt");
    std::fs::write(&path, "# a square\na b\nb c\nc d\nd a\n").unwrap();
    let o = tmcat(&["complex", "index", path.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "2\n".to_string()));
    let o = tmcat(&["complex", "homology", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(json_lines(&o)[0]["homology"]["ranks"], serde_json::json!([0, 0, 1]));
    let o = tmcat(&["complex", "index", path.to_str().unwrap(), "--cap", "3"]);
    assert_malformed(&o);
}

#[test]
fn surgery_replay() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"pieces":[{"genus":0,"boundary":[{"length":8},{"length":3}]}],
            "moves":[{"target":0,"move":"edge_compress","edge":"01","ends":{"type":"two_curves","curves":[0,1]}}]}"#,
    )
    .unwrap();
    let o = tmcat(&["surgery", "--replay", good.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let steps = &json_lines(&o)[0]["steps"];
    assert_eq!(steps[1]["boundary_length"], 9);
    assert_eq!(steps[1]["euler_characteristic"], 1);

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"pieces":[{"genus":0,"boundary":[{"length":8}]}],
            "moves":[{"target":0,"move":"compress","separating":false}]}"#,
    )
    .unwrap();
    assert_eq!(tmcat(&["surgery", "--replay", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn config_file_caps_are_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tmcat.toml");
    std::fs::write(&cfg, "max_index = 1\n").unwrap();
    assert_malformed(&tmcat(&["catalog", "--index", "2", "--config", cfg.to_str().unwrap()]));
    assert_eq!(tmcat(&["catalog", "--index", "1", "--config", cfg.to_str().unwrap()]).status.code(), Some(0));
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_malformed(&tmcat(&["catalog", "--index", "1", "--config", cfg.to_str().unwrap()]));
}

#[test]
fn loops_listing() {
    let o = tmcat(&["loops", "--max-length", "12", "--format", "json"]);
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 16);
    assert_eq!(recs[0]["loop"], serde_json::json!({"kind": "triangle", "vertex": 0}));
}
