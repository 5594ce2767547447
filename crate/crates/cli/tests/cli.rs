use std::path::{Path, PathBuf};
use std::process::Command;

use cognate::query::QueryOp;
use cognate::Universe;
use cognate_cli::select;
use cognate_cli::store::{self, Restrict};

fn programs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../programs")
}

fn cognate() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cognate"))
}

fn eval_mavg(dir: &Path) {
    let out = cognate()
        .arg("eval")
        .arg(programs().join("mavg.cog"))
        .arg(programs().join("emissions.csv"))
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("[20.15, 25.813333333333333, 40.18]"),
        "{text}"
    );
    assert!(text.contains("vertices"));
}

fn labels(listing: &str) -> Vec<String> {
    listing
        .lines()
        .map(|l| l.rsplit('\t').next().unwrap().to_string())
        .collect()
}

fn query(dir: &Path, args: &[&str]) -> (bool, String, String) {
    let out = cognate().arg("query").arg(dir).args(args).output().unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn eval_then_query() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    eval_mavg(&dir);
    for f in [
        "result.txt",
        "graph.edges",
        "inputs.map",
        "outputs.map",
        "meta",
    ] {
        assert!(dir.join(f).is_file(), "{f}");
    }

    let (ok, out, _) = query(&dir, &["demands", "out[1]", "--restrict", "inputs"]);
    assert!(ok);
    assert_eq!(labels(&out), ["18.17", "22.13", "37.14"]);
    assert!(out.contains("data[0].co2e"));

    let (ok, out, _) = query(
        &dir,
        &["linkedInputs", "data[2].co2e", "--restrict", "inputs"],
    );
    assert!(ok);
    assert_eq!(labels(&out), ["18.17", "22.13", "37.14", "61.27"]);

    let (ok, again, _) = query(
        &dir,
        &["linkedInputs", "data[2].co2e", "--restrict", "inputs"],
    );
    assert!(ok);
    assert_eq!(out, again);

    let (ok, _, err) = query(&dir, &["demandedBy", "out[1]"]);
    assert!(!ok);
    assert!(err.contains("universe"), "{err}");

    let (ok, _, err) = query(&dir, &["demands", "out[9]"]);
    assert!(!ok);
    assert!(err.contains("does not resolve"), "{err}");
}

#[test]
fn stored_session_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    eval_mavg(&dir);
    let s = store::load(&dir).unwrap();
    assert_eq!(s.result, "[20.15, 25.813333333333333, 40.18]");
    assert_eq!(s.meta["format"], "1");
    assert_eq!(s.meta["edges"], s.graph.edge_count().to_string());
    let sel = select::resolve(&s, &["out[0], out[2]".into()], Universe::Sinks).unwrap();
    let got = s.query(QueryOp::Demands, &sel, Restrict::Both).unwrap();
    let paths: Vec<_> = got
        .iter()
        .map(|a| s.path(a).unwrap().path.clone())
        .collect();
    assert_eq!(
        paths,
        [
            "data[0].co2e",
            "data[1].co2e",
            "data[2].co2e",
            "data[3].co2e"
        ]
    );
    assert_eq!(s.label(sel.iter().next().unwrap()), "20.15");
}

#[test]
fn missing_dataset_file_exits_2() {
    let out = cognate()
        .arg("eval")
        .arg(programs().join("mavg.cog"))
        .arg("no/such/file.csv")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.cog");
    std::fs::write(&bad, "let x = in x").unwrap();
    let out = cognate().arg("eval").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:9"));
}

#[test]
fn dump_core() {
    let out = cognate()
        .arg("eval")
        .arg(programs().join("mavg.cog"))
        .arg("--dump-core")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with('('));
    assert!(text.contains("letrec"));
}

#[test]
fn export_dot() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    eval_mavg(&dir);
    let out = cognate().arg("export-dot").arg(&dir).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("18.17"));
}
