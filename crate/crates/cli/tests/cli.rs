use std::process::{Command, Output};

use serde_json::Value;
use ttcover::corpus;
use ttcover::homology::HomologyData;
use ttcover::magnus::magnus_matrix;
use ttcover::report;
use ttcover::search::{tower_search, CoverCertificate, SearchConfig, TowerOutcome};
use ttcover::transition::transition_graph;

const QUICK: [&str; 5] = ["golden_mean", "identity", "twist", "unipotent_fixed", "unipotent_mixing"];

fn ttcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttcover")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ttcover(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap()
}

#[test]
fn reports_match_the_library() {
    let cfg = SearchConfig::default();
    for name in QUICK {
        let f = corpus::load(name).unwrap();
        let h = HomologyData::compute(&f).unwrap();
        let t = transition_graph(&f, &h);
        let (shadow, stability, _) = report::shadow_and_stability(&t).unwrap();
        assert_eq!(json(&["analyze", name, "--json"]), value(&report::analyze(&f, &cfg, false).unwrap()), "{name}");
        assert_eq!(
            json(&["magnus", name, "--json"]),
            value(&report::magnus_report(&t, &magnus_matrix(&t), 4).unwrap()),
            "{name}"
        );
        assert_eq!(json(&["shadow", name, "--json"]), value(&shadow), "{name}");
        assert_eq!(json(&["stability", name, "--json"]), value(&stability), "{name}");
        let search = json(&["search", name, "--json"]);
        match tower_search(&f, &cfg).unwrap() {
            TowerOutcome::Found(c) => {
                assert_eq!(search["outcome"], "found");
                assert_eq!(search["certificate"], value(&*c), "{name}");
            }
            TowerOutcome::NoneWithinBounds { covers_examined } => {
                assert_eq!(search["outcome"], "none_within_bounds");
                assert_eq!(search["covers_examined"], covers_examined, "{name}");
            }
            TowerOutcome::CapReached(m) => panic!("{name}: {m}"),
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(ttcover(&["analyze", "golden_mean"]).status.code(), Some(0));
    assert_eq!(ttcover(&["search", "identity"]).status.code(), Some(3));
    assert_eq!(ttcover(&["analyze", "/nonexistent/map.gm"]).status.code(), Some(1));
    assert_eq!(ttcover(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ttcover(&["search", "golden_mean", "--max-power", "0"]).status.code(), Some(1));
}

#[test]
fn certificates_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let path = path.to_str().unwrap();
    let out = ttcover(&["search", "unipotent_mixing", "--emit-certificate", path]);
    assert_eq!(out.status.code(), Some(0));
    let verified = json(&["verify", path, "--json"]);
    assert_eq!(verified["valid"], true);

    let mut cert = CoverCertificate::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    cert.power += 1;
    std::fs::write(path, cert.to_json()).unwrap();
    let out = ttcover(&["verify", path, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let rejected: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rejected["valid"], false);
}

#[test]
fn file_input_matches_corpus_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("twist.gm");
    std::fs::write(&path, corpus::entry("twist").unwrap().text).unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(json(&["analyze", path, "--json"]), json(&["analyze", "twist", "--json"]));

    std::fs::write(dir.path().join("bad.gm"), "vertices: v0\nmap a -> a\n").unwrap();
    let bad = dir.path().join("bad.gm");
    let out = ttcover(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn corpus_listing() {
    let list = json(&["corpus", "--json"]);
    let names: Vec<&str> = list.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let expected: Vec<&str> = corpus::CORPUS.iter().map(|e| e.name).collect();
    assert_eq!(names, expected);
    let shown = json(&["corpus", "--json", "--show", "golden_mean"]);
    assert_eq!(shown["text"], corpus::entry("golden_mean").unwrap().text);
}
