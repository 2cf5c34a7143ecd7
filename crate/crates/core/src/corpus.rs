//! Bundled example maps.

use crate::error::{Error, Result};
use crate::graph::{parse_graph_map, GraphMap};

pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "example_s3.gm",
        description: "conjugation by b on the rose with two petals",
        text: include_str!("../corpus/example_s3.gm"),
    },
    CorpusEntry {
        name: "golden_mean.gm",
        description: "Fibonacci automorphism, growth (1 + sqrt 5)/2",
        text: include_str!("../corpus/golden_mean.gm"),
    },
    CorpusEntry {
        name: "identity.gm",
        description: "identity map of the rose with two petals",
        text: include_str!("../corpus/identity.gm"),
    },
    CorpusEntry {
        name: "twist.gm",
        description: "Dehn twist, linear growth",
        text: include_str!("../corpus/twist.gm"),
    },
    CorpusEntry {
        name: "unipotent_fixed.gm",
        description: "unipotent homology, growth 1 + sqrt 2, invariant petal",
        text: include_str!("../corpus/unipotent_fixed.gm"),
    },
    CorpusEntry {
        name: "unipotent_mixing.gm",
        description: "unipotent homology, no invariant petal",
        text: include_str!("../corpus/unipotent_mixing.gm"),
    },
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    let key = name.strip_suffix(".gm").unwrap_or(name);
    CORPUS
        .iter()
        .find(|e| e.name.strip_suffix(".gm") == Some(key))
}

pub fn load(name: &str) -> Result<GraphMap> {
    let e = entry(name).ok_or_else(|| Error::Invalid(format!("no corpus entry `{name}`")))?;
    parse_graph_map(e.text)
}

pub fn load_all() -> Vec<(&'static str, GraphMap)> {
    CORPUS
        .iter()
        .map(|e| (e.name, parse_graph_map(e.text).expect("bundled maps parse")))
        .collect()
}
