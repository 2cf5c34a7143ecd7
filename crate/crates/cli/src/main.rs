//! Command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use ttcover::graph::{parse_graph_map, GraphMap};
use ttcover::homology::HomologyData;
use ttcover::magnus::magnus_matrix;
use ttcover::report::{self, certificate_text};
use ttcover::search::{self, CoverCertificate, SearchConfig, TowerOutcome};
use ttcover::transition::transition_graph;
use ttcover::{corpus, Error};

#[derive(Parser)]
#[command(name = "ttcover", version, about = "Abelian covers and equivariant Magnus matrices of graph maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: homology, Magnus matrix, shadow, stability, criteria.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        /// Attach a certificate when a criterion fires.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Transition arcs, Magnus matrix, traces of powers, charpoly.
    Magnus {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 4)]
        max_power: usize,
    },
    /// Equivariant shadow polytope and dimension diagnostic.
    Shadow {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Vertex matrices, stability, common positive power.
    Stability {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a cover whose homology action leaves the unit circle.
    Search {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the certificate to this file.
        #[arg(long, value_name = "FILE")]
        emit_certificate: Option<PathBuf>,
        /// Use the exhaustive H_f/kH_f scan instead of the tower search.
        #[arg(long)]
        oracle: bool,
    },
    /// Re-check a certificate file.
    Verify {
        certificate: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the bundled examples, or print one.
    Corpus {
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

#[derive(Args)]
struct Bounds {
    #[arg(long)]
    max_power: Option<usize>,
    #[arg(long)]
    max_order: Option<u64>,
    #[arg(long)]
    max_lattice_index: Option<u64>,
    #[arg(long)]
    max_tower_depth: Option<usize>,
    #[arg(long)]
    max_degree: Option<usize>,
}

impl Bounds {
    fn config(&self) -> SearchConfig {
        let mut c = SearchConfig::default();
        if let Some(x) = self.max_power {
            c.max_power = x;
        }
        if let Some(x) = self.max_order {
            c.max_character_order = x;
        }
        if let Some(x) = self.max_lattice_index {
            c.max_lattice_index = x;
        }
        if let Some(x) = self.max_tower_depth {
            c.max_tower_depth = x;
        }
        if let Some(x) = self.max_degree {
            c.max_cover_degree = x;
        }
        c
    }
}

const EXIT_ERROR: u8 = 1;
const EXIT_NONE: u8 = 3;

/// Reads a `.gm` file, falling back to the bundled corpus by name.
fn load(path: &Path) -> Result<GraphMap, Error> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_graph_map(&text),
        Err(e) => {
            let name = path.to_string_lossy();
            if corpus::entry(&name).is_some() {
                corpus::load(&name)
            } else {
                Err(Error::Invalid(format!("cannot read {}: {e}", path.display())))
            }
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

#[derive(Serialize)]
struct SearchOutput {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CoverCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    covers_examined: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    valid: bool,
    message: String,
}

#[derive(Serialize)]
struct CorpusItem {
    name: &'static str,
    description: &'static str,
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze {
            input,
            json,
            certify,
            bounds,
        } => {
            let f = load(&input)?;
            let r = report::analyze(&f, &bounds.config(), certify)?;
            emit(json, &r, || r.to_text());
        }
        Command::Magnus { input, json, max_power } => {
            let f = load(&input)?;
            let h = HomologyData::compute(&f)?;
            let t = transition_graph(&f, &h);
            let r = report::magnus_report(&t, &magnus_matrix(&t), max_power)?;
            emit(json, &r, || r.to_text());
        }
        Command::Shadow { input, json } => {
            let f = load(&input)?;
            let h = HomologyData::compute(&f)?;
            let (r, _, _) = report::shadow_and_stability(&transition_graph(&f, &h))?;
            emit(json, &r, || r.to_text());
        }
        Command::Stability { input, json } => {
            let f = load(&input)?;
            let h = HomologyData::compute(&f)?;
            let (_, r, _) = report::shadow_and_stability(&transition_graph(&f, &h))?;
            emit(json, &r, || r.to_text());
        }
        Command::Search {
            input,
            json,
            bounds,
            emit_certificate,
            oracle,
        } => {
            let f = load(&input)?;
            let cfg = bounds.config();
            let out = if oracle {
                match search::brute_force_oracle(&f, cfg.max_cover_degree)? {
                    Some(c) => SearchOutput {
                        outcome: "found",
                        certificate: Some(c),
                        covers_examined: None,
                        message: None,
                    },
                    None => SearchOutput {
                        outcome: "none_within_bounds",
                        certificate: None,
                        covers_examined: None,
                        message: None,
                    },
                }
            } else {
                match search::tower_search(&f, &cfg)? {
                    TowerOutcome::Found(c) => SearchOutput {
                        outcome: "found",
                        certificate: Some(*c),
                        covers_examined: None,
                        message: None,
                    },
                    TowerOutcome::NoneWithinBounds { covers_examined } => SearchOutput {
                        outcome: "none_within_bounds",
                        certificate: None,
                        covers_examined: Some(covers_examined),
                        message: None,
                    },
                    TowerOutcome::CapReached(m) => SearchOutput {
                        outcome: "cap_reached",
                        certificate: None,
                        covers_examined: None,
                        message: Some(m),
                    },
                }
            };
            if let (Some(path), Some(c)) = (&emit_certificate, &out.certificate) {
                std::fs::write(path, c.to_json() + "\n")
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(json, &out, || match &out.certificate {
                Some(c) => certificate_text(c),
                None => match &out.message {
                    Some(m) => format!("resource cap reached: {m}\n"),
                    None => "no certificate within bounds\n".to_string(),
                },
            });
            return Ok(match out.outcome {
                "found" => 0,
                "none_within_bounds" => EXIT_NONE,
                _ => EXIT_ERROR,
            });
        }
        Command::Verify { certificate, json } => {
            let text = std::fs::read_to_string(&certificate)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", certificate.display())))?;
            let result = CoverCertificate::from_json(&text).and_then(|c| search::verify(&c).map(|_| c));
            let out = match &result {
                Ok(c) => VerifyOutput {
                    valid: true,
                    message: format!("certificate verified: degree {}, method {}", c.degree, c.method),
                },
                Err(e) => VerifyOutput {
                    valid: false,
                    message: e.to_string(),
                },
            };
            emit(json, &out, || format!("{}\n", out.message));
            return Ok(if out.valid { 0 } else { EXIT_ERROR });
        }
        Command::Corpus { json, show } => match show {
            Some(name) => {
                let e = corpus::entry(&name).ok_or_else(|| Error::Invalid(format!("no corpus entry `{name}`")))?;
                if json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({"name": e.name, "text": e.text}))
                            .expect("strings serialize")
                    );
                } else {
                    print!("{}", e.text);
                }
            }
            None => {
                let items: Vec<CorpusItem> = corpus::CORPUS
                    .iter()
                    .map(|e| CorpusItem {
                        name: e.name,
                        description: e.description,
                    })
                    .collect();
                emit(json, &items, || {
                    items
                        .iter()
                        .map(|i| format!("{:<22}{}\n", i.name, i.description))
                        .collect()
                });
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
