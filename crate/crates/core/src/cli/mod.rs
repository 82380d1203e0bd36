//! `qcluster` command line: build, mutate, explore and verify.

pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::qseed::{
    explore, CanonicalScope, ExploreOptions, Naming, QuantumSeed, SeedError, SeedJson,
};
use crate::qtorus::SkewForm;
use crate::surface::{
    build_seed, DecoratedTriangulation, PiSource, SurfaceError, TriangulationJson,
};
use verify::{VerifyOptions, VerifySuite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Verify(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Compatibility(String),
    #[error("{0}")]
    Frozen(SeedError),
    #[error("{0}")]
    Laurent(SeedError),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Schema { .. } | CliError::Io { .. } | CliError::Input(_) => 2,
            CliError::Compatibility(_) => 3,
            CliError::Frozen(_) => 4,
            CliError::Laurent(_) => 5,
        }
    }
}

impl From<SeedError> for CliError {
    fn from(e: SeedError) -> Self {
        match e {
            SeedError::FrozenMutation { .. } => CliError::Frozen(e),
            SeedError::LaurentFailure { .. } => CliError::Laurent(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcluster",
    version,
    about = "Exact quantum cluster mutations on decorated polygons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogStyle {
    /// `e1 e1' = q^{-1/2}([e2 e3] + q [e4 e5 e7])`
    Q,
    /// `e1 e1' = v^{-1/2}[e2 e3] + v^{1/2}[e4 e5 e7]`
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Unfrozen,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the seed of a decorated triangulation.
    Build {
        #[arg(long)]
        surface: PathBuf,
        /// A JSON matrix file, or `auto` to derive it from the web catalog.
        #[arg(long, default_value = "auto")]
        pi: String,
        #[arg(long)]
        out: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Apply a mutation word and log the exchange relations used.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        /// One-based vertex indices separated by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        log: Option<PathBuf>,
        /// Also log the relation at this vertex of the final seed.
        #[arg(long)]
        predict: Option<usize>,
        #[arg(long, value_enum, default_value = "q")]
        style: LogStyle,
        /// Name variables by their mutation history (`e3'`) instead of position.
        #[arg(long)]
        labels: bool,
        /// Print the relations as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Explore the exchange graph up to permutation of vertices.
    Explore {
        #[arg(long)]
        seed: PathBuf,
        /// Omit to explore until no new seeds appear.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the graph as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "unfrozen")]
        scope: ScopeArg,
    },
    /// Run the built-in oracle suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: VerifySuite,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        /// Print the checks as JSON.
        #[arg(long)]
        json: bool,
    },
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match execute(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_file(path, &text)
}

fn emit(out: &mut dyn std::io::Write, line: impl std::fmt::Display) {
    let _ = writeln!(out, "{line}");
}

pub fn parse_word(word: &str, n: usize) -> Result<Vec<usize>, CliError> {
    word.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
            _ => Err(CliError::Input(format!(
                "bad vertex {t:?} in word (expected 1..={n})"
            ))),
        })
        .collect()
}

pub fn execute(cli: &Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Build {
            surface,
            pi,
            out: dest,
            json,
        } => {
            let js: TriangulationJson = read_json(surface)?;
            let dt = DecoratedTriangulation::from_json(&js).map_err(|e| CliError::Schema {
                path: surface.display().to_string(),
                message: e.to_string(),
            })?;
            let source = if pi == "auto" {
                PiSource::Auto
            } else {
                let rows: Vec<Vec<i64>> = read_json(Path::new(pi))?;
                let form = SkewForm::from_rows(rows).map_err(|e| CliError::Schema {
                    path: pi.clone(),
                    message: e.to_string(),
                })?;
                PiSource::Given(form)
            };
            let seed = match build_seed(&dt, &source) {
                Ok(s) => s,
                Err(SurfaceError::CompatibilityFailure(rep)) => {
                    if *json {
                        emit(out, serde_json::to_string(&rep).expect("serializable"));
                    } else {
                        emit(out, &rep);
                    }
                    return Err(CliError::Compatibility(
                        SurfaceError::CompatibilityFailure(rep).to_string(),
                    ));
                }
                Err(e) => return Err(CliError::Input(e.to_string())),
            };
            write_json(dest, &seed.to_json())?;
            let rep = seed.check_compatibility();
            if *json {
                emit(
                    out,
                    serde_json::json!({"n": seed.n(), "compatibility": rep, "out": dest}),
                );
            } else {
                emit(
                    out,
                    format_args!("built {}-vertex seed -> {}", seed.n(), dest.display()),
                );
                emit(out, &rep);
            }
            Ok(())
        }
        Command::Mutate {
            seed,
            word,
            out: dest,
            log,
            predict,
            style,
            labels,
            json,
        } => {
            let js: SeedJson = read_json(seed)?;
            let mut s = QuantumSeed::from_json(&js).map_err(|e| CliError::Schema {
                path: seed.display().to_string(),
                message: e.to_string(),
            })?;
            let word = parse_word(word, s.n())?;
            let render = |s: &QuantumSeed,
                          k: usize|
             -> Result<(String, serde_json::Value), CliError> {
                let rel = s.predict_exchange(k)?;
                let naming = if *labels {
                    Naming::Labels(s.names())
                } else {
                    Naming::Positional
                };
                let text = match style {
                    LogStyle::Q => rel.factored(naming),
                    LogStyle::V => rel.expanded(naming, "v"),
                };
                let value =
                    serde_json::json!({"vertex": k + 1, "relation": text, "terms": rel.terms()});
                Ok((text, value))
            };
            let mut lines = Vec::new();
            let mut records = Vec::new();
            for &k in &word {
                if s.is_unfrozen(k) {
                    let (text, value) = render(&s, k)?;
                    lines.push(text);
                    records.push(value);
                }
                s = s.mutate(k)?;
            }
            if let Some(k) = predict {
                let k = parse_word(&k.to_string(), s.n())?[0];
                let (text, value) = render(&s, k)?;
                lines.push(text);
                records.push(value);
            }
            if let Some(path) = log {
                let mut text = lines.join("\n");
                text.push('\n');
                write_file(path, &text)?;
            }
            if let Some(path) = dest {
                write_json(path, &s.to_json())?;
            }
            if *json {
                emit(out, serde_json::Value::Array(records));
            } else {
                for l in &lines {
                    emit(out, l);
                }
            }
            Ok(())
        }
        Command::Explore {
            seed,
            depth,
            budget,
            dot,
            json,
            scope,
        } => {
            if *budget == 0 {
                return Err(CliError::Input("budget must be positive".into()));
            }
            let js: SeedJson = read_json(seed)?;
            let s = QuantumSeed::from_json(&js).map_err(|e| CliError::Schema {
                path: seed.display().to_string(),
                message: e.to_string(),
            })?;
            let opts = ExploreOptions {
                depth: *depth,
                budget: *budget,
                scope: match scope {
                    ScopeArg::Unfrozen => CanonicalScope::Unfrozen,
                    ScopeArg::Full => CanonicalScope::Full,
                },
                ..Default::default()
            };
            let g = explore(&s, &opts)?;
            if g.truncated {
                eprintln!("warning: budget of {budget} seeds exhausted; graph truncated");
            }
            if let Some(path) = dot {
                write_file(path, &g.to_dot())?;
            }
            if let Some(path) = json {
                write_json(path, &g.to_json())?;
            }
            emit(
                out,
                format_args!(
                    "seeds {} edges {} single-cycle {} truncated {}",
                    g.vertex_count(),
                    g.edge_count(),
                    g.is_single_cycle(),
                    g.truncated
                ),
            );
            Ok(())
        }
        Command::Verify {
            suite,
            depth,
            nmax,
            json,
        } => {
            let checks = verify::run(
                *suite,
                VerifyOptions {
                    depth: *depth,
                    nmax: *nmax,
                },
            );
            let failed = checks.iter().filter(|c| !c.pass).count();
            if *json {
                emit(out, serde_json::to_string(&checks).expect("serializable"));
            } else {
                for c in &checks {
                    emit(out, c);
                }
                emit(
                    out,
                    format_args!("{} checks, {failed} failed", checks.len()),
                );
            }
            if failed > 0 {
                Err(CliError::Verify(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )))
            } else {
                Ok(())
            }
        }
    }
}
