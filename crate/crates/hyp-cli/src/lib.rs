//! The `hyp` command line: one verb per experiment family, each producing a
//! [`ResultEnvelope`], data files and a [`RunManifest`] in the output
//! directory.
//!
//! Exit codes: 0 when every tolerance holds, 1 when one is violated, 2 on a
//! usage error, 3 on numerical non-convergence. Failures also print a JSON
//! object on standard error.

pub mod cli;
pub mod envelope;
pub mod manifest;
pub mod settings;
pub mod verbs;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::parser::ValueSource;
use clap::{CommandFactory, FromArgMatches};
use serde_json::json;
use thiserror::Error;

pub use cli::Cli;
pub use envelope::{Check, Relation, ResultEnvelope};
pub use manifest::{OutputDigest, RunManifest};
pub use settings::Profile;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::NonConvergence(_) => "non-convergence",
            CliError::Io(_) => "io",
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            _ => EXIT_USAGE,
        }
    }
}

impl From<comparison::ComparisonError> for CliError {
    fn from(e: comparison::ComparisonError) -> Self {
        match e {
            comparison::ComparisonError::NonConvergence(m) => CliError::NonConvergence(m),
            comparison::ComparisonError::Io(e) => CliError::Io(e),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<extremizer_lab::ExtremizerError> for CliError {
    fn from(e: extremizer_lab::ExtremizerError) -> Self {
        match e {
            extremizer_lab::ExtremizerError::NonFinite { .. } => CliError::NonConvergence(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<closed_forms::ClosedFormError> for CliError {
    fn from(e: closed_forms::ClosedFormError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<lorentz_geometry::LorentzError> for CliError {
    fn from(e: lorentz_geometry::LorentzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<radial_core::CoreError> for CliError {
    fn from(e: radial_core::CoreError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// What a verb hands back for writing.
#[derive(Debug)]
pub struct Report {
    pub envelope: ResultEnvelope,
    /// Data files, written in order before the result.
    pub files: Vec<(String, Vec<u8>)>,
    /// Quadratures that missed their tolerance; any entry makes the run exit 3.
    pub nonconverged: Vec<String>,
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(envelope: ResultEnvelope) -> Self {
        Self { envelope, files: Vec::new(), nonconverged: Vec::new(), seed: None }
    }

    pub fn file(mut self, name: &str, data: Vec<u8>) -> Self {
        self.files.push((name.into(), data));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn nonconverged(mut self, what: Vec<String>) -> Self {
        self.nonconverged = what;
        self
    }

    /// Non-convergence outranks a violated tolerance.
    pub fn exit_code(&self) -> i32 {
        if !self.nonconverged.is_empty() {
            EXIT_NONCONVERGENCE
        } else if !self.envelope.pass {
            EXIT_TOLERANCE
        } else {
            EXIT_PASS
        }
    }
}

/// Applies config-file keys the command line did not set, then parses again.
fn parse_with_config(argv: &[OsString]) -> Result<Cli, clap::Error> {
    let mut cmd = Cli::command();
    let matches = cmd.try_get_matches_from_mut(argv.iter().cloned())?;
    let Some(path) = matches.get_one::<std::path::PathBuf>("config") else {
        return Cli::from_arg_matches(&matches);
    };
    let config = settings::read_config(path).map_err(|e| cmd.error(clap::error::ErrorKind::Io, e.to_string()))?;

    // leaf subcommand and its matches
    cmd.build();
    let mut leaf = &cmd;
    let mut leaf_matches = &matches;
    while let Some((name, m)) = leaf_matches.subcommand() {
        leaf = leaf.find_subcommand(name).expect("parsed subcommand exists");
        leaf_matches = m;
    }
    let mut known = std::collections::BTreeSet::new();
    collect_longs(&cmd, &mut known);

    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &config {
        if key == "config" {
            continue;
        }
        if !known.contains(key.as_str()) {
            return Err(cmd.error(clap::error::ErrorKind::UnknownArgument, format!("unknown config key '{key}'")));
        }
        let Some(arg) = leaf.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        let id = arg.get_id().as_str();
        if leaf_matches.value_source(id) == Some(ValueSource::CommandLine) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        } else {
            match value.as_str() {
                "true" => extra.push(format!("--{key}").into()),
                "false" => {}
                v => {
                    return Err(cmd.error(
                        clap::error::ErrorKind::InvalidValue,
                        format!("config key '{key}' is a switch; expected true or false, got '{v}'"),
                    ))
                }
            }
        }
    }
    let mut full = argv.to_vec();
    full.extend(extra);
    let matches = Cli::command().try_get_matches_from(full)?;
    Cli::from_arg_matches(&matches)
}

fn collect_longs<'a>(cmd: &'a clap::Command, out: &mut std::collections::BTreeSet<&'a str>) {
    out.extend(cmd.get_arguments().filter_map(|a| a.get_long()));
    for sub in cmd.get_subcommands() {
        collect_longs(sub, out);
    }
}

fn fail(kind: &str, message: &str, extra: serde_json::Value) {
    let mut v = json!({ "error": kind, "message": message });
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    eprintln!("{v}");
}

/// Runs one command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse_with_config(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = std::io::stdout().write_all(text.as_bytes());
                return EXIT_PASS;
            }
            eprint!("{text}");
            let first = text.lines().next().unwrap_or_default();
            fail("usage", first.strip_prefix("error: ").unwrap_or(first), json!({}));
            return EXIT_USAGE;
        }
    };
    let threads = match settings::thread_cap() {
        Ok(t) => t,
        Err(e) => {
            fail(e.kind(), &e.to_string(), json!({}));
            return e.code();
        }
    };
    let start = Instant::now();
    let outcome = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| verbs::dispatch(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot build thread pool: {e}"))),
        },
        None => verbs::dispatch(&cli),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            fail(e.kind(), &e.to_string(), json!({ "verb": verbs::verb_name(&cli.command) }));
            return e.code();
        }
    };
    let argv_text: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let used = threads.unwrap_or_else(rayon::current_num_threads);
    if let Err(e) = write_outputs(&cli, &report, argv_text, used, start) {
        fail(e.kind(), &e.to_string(), json!({}));
        return e.code();
    }
    let env = &report.envelope;
    let code = report.exit_code();
    match code {
        EXIT_NONCONVERGENCE => {
            fail("non-convergence", "quadrature missed its tolerance", json!({ "verb": env.verb, "cells": report.nonconverged }))
        }
        EXIT_TOLERANCE => fail("tolerance", "a stated tolerance is violated", json!({ "verb": env.verb, "failed": env.failed() })),
        _ => {}
    }
    code
}

fn write_outputs(cli: &Cli, report: &Report, argv: Vec<String>, threads: usize, start: Instant) -> Result<(), CliError> {
    let dir: &Path = &cli.out;
    std::fs::create_dir_all(dir)?;
    let verb = &report.envelope.verb;
    let mut outputs = Vec::new();
    for (name, data) in &report.files {
        std::fs::write(dir.join(name), data)?;
        outputs.push(OutputDigest::of(name, data));
    }
    let result_name = format!("{verb}.json");
    let mut result = serde_json::to_vec_pretty(&report.envelope).expect("envelope serializes");
    result.push(b'\n');
    std::fs::write(dir.join(&result_name), &result)?;
    outputs.push(OutputDigest::of(&result_name, &result));
    let manifest = RunManifest {
        command_line: argv,
        config: serde_json::to_value(cli).expect("arguments serialize"),
        seed: report.seed,
        versions: manifest::versions(),
        threads,
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs,
    };
    let mut m = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    m.push(b'\n');
    std::fs::write(dir.join(format!("{verb}.manifest.json")), m)?;
    let _ = std::io::stdout().write_all(&result);
    Ok(())
}
