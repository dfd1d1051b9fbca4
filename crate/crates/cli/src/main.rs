//! `nimtree` command-line interface.
//!
//! Exit codes: 0 on success, 1 when a computation or verification fails (a
//! JSON error object is written to stderr), 2 on usage errors.

mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use nimtree::classify::{
    classify_k_nim_with, count_k_nim_oracle, three_nim_count, two_nim_closed_form, ClassifyError, DeltaRule,
    MAX_ORACLE_VERTICES,
};
use nimtree::nim_ogf::{
    assemble_nim_ogf, check_recurrence, growth_constant, OgfError, PipelineResult, SERIES_NAMES,
};
use nimtree::spectral::{witness_matrix, SpectralError};
use nimtree::{multiplicity_profile, parse_edge_list, skeleton_signature, Tree, TreeError, TriSeries};

/// Largest pipeline truncation accepted from the command line.
const MAX_TRUNC: usize = 1000;

#[derive(Parser)]
#[command(name = "nimtree", version, about = "Counting and classifying NIM trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of k-NIM trees on 1..=n vertices.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Ogf)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Pipeline truncation (k = 1); defaults to max(n, 4).
        #[arg(long)]
        trunc: Option<usize>,
        /// Directory receiving every intermediate series of the pipeline.
        #[arg(long)]
        dump_intermediate: Option<PathBuf>,
    },
    /// k-NIM verdict for a tree given as an edge list.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Rule::KPlusTwo)]
        rule: Rule,
    },
    /// Path cover number, Δ, maximum multiplicity and RPM set.
    Profile {
        #[arg(long)]
        input: PathBuf,
    },
    /// Skeleton signature of a NIM tree.
    Skeleton {
        #[arg(long)]
        input: PathBuf,
    },
    /// Dominant singularity and growth constant of N(z).
    Asymptotics,
    /// Checks the linear recurrence for N(n) up to --max.
    Recurrence {
        #[arg(long)]
        max: usize,
    },
    /// Matrix with the tree's graph attaining multiplicity M(T).
    Spectral {
        #[arg(long)]
        input: PathBuf,
    },
    /// Dumps an intermediate series of the pipeline.
    Series {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SERIES_NAMES))]
        dump: String,
        #[arg(long)]
        trunc: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Ogf,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    /// Only the count for the largest n.
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    #[value(name = "k+2")]
    KPlusTwo,
    #[value(name = "k+1")]
    KPlusOne,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Ogf(#[from] OgfError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("oracle and generating function disagree at n = {n}: {oracle} vs {ogf}")]
    Mismatch { n: usize, oracle: BigInt, ogf: BigInt },
    #[error("recurrence fails at n = {0}")]
    RecurrenceFailure(usize),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Tree(_) => "tree",
            CliError::Classify(_) => "classify",
            CliError::Ogf(_) => "series",
            CliError::Spectral(_) => "spectral",
            CliError::Json(_) => "serialization",
            CliError::Mismatch { .. } => "mismatch",
            CliError::RecurrenceFailure(_) => "recurrence",
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn read_tree(path: &Path) -> Result<Tree, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_edge_list(&text)?)
}

fn configure_threads() {
    let Ok(raw) = std::env::var("NIMTREE_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(t) if t > 0 => {
            // Fails only if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
        _ => usage_error(format!("NIMTREE_THREADS must be a positive integer, got {raw:?}")),
    }
}

/// A pipeline series cut back to `trunc`, dropping the guard degrees.
fn named_series(r: &PipelineResult, name: &str, trunc: usize) -> Result<TriSeries, CliError> {
    let series = r.series(name).expect("name is one of SERIES_NAMES");
    if series.trunc() > trunc {
        Ok(series.truncate(trunc).map_err(OgfError::from)?)
    } else {
        Ok(series)
    }
}

fn ogf_counts(k: usize, n: usize, trunc: usize, dump: Option<&Path>) -> Result<Vec<BigInt>, CliError> {
    let mut counts = vec![BigInt::from(0); n + 1];
    match k {
        1 => {
            let r = assemble_nim_ogf(trunc)?;
            if let Some(dir) = dump {
                let io = |source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                };
                fs::create_dir_all(dir).map_err(io)?;
                for name in SERIES_NAMES {
                    let series = named_series(&r, name, trunc)?;
                    let path = dir.join(format!("{name}.json"));
                    fs::write(&path, output::to_json(&series.dump())?).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                }
            }
            counts.clone_from_slice(&r.n_total[..=n]);
        }
        2 => (1..=n).for_each(|i| counts[i] = two_nim_closed_form(i as u64).into()),
        3 => (1..=n).for_each(|i| counts[i] = three_nim_count(i as u64).into()),
        _ => {}
    }
    Ok(counts)
}

fn oracle_counts(k: usize, n: usize) -> Result<Vec<BigInt>, CliError> {
    let mut counts = vec![BigInt::from(0)];
    for i in 1..=n {
        counts.push(count_k_nim_oracle(i, k)?.into());
    }
    Ok(counts)
}

fn count(
    k: usize,
    n: usize,
    method: Method,
    format: Format,
    trunc: Option<usize>,
    dump: Option<&Path>,
) -> Result<String, CliError> {
    if method != Method::Ogf && n > MAX_ORACLE_VERTICES {
        usage_error(format!("the oracle is limited to n <= {MAX_ORACLE_VERTICES}"));
    }
    let trunc = trunc.unwrap_or(n.max(4));
    if trunc < n.max(4) || trunc > MAX_TRUNC {
        usage_error(format!("--trunc must lie in {}..={MAX_TRUNC}", n.max(4)));
    }
    if dump.is_some() && (k != 1 || method == Method::Oracle) {
        usage_error("--dump-intermediate needs --k 1 and a generating-function method");
    }
    let counts = match method {
        Method::Ogf => ogf_counts(k, n, trunc, dump)?,
        Method::Oracle => oracle_counts(k, n)?,
        Method::Both => {
            let ogf = ogf_counts(k, n, trunc, dump)?;
            let oracle = oracle_counts(k, n)?;
            if let Some(i) = (1..=n).find(|&i| ogf[i] != oracle[i]) {
                return Err(CliError::Mismatch {
                    n: i,
                    oracle: oracle[i].clone(),
                    ogf: ogf[i].clone(),
                });
            }
            ogf
        }
    };
    let rows: Vec<(usize, BigInt)> = counts.into_iter().enumerate().skip(1).collect();
    Ok(match format {
        Format::Csv => output::counts_csv(&rows),
        Format::Json => {
            let name = match method {
                Method::Ogf => "ogf",
                Method::Oracle => "oracle",
                Method::Both => "both",
            };
            output::counts_json(k, name, &rows)?
        }
        Format::Plain => format!("{}\n", rows[n - 1].1),
    })
}

#[derive(Serialize)]
struct SkeletonReport {
    signature: nimtree::SkeletonSignature,
    marks: nimtree::skeleton::SkeletonMarks,
    skeleton: nimtree::SkeletonSignature,
}

#[derive(Serialize)]
struct Asymptotics {
    rho: f64,
    growth_constant: f64,
}

#[derive(Serialize)]
struct RecurrenceOutput {
    truncation: usize,
    #[serde(flatten)]
    report: nimtree::nim_ogf::RecurrenceReport,
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Count {
            k,
            n,
            method,
            format,
            trunc,
            dump_intermediate,
        } => count(
            k as usize,
            n as usize,
            method,
            format,
            trunc,
            dump_intermediate.as_deref(),
        ),
        Command::Classify { k, input, rule } => {
            let rule = match rule {
                Rule::KPlusTwo => DeltaRule::KPlusTwo,
                Rule::KPlusOne => DeltaRule::KPlusOne,
            };
            let verdict = classify_k_nim_with(&read_tree(&input)?, k as usize, rule)?;
            Ok(output::to_json(&verdict)?)
        }
        Command::Profile { input } => Ok(output::to_json(&multiplicity_profile(&read_tree(&input)?))?),
        Command::Skeleton { input } => {
            let signature = skeleton_signature(&read_tree(&input)?)?;
            Ok(output::to_json(&SkeletonReport {
                marks: signature.marks(),
                skeleton: signature.skeleton(),
                signature,
            })?)
        }
        Command::Asymptotics => {
            let (rho, growth_constant) = growth_constant()?;
            Ok(output::to_json(&Asymptotics { rho, growth_constant })?)
        }
        Command::Recurrence { max } => {
            if !(16..=MAX_TRUNC).contains(&max) {
                usage_error(format!("--max must lie in 16..={MAX_TRUNC}"));
            }
            let r = assemble_nim_ogf(max)?;
            let report = check_recurrence(&r.n_total, max)?;
            if let Some(n) = report.first_failure {
                return Err(CliError::RecurrenceFailure(n));
            }
            Ok(output::to_json(&RecurrenceOutput {
                truncation: r.trunc,
                report,
            })?)
        }
        Command::Spectral { input } => Ok(output::to_json(&witness_matrix(&read_tree(&input)?)?)?),
        Command::Series { dump, trunc } => {
            if !(4..=MAX_TRUNC).contains(&trunc) {
                usage_error(format!("--trunc must lie in 4..={MAX_TRUNC}"));
            }
            let r = assemble_nim_ogf(trunc)?;
            let series = named_series(&r, &dump, trunc)?;
            Ok(output::to_json(&series.dump())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli.command) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = ErrorReport {
                error: ErrorBody {
                    kind: e.kind(),
                    message: e.to_string(),
                },
            };
            let text = output::to_json(&report)
                .unwrap_or_else(|_| format!("{{\"error\":{{\"kind\":\"{}\"}}}}\n", e.kind()));
            eprint!("{text}");
            ExitCode::from(1)
        }
    }
}
