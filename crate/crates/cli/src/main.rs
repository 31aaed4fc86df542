//! Command line interface for mixed moments and infinitesimal
//! derivatives of free, Boolean and conditionally free products.
//!
//! Reports go to stdout as JSON (or CSV for `eval --format csv`) and
//! are byte-identical across runs for a fixed input, seed and flag
//! set; timing goes to stderr. Exit code 0 means success or all suites
//! passed, 1 means a verification suite found a counterexample, 2
//! means a usage or input error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use infmot::motzkin::LabelTuple;
use infmot::motzkin::{count_by_local_maxima, enumerate_words};
use infmot::{Error, Label};
use infmot_cli::error::CliError;
use infmot_cli::problem::parse_problem;
use infmot_cli::report::{evaluate_problem, render_csv, render_json, VerifyReport};
use infmot_cli::suites::{run_suite, SuiteOptions};
use infmot_cli::words::{parse_word, render_steps};

#[derive(Parser)]
#[command(
    name = "infmot",
    version,
    about = "Moments and infinitesimal derivatives of free, Boolean and \
             conditionally free products over Motzkin words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the reduced Motzkin words of a given length.
    Enumerate {
        /// Word length.
        #[arg(long)]
        n: usize,
        /// Render words as letter strings (the default).
        #[arg(long, conflicts_with = "steps")]
        letters: bool,
        /// Render words as U/H/D step strings.
        #[arg(long)]
        steps: bool,
    },
    /// Print the level return partition of a word.
    Partition {
        /// Word as digits (12321), comma-separated letters, or U/H/D steps.
        #[arg(long)]
        word: String,
    },
    /// Check a label tuple for adaptedness to a word.
    Adapted {
        /// Word as digits, comma-separated letters, or U/H/D steps.
        #[arg(long)]
        word: String,
        /// Comma-separated labels, one per letter.
        #[arg(long)]
        labels: String,
    },
    /// Classify the shape of a word.
    Classify {
        /// Word as digits, comma-separated letters, or U/H/D steps.
        #[arg(long)]
        word: String,
    },
    /// Count the words of a given length with a given number of weak
    /// local maxima.
    Count {
        /// Word length.
        #[arg(long)]
        n: usize,
        /// Number of weak local maxima.
        #[arg(long = "local-maxima")]
        local_maxima: usize,
    },
    /// Evaluate the queries of a JSON problem document.
    Eval {
        /// Path of the problem document.
        #[arg(long)]
        input: PathBuf,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite and report its cases and verdict.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        /// Largest tuple or word length the suite may use.
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        /// Number of random cases for the sampled suites.
        #[arg(long)]
        cases: Option<u64>,
        /// Seed for the case generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct EnumerateReport {
    n: usize,
    count: u64,
    words: Vec<String>,
}

#[derive(Serialize)]
struct BlockReport {
    level: u32,
    positions: Vec<usize>,
}

#[derive(Serialize)]
struct PartitionReport {
    word: String,
    blocks: Vec<BlockReport>,
    singletons: Vec<usize>,
    local_maxima: Vec<usize>,
}

#[derive(Serialize)]
struct AdaptedReport {
    word: String,
    labels: Vec<String>,
    adapted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

#[derive(Serialize)]
struct ClassifyReport {
    word: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    middle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<usize>,
    pyramid_compatible: bool,
}

#[derive(Serialize)]
struct CountReport {
    n: usize,
    local_maxima: usize,
    count: u64,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Enumerate {
            n,
            letters: _,
            steps,
        } => {
            let words = enumerate_words(n)?;
            let rendered: Vec<String> = words
                .iter()
                .map(|w| {
                    if steps {
                        render_steps(w)
                    } else {
                        w.to_string()
                    }
                })
                .collect();
            let report = EnumerateReport {
                n,
                count: rendered.len() as u64,
                words: rendered,
            };
            print!("{}", render_json(&report));
            Ok(0)
        }
        Command::Partition { word } => {
            let w = parse_word(&word)?;
            let partition = w.level_return_partition();
            let report = PartitionReport {
                word: w.to_string(),
                blocks: partition
                    .blocks()
                    .iter()
                    .map(|b| BlockReport {
                        level: b.level,
                        positions: b.positions.clone(),
                    })
                    .collect(),
                singletons: partition.singletons(),
                local_maxima: w.local_maxima(),
            };
            print!("{}", render_json(&report));
            Ok(0)
        }
        Command::Adapted { word, labels } => {
            let w = parse_word(&word)?;
            let names: Vec<String> = labels.split(',').map(|s| s.trim().to_owned()).collect();
            let report = adapted_report(&w, &names)?;
            print!("{}", render_json(&report));
            Ok(0)
        }
        Command::Classify { word } => {
            let w = parse_word(&word)?;
            let class = w.classify();
            let report = ClassifyReport {
                word: w.to_string(),
                kind: class.kind.to_string(),
                middle: class.middle,
                split: class.split,
                pyramid_compatible: class.pyramid_compatible(),
            };
            print!("{}", render_json(&report));
            Ok(0)
        }
        Command::Count { n, local_maxima } => {
            let report = CountReport {
                n,
                local_maxima,
                count: count_by_local_maxima(n, local_maxima)?,
            };
            print!("{}", render_json(&report));
            Ok(0)
        }
        Command::Eval { input, format } => {
            let start = Instant::now();
            let text = std::fs::read_to_string(&input)?;
            let problem = parse_problem(&text)?;
            let report = evaluate_problem(&problem)?;
            match format {
                Format::Json => print!("{}", render_json(&report)),
                Format::Csv => print!("{}", render_csv(&report)),
            }
            eprintln!("eval: {} ms", start.elapsed().as_millis());
            Ok(0)
        }
        Command::Verify {
            suite,
            n_max,
            cases,
            seed,
        } => {
            let start = Instant::now();
            let outcomes = run_suite(&suite, &SuiteOptions { n_max, cases, seed })?;
            let report = VerifyReport::new(seed, outcomes);
            print!("{}", render_json(&report));
            eprintln!("verify {suite}: {} ms", start.elapsed().as_millis());
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

/// A tuple that fails to alternate is reported as not adapted rather
/// than rejected as a usage error; a length mismatch is still a usage
/// error.
fn adapted_report(
    w: &infmot::motzkin::MotzkinWord,
    names: &[String],
) -> Result<AdaptedReport, CliError> {
    let rendered: Vec<String> = names.to_vec();
    if names.len() != w.len() {
        return Err(CliError::Core(Error::LengthMismatch {
            expected: w.len(),
            got: names.len(),
        }));
    }
    let tuple = match LabelTuple::new(names.iter().map(|s| Label::from(s.as_str())).collect()) {
        Ok(tuple) => tuple,
        Err(Error::AdjacentLabels { position }) => {
            return Ok(AdaptedReport {
                word: w.to_string(),
                labels: rendered,
                adapted: false,
                violation: Some(format!(
                    "labels at positions {position} and {} are equal",
                    position + 1
                )),
            });
        }
        Err(e) => return Err(CliError::Core(e)),
    };
    let report = w.is_adapted(&tuple)?;
    Ok(AdaptedReport {
        word: w.to_string(),
        labels: rendered,
        adapted: report.is_adapted(),
        violation: report.violation().map(|v| v.to_string()),
    })
}
