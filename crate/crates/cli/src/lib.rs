//! Command-line front end: argument parsing, output formatting and the
//! three-way `verify` harness.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use avoidance::avoided::{avoided_set_theoretical, cross_check, EntryKind, Mismatch};
use avoidance::corpus::{corpus_generate, DEFAULT_SEED};
use avoidance::genfib::{genfib_report, GenFibSpec, Verdict};
use avoidance::graph::{analyze, build_sum_graph, find_quadruple_certificates};
use avoidance::partition::build_partition;
use avoidance::{Alpha, CfSpec, Exec, DEFAULT_DEPTH_CAP};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "avoidance",
    version,
    about = "Sum-avoiding partitions from continued fractions"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Quotients the exact sign engine may consume.
    #[arg(long, env = "AVOIDANCE_DEPTH_CAP", default_value_t = DEFAULT_DEPTH_CAP, global = true)]
    pub depth_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Convergents p_n/q_n for n = 0..=N.
    Convergents {
        #[arg(long)]
        cf: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Labels of 1..=N.
    Partition {
        #[arg(long)]
        cf: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Avoided sums up to LIMIT with their structural kind.
    AvoidedSet {
        #[arg(long)]
        cf: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Avoidability and uniqueness of a set on 1..=N.
    CheckUnique(CheckUnique),
    /// Classification of a generalized Fibonacci sequence.
    GenFib {
        #[arg(long)]
        s1: u64,
        #[arg(long)]
        s2: u64,
        #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Three-way comparison of the avoided-set computations.
    Verify {
        /// Spec to check; a seeded corpus is used when absent.
        #[arg(long)]
        cf: Option<String>,
        #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CheckUnique {
    /// Uses the avoided set of this spec.
    #[arg(long, conflicts_with = "s_file", required_unless_present = "s_file")]
    pub cf: Option<String>,
    /// Explicit set, one strictly increasing integer per line.
    #[arg(long)]
    pub s_file: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Io(io::Error),
}

impl From<avoidance::Error> for Failure {
    fn from(e: avoidance::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Executes one subcommand, writing records to `out` and diagnostics to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Convergents { cf, n } => convergents(config, cf, *n, out),
        Command::Partition { cf, n } => partition(config, cf, *n, out),
        Command::AvoidedSet { cf, limit } => avoided_set(config, cf, *limit, out),
        Command::CheckUnique(args) => check_unique(config, args, out),
        Command::GenFib { s1, s2, limit } => gen_fib(config, *s1, *s2, *limit, out),
        Command::Verify {
            cf,
            limit,
            seed,
            count,
        } => verify(config, cf.as_deref(), *limit, *seed, *count, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(message)) => {
            let _ = writeln!(err, "{}", json!({ "error": message }));
            EXIT_INPUT
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            EXIT_INPUT
        }
    }
}

fn alpha(config: &RunConfig, text: &str) -> Result<Alpha, Failure> {
    let cf: CfSpec = text.parse()?;
    Ok(Alpha::with_depth_cap(cf, config.depth_cap))
}

fn emit(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    writeln!(out, "{value}")
}

fn convergents(config: &RunConfig, cf: &str, n: usize, out: &mut dyn Write) -> Outcome {
    let alpha = alpha(config, cf)?;
    for i in 0..=n {
        let c = alpha.convergent(i as i64)?;
        match config.format {
            Format::Json => emit(out, &serde_json::to_value(&c).unwrap())?,
            Format::Tsv => writeln!(out, "{}\t{}\t{}", c.n, c.p, c.q)?,
        }
    }
    Ok(EXIT_OK)
}

fn partition(config: &RunConfig, cf: &str, n: u64, out: &mut dyn Write) -> Outcome {
    let prefix = build_partition(&alpha(config, cf)?, n)?;
    for (i, label) in prefix.labels.iter().enumerate() {
        match config.format {
            Format::Json => emit(out, &json!({ "n": i + 1, "label": label }))?,
            Format::Tsv => writeln!(out, "{}\t{label}", i + 1)?,
        }
    }
    Ok(EXIT_OK)
}

fn avoided_set(config: &RunConfig, cf: &str, limit: u64, out: &mut dyn Write) -> Outcome {
    let set = avoided_set_theoretical(&alpha(config, cf)?, limit)?;
    for entry in &set.entries {
        match config.format {
            Format::Json => emit(out, &serde_json::to_value(entry).unwrap())?,
            Format::Tsv => {
                let k = match entry.kind {
                    EntryKind::IntermediateNumerator { k, .. } => k.to_string(),
                    _ => String::new(),
                };
                writeln!(
                    out,
                    "{}\t{}\t{}\t{k}",
                    entry.value,
                    entry.kind.name(),
                    entry.kind.n()
                )?
            }
        }
    }
    Ok(EXIT_OK)
}

fn read_s_file(path: &PathBuf) -> Result<Vec<u64>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut values: Vec<u64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: u64 = line
            .parse()
            .map_err(|_| Failure::Input(format!("line {}: {line:?} is not an integer", i + 1)))?;
        if values.last().is_some_and(|&last| v <= last) {
            return Err(Failure::Input(format!(
                "line {}: {v} does not exceed the previous value",
                i + 1
            )));
        }
        values.push(v);
    }
    Ok(values)
}

fn write_record(config: &RunConfig, out: &mut dyn Write, record: &Value) -> io::Result<()> {
    match config.format {
        Format::Json => emit(out, record),
        Format::Tsv => {
            for (key, value) in record.as_object().unwrap() {
                let text = match value {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                writeln!(out, "{key}\t{text}")?;
            }
            Ok(())
        }
    }
}

fn check_unique(config: &RunConfig, args: &CheckUnique, out: &mut dyn Write) -> Outcome {
    let s = match (&args.cf, &args.s_file) {
        (Some(cf), _) => avoided_set_theoretical(&alpha(config, cf)?, 2 * args.n - 1)?.values(),
        (None, Some(path)) => read_s_file(path)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let report = analyze(&build_sum_graph(&s, args.n));
    let mut record = json!({
        "bipartite": report.bipartite,
        "components": report.components,
        "coloring_count": report.coloring_count.to_string(),
    });
    let certificates = match find_quadruple_certificates(&s, args.n) {
        Ok(c) => c,
        Err(e) => e.certificates,
    };
    record["certificates"] = serde_json::to_value(&certificates).unwrap();
    if let Some(cycle) = &report.odd_cycle {
        record["odd_cycle"] = json!(cycle);
    }
    write_record(config, out, &record)?;
    Ok(EXIT_OK)
}

fn gen_fib(config: &RunConfig, s1: u64, s2: u64, limit: u64, out: &mut dyn Write) -> Outcome {
    let spec = GenFibSpec::new(s1, s2)?;
    let report = genfib_report(&spec, limit);
    let mut record = json!({ "verdict": report.verdict.verdict });
    match report.verdict.verdict {
        Verdict::NotAvoidable => {
            record["odd_cycle"] = json!(report.odd_cycle);
        }
        Verdict::UniquelyAvoidable => {
            let e = &report.verdict.embedding;
            record["embedding"] = json!({ "kind": e.kind, "cf": e.cf.to_string(), "n": e.n });
            if report.covered {
                record["certificates"] = serde_json::to_value(&report.certificates).unwrap();
            }
        }
    }
    write_record(config, out, &record)?;
    Ok(EXIT_OK)
}

fn mismatch_json(m: &Mismatch) -> Value {
    json!({
        "x": m.x,
        "theoretical": m.theoretical,
        "bruteforce": m.bruteforce,
        "membership": m.membership,
    })
}

fn verify(
    config: &RunConfig,
    cf: Option<&str>,
    limit: u64,
    seed: u64,
    count: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let mut specs: Vec<CfSpec> = match cf {
        Some(text) => vec![text.parse()?],
        None => corpus_generate(seed, count)?,
    };
    specs.sort_by_key(ToString::to_string);
    specs.dedup();
    let mut code = EXIT_OK;
    for cf in specs {
        let spec = cf.to_string();
        let check = cross_check(
            &Alpha::with_depth_cap(cf, config.depth_cap),
            limit,
            Exec::default(),
        )?;
        let mut record = json!({
            "cf": spec,
            "limit": limit,
            "agrees": check.agrees(),
            "size": check.theoretical.len(),
        });
        if let Some(m) = &check.mismatch {
            record["counterexample"] = mismatch_json(m);
            writeln!(err, "{}", json!({ "mismatch": spec, "x": m.x }))?;
            code = EXIT_MISMATCH;
        }
        write_record(config, out, &record)?;
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let config =
            RunConfig::try_parse_from(std::iter::once("avoidance").chain(args.iter().copied()))
                .unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&config, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn defaults() {
        let config = RunConfig::try_parse_from(["avoidance", "verify"]).unwrap();
        assert_eq!(config.format, Format::Json);
        match config.command {
            Command::Verify {
                limit,
                seed,
                count,
                cf,
            } => {
                assert_eq!((limit, seed, count, cf), (2000, DEFAULT_SEED, 20, None));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn run_writes_to_given_streams() {
        let (code, out, err) = run_args(&["convergents", "--cf", "[2]", "--n", "0"]);
        assert_eq!(
            (code, out.as_str(), err.as_str()),
            (0, "{\"n\":0,\"p\":\"2\",\"q\":\"1\"}\n", "")
        );
        let (code, out, err) = run_args(&["convergents", "--cf", "[2]", "--n", "1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.ends_with('\n') && err.contains("error"));
    }

    #[test]
    fn tsv_records_are_key_value_lines() {
        let (_, out, _) = run_args(&["gen-fib", "--s1", "5", "--s2", "3", "--format", "tsv"]);
        assert_eq!(out.lines().next(), Some("verdict\tnot_avoidable"));
    }
}
