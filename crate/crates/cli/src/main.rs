use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tpsig_core::bounds::{bound_table, Alphabet, BoundEntry, BoundQuery};
use tpsig_core::constructions::{construct_cyclotomic, construct_gauss, ConstructionError};
use tpsig_core::json::{format_float, read_set_json, to_json, to_json_string, write_set_json, ReadError};
use tpsig_core::signal::{self, SignalError, SignalSet};

mod sweep;

/// Exit codes.
const USAGE: u8 = 2;
const BAD_INPUT: u8 = 3;
const CHECK_FAILED: u8 = 4;

/// Bridge check tolerance.
const TRANSFER_TOL: f64 = 1e-9;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure { code: BAD_INPUT, message: message.into() }
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Malformed(_) => Failure::usage(e.to_string()),
            ReadError::Invalid(_) => Failure::input(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

#[derive(Parser)]
#[command(name = "tpsig", version, about = "Unit time-phase signal sets: construct, profile, bound, bridge, sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Gauss or cyclotomic set and write it as JSON
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Correlation profile of a signal-set file
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Table of bounds for given n and M
    Bounds(BoundsArgs),
    /// Expand a set through the full or phase bridge
    Bridge {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: BridgeKind,
        #[arg(long)]
        out: PathBuf,
        /// recompute the transferred correlation and compare
        #[arg(long)]
        check: bool,
    },
    /// Construct, profile and judge every cell of a parameter grid; CSV out
    Sweep(sweep::SweepArgs),
}

#[derive(Subcommand)]
enum ConstructKind {
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Cyclotomic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[arg(long, default_value = "complex")]
    alphabet: Alphabet,
    /// extra Welch moment order
    #[arg(long)]
    k: Option<u32>,
    /// also evaluate the LP upper bounds on M at this lambda
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BridgeKind {
    Full,
    Phase,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_set(path: &Path) -> Result<SignalSet> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_set_json(&text)?)
}

fn fixed(x: f64) -> String {
    format!("{x:.9}")
}

fn cmd_construct(kind: ConstructKind) -> Result<()> {
    let (built, out) = match kind {
        ConstructKind::Gauss { p, m, out } => (construct_gauss(p, m), out),
        ConstructKind::Cyclotomic { p, m, e, out } => (construct_cyclotomic(p, m, e), out),
    };
    let set = built.map_err(|e| match e {
        ConstructionError::Signal(SignalError::DuplicateSignals { first, second }) => Failure::input(format!(
            "signals {first} and {second} coincide for these parameters (lambda = 1)"
        )),
        other => Failure::usage(other.to_string()),
    })?;
    if set.n() == 2 {
        eprintln!("warning: n = 2, degenerate period");
    }
    emit(out.as_deref(), &write_set_json(&set))
}

fn tuple_text(t: Option<Vec<usize>>) -> String {
    match t {
        Some(v) => format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        None => "-".to_string(),
    }
}

fn cmd_eval(input: &Path, format: Format) -> Result<()> {
    let set = read_set(input)?;
    let p = signal::profile(&set);
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(&p).expect("profile serializes");
            let map = v.as_object_mut().expect("object");
            let mut full = serde_json::Map::new();
            full.insert("n".into(), json!(set.n()));
            full.insert("M".into(), json!(set.len()));
            full.append(map);
            emit(None, &to_json(&Value::Object(full)))
        }
        Format::Table | Format::Csv => {
            let rows = [
                ("n", set.n().to_string()),
                ("M", set.len().to_string()),
                ("nu", fixed(p.nu)),
                ("theta", fixed(p.theta)),
                ("lambda", fixed(p.lambda)),
                ("papr_max", fixed(p.papr_max)),
                ("witness_nu", tuple_text(p.witness_nu.map(|(a, b)| vec![a, b]))),
                ("witness_theta", tuple_text(p.witness_theta.map(|(a, b, c)| vec![a, b, c]))),
                (
                    "witness_lambda",
                    tuple_text(p.witness_lambda.map(|(a, b, c, d)| vec![a, b, c, d])),
                ),
            ];
            let mut text = String::new();
            if format == Format::Csv {
                text.push_str("field,value\n");
                for (k, v) in rows {
                    writeln!(text, "{k},\"{v}\"").unwrap();
                }
            } else {
                for (k, v) in rows {
                    writeln!(text, "{k:<16}{v}").unwrap();
                }
            }
            emit(None, &text)
        }
    }
}

fn bounds_csv(entries: &[BoundEntry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "kind", "value", "applicable", "note"]).unwrap();
    for e in entries {
        w.write_record([
            e.name.as_str(),
            e.kind.as_str(),
            &format_float(e.value),
            if e.applicable { "true" } else { "false" },
            e.note.as_str(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let query = BoundQuery::new(args.n, args.m, args.alphabet, args.k).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(l) = args.lambda {
        if !(0.0..=1.0).contains(&l) {
            return Err(Failure::usage(format!("lambda must lie in [0, 1], got {l}")));
        }
    }
    let entries = bound_table(&query, args.lambda).map_err(|e| Failure::usage(e.to_string()))?;
    let text = match args.format {
        Format::Json => to_json_string(&json!({
            "n": args.n,
            "M": args.m,
            "alphabet": args.alphabet,
            "lambda": args.lambda,
            "bounds": entries,
        }))
        .expect("bounds serialize"),
        Format::Csv => bounds_csv(&entries),
        Format::Table => {
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0) + 2;
            let mut text = String::new();
            writeln!(text, "{:<width$}{:<17}{:>14}  {:<11}note", "name", "kind", "value", "applicable").unwrap();
            for e in &entries {
                writeln!(
                    text,
                    "{:<width$}{:<17}{:>14}  {:<11}{}",
                    e.name,
                    e.kind.as_str(),
                    fixed(e.value),
                    if e.applicable { "yes" } else { "no" },
                    e.note
                )
                .unwrap();
            }
            text
        }
    };
    emit(None, &text)
}

fn cmd_bridge(input: &Path, kind: BridgeKind, out: &Path, check: bool) -> Result<()> {
    let set = read_set(input)?;
    let bridged = match kind {
        BridgeKind::Full => signal::bridge_full(&set),
        BridgeKind::Phase => signal::bridge_phase(&set),
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    emit(Some(out), &write_set_json(&bridged))?;
    if check {
        let source = signal::lambda(&set);
        let (label, target) = match kind {
            BridgeKind::Full => ("target_nu", signal::nu(&bridged).0),
            BridgeKind::Phase => ("target_theta", signal::theta(&bridged).0),
        };
        let diff = (source - target).abs();
        println!("source_lambda   {}", fixed(source));
        println!("{label:<16}{}", fixed(target));
        println!("difference      {diff:.3e}");
        if diff > TRANSFER_TOL {
            return Err(Failure {
                code: CHECK_FAILED,
                message: format!("transferred correlation differs by {diff:.3e}"),
            });
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("TPSIG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("TPSIG_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Construct { kind } => cmd_construct(kind),
        Command::Eval { input, format } => cmd_eval(&input, format),
        Command::Bounds(args) => cmd_bounds(&args),
        Command::Bridge { input, kind, out, check } => cmd_bridge(&input, kind, &out, check),
        Command::Sweep(args) => sweep::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
