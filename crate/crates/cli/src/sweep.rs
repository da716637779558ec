use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use tpsig_core::bounds::{judge, BoundQuery, VERDICT_TOL};
use tpsig_core::constructions::{
    construct, construction_alphabet, cyclotomic_lambda_bound, gauss_lambda, ConstructionError,
};
use tpsig_core::field::prime_power;
use tpsig_core::json::format_float;
use tpsig_core::signal::{profile, SignalError};

use crate::{emit, Failure, Result};

/// Largest admissible --q-max.
pub const Q_LIMIT: u64 = 512;

pub const HEADER_VERSION: &str = "# tpsig sweep v1";
pub const HEADER: [&str; 11] = [
    "p",
    "m",
    "e",
    "n",
    "M",
    "lambda_measured",
    "lambda_formula",
    "bound_best_name",
    "bound_best_value",
    "verdict",
    "runtime_ms",
];

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepConstruction {
    Gauss,
    Cyclotomic,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    construction: SweepConstruction,
    #[arg(long = "q-max")]
    q_max: u64,
    /// largest e for the cyclotomic grid; default (q-1)/2
    #[arg(long = "e-max")]
    e_max: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// fill runtime_ms (otherwise 0, keeping output byte-identical)
    #[arg(long)]
    timing: bool,
}

struct Cell {
    p: u64,
    m: u32,
    e: u64,
}

struct Row {
    cell: Cell,
    n: u64,
    count: u64,
    lambda_measured: f64,
    lambda_formula: f64,
    best: Option<(String, f64)>,
    verdict: String,
    runtime_ms: u128,
}

fn grid(args: &SweepArgs) -> Vec<Cell> {
    let mut cells = Vec::new();
    for q in 3..=args.q_max {
        let Some((p, m)) = prime_power(q) else { continue };
        match args.construction {
            SweepConstruction::Gauss => cells.push(Cell { p, m, e: 1 }),
            SweepConstruction::Cyclotomic => {
                let top = args.e_max.unwrap_or(u64::MAX).min((q - 1) / 2);
                for e in (2..=top).filter(|e| (q - 1) % e == 0) {
                    cells.push(Cell { p, m, e });
                }
            }
        }
    }
    cells
}

fn evaluate(cell: Cell, timing: bool) -> std::result::Result<Row, ConstructionError> {
    let start = Instant::now();
    let q = cell.p.pow(cell.m);
    let n = (q - 1) / cell.e;
    let formula = if cell.e == 1 {
        gauss_lambda(n)
    } else {
        cyclotomic_lambda_bound(n, cell.e)
    };
    let runtime = |start: Instant| if timing { start.elapsed().as_millis() } else { 0 };
    let set = match construct(cell.p, cell.m, cell.e) {
        Ok(set) => set,
        // coincident unit signals: lambda is exactly 1
        Err(ConstructionError::Signal(SignalError::DuplicateSignals { .. })) => {
            return Ok(Row {
                n,
                count: cell.e,
                lambda_measured: 1.0,
                lambda_formula: formula,
                best: None,
                verdict: "not_optimal".to_string(),
                runtime_ms: runtime(start),
                cell,
            });
        }
        Err(e) => return Err(e),
    };
    let prof = profile(&set);
    let query = BoundQuery::new(n, set.len() as u64, construction_alphabet(cell.p), None)
        .expect("constructed sets have n >= 2");
    let report = judge(&prof, &query).expect("valid query");
    let best = match &report.certificate {
        Some(name) => report.entry(name).map(|e| (e.name.clone(), e.value)),
        None => report.best_lower.clone(),
    };
    Ok(Row {
        n,
        count: set.len() as u64,
        lambda_measured: prof.lambda,
        lambda_formula: formula,
        best,
        verdict: report.verdict.to_string(),
        runtime_ms: runtime(start),
        cell,
    })
}

pub fn run(args: &SweepArgs) -> Result<()> {
    if args.q_max > Q_LIMIT {
        return Err(Failure::usage(format!("--q-max {} exceeds the limit {Q_LIMIT}", args.q_max)));
    }
    if args.e_max == Some(0) {
        return Err(Failure::usage("--e-max must be positive"));
    }
    let mut rows = grid(args)
        .into_par_iter()
        .map(|cell| evaluate(cell, args.timing))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(e.to_string()))?;
    rows.sort_by_key(|r| (r.cell.p.pow(r.cell.m), r.cell.e));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).unwrap();
    for r in &rows {
        let (best_name, best_value) = match &r.best {
            Some((name, value)) => (name.clone(), format_float(*value)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.cell.p.to_string(),
            r.cell.m.to_string(),
            r.cell.e.to_string(),
            r.n.to_string(),
            r.count.to_string(),
            format_float(r.lambda_measured),
            format_float(r.lambda_formula),
            best_name,
            best_value,
            r.verdict.clone(),
            r.runtime_ms.to_string(),
        ])
        .unwrap();
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8");
    let measured_above = rows
        .iter()
        .filter(|r| r.cell.e > 1 && r.lambda_measured > r.lambda_formula + VERDICT_TOL)
        .count();
    if measured_above > 0 {
        eprintln!("warning: {measured_above} cells exceed the cyclotomic lambda bound");
    }
    emit(Some(&args.out), &format!("{HEADER_VERSION}\n{body}"))
}
