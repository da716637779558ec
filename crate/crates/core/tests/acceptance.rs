//! The ten acceptance criteria, each at its stated tolerance. Run with
//! `--nocapture` to see one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use tpsig_core::bounds::{
    judge, levenstein_timephase, lp_piece, welch_timephase, BoundQuery, LpFamily, Verdict,
};
use tpsig_core::characters::gauss_report;
use tpsig_core::constructions::{
    construct_cyclotomic, construct_gauss, construction_alphabet, cyclotomic_lambda_bound,
    gauss_lambda, ConstructionError,
};
use tpsig_core::field::make_field;
use tpsig_core::signal::{
    bridge_full, bridge_phase, nu, profile, random_unit_set, CorrelationProfile, SignalError,
    SignalSet, DEGENERATE_LAMBDA_TOL,
};

use common::prime_powers;

const Q_MAX: u64 = 128;
const BRIDGE_LIMIT: usize = 5000;

struct Cell {
    p: u64,
    m: u32,
    q: u64,
    e: u64,
    set: SignalSet,
    profile: CorrelationProfile,
}

struct Sweeps {
    gauss: Vec<Cell>,
    cyclotomic: Vec<Cell>,
    /// (q, e) cells whose cyclotomic signals coincide
    coincident: Vec<(u64, u64)>,
}

fn build_sweeps() -> Sweeps {
    let mut gauss = Vec::new();
    let mut cyclotomic = Vec::new();
    let mut coincident = Vec::new();
    for (q, p, m) in prime_powers(4, Q_MAX) {
        let set = construct_gauss(p, m).expect("gauss set");
        let profile = profile(&set);
        gauss.push(Cell { p, m, q, e: 1, set, profile });
    }
    for (q, p, m) in prime_powers(3, Q_MAX) {
        for e in (2..=(q - 1) / 2).filter(|e| (q - 1) % e == 0) {
            match construct_cyclotomic(p, m, e) {
                Ok(set) => {
                    let profile = profile(&set);
                    cyclotomic.push(Cell { p, m, q, e, set, profile });
                }
                Err(ConstructionError::Signal(SignalError::DuplicateSignals { .. })) => {
                    coincident.push((q, e));
                }
                Err(other) => panic!("cyclotomic ({q}, {e}): {other}"),
            }
        }
    }
    Sweeps { gauss, cyclotomic, coincident }
}

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn c1_gauss_lambda(s: &Sweeps) -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for c in &s.gauss {
        let n = c.set.n() as u64;
        let err = (c.profile.lambda - gauss_lambda(n)).abs();
        worst = worst.max(err);
        if err > 1e-9 {
            bad.push(c.q);
        }
        // independent brute force on the smaller cells
        if n <= 31 {
            let (_, _, lam) = common::naive_measures(c.set.signals());
            if (lam - c.profile.lambda).abs() > 1e-10 {
                bad.push(c.q);
            }
        }
    }
    Outcome {
        id: 1,
        name: "Gauss set lambda = sqrt(n+1)/n, 4 <= q <= 128",
        pass: bad.is_empty() && s.gauss.len() == prime_powers(4, Q_MAX).len(),
        detail: format!("{} fields, max |err| = {worst:.3e}, failing q: {bad:?}", s.gauss.len()),
    }
}

fn c2_gauss_optimal(s: &Sweeps) -> Outcome {
    let mut bad = Vec::new();
    for c in &s.gauss {
        let n = c.set.n() as u64;
        let query = BoundQuery::new(n, 1, construction_alphabet(c.p), None).unwrap();
        let report = judge(&c.profile, &query).unwrap();
        let x = c.profile.lambda * c.profile.lambda;
        let piece2 = lp_piece(LpFamily::Qary, n, 2, x) / n as f64;
        if report.verdict != Verdict::Optimal || (piece2 + 1e-9).floor() != 1.0 {
            bad.push((c.q, report.verdict.to_string(), piece2));
        }
    }
    Outcome {
        id: 2,
        name: "Gauss sets judged optimal; q-ary piece-2 floor equals M",
        pass: bad.is_empty(),
        detail: format!("{} fields, failures: {bad:?}", s.gauss.len()),
    }
}

fn bridge_sources(s: &Sweeps) -> impl Iterator<Item = &Cell> {
    s.gauss
        .iter()
        .chain(&s.cyclotomic)
        .filter(|c| c.set.n() * c.set.n() * c.set.len() <= BRIDGE_LIMIT)
}

fn c3_bridge_full(s: &Sweeps) -> Outcome {
    let (mut checked, mut skipped, mut worst) = (0, 0, 0.0f64);
    let mut bad = Vec::new();
    for c in bridge_sources(s) {
        if c.profile.lambda >= 1.0 - DEGENERATE_LAMBDA_TOL {
            skipped += 1;
            continue;
        }
        let (n, m) = (c.set.n(), c.set.len());
        match bridge_full(&c.set) {
            Ok(b) => {
                let err = (nu(&b).0 - c.profile.lambda).abs();
                worst = worst.max(err);
                if err > 1e-9 || b.len() != n * n * m {
                    bad.push((c.q, c.e));
                }
            }
            Err(_) => bad.push((c.q, c.e)),
        }
        checked += 1;
    }
    Outcome {
        id: 3,
        name: "nu(full bridge) = lambda, size n^2 M, distinct",
        pass: bad.is_empty() && checked > 0,
        detail: format!("{checked} sets, {skipped} with lambda = 1 skipped, max |err| = {worst:.3e}, failures: {bad:?}"),
    }
}

fn c4_bridge_phase(s: &Sweeps) -> Outcome {
    let (mut checked, mut skipped, mut worst) = (0, 0, 0.0f64);
    let mut bad = Vec::new();
    for c in bridge_sources(s) {
        if c.profile.lambda >= 1.0 - DEGENERATE_LAMBDA_TOL {
            skipped += 1;
            continue;
        }
        let (n, m) = (c.set.n(), c.set.len());
        match bridge_phase(&c.set) {
            Ok(b) => {
                let err = (tpsig_core::signal::theta(&b).0 - c.profile.lambda).abs();
                worst = worst.max(err);
                if err > 1e-9 || b.len() != n * m {
                    bad.push((c.q, c.e));
                }
            }
            Err(_) => bad.push((c.q, c.e)),
        }
        checked += 1;
    }
    Outcome {
        id: 4,
        name: "theta(phase bridge) = lambda, size n M, distinct",
        pass: bad.is_empty() && checked > 0,
        detail: format!("{checked} sets, {skipped} with lambda = 1 skipped, max |err| = {worst:.3e}, failures: {bad:?}"),
    }
}

fn c5_cyclotomic_bound(s: &Sweeps) -> Outcome {
    let mut bad = Vec::new();
    let mut tightest = f64::INFINITY;
    for c in &s.cyclotomic {
        let n = c.set.n() as u64;
        let bound = cyclotomic_lambda_bound(n, c.e);
        tightest = tightest.min(bound - c.profile.lambda);
        if c.profile.lambda > bound + 1e-9 {
            bad.push((c.q, c.e, c.profile.lambda, bound));
        }
    }
    // coincident signals give lambda = 1 exactly
    for &(q, e) in &s.coincident {
        let n = (q - 1) / e;
        if 1.0 > cyclotomic_lambda_bound(n, e) + 1e-9 {
            bad.push((q, e, 1.0, cyclotomic_lambda_bound(n, e)));
        }
    }
    Outcome {
        id: 5,
        name: "cyclotomic lambda <= sqrt(en+1)/n, q <= 128",
        pass: bad.is_empty(),
        detail: format!(
            "{} sets plus {} with coincident signals (lambda = 1), min slack = {tightest:.3e}, failures: {bad:?}",
            s.cyclotomic.len(),
            s.coincident.len()
        ),
    }
}

fn c6_chain(s: &Sweeps) -> Outcome {
    let slack = 1e-12;
    let ok = |p: &CorrelationProfile| p.nu <= p.theta + slack && p.theta <= p.lambda + slack;
    let mut bad = Vec::new();
    for c in s.gauss.iter().chain(&s.cyclotomic) {
        if !ok(&c.profile) {
            bad.push(format!("({}, {})", c.q, c.e));
        }
    }
    for seed in 0..100u64 {
        let n = 2 + (seed % 7) as usize;
        let m = 1 + ((seed / 7) % 4) as usize;
        let set = random_unit_set(n, m, seed).unwrap();
        if !ok(&profile(&set)) {
            bad.push(format!("seed {seed}"));
        }
    }
    Outcome {
        id: 6,
        name: "nu <= theta <= lambda on constructed and 100 random sets",
        pass: bad.is_empty(),
        detail: format!("{} constructed + 100 random, failures: {bad:?}", s.gauss.len() + s.cyclotomic.len()),
    }
}

fn c7_coincidences() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for n in 2..=16u64 {
        for m in 1..=50u64 {
            let w1 = welch_timephase(n, m, 1).unwrap().value;
            let lev = levenstein_timephase(n, m).unwrap().value;
            let via_w1 = lp_piece(LpFamily::Complex, n, 1, w1 * w1) / n as f64;
            let via_lev = lp_piece(LpFamily::Complex, n, 2, lev * lev) / n as f64;
            let err = (via_w1 - m as f64).abs().max((via_lev - m as f64).abs());
            worst = worst.max(err);
            if err > 1e-9 {
                bad.push((n, m));
            }
        }
    }
    Outcome {
        id: 7,
        name: "LP piece 1 at w_1 and piece 2 at Levenstein recover M",
        pass: bad.is_empty(),
        detail: format!("750 grid points, max |err| = {worst:.3e}, failures: {bad:?}"),
    }
}

fn c8_dominance() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=16u64 {
        for m in 1..=50u64 {
            let w1 = welch_timephase(n, m, 1).unwrap().value;
            let lev = levenstein_timephase(n, m).unwrap().value;
            let ok = if m == 1 { (lev - w1).abs() <= 1e-12 } else { lev > w1 };
            if !ok {
                bad.push((n, m));
            }
        }
    }
    Outcome {
        id: 8,
        name: "Levenstein > Welch k=1 for M >= 2, equal at M = 1",
        pass: bad.is_empty(),
        detail: format!("750 grid points, failures: {bad:?}"),
    }
}

fn c9_gauss_sums() -> Outcome {
    let mut bad = Vec::new();
    let mut fields = 0;
    for (q, p, m) in prime_powers(2, 64) {
        let f = make_field(p, m).unwrap();
        let report = gauss_report(&f);
        fields += 1;
        if !report.passes(q) {
            bad.push((q, report.magnitude_error, report.twist_error));
        }
    }
    Outcome {
        id: 9,
        name: "|G| = sqrt(q) and twist identity, q <= 64",
        pass: bad.is_empty(),
        detail: format!("{fields} fields, failures: {bad:?}"),
    }
}

fn c10_no_violation(s: &Sweeps) -> Outcome {
    let mut bad = Vec::new();
    let mut judged = 0;
    for c in s.gauss.iter().chain(&s.cyclotomic) {
        let query = BoundQuery::new(c.set.n() as u64, c.set.len() as u64, construction_alphabet(c.p), None)
            .unwrap();
        let report = judge(&c.profile, &query).unwrap();
        judged += 1;
        if !report.violations.is_empty() {
            bad.push(format!("GF({}^{}) e={}: {:?}", c.p, c.m, c.e, report.violations));
        }
    }
    Outcome {
        id: 10,
        name: "no measured profile violates an applicable bound",
        pass: bad.is_empty(),
        detail: format!("{judged} profiles judged, violations: {bad:?}"),
    }
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let sweeps = build_sweeps();
    let outcomes = vec![
        c1_gauss_lambda(&sweeps),
        c2_gauss_optimal(&sweeps),
        c3_bridge_full(&sweeps),
        c4_bridge_phase(&sweeps),
        c5_cyclotomic_bound(&sweeps),
        c6_chain(&sweeps),
        c7_coincidences(),
        c8_dominance(),
        c9_gauss_sums(),
        c10_no_violation(&sweeps),
    ];
    for o in &outcomes {
        println!(
            "criterion {:>2} {} : {} ({})",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    println!("acceptance suite finished in {:.1} s", start.elapsed().as_secs_f64());
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
