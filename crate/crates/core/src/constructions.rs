//! Signal sets read off the trace of powers of a primitive element: the
//! single-signal Gauss set and the e-signal cyclotomic set.

use serde::Serialize;
use thiserror::Error;

use crate::bounds::Alphabet;
use crate::characters::root_of_unity;
use crate::field::{make_field, FieldError, FieldSpec};
use crate::signal::{
    ambiguity, profile, CorrelationProfile, SetMeta, Signal, SignalError, SignalSet,
};

/// Tolerance of the verifier's comparisons against closed forms.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("e must divide q-1 (e = {e}, q = {q})")]
    BadDivisor { e: u64, q: u64 },
    #[error("the cyclotomic construction needs e >= 2; e = 1 is the Gauss construction")]
    DivisorOne,
    #[error("period n = {n} is below 2")]
    PeriodTooShort { n: u64 },
    #[error("set was not produced by a known construction ('{0}')")]
    UnknownConstruction(String),
    #[error("verification failed at (j, j', w, tau) = {witness:?}: measured {measured}, expected {expected}")]
    VerificationFailed {
        witness: (usize, usize, usize, usize),
        measured: f64,
        expected: f64,
    },
}

/// Bound judge alphabet of a construction over GF(p^m): entries are scaled
/// p-th roots of unity.
pub fn construction_alphabet(p: u64) -> Alphabet {
    if p == 2 {
        Alphabet::Binary
    } else {
        Alphabet::Qary
    }
}

/// sqrt(n+1)/n, the exact lambda of the Gauss set.
pub fn gauss_lambda(n: u64) -> f64 {
    ((n + 1) as f64).sqrt() / n as f64
}

/// sqrt(en+1)/n, the upper bound on lambda of the cyclotomic set.
pub fn cyclotomic_lambda_bound(n: u64, e: u64) -> f64 {
    ((e * n + 1) as f64).sqrt() / n as f64
}

fn trace_signal(field: &FieldSpec, traces: &[u32], start: usize, step: usize, n: usize) -> Result<Signal, SignalError> {
    let scale = 1.0 / (n as f64).sqrt();
    let p = field.p();
    Signal::new(
        (0..n)
            .map(|l| root_of_unity(traces[start + l * step] as i64, p) * scale)
            .collect(),
    )
}

/// The (q-1, 1) set phi(i) = zeta_p^{T(gamma^i)} / sqrt(n) over the default
/// GF(p^m).
pub fn construct_gauss(p: u64, m: u32) -> Result<SignalSet, ConstructionError> {
    construct_gauss_in(&make_field(p, m)?)
}

/// As [`construct_gauss`], over a caller-chosen field representation.
pub fn construct_gauss_in(field: &FieldSpec) -> Result<SignalSet, ConstructionError> {
    let n = field.order() - 1;
    if n < 2 {
        return Err(ConstructionError::PeriodTooShort { n });
    }
    let traces = field.trace_of_gamma_powers();
    let signal = trace_signal(field, &traces, 0, 1, n as usize)?;
    let meta = SetMeta {
        construction: "gauss".to_string(),
        field: Some(field.info()),
        e: Some(1),
    };
    Ok(SignalSet::new(vec![signal], meta)?)
}

/// The (n, e) set phi_i(l) = zeta_p^{T(gamma^{i+le})} / sqrt(n), n = (q-1)/e.
pub fn construct_cyclotomic(p: u64, m: u32, e: u64) -> Result<SignalSet, ConstructionError> {
    construct_cyclotomic_in(&make_field(p, m)?, e)
}

pub fn construct_cyclotomic_in(field: &FieldSpec, e: u64) -> Result<SignalSet, ConstructionError> {
    let q = field.order();
    if e == 0 || !(q - 1).is_multiple_of(e) {
        return Err(ConstructionError::BadDivisor { e, q });
    }
    if e == 1 {
        return Err(ConstructionError::DivisorOne);
    }
    let n = (q - 1) / e;
    if n < 2 {
        return Err(ConstructionError::PeriodTooShort { n });
    }
    let traces = field.trace_of_gamma_powers();
    let signals = (0..e as usize)
        .map(|i| trace_signal(field, &traces, i, e as usize, n as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let meta = SetMeta {
        construction: "cyclotomic".to_string(),
        field: Some(field.info()),
        e: Some(e),
    };
    Ok(SignalSet::new(signals, meta)?)
}

/// Gauss set for e = 1, cyclotomic set otherwise.
pub fn construct(p: u64, m: u32, e: u64) -> Result<SignalSet, ConstructionError> {
    if e == 1 {
        construct_gauss(p, m)
    } else {
        construct_cyclotomic(p, m, e)
    }
}

/// Which (w, tau) cases of the Gauss set carry magnitude 1/n and which 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseAssignment {
    /// (tau = 0, w != 0) -> 1/n and (tau != 0, w = 0) -> 0
    ModulationOnly,
    /// (tau = 0, w != 0) -> 0 and (tau != 0, w = 0) -> 1/n
    ShiftOnly,
    /// neither pattern fits
    Neither,
}

/// Magnitudes |<phi, M_w L_tau phi>| of a Gauss set split by case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseProfile {
    /// (min, max) over tau = 0, w != 0
    pub modulation_only: (f64, f64),
    /// (min, max) over tau != 0, w = 0
    pub shift_only: (f64, f64),
    /// (min, max) over tau != 0, w != 0
    pub both: (f64, f64),
    /// every magnitude lies in {0, 1/n, sqrt(n+1)/n}
    pub three_valued: bool,
    /// which case carries 1/n
    pub one_over_n_case: CaseAssignment,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub construction: String,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub e: u64,
    pub lambda_measured: f64,
    /// exact value for Gauss sets, upper bound for cyclotomic sets
    pub lambda_formula: f64,
    pub witness_lambda: Option<(usize, usize, usize, usize)>,
    pub cases: Option<CaseProfile>,
    /// n = 2
    pub degenerate: bool,
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn case_profile(set: &SignalSet) -> CaseProfile {
    let n = set.n();
    let phi = &set.signals()[0];
    let amb = ambiguity(phi, phi).expect("same signal");
    let at = |w: usize, tau: usize| amb[w * n + tau];
    let modulation_only = min_max((1..n).map(|w| at(w, 0)));
    let shift_only = min_max((1..n).map(|tau| at(0, tau)));
    let both = min_max((1..n).flat_map(|w| (1..n).map(move |tau| (w, tau))).map(|(w, tau)| at(w, tau)));
    let nf = n as f64;
    let targets = [0.0, 1.0 / nf, gauss_lambda(n as u64)];
    let three_valued = amb
        .iter()
        .skip(1)
        .all(|v| targets.iter().any(|t| (v - t).abs() <= VERIFY_TOL));
    let near = |(lo, hi): (f64, f64), t: f64| (lo - t).abs() <= VERIFY_TOL && (hi - t).abs() <= VERIFY_TOL;
    let one_over_n_case = if near(modulation_only, 1.0 / nf) && near(shift_only, 0.0) {
        CaseAssignment::ModulationOnly
    } else if near(modulation_only, 0.0) && near(shift_only, 1.0 / nf) {
        CaseAssignment::ShiftOnly
    } else {
        CaseAssignment::Neither
    };
    CaseProfile {
        modulation_only,
        shift_only,
        both,
        three_valued,
        one_over_n_case,
    }
}

/// Checks a constructed set against its closed form: lambda equal to
/// sqrt(n+1)/n for Gauss sets, at most sqrt(en+1)/n for cyclotomic sets.
pub fn verify_construction(set: &SignalSet) -> Result<Verification, ConstructionError> {
    verify_with_profile(set, &profile(set))
}

/// As [`verify_construction`] with a precomputed profile of `set`.
pub fn verify_with_profile(set: &SignalSet, prof: &CorrelationProfile) -> Result<Verification, ConstructionError> {
    let meta = set.meta();
    let n = set.n() as u64;
    let lambda = prof.lambda;
    let witness = prof.witness_lambda.unwrap_or((0, 0, 0, 0));
    let (e, formula, cases) = match meta.construction.as_str() {
        "gauss" => {
            let formula = gauss_lambda(n);
            if (lambda - formula).abs() > VERIFY_TOL {
                return Err(ConstructionError::VerificationFailed {
                    witness,
                    measured: lambda,
                    expected: formula,
                });
            }
            (1, formula, Some(case_profile(set)))
        }
        "cyclotomic" => {
            let e = meta.e.unwrap_or(set.len() as u64);
            let bound = cyclotomic_lambda_bound(n, e);
            if lambda > bound + VERIFY_TOL {
                return Err(ConstructionError::VerificationFailed {
                    witness,
                    measured: lambda,
                    expected: bound,
                });
            }
            (e, bound, None)
        }
        other => return Err(ConstructionError::UnknownConstruction(other.to_string())),
    };
    Ok(Verification {
        construction: meta.construction.clone(),
        n: set.n(),
        m: set.len(),
        e,
        lambda_measured: lambda,
        lambda_formula: formula,
        witness_lambda: prof.witness_lambda,
        cases,
        degenerate: n == 2,
    })
}
