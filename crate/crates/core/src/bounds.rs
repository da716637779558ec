//! Closed-form lower bounds on lambda and upper bounds on M for unit
//! time-phase signal sets, and an optimality judge built on them.
//!
//! Every M-upper-bound is returned unfloored; flooring only happens inside
//! [`judge`]. Binomials and factorials are exact big integers until the
//! final division.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::signal::{CorrelationProfile, DEGENERATE_LAMBDA_TOL};

/// Absolute tolerance for lambda comparisons and M-bound flooring.
pub const VERDICT_TOL: f64 = 1e-9;
/// Relative slack when locating lambda^2 inside a piece interval.
const INTERVAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("n must be at least 2, got {0}")]
    InvalidN(u64),
    #[error("M must be at least 1, got {0}")]
    InvalidM(u64),
    #[error("k must be at least 1, got {0}")]
    InvalidK(u32),
    #[error("lambda must lie in [0, 1], got {0}")]
    InvalidLambda(f64),
    #[error("lambda^2 = {lambda2} lies in no piece of the bound")]
    IntervalGap { lambda2: f64 },
    #[error("k = {k} outside the admissible range 0..={max}")]
    KOutOfRange { k: u32, max: u32 },
}

/// Symbol alphabet of the set being judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// arbitrary complex entries
    Complex,
    /// real entries
    Real,
    /// entries in {+1, -1} / sqrt(n)
    Binary,
    /// entries are q-th roots of unity / sqrt(n), q >= 3
    Qary,
}

impl Alphabet {
    pub fn as_str(self) -> &'static str {
        match self {
            Alphabet::Complex => "complex",
            Alphabet::Real => "real",
            Alphabet::Binary => "binary",
            Alphabet::Qary => "qary",
        }
    }

    fn is_real(self) -> bool {
        matches!(self, Alphabet::Real | Alphabet::Binary)
    }

    /// Binary sets are also sets of 4th roots of unity, so the q >= 3 bounds
    /// cover them.
    fn has_roots_of_unity(self) -> bool {
        matches!(self, Alphabet::Binary | Alphabet::Qary)
    }
}

impl std::str::FromStr for Alphabet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complex" => Ok(Alphabet::Complex),
            "real" => Ok(Alphabet::Real),
            "binary" => Ok(Alphabet::Binary),
            "qary" => Ok(Alphabet::Qary),
            other => Err(format!("unknown alphabet '{other}'")),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Real or complex time signal sets, for the classical Levenstein bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeAlphabet {
    Real,
    Complex,
}

/// Alphabet class for the Sidelnikov bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidelnikovClass {
    /// q = 2
    Binary,
    /// q > 2
    NonBinary,
}

/// Parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub n: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub alphabet: Alphabet,
    pub k: Option<u32>,
}

impl BoundQuery {
    pub fn new(n: u64, m: u64, alphabet: Alphabet, k: Option<u32>) -> Result<Self, BoundError> {
        check_nm(n, m)?;
        if let Some(k) = k {
            if k < 1 {
                return Err(BoundError::InvalidK(k));
            }
        }
        Ok(BoundQuery { n, m, alphabet, k })
    }
}

/// A bound value with its applicability.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEval {
    pub value: f64,
    pub applicable: bool,
    pub note: String,
}

impl BoundEval {
    fn ok(value: f64) -> Self {
        BoundEval {
            value,
            applicable: true,
            note: String::new(),
        }
    }

    fn flagged(value: f64, note: impl Into<String>) -> Self {
        BoundEval {
            value,
            applicable: false,
            note: note.into(),
        }
    }
}

fn check_nm(n: u64, m: u64) -> Result<(), BoundError> {
    if n < 2 {
        return Err(BoundError::InvalidN(n));
    }
    if m < 1 {
        return Err(BoundError::InvalidM(m));
    }
    Ok(())
}

// ---- exact integer helpers ----

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// num / den as f64 without overflowing the intermediate conversion.
fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let quotient = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let mantissa = quotient.to_f64().expect("quotient fits in f64");
    // split the scaling so neither factor overflows on its own
    let half = -shift / 2;
    mantissa * 2f64.powi(half as i32) * 2f64.powi((-shift - half) as i32)
}

/// Radical of a possibly negative quantity: clamped to 0 and flagged.
fn root_or_flag(ratio: f64, root: f64, note: &str) -> BoundEval {
    if ratio > 0.0 {
        BoundEval::ok(ratio.powf(1.0 / root))
    } else {
        BoundEval::flagged(0.0, note)
    }
}

// ---- lower bounds on lambda ----

/// Generalized Welch bound for time-phase sets:
/// w_k = [(n^2 M - C) / ((n^2 M - 1) C)]^(1/2k), C = binom(n+k-1, k).
pub fn welch_timephase(n: u64, m: u64, k: u32) -> Result<BoundEval, BoundError> {
    check_nm(n, m)?;
    if k < 1 {
        return Err(BoundError::InvalidK(k));
    }
    let c = binomial(n + k as u64 - 1, k as u64);
    let size = BigUint::from(n) * n * m;
    if size <= c {
        return Ok(BoundEval::flagged(0.0, "vacuous: n^2 M <= binom(n+k-1, k)"));
    }
    let num = &size - &c;
    let den = (&size - 1u32) * &c;
    Ok(BoundEval::ok(ratio_f64(&num, &den).powf(1.0 / (2.0 * k as f64))))
}

/// Levenstein-type bound for time-phase sets, valid for M > 1.
pub fn levenstein_timephase(n: u64, m: u64) -> Result<BoundEval, BoundError> {
    check_nm(n, m)?;
    let (nf, mf) = (n as f64, m as f64);
    let value = ((2.0 * nf * mf - nf - 1.0) / ((nf + 1.0) * (nf * mf - 1.0))).sqrt();
    if m == 1 {
        Ok(BoundEval::flagged(value, "requires M > 1"))
    } else {
        Ok(BoundEval::ok(value))
    }
}

/// Welch bound on nu for an (n, M) time signal set.
pub fn welch_time(n: u64, m: u64, k: u32) -> Result<BoundEval, BoundError> {
    check_nm(n, m)?;
    if k < 1 {
        return Err(BoundError::InvalidK(k));
    }
    if m == 1 {
        return Ok(BoundEval::flagged(0.0, "degenerate: M = 1"));
    }
    let c = binomial(n + k as u64 - 1, k as u64);
    let mb = BigUint::from(m);
    if mb <= c {
        return Ok(BoundEval::flagged(0.0, "vacuous: M <= binom(n+k-1, k)"));
    }
    let num = &mb - &c;
    let den = (&mb - 1u32) * &c;
    let mut eval = BoundEval::ok(ratio_f64(&num, &den).powf(1.0 / (2.0 * k as f64)));
    if m < n {
        eval.applicable = false;
        eval.note = "requires M >= n".into();
    }
    Ok(eval)
}

/// Classical Levenstein bound on nu for real (M > n(n+1)/2) or complex
/// (M > n^2) time signal sets.
pub fn levenstein_time(n: u64, m: u64, alphabet: TimeAlphabet) -> Result<BoundEval, BoundError> {
    check_nm(n, m)?;
    let (nf, mf) = (n as f64, m as f64);
    let (ratio, threshold, note) = match alphabet {
        TimeAlphabet::Real => (
            (3.0 * mf - nf * nf - 2.0 * nf) / ((nf + 2.0) * (mf - nf)),
            n * (n + 1) / 2,
            "requires M > n(n+1)/2",
        ),
        TimeAlphabet::Complex => (
            (2.0 * mf - nf * nf - nf) / ((nf + 1.0) * (mf - nf)),
            n * n,
            "requires M > n^2",
        ),
    };
    if m <= threshold {
        let value = if ratio.is_finite() && ratio > 0.0 {
            ratio.sqrt()
        } else {
            0.0
        };
        return Ok(BoundEval::flagged(value, note));
    }
    Ok(root_or_flag(ratio, 2.0, "vacuous: negative radicand"))
}

/// Largest admissible Sidelnikov k: floor(2n/5) for q = 2, n for q > 2
/// (binom(n, k) vanishes beyond n).
pub fn sidelnikov_k_max(n: u64, class: SidelnikovClass) -> u32 {
    match class {
        SidelnikovClass::Binary => (2 * n / 5) as u32,
        SidelnikovClass::NonBinary => n as u32,
    }
}

/// Sidelnikov-type lower bound on lambda for q-ary time-phase sets. The
/// returned value is lambda (the square root of the clamped bound on
/// lambda^2); [`sidelnikov_timephase_squared`] exposes the raw expression.
pub fn sidelnikov_timephase(
    n: u64,
    m: u64,
    class: SidelnikovClass,
    k: u32,
) -> Result<BoundEval, BoundError> {
    let raw = sidelnikov_timephase_squared(n, m, class, k)?;
    if raw > 0.0 {
        Ok(BoundEval::ok(raw.sqrt()))
    } else {
        Ok(BoundEval::flagged(0.0, "vacuous: bound on lambda^2 is not positive"))
    }
}

/// The right-hand side of the Sidelnikov bound on lambda^2, unclamped.
pub fn sidelnikov_timephase_squared(
    n: u64,
    m: u64,
    class: SidelnikovClass,
    k: u32,
) -> Result<f64, BoundError> {
    check_nm(n, m)?;
    let max = sidelnikov_k_max(n, class);
    if k > max {
        return Err(BoundError::KOutOfRange { k, max });
    }
    let (nf, kf) = (n as f64, k as f64);
    let k64 = k as u64;
    let num = BigUint::from(2u32).pow(k) * BigUint::from(n).pow(2 * k);
    let (lead, den) = match class {
        SidelnikovClass::Binary => (
            (2.0 * kf + 1.0) * (nf - kf) / (nf * nf) + kf * (kf + 1.0) / (2.0 * nf * nf),
            BigUint::from(n) * m * factorial(2 * k64) * binomial(n, k64),
        ),
        SidelnikovClass::NonBinary => {
            let kf_fact = factorial(k64);
            (
                (kf + 1.0) * (2.0 * nf - kf) / (2.0 * nf * nf),
                BigUint::from(n) * m * &kf_fact * &kf_fact * binomial(n, k64),
            )
        }
    };
    Ok(lead - ratio_f64(&num, &den))
}

/// Sidelnikov bound maximized over admissible k; returns (k, bound).
pub fn best_sidelnikov(
    n: u64,
    m: u64,
    class: SidelnikovClass,
) -> Result<(u32, BoundEval), BoundError> {
    let mut best: Option<(u32, BoundEval)> = None;
    for k in 0..=sidelnikov_k_max(n, class) {
        let eval = sidelnikov_timephase(n, m, class, k)?;
        if best.as_ref().is_none_or(|(_, b)| eval.value > b.value) {
            best = Some((k, eval));
        }
    }
    Ok(best.expect("k = 0 is always admissible"))
}

// ---- linear-programming upper bounds on M ----

/// Which family of piecewise LP bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpFamily {
    Complex,
    Binary,
    Qary,
}

impl LpFamily {
    pub fn pieces(self) -> usize {
        match self {
            LpFamily::Complex | LpFamily::Binary => 4,
            LpFamily::Qary => 3,
        }
    }
}

/// Piece selected for a given lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBound {
    /// 1-based piece index
    pub piece: usize,
    /// bound on nM
    pub nm_bound: f64,
    /// bound on M (nm_bound / n), unfloored
    pub m_bound: f64,
}

/// Interval of lambda^2 covered by one piece: `(lo, lo_closed, hi)`, hi closed.
pub fn lp_interval(family: LpFamily, n: u64, piece: usize) -> (f64, bool, f64) {
    let n = n as f64;
    let n2 = n * n;
    match family {
        LpFamily::Complex => {
            let a3 = (2.0 * (n + 2.0) + (2.0 * (n + 1.0) * (n + 2.0)).sqrt()) / ((n + 2.0) * (n + 3.0));
            let a4 = (3.0 * (n + 3.0) + (3.0 * (n + 3.0) * (n + 1.0)).sqrt()) / ((n + 3.0) * (n + 4.0));
            match piece {
                1 => (0.0, false, 1.0 / (n + 1.0)),
                2 => (1.0 / (n + 1.0), false, 2.0 / (n + 2.0)),
                3 => (2.0 / (n + 2.0), false, a3),
                4 => (a3, true, a4),
                _ => panic!("complex LP bound has 4 pieces"),
            }
        }
        LpFamily::Binary => {
            let b3 = (3.0 * n - 10.0 + (6.0 * n2 - 42.0 * n + 76.0).sqrt()) / n2;
            let b4 = (5.0 * (n - 4.0) + (10.0 * n2 - 90.0 * n + 216.0).sqrt()) / n2;
            match piece {
                1 => (0.0, true, (n - 2.0) / n2),
                2 => ((n - 2.0) / n2, true, (3.0 * n - 8.0) / n2),
                3 => ((3.0 * n - 8.0) / n2, true, b3),
                4 => (b3, true, b4),
                _ => panic!("binary LP bound has 4 pieces"),
            }
        }
        LpFamily::Qary => {
            let c2 = (2.0 * n2 - 5.0 * n + 4.0) / (n2 * (n - 1.0));
            let c3 = (2.0 * n - 2.0 + (2.0 * n2 - 5.0 * n + 4.0).sqrt()) / n2;
            match piece {
                1 => (0.0, true, (n - 1.0) / n2),
                2 => ((n - 1.0) / n2, true, c2),
                3 => (c2, true, c3),
                _ => panic!("q-ary LP bound has 3 pieces"),
            }
        }
    }
}

/// Right-hand side (bound on nM) of one piece at x = lambda^2, evaluated
/// regardless of whether x lies in the piece's interval.
///
/// Complex piece 3 uses the numerator n(n+1)(1-x)(1-(n+2)x): the degree-3
/// Delsarte polynomial (t - x)(t - a)^2 optimized over a. This piece is
/// continuous with pieces 2 and 4 at both ends. The binary pieces 3-4 and
/// q-ary piece 3 are read with lambda throughout.
pub fn lp_piece(family: LpFamily, n: u64, piece: usize, x: f64) -> f64 {
    let n = n as f64;
    let n2 = n * n;
    let n4 = n2 * n2;
    match (family, piece) {
        (_, 1) => (1.0 - x) / (1.0 - n * x),
        (LpFamily::Complex, 2) => (n + 1.0) * (1.0 - x) / (2.0 - (n + 1.0) * x),
        (LpFamily::Complex, 3) => {
            n * (n + 1.0) * (1.0 - x) * (1.0 - (n + 2.0) * x)
                / ((n + 1.0) * (n + 2.0) * x * x - 4.0 * (n + 1.0) * x + 2.0)
        }
        (LpFamily::Complex, 4) => {
            n * (n + 1.0) * (n + 2.0) * ((n + 3.0) * x - 2.0) * (1.0 - x)
                / (12.0 * (n + 2.0) * x - 2.0 * (n + 2.0) * (n + 3.0) * x * x - 12.0)
        }
        (LpFamily::Binary, 2) => n2 * (1.0 - x) / (3.0 * n - 2.0 - n2 * x),
        (LpFamily::Binary, 3) => {
            n * (1.0 - x) * ((n - 2.0) * (n2 - 3.0 * n + 8.0) - (n2 - n + 2.0) * n2 * x)
                / (6.0 * n * (n - 2.0) - 4.0 * (3.0 * n - 4.0) * n2 * x + 2.0 * n4 * x * x)
        }
        (LpFamily::Binary, 4) => {
            n2 * (1.0 - x) / 6.0
                * (3.0 * n2 * n - 23.0 * n2 + 90.0 * n - 136.0 - (n2 - 3.0 * n + 8.0) * n2 * x)
                / (15.0 * n2 - 50.0 * n + 24.0 - 10.0 * (n - 2.0) * n2 * x + n4 * x * x)
        }
        (LpFamily::Qary, 2) => n2 * (1.0 - x) / (2.0 * n - 1.0 - n2 * x),
        (LpFamily::Qary, 3) => {
            n2 * (1.0 - x) * ((n2 - n + 1.0) * n2 * x - n2 * n + 3.0 * n2 - 5.0 * n + 4.0)
                / (n * (4.0 * (n - 1.0) * n2 * x - n4 * x * x - 2.0 * n2 + 3.0 * n))
        }
        _ => panic!("piece {piece} out of range"),
    }
}

fn in_interval(x: f64, (lo, lo_closed, hi): (f64, bool, f64)) -> bool {
    if lo > hi {
        return false;
    }
    let slack = INTERVAL_SLACK * hi.abs().max(1e-300);
    let above_lo = if lo_closed {
        x >= lo - slack
    } else {
        x > lo + slack || (x > lo && lo == 0.0)
    };
    above_lo && x <= hi + slack
}

/// Selects the piece containing lambda^2 and evaluates it. The first piece
/// whose interval contains lambda^2 wins at shared endpoints.
pub fn lp_bound(family: LpFamily, n: u64, lambda: f64) -> Result<LpBound, BoundError> {
    if n < 2 {
        return Err(BoundError::InvalidN(n));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(BoundError::InvalidLambda(lambda));
    }
    let x = lambda * lambda;
    for piece in 1..=family.pieces() {
        if !in_interval(x, lp_interval(family, n, piece)) {
            continue;
        }
        let nm_bound = lp_piece(family, n, piece, x);
        if nm_bound.is_finite() && nm_bound > 0.0 {
            return Ok(LpBound {
                piece,
                nm_bound,
                m_bound: nm_bound / n as f64,
            });
        }
    }
    Err(BoundError::IntervalGap { lambda2: x })
}

/// LP bound for arbitrary complex time-phase sets.
pub fn lp_bound_complex(n: u64, lambda: f64) -> Result<LpBound, BoundError> {
    lp_bound(LpFamily::Complex, n, lambda)
}

/// LP bound stated for binary time-phase sets.
pub fn lp_bound_binary(n: u64, lambda: f64) -> Result<LpBound, BoundError> {
    lp_bound(LpFamily::Binary, n, lambda)
}

/// LP bound for q-ary (q >= 3) time-phase sets.
pub fn lp_bound_qary(n: u64, lambda: f64) -> Result<LpBound, BoundError> {
    lp_bound(LpFamily::Qary, n, lambda)
}

// ---- report ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    LowerOnLambda,
    UpperOnM,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::LowerOnLambda => "lower-on-lambda",
            BoundKind::UpperOnM => "upper-on-M",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: f64,
    pub applicable: bool,
    pub note: String,
}

impl BoundEntry {
    fn from_eval(name: impl Into<String>, kind: BoundKind, eval: BoundEval) -> Self {
        BoundEntry {
            name: name.into(),
            kind,
            value: eval.value,
            applicable: eval.applicable,
            note: eval.note,
        }
    }
}

fn join_note(a: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b.to_string(),
        (_, true) => a.to_string(),
        _ => format!("{a}; {b}"),
    }
}

/// Every bound for the query. Lower bounds on lambda always; upper bounds on
/// M only when `lambda` is given.
pub fn bound_table(query: &BoundQuery, lambda: Option<f64>) -> Result<Vec<BoundEntry>, BoundError> {
    let BoundQuery { n, m, alphabet, k } = *query;
    check_nm(n, m)?;
    let lower = BoundKind::LowerOnLambda;
    let mut out = Vec::new();

    let mut ks = vec![1, 2];
    if let Some(k) = k {
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    for k in ks {
        out.push(BoundEntry::from_eval(
            format!("welch_timephase_k{k}"),
            lower,
            welch_timephase(n, m, k)?,
        ));
    }
    out.push(BoundEntry::from_eval("levenstein_timephase", lower, levenstein_timephase(n, m)?));
    out.push(BoundEntry::from_eval("welch_time_k1", lower, welch_time(n, m, 1)?));
    out.push(BoundEntry::from_eval(
        "levenstein_time_complex",
        lower,
        levenstein_time(n, m, TimeAlphabet::Complex)?,
    ));
    let mut real = BoundEntry::from_eval(
        "levenstein_time_real",
        lower,
        levenstein_time(n, m, TimeAlphabet::Real)?,
    );
    if !alphabet.is_real() {
        real.applicable = false;
        real.note = join_note(&real.note, "requires a real alphabet");
    }
    out.push(real);

    let (k_nb, nb) = best_sidelnikov(n, m, SidelnikovClass::NonBinary)?;
    let mut nb = BoundEntry::from_eval("sidelnikov_timephase_qary", lower, nb);
    nb.note = join_note(&format!("k={k_nb}"), &nb.note);
    if !alphabet.has_roots_of_unity() {
        nb.applicable = false;
        nb.note = join_note(&nb.note, "requires a roots-of-unity alphabet");
    }
    out.push(nb);

    let (k_b, b) = best_sidelnikov(n, m, SidelnikovClass::Binary)?;
    let mut b = BoundEntry::from_eval("sidelnikov_timephase_binary", lower, b);
    b.note = join_note(&format!("k={k_b}"), &b.note);
    apply_binary_rule(&mut b, alphabet, n);
    out.push(b);

    if let Some(lambda) = lambda {
        let upper = BoundKind::UpperOnM;
        for (name, family) in [
            ("lp_complex", LpFamily::Complex),
            ("lp_binary", LpFamily::Binary),
            ("lp_qary", LpFamily::Qary),
        ] {
            let mut entry = match lp_bound(family, n, lambda.clamp(0.0, 1.0)) {
                Ok(lp) => {
                    let note = format!("piece {}", lp.piece);
                    BoundEntry {
                        name: name.into(),
                        kind: upper,
                        value: lp.m_bound,
                        applicable: true,
                        note,
                    }
                }
                Err(e) => BoundEntry {
                    name: name.into(),
                    kind: upper,
                    value: 0.0,
                    applicable: false,
                    note: e.to_string(),
                },
            };
            match family {
                LpFamily::Complex => {}
                LpFamily::Binary => apply_binary_rule(&mut entry, alphabet, n),
                LpFamily::Qary => {
                    if !alphabet.has_roots_of_unity() {
                        entry.applicable = false;
                        entry.note = join_note(&entry.note, "requires a roots-of-unity alphabet");
                    }
                }
            }
            out.push(entry);
        }
        // Every time-phase bound is derived through a bridge, which needs
        // lambda < 1.
        if lambda >= 1.0 - DEGENERATE_LAMBDA_TOL {
            for entry in out.iter_mut() {
                if entry.name.contains("timephase") || entry.name.starts_with("lp_") {
                    entry.applicable = false;
                    entry.note = join_note(&entry.note, "requires lambda < 1");
                }
            }
        }
    }
    Ok(out)
}

/// The q = 2 bounds only transfer through the phase bridge when the bridged
/// set stays binary, which happens only for n = 2 (modulation by +-1).
fn apply_binary_rule(entry: &mut BoundEntry, alphabet: Alphabet, n: u64) {
    if alphabet != Alphabet::Binary {
        entry.applicable = false;
        entry.note = join_note(&entry.note, "requires a binary alphabet");
    } else if n > 2 {
        entry.applicable = false;
        entry.note = join_note(&entry.note, "phase bridge leaves the binary alphabet for n > 2");
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// an applicable bound is met
    Optimal,
    /// relative gap to the best applicable lower bound on lambda
    WithinEpsilon(f64),
    /// lambda = 1: some signal coincides with a shifted, modulated member
    NotOptimal,
    /// no applicable bound carries information
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Optimal => f.write_str("optimal"),
            Verdict::WithinEpsilon(d) => write!(f, "within_epsilon({d:.9})"),
            Verdict::NotOptimal => f.write_str("not_optimal"),
            Verdict::Undetermined => f.write_str("undetermined"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Result of [`judge`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub lambda: f64,
    pub alphabet: Alphabet,
    pub entries: Vec<BoundEntry>,
    pub verdict: Verdict,
    /// name of the bound that certifies optimality
    pub certificate: Option<String>,
    pub best_lower: Option<(String, f64)>,
    /// (lambda - best lower) / best lower
    pub gap: Option<f64>,
    /// applicable bounds the measured set contradicts
    pub violations: Vec<String>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Compares a measured profile against every applicable bound.
///
/// Optimal when the floored M-bound at the measured lambda equals M, or the
/// measured lambda meets a lower bound within [`VERDICT_TOL`]. Among several
/// certifying M-bounds the smallest is reported.
pub fn judge(profile: &CorrelationProfile, query: &BoundQuery) -> Result<BoundReport, BoundError> {
    let lambda = profile.lambda;
    let entries = bound_table(query, Some(lambda))?;
    let m = query.m as f64;

    let mut violations = Vec::new();
    for e in entries.iter().filter(|e| e.applicable) {
        let violated = match e.kind {
            BoundKind::LowerOnLambda => lambda < e.value - VERDICT_TOL,
            BoundKind::UpperOnM => m > e.value + VERDICT_TOL,
        };
        if violated {
            violations.push(e.name.clone());
        }
    }

    let certificate = entries
        .iter()
        .filter(|e| e.applicable && e.kind == BoundKind::UpperOnM)
        .filter(|e| (e.value + VERDICT_TOL).floor() == m)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .or_else(|| {
            entries.iter().find(|e| {
                e.applicable
                    && e.kind == BoundKind::LowerOnLambda
                    && e.value > 0.0
                    && (lambda - e.value).abs() <= VERDICT_TOL
            })
        })
        .map(|e| e.name.clone());

    let best_lower = entries
        .iter()
        .filter(|e| e.applicable && e.kind == BoundKind::LowerOnLambda && e.value > 0.0)
        .fold(None::<&BoundEntry>, |best, e| match best {
            Some(b) if b.value >= e.value => Some(b),
            _ => Some(e),
        })
        .map(|e| (e.name.clone(), e.value));
    let gap = best_lower.as_ref().map(|(_, v)| (lambda - v) / v);

    let verdict = if lambda >= 1.0 - DEGENERATE_LAMBDA_TOL {
        Verdict::NotOptimal
    } else if certificate.is_some() {
        Verdict::Optimal
    } else if let Some(d) = gap {
        Verdict::WithinEpsilon(d)
    } else {
        Verdict::Undetermined
    };

    Ok(BoundReport {
        n: query.n,
        m: query.m,
        lambda,
        alphabet: query.alphabet,
        entries,
        verdict,
        certificate,
        best_lower,
        gap,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn exact_binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(10), BigUint::from(3628800u32));
    }

    #[test]
    fn ratio_handles_huge_operands() {
        let num = BigUint::from(3u32).pow(400);
        let den = BigUint::from(3u32).pow(399) * 2u32;
        assert!(close(ratio_f64(&num, &den), 1.5, 1e-15));
        assert!(close(ratio_f64(&BigUint::from(1u32), &BigUint::from(3u32)), 1.0 / 3.0, 1e-16));
    }

    #[test]
    fn welch_timephase_examples() {
        assert!(close(welch_timephase(3, 1, 1).unwrap().value, 0.5, 1e-15));
        assert!(close(welch_timephase(2, 1, 1).unwrap().value, 1.0 / 3f64.sqrt(), 1e-15));
        assert!(close(welch_timephase(3, 1, 2).unwrap().value, 0.5, 1e-15));
        assert_eq!(welch_timephase(3, 1, 0), Err(BoundError::InvalidK(0)));
    }

    #[test]
    fn welch_timephase_vacuous_regime() {
        // n = 2, k = 4: n^2 M = 4 < binom(5, 4) = 5
        let e = welch_timephase(2, 1, 4).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(!e.applicable);
    }

    #[test]
    fn levenstein_timephase_examples() {
        assert!(close(levenstein_timephase(4, 2).unwrap().value, (11.0f64 / 35.0).sqrt(), 1e-15));
        let single = levenstein_timephase(3, 1).unwrap();
        assert!(close(single.value, 0.5, 1e-15));
        assert!(!single.applicable);
        assert!(close(levenstein_timephase(3, 2).unwrap().value, 0.4f64.sqrt(), 1e-15));
    }

    #[test]
    fn welch_time_examples() {
        assert!(close(welch_time(3, 9, 1).unwrap().value, 0.5, 1e-15));
        assert_eq!(welch_time(3, 3, 1).unwrap().value, 0.0);
        assert!(close(welch_time(2, 4, 1).unwrap().value, 1.0 / 3f64.sqrt(), 1e-15));
        let degenerate = welch_time(3, 1, 1).unwrap();
        assert_eq!(degenerate.value, 0.0);
        assert!(!degenerate.applicable);
    }

    #[test]
    fn levenstein_time_examples() {
        assert!(close(levenstein_time(2, 5, TimeAlphabet::Complex).unwrap().value, 2.0 / 3.0, 1e-15));
        assert!(!levenstein_time(2, 4, TimeAlphabet::Complex).unwrap().applicable);
        assert!(close(levenstein_time(2, 4, TimeAlphabet::Real).unwrap().value, 0.5f64.sqrt(), 1e-15));
        assert!(levenstein_time(2, 4, TimeAlphabet::Real).unwrap().applicable);
    }

    #[test]
    fn lp_complex_examples() {
        // piece 1 formula at lambda^2 = 0.24, n = 3
        assert!(close(lp_piece(LpFamily::Complex, 3, 1, 0.24) / 3.0, 0.76 / 0.28 / 3.0, 1e-12));
        let b = lp_bound_complex(3, 0.24f64.sqrt()).unwrap();
        assert_eq!(b.piece, 1);
        assert!(close(b.nm_bound, 0.76 / 0.28, 1e-12));
        // junction of pieces 1 and 2
        let x = 1.0 / 4.0;
        assert!(close(lp_piece(LpFamily::Complex, 3, 1, x), lp_piece(LpFamily::Complex, 3, 2, x), 1e-9));
        // piece 2 at the time-phase Levenstein value recovers nM
        let lam = levenstein_timephase(4, 2).unwrap().value;
        let b = lp_bound_complex(4, lam).unwrap();
        assert_eq!(b.piece, 2);
        assert!(close(b.nm_bound, 8.0, 1e-9));
    }

    #[test]
    fn lp_complex_piece3_matches_neighbours() {
        for n in 2..=20u64 {
            let x2 = lp_interval(LpFamily::Complex, n, 2).2;
            let x3 = lp_interval(LpFamily::Complex, n, 3).2;
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            assert!(rel(lp_piece(LpFamily::Complex, n, 2, x2), lp_piece(LpFamily::Complex, n, 3, x2)) < 1e-9);
            assert!(rel(lp_piece(LpFamily::Complex, n, 3, x3), lp_piece(LpFamily::Complex, n, 4, x3)) < 1e-9);
        }
    }

    #[test]
    fn lp_binary_examples() {
        let b = lp_bound_binary(8, 0.05f64.sqrt()).unwrap();
        assert_eq!(b.piece, 1);
        assert!(close(b.m_bound, 0.95 / 0.6 / 8.0, 1e-12));
        let x = 6.0 / 64.0;
        assert!(close(lp_piece(LpFamily::Binary, 8, 1, x), lp_piece(LpFamily::Binary, 8, 2, x), 1e-9));
        // piece 2 is tighter than complex piece 2 for n > 2
        for n in 3..=16u64 {
            let lo = lp_interval(LpFamily::Binary, n, 2).0.max(lp_interval(LpFamily::Complex, n, 2).0);
            let x = lo + 1e-4;
            assert!(lp_piece(LpFamily::Binary, n, 2, x) < lp_piece(LpFamily::Complex, n, 2, x), "n = {n}");
        }
    }

    #[test]
    fn lp_qary_examples() {
        // n = 3, lambda^2 = 4/9: piece 2 formula gives M <= 5/3
        assert!(close(lp_piece(LpFamily::Qary, 3, 2, 4.0 / 9.0) / 3.0, 5.0 / 3.0, 1e-12));
        // n = 7, lambda^2 = 8/49: 41/35
        let b = lp_bound_qary(7, (8.0f64 / 49.0).sqrt()).unwrap();
        assert_eq!(b.piece, 2);
        assert!(close(b.m_bound, 41.0 / 35.0, 1e-12));
        assert_eq!(b.m_bound.floor(), 1.0);
        let x = 6.0 / 49.0;
        assert!(close(lp_piece(LpFamily::Qary, 7, 1, x), lp_piece(LpFamily::Qary, 7, 2, x), 1e-9));
    }

    #[test]
    fn lp_rejects_gap_and_bad_lambda() {
        assert!(matches!(lp_bound_complex(3, 0.99), Err(BoundError::IntervalGap { .. })));
        assert!(matches!(lp_bound_qary(3, 1.5), Err(BoundError::InvalidLambda(_))));
    }

    #[test]
    fn sidelnikov_examples() {
        // k = 0, q > 2: 1/n - 1/(nM)
        let raw = sidelnikov_timephase_squared(5, 3, SidelnikovClass::NonBinary, 0).unwrap();
        assert!(close(raw, 1.0 / 5.0 - 1.0 / 15.0, 1e-15));
        let raw = sidelnikov_timephase_squared(6, 1, SidelnikovClass::NonBinary, 0).unwrap();
        assert!(close(raw, 0.0, 1e-15));
        assert_eq!(sidelnikov_timephase(6, 1, SidelnikovClass::NonBinary, 0).unwrap().value, 0.0);
        // n = 8, M = 2, q = 2, k = 1: 21/64 + 1/64 - 1/2 < 0
        let raw = sidelnikov_timephase_squared(8, 2, SidelnikovClass::Binary, 1).unwrap();
        assert!(close(raw, 21.0 / 64.0 + 1.0 / 64.0 - 0.5, 1e-15));
        let clamped = sidelnikov_timephase(8, 2, SidelnikovClass::Binary, 1).unwrap();
        assert_eq!(clamped.value, 0.0);
        assert!(!clamped.applicable);
        assert_eq!(
            sidelnikov_timephase(8, 2, SidelnikovClass::Binary, 4),
            Err(BoundError::KOutOfRange { k: 4, max: 3 })
        );
    }

    #[test]
    fn best_sidelnikov_dominates_each_k() {
        let (k, best) = best_sidelnikov(12, 3, SidelnikovClass::NonBinary).unwrap();
        for j in 0..=12 {
            let e = sidelnikov_timephase(12, 3, SidelnikovClass::NonBinary, j).unwrap();
            assert!(best.value >= e.value);
        }
        assert!(k <= 12);
    }

    #[test]
    fn query_validation() {
        assert_eq!(BoundQuery::new(1, 1, Alphabet::Complex, None), Err(BoundError::InvalidN(1)));
        assert_eq!(BoundQuery::new(3, 0, Alphabet::Complex, None), Err(BoundError::InvalidM(0)));
        assert_eq!(BoundQuery::new(3, 1, Alphabet::Complex, Some(0)), Err(BoundError::InvalidK(0)));
        assert_eq!("qary".parse::<Alphabet>(), Ok(Alphabet::Qary));
        assert!("octal".parse::<Alphabet>().is_err());
    }

    #[test]
    fn table_contents() {
        let q = BoundQuery::new(3, 1, Alphabet::Complex, Some(3)).unwrap();
        let t = bound_table(&q, None).unwrap();
        let w1 = t.iter().find(|e| e.name == "welch_timephase_k1").unwrap();
        assert!(close(w1.value, 0.5, 1e-15));
        assert!(t.iter().any(|e| e.name == "welch_timephase_k3"));
        assert!(t.iter().all(|e| e.kind == BoundKind::LowerOnLambda));
        let with_lambda = bound_table(&q, Some(0.6)).unwrap();
        assert!(with_lambda.iter().any(|e| e.name == "lp_complex"));
    }

    fn profile_with_lambda(lambda: f64) -> CorrelationProfile {
        CorrelationProfile {
            nu: 0.0,
            theta: 0.0,
            lambda,
            witness_nu: None,
            witness_theta: None,
            witness_lambda: None,
            papr_max: 0.0,
        }
    }

    #[test]
    fn judge_cons1_q4_is_optimal_by_qary_bound() {
        let q = BoundQuery::new(3, 1, Alphabet::Binary, None).unwrap();
        let r = judge(&profile_with_lambda(2.0 / 3.0), &q).unwrap();
        assert_eq!(r.verdict, Verdict::Optimal);
        assert_eq!(r.certificate.as_deref(), Some("lp_qary"));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        // gap to w_1 = 1/2 is still reported
        let (name, value) = r.best_lower.clone().unwrap();
        assert!(value >= 0.5 - 1e-15, "{name}");
    }

    #[test]
    fn judge_degenerate_lambda() {
        let q = BoundQuery::new(3, 2, Alphabet::Complex, None).unwrap();
        let r = judge(&profile_with_lambda(1.0), &q).unwrap();
        assert_eq!(r.verdict, Verdict::NotOptimal);
    }

    #[test]
    fn verdict_display() {
        assert_eq!(Verdict::WithinEpsilon(0.25).to_string(), "within_epsilon(0.250000000)");
        assert_eq!(Verdict::Optimal.to_string(), "optimal");
    }
}
