//! Signals on Z_n, time shift and modulation, exhaustive correlation search,
//! and the two bridges from time-phase sets to time sets.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::{root_of_unity, ComplexValue};
use crate::field::FieldInfo;

/// Allowed deviation of a member's squared norm from 1.
pub const UNIT_NORM_TOL: f64 = 1e-9;
/// Max coordinate difference below which two signals count as equal.
pub const DISTINCT_TOL: f64 = 1e-6;
/// Bridges require lambda below `1 - DEGENERATE_LAMBDA_TOL`.
pub const DEGENERATE_LAMBDA_TOL: f64 = 1e-9;
/// Correlation values this close are ties for witness selection.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("period mismatch: expected {expected}, got {got}")]
    PeriodMismatch { expected: usize, got: usize },
    #[error("period must be at least 2, got {0}")]
    PeriodTooShort(usize),
    #[error("signal set is empty")]
    EmptySet,
    #[error("signal {index} is not unit: norm {norm}")]
    NotUnit { index: usize, norm: f64 },
    #[error("signal {index} has a non-finite entry")]
    NonFinite { index: usize },
    #[error("signals {first} and {second} coincide")]
    DuplicateSignals { first: usize, second: usize },
    #[error("lambda = {lambda} is not below 1; the bridge would produce duplicates")]
    DegenerateLambda { lambda: f64 },
}

/// A function on Z_n.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<ComplexValue>,
}

impl Signal {
    pub fn new(values: Vec<ComplexValue>) -> Result<Self, SignalError> {
        if values.len() < 2 {
            return Err(SignalError::PeriodTooShort(values.len()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SignalError::NonFinite { index: 0 });
        }
        Ok(Signal { values })
    }

    /// Standard basis vector e_k of Z_n.
    pub fn basis(n: usize, k: usize) -> Result<Self, SignalError> {
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        if k < n {
            values[k] = Complex64::new(1.0, 0.0);
        }
        Signal::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coordinate modulus.
    pub fn papr(&self) -> f64 {
        papr(self)
    }

    fn max_coord_diff(&self, other: &Signal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Provenance attached to a signal set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetMeta {
    pub construction: String,
    pub field: Option<FieldInfo>,
    pub e: Option<u64>,
}

impl SetMeta {
    pub fn external() -> Self {
        SetMeta {
            construction: "external".to_string(),
            field: None,
            e: None,
        }
    }
}

/// An (n, M) set of distinct unit signals.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    n: usize,
    signals: Vec<Signal>,
    meta: SetMeta,
}

impl SignalSet {
    pub fn new(signals: Vec<Signal>, meta: SetMeta) -> Result<Self, SignalError> {
        let first = signals.first().ok_or(SignalError::EmptySet)?;
        let n = first.n();
        for (index, s) in signals.iter().enumerate() {
            if s.n() != n {
                return Err(SignalError::PeriodMismatch {
                    expected: n,
                    got: s.n(),
                });
            }
            let norm_sq: f64 = s.values.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > UNIT_NORM_TOL {
                return Err(SignalError::NotUnit {
                    index,
                    norm: norm_sq.sqrt(),
                });
            }
        }
        if let Some((first, second)) = find_duplicate(&signals) {
            return Err(SignalError::DuplicateSignals { first, second });
        }
        Ok(SignalSet { n, signals, meta })
    }

    /// {e_0, ..., e_{n-1}}.
    pub fn orthonormal_basis(n: usize) -> Result<Self, SignalError> {
        let signals = (0..n)
            .map(|k| Signal::basis(n, k))
            .collect::<Result<Vec<_>, _>>()?;
        SignalSet::new(signals, SetMeta::external())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of signals M.
    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn meta(&self) -> &SetMeta {
        &self.meta
    }
}

/// Finds a pair of signals whose max coordinate difference is at most
/// [`DISTINCT_TOL`], or `None`.
///
/// Signals are sorted by a fixed linear functional of their coordinates;
/// any near-duplicate pair lies within a bounded key window, so only
/// neighbours in that window are compared coordinate by coordinate.
pub fn find_duplicate(signals: &[Signal]) -> Option<(usize, usize)> {
    let n = signals.first()?.n();
    let weights: Vec<(f64, f64)> = (0..n)
        .map(|t| {
            let t = t as f64 + 1.0;
            (1.0 + (t * 0.618_033_988_749_895).fract(), 1.0 + (t * 0.754_877_666_246_693).fract())
        })
        .collect();
    let window = DISTINCT_TOL * weights.iter().map(|(a, b)| a + b).sum::<f64>() * (1.0 + 1e-9);
    let mut keyed: Vec<(f64, usize)> = signals
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let key = s
                .values
                .iter()
                .zip(&weights)
                .map(|(z, (a, b))| a * z.re + b * z.im)
                .sum::<f64>();
            (key, i)
        })
        .collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut best: Option<(usize, usize)> = None;
    for (pos, &(key, i)) in keyed.iter().enumerate() {
        for &(other_key, j) in &keyed[pos + 1..] {
            if other_key - key > window {
                break;
            }
            if signals[i].max_coord_diff(&signals[j]) <= DISTINCT_TOL {
                let pair = (i.min(j), i.max(j));
                best = Some(best.map_or(pair, |b| b.min(pair)));
            }
        }
    }
    best
}

/// Hermitian product sum_t a(t) conj(b(t)).
pub fn inner(a: &Signal, b: &Signal) -> Result<ComplexValue, SignalError> {
    if a.n() != b.n() {
        return Err(SignalError::PeriodMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x * y.conj())
        .sum())
}

/// (L_tau s)(t) = s(t + tau).
pub fn time_shift(s: &Signal, tau: i64) -> Signal {
    let n = s.n();
    let tau = tau.rem_euclid(n as i64) as usize;
    Signal {
        values: (0..n).map(|t| s.values[(t + tau) % n]).collect(),
    }
}

/// (M_w s)(t) = e^(2 pi i w t / n) s(t).
pub fn modulate(s: &Signal, w: i64) -> Signal {
    let n = s.n();
    let w = w.rem_euclid(n as i64) as u64;
    Signal {
        values: s
            .values
            .iter()
            .enumerate()
            .map(|(t, z)| root_of_unity(((w * t as u64) % n as u64) as i64, n as u64) * z)
            .collect(),
    }
}

/// Largest coordinate modulus.
pub fn papr(s: &Signal) -> f64 {
    s.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// nu, theta and lambda of a set with their lexicographically smallest
/// maximizing index tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub nu: f64,
    pub theta: f64,
    pub lambda: f64,
    /// (j, j'); absent when M = 1
    pub witness_nu: Option<(usize, usize)>,
    /// (j, j', tau)
    pub witness_theta: Option<(usize, usize, usize)>,
    /// (j, j', w, tau)
    pub witness_lambda: Option<(usize, usize, usize, usize)>,
    pub papr_max: f64,
}

/// e^(-2 pi i k / n) for k in 0..n.
fn conj_twiddles(n: usize) -> Vec<ComplexValue> {
    (0..n).map(|k| root_of_unity(-(k as i64), n as u64)).collect()
}

/// |<a, M_w L_tau b>| for every (w, tau), laid out as `w * n + tau`.
fn ambiguity_block(a: &Signal, b: &Signal, twiddles: &[ComplexValue], out: &mut [f64]) {
    let n = a.n();
    let mut prod = vec![Complex64::new(0.0, 0.0); n];
    for tau in 0..n {
        for (t, slot) in prod.iter_mut().enumerate() {
            *slot = a.values[t] * b.values[(t + tau) % n].conj();
        }
        for w in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut k = 0usize;
            for c in &prod {
                acc += c * twiddles[k];
                k += w;
                if k >= n {
                    k -= n;
                }
            }
            out[w * n + tau] = acc.norm();
        }
    }
}

/// |<a, M_w L_tau b>| for all (w, tau), indexed `w * n + tau`.
pub fn ambiguity(a: &Signal, b: &Signal) -> Result<Vec<f64>, SignalError> {
    if a.n() != b.n() {
        return Err(SignalError::PeriodMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let n = a.n();
    let mut out = vec![0.0; n * n];
    ambiguity_block(a, b, &conj_twiddles(n), &mut out);
    Ok(out)
}

/// Summary of one row of candidate values: its maximum and the first
/// position within [`TIE_TOL`] of it.
fn row_summary(values: &[f64]) -> (f64, Option<usize>) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return (max, None);
    }
    (max, values.iter().position(|&v| v >= max - TIE_TOL))
}

/// Global maximum over rows with the lexicographically smallest (row, pos)
/// whose value is within [`TIE_TOL`] of it. Rows are evaluated in parallel;
/// the result does not depend on the schedule.
fn lex_argmax<F>(rows: usize, measures: usize, row: F) -> Vec<Option<(f64, usize, usize)>>
where
    F: Fn(usize) -> Vec<Vec<f64>> + Sync,
{
    let summaries: Vec<Vec<(f64, Option<usize>)>> = (0..rows)
        .into_par_iter()
        .map(|j| row(j).iter().map(|v| row_summary(v)).collect())
        .collect();
    (0..measures)
        .map(|k| {
            let global = summaries
                .iter()
                .map(|s| s[k].0)
                .fold(f64::NEG_INFINITY, f64::max);
            if global == f64::NEG_INFINITY {
                return None;
            }
            let j = summaries.iter().position(|s| s[k].0 >= global - TIE_TOL)?;
            let pos = if summaries[j][k].0 == global {
                summaries[j][k].1?
            } else {
                let values = &row(j)[k];
                values.iter().position(|&v| v >= global - TIE_TOL)?
            };
            Some((global, j, pos))
        })
        .collect()
}

/// Exhaustive nu / theta / lambda search, O(M^2 n^3).
pub fn profile(set: &SignalSet) -> CorrelationProfile {
    let n = set.n;
    let m = set.len();
    let twiddles = conj_twiddles(n);
    let found = lex_argmax(m, 3, |j| {
        let mut lam = vec![f64::NEG_INFINITY; m * n * n];
        let mut theta = vec![f64::NEG_INFINITY; m * n];
        let mut nu = vec![f64::NEG_INFINITY; m];
        for jp in 0..m {
            let block = &mut lam[jp * n * n..(jp + 1) * n * n];
            ambiguity_block(&set.signals[j], &set.signals[jp], &twiddles, block);
            theta[jp * n..(jp + 1) * n].copy_from_slice(&block[..n]);
            if jp == j {
                block[0] = f64::NEG_INFINITY;
                theta[jp * n] = f64::NEG_INFINITY;
            } else {
                nu[jp] = block[0];
            }
        }
        vec![nu, theta, lam]
    });
    let nn = n * n;
    CorrelationProfile {
        nu: found[0].map_or(0.0, |f| f.0),
        theta: found[1].map_or(0.0, |f| f.0),
        lambda: found[2].map_or(0.0, |f| f.0),
        witness_nu: found[0].map(|(_, j, pos)| (j, pos)),
        witness_theta: found[1].map(|(_, j, pos)| (j, pos / n, pos % n)),
        witness_lambda: found[2].map(|(_, j, pos)| (j, pos / nn, (pos % nn) / n, pos % n)),
        papr_max: set.signals.iter().map(papr).fold(0.0, f64::max),
    }
}

/// lambda alone (same search as [`profile`]).
pub fn lambda(set: &SignalSet) -> f64 {
    profile(set).lambda
}

/// Max |<phi_j, phi_j'>| over j != j', with witness; O(M^2 n).
pub fn nu(set: &SignalSet) -> (f64, Option<(usize, usize)>) {
    let m = set.len();
    // |<a, b>| = |<b, a>|, so the smallest maximizing pair has j < j'.
    let found = lex_argmax(m, 1, |j| {
        let mut row = vec![f64::NEG_INFINITY; m];
        for (jp, slot) in row.iter_mut().enumerate().skip(j + 1) {
            *slot = inner(&set.signals[j], &set.signals[jp])
                .expect("members share a period")
                .norm();
        }
        vec![row]
    });
    match found[0] {
        Some((v, j, jp)) => (v, Some((j, jp))),
        None => (0.0, None),
    }
}

/// Max |<phi_j, L_tau phi_j'>| over (j, j', tau) != (j, j, 0), with witness;
/// O(M^2 n^2).
pub fn theta(set: &SignalSet) -> (f64, Option<(usize, usize, usize)>) {
    let n = set.n;
    let m = set.len();
    let found = lex_argmax(m, 1, |j| {
        let a = &set.signals[j].values;
        let mut row = vec![f64::NEG_INFINITY; m * n];
        for jp in 0..m {
            let b = &set.signals[jp].values;
            for tau in 0..n {
                if jp == j && tau == 0 {
                    continue;
                }
                let acc: Complex64 = (0..n).map(|t| a[t] * b[(t + tau) % n].conj()).sum();
                row[jp * n + tau] = acc.norm();
            }
        }
        vec![row]
    });
    match found[0] {
        Some((v, j, pos)) => (v, Some((j, pos / n, pos % n))),
        None => (0.0, None),
    }
}

fn check_bridge_precondition(set: &SignalSet) -> Result<f64, SignalError> {
    let lambda = lambda(set);
    if lambda >= 1.0 - DEGENERATE_LAMBDA_TOL {
        return Err(SignalError::DegenerateLambda { lambda });
    }
    Ok(lambda)
}

/// The (n, n^2 M) time signal set of all M_w L_tau phi_j, ordered by
/// (j, w, tau). Its nu equals the source lambda.
pub fn bridge_full(set: &SignalSet) -> Result<SignalSet, SignalError> {
    check_bridge_precondition(set)?;
    let n = set.n as i64;
    let mut out = Vec::with_capacity(set.len() * set.n * set.n);
    for s in &set.signals {
        for w in 0..n {
            for tau in 0..n {
                out.push(modulate(&time_shift(s, tau), w));
            }
        }
    }
    let meta = SetMeta {
        construction: "bridge_full".to_string(),
        ..set.meta.clone()
    };
    SignalSet::new(out, meta)
}

/// The (n, n M) time signal set of all M_w phi_j, ordered by (j, w). Its
/// theta equals the source lambda.
pub fn bridge_phase(set: &SignalSet) -> Result<SignalSet, SignalError> {
    check_bridge_precondition(set)?;
    let n = set.n as i64;
    let mut out = Vec::with_capacity(set.len() * set.n);
    for s in &set.signals {
        for w in 0..n {
            out.push(modulate(s, w));
        }
    }
    let meta = SetMeta {
        construction: "bridge_phase".to_string(),
        ..set.meta.clone()
    };
    SignalSet::new(out, meta)
}

/// M unit signals of period n with i.i.d. complex Gaussian entries,
/// normalized, from a ChaCha8 stream seeded with `seed`.
pub fn random_unit_set(n: usize, m: usize, seed: u64) -> Result<SignalSet, SignalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signals = (0..m)
        .map(|_| {
            let raw: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Signal::new(raw.into_iter().map(|z| z / norm).collect())
        })
        .collect::<Result<Vec<_>, _>>()?;
    SignalSet::new(signals, SetMeta::external())
}
