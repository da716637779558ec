//! Reference implementations kept apart from the library: straight
//! quadruple loops, polar exponentials recomputed per term.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use tpsig_core::signal::Signal;

/// sum_t a(t) conj(e^{2 pi i w t / n} b(t + tau))
pub fn direct_corr(a: &[Complex64], b: &[Complex64], w: usize, tau: usize) -> Complex64 {
    let n = a.len();
    (0..n)
        .map(|t| {
            let phase = Complex64::from_polar(1.0, TAU * (w * t) as f64 / n as f64);
            a[t] * (phase * b[(t + tau) % n]).conj()
        })
        .sum()
}

/// (nu, theta, lambda) by exhaustive direct sums.
pub fn naive_measures(signals: &[Signal]) -> (f64, f64, f64) {
    let n = signals[0].n();
    let (mut nu, mut theta, mut lambda) = (0.0f64, 0.0f64, 0.0f64);
    for (j, a) in signals.iter().enumerate() {
        for (jp, b) in signals.iter().enumerate() {
            for w in 0..n {
                for tau in 0..n {
                    if j == jp && w == 0 && tau == 0 {
                        continue;
                    }
                    let v = direct_corr(a.values(), b.values(), w, tau).norm();
                    lambda = lambda.max(v);
                    if w == 0 {
                        theta = theta.max(v);
                        if tau == 0 {
                            nu = nu.max(v);
                        }
                    }
                }
            }
        }
    }
    (nu, theta, lambda)
}

/// Prime powers in [lo, hi].
pub fn prime_powers(lo: u64, hi: u64) -> Vec<(u64, u64, u32)> {
    (lo..=hi)
        .filter_map(|q| {
            let mut p = 2;
            while q % p != 0 {
                p += 1;
            }
            let mut r = q;
            let mut m = 0;
            while r % p == 0 {
                r /= p;
                m += 1;
            }
            (r == 1).then_some((q, p, m))
        })
        .collect()
}

/// Trace of x^i over GF(2^m) modulo `modulus` (bitmask, bit k = coeff of x^k),
/// by repeated squaring in plain integer arithmetic.
pub fn gf2_trace_of_power(i: u64, modulus: u64, m: u32) -> u32 {
    let mulmod = |mut a: u64, mut b: u64| {
        let mut r = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> m & 1 == 1 {
                a ^= modulus;
            }
        }
        r
    };
    let mut x = 1u64;
    for _ in 0..i {
        x = mulmod(x, 2);
    }
    let mut acc = 0u64;
    let mut frob = x;
    for _ in 0..m {
        acc ^= frob;
        frob = mulmod(frob, frob);
    }
    debug_assert!(acc <= 1);
    acc as u32
}
