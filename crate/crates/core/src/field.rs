//! Arithmetic in GF(p^m).
//!
//! Elements are dense coefficient vectors (constant term first) over GF(p),
//! reduced modulo a monic irreducible polynomial. [`make_field`] picks the
//! modulus deterministically so that every construction built on top of a
//! field is reproducible bit-for-bit.
//!
//! ```
//! use tpsig_core::field::make_field;
//!
//! let gf4 = make_field(2, 2).unwrap();
//! assert_eq!(gf4.modulus(), &[1, 1, 1]);
//! let x = gf4.gamma().clone();
//! assert_eq!(gf4.mul(&x, &x).coeffs(), &[1, 1]);
//! assert_eq!(gf4.trace(&x), 1);
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`make_field`].
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

/// Fields up to this order get eager exponent/log tables.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NonPrimeP(u64),
    #[error("field order {p}^{m} exceeds 2^31")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree >= 1 with coefficients reduced mod p")]
    BadModulus,
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("element has {got} coefficients, field degree is {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient {value} is not reduced mod {p}")]
    Unreduced { value: u64, p: u64 },
    #[error("designated generator is not primitive")]
    NotPrimitive,
}

/// An element of GF(p^m) as `m` coefficients in `[0, p)`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Serialized description of a field: `{"p", "m", "modulus", "gamma"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
    pub gamma: Vec<u64>,
}

#[derive(Debug)]
struct LogTables {
    /// `exp[i]` is the index of gamma^i, `i < q - 1`.
    exp: Vec<u32>,
    /// `log[index]` is the discrete log; `u32::MAX` for zero.
    log: Vec<u32>,
}

/// GF(p^m) with a fixed modulus and primitive element.
///
/// Immutable after construction; the lookup tables sit behind an `Arc`, so
/// clones are cheap and the value can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u64,
    modulus: Vec<u32>,
    gamma: FieldElement,
    /// Absolute trace of each basis monomial x^j.
    trace_basis: Vec<u32>,
    tables: Option<Arc<LogTables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.m == other.m
            && self.modulus == other.modulus
            && self.gamma == other.gamma
    }
}

impl Eq for FieldSpec {}

/// Builds GF(p^m) with a deterministic modulus.
///
/// For `m >= 2` the modulus is the lexicographically smallest monic
/// irreducible polynomial (coefficients compared constant term first) for
/// which `x` is primitive, and `gamma = x`. For prime fields the modulus is
/// `x - g` where `g` is the smallest primitive root mod p, so `gamma = g`.
pub fn make_field(p: u64, m: u32) -> Result<FieldSpec, FieldError> {
    let q = check_params(p, m)?;
    let p32 = p as u32;
    if m == 1 {
        let g = smallest_primitive_root(p);
        let modulus = vec![((p - g) % p) as u32, 1];
        let gamma = FieldElement {
            coeffs: vec![g as u32],
        };
        return Ok(FieldSpec::assemble(p32, 1, q, modulus, gamma));
    }

    let group_primes = prime_factors(q - 1);
    let mut first_irreducible: Option<Vec<u64>> = None;
    // c0 = 0 means x divides the candidate, so start at c0 = 1.
    for idx in p.pow(m - 1)..q {
        let mut modulus = lex_digits(idx, p, m);
        modulus.push(1);
        if !is_irreducible(&modulus, p) {
            continue;
        }
        let x = monomial_x(m);
        if is_primitive_poly(&x, &modulus, p, q, &group_primes) {
            let gamma = FieldElement {
                coeffs: x.iter().map(|&c| c as u32).collect(),
            };
            let modulus = modulus.iter().map(|&c| c as u32).collect();
            return Ok(FieldSpec::assemble(p32, m, q, modulus, gamma));
        }
        if first_irreducible.is_none() {
            first_irreducible = Some(modulus);
        }
    }

    // Primitive polynomials exist for every (p, m); this path is kept so the
    // selection rule is total.
    let modulus = first_irreducible.ok_or(FieldError::ReducibleModulus(p))?;
    let gamma = smallest_primitive_element(&modulus, p, m, q, &group_primes);
    let modulus = modulus.iter().map(|&c| c as u32).collect();
    Ok(FieldSpec::assemble(p32, m, q, modulus, gamma))
}

impl FieldSpec {
    /// Builds GF(p^m) over a caller-chosen monic irreducible modulus
    /// (constant term first, length m + 1). The primitive element is the
    /// lexicographically smallest one.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<FieldSpec, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::BadModulus);
        }
        let m = (modulus.len() - 1) as u32;
        let q = check_params(p, m)?;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        if !is_irreducible(modulus, p) {
            return Err(FieldError::ReducibleModulus(p));
        }
        let group_primes = prime_factors(q - 1);
        let gamma = smallest_primitive_element(modulus, p, m, q, &group_primes);
        let modulus = modulus.iter().map(|&c| c as u32).collect();
        Ok(FieldSpec::assemble(p as u32, m, q, modulus, gamma))
    }

    /// Rebuilds a field from its serialized description, checking that the
    /// modulus is irreducible and gamma is primitive.
    pub fn from_info(info: &FieldInfo) -> Result<FieldSpec, FieldError> {
        let q = check_params(info.p, info.m)?;
        let p = info.p;
        let m = info.m;
        if info.modulus.len() != m as usize + 1
            || *info.modulus.last().unwrap() != 1
            || info.modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus);
        }
        if !is_irreducible(&info.modulus, p) {
            return Err(FieldError::ReducibleModulus(p));
        }
        if info.gamma.len() != m as usize {
            return Err(FieldError::LengthMismatch {
                expected: m as usize,
                got: info.gamma.len(),
            });
        }
        if let Some(&value) = info.gamma.iter().find(|&&c| c >= p) {
            return Err(FieldError::Unreduced { value, p });
        }
        let group_primes = prime_factors(q - 1);
        if !is_primitive_poly(&info.gamma, &info.modulus, p, q, &group_primes) {
            return Err(FieldError::NotPrimitive);
        }
        let gamma = FieldElement {
            coeffs: info.gamma.iter().map(|&c| c as u32).collect(),
        };
        let modulus = info.modulus.iter().map(|&c| c as u32).collect();
        Ok(FieldSpec::assemble(p as u32, m, q, modulus, gamma))
    }

    fn assemble(p: u32, m: u32, q: u64, modulus: Vec<u32>, gamma: FieldElement) -> FieldSpec {
        let mut field = FieldSpec {
            p,
            m,
            q,
            modulus,
            gamma,
            trace_basis: Vec::new(),
            tables: None,
        };
        field.trace_basis = (0..m as usize)
            .map(|j| {
                let mut coeffs = vec![0; m as usize];
                coeffs[j] = 1;
                field.trace_by_frobenius(&FieldElement { coeffs })
            })
            .collect();
        if q <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        field
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = self.one();
        for i in 0..order {
            let idx = self.index_of(&cur) as usize;
            debug_assert_eq!(log[idx], u32::MAX, "gamma is not primitive");
            log[idx] = i as u32;
            exp.push(idx as u32);
            cur = self.mul(&cur, &self.gamma);
        }
        LogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus, constant term first, length m + 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn gamma(&self) -> &FieldElement {
        &self.gamma
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p as u64,
            m: self.m,
            modulus: self.modulus.iter().map(|&c| c as u64).collect(),
            gamma: self.gamma.coeffs.iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.m as usize];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// Validates a coefficient vector as an element of this field.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.m as usize {
            return Err(FieldError::LengthMismatch {
                expected: self.m as usize,
                got: coeffs.len(),
            });
        }
        if let Some(&value) = coeffs.iter().find(|&&c| c >= self.p as u64) {
            return Err(FieldError::Unreduced {
                value,
                p: self.p as u64,
            });
        }
        Ok(FieldElement {
            coeffs: coeffs.iter().map(|&c| c as u32).collect(),
        })
    }

    /// The prime-field constant `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m as usize];
        coeffs[0] = (c % self.p as u64) as u32;
        FieldElement { coeffs }
    }

    /// Integer encoding `sum c_i p^i`, in `[0, q)`.
    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// Inverse of [`FieldSpec::index_of`]; `index` is reduced mod q.
    pub fn from_index(&self, index: u64) -> FieldElement {
        let mut rest = index % self.q;
        let coeffs = (0..self.m)
            .map(|_| {
                let c = rest % self.p as u64;
                rest /= self.p as u64;
                c as u32
            })
            .collect();
        FieldElement { coeffs }
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Polynomial product reduced mod the modulus and mod p.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        reduce_monic(&mut prod, &self.modulus, p);
        prod.resize(m, 0);
        FieldElement {
            coeffs: prod.into_iter().map(|c| c as u32).collect(),
        }
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// gamma^(i mod (q - 1)).
    pub fn pow_gamma(&self, i: u64) -> FieldElement {
        self.pow(&self.gamma, i % (self.q - 1))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    /// Absolute trace to GF(p), evaluated through the traces of the basis
    /// monomials (the trace is GF(p)-linear).
    pub fn trace(&self, a: &FieldElement) -> u32 {
        let p = self.p as u64;
        a.coeffs
            .iter()
            .zip(&self.trace_basis)
            .fold(0u64, |acc, (&c, &t)| (acc + c as u64 * t as u64) % p) as u32
    }

    /// Absolute trace straight from the definition a + a^p + ... + a^(p^(m-1)).
    pub fn trace_by_frobenius(&self, a: &FieldElement) -> u32 {
        let mut acc = a.clone();
        let mut frob = a.clone();
        for _ in 1..self.m {
            frob = self.pow(&frob, self.p as u64);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Discrete log to base gamma, in `[0, q - 1)`; `None` for zero.
    pub fn dlog(&self, a: &FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[self.index_of(a) as usize] as u64),
            None => Some(self.dlog_bsgs(a)),
        }
    }

    /// Index encoding of gamma^i, via the table when present.
    pub fn gamma_power_index(&self, i: u64) -> u64 {
        let i = i % (self.q - 1);
        match &self.tables {
            Some(t) => t.exp[i as usize] as u64,
            None => self.index_of(&self.pow_gamma(i)),
        }
    }

    /// `trace(gamma^i)` for `i = 0..q-1`.
    pub fn trace_of_gamma_powers(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity((self.q - 1) as usize);
        let mut cur = self.one();
        for _ in 0..self.q - 1 {
            out.push(self.trace(&cur));
            cur = self.mul(&cur, &self.gamma);
        }
        out
    }

    fn dlog_bsgs(&self, a: &FieldElement) -> u64 {
        let order = self.q - 1;
        let step = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = self.one();
        for j in 0..step {
            baby.entry(self.index_of(&cur)).or_insert(j);
            cur = self.mul(&cur, &self.gamma);
        }
        let giant = self
            .inv(&self.pow(&self.gamma, step))
            .expect("gamma is nonzero");
        let mut y = a.clone();
        for i in 0..=step {
            if let Some(&j) = baby.get(&self.index_of(&y)) {
                return (i * step + j) % order;
            }
            y = self.mul(&y, &giant);
        }
        unreachable!("gamma generates the multiplicative group")
    }
}

fn check_params(p: u64, m: u32) -> Result<u64, FieldError> {
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(FieldError::NonPrimeP(p));
    }
    match p.checked_pow(m) {
        Some(q) if q <= MAX_FIELD_ORDER => Ok(q),
        _ => Err(FieldError::FieldTooLarge { p, m }),
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, m)` when `q = p^m` for a prime p.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut m = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        m += 1;
    }
    Some((p, m))
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let primes = prime_factors(p - 1);
    (2..p)
        .find(|&g| primes.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

/// Base-p digits of `idx`, most significant first, as a length-m vector.
/// Reading the result as (c0, c1, ...) makes index order equal to
/// constant-term-first lexicographic order.
fn lex_digits(mut idx: u64, p: u64, m: u32) -> Vec<u64> {
    let mut out = vec![0u64; m as usize];
    for slot in out.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn monomial_x(m: u32) -> Vec<u64> {
    let mut x = vec![0u64; m as usize];
    if m == 1 {
        // Not reached: prime fields do not use the x-primitive rule.
        x[0] = 0;
    } else {
        x[1] = 1;
    }
    x
}

fn smallest_primitive_element(
    modulus: &[u64],
    p: u64,
    m: u32,
    q: u64,
    group_primes: &[u64],
) -> FieldElement {
    (0..q)
        .map(|idx| lex_digits(idx, p, m))
        .find(|cand| is_primitive_poly(cand, modulus, p, q, group_primes))
        .map(|c| FieldElement {
            coeffs: c.into_iter().map(|x| x as u32).collect(),
        })
        .expect("a finite field has a primitive element")
}

// ---- dense polynomials over GF(p), constant term first ----

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Reduces `a` in place modulo the monic polynomial `f` (length m + 1).
fn reduce_monic<T: Copy + Into<u64>>(a: &mut Vec<u64>, f: &[T], p: u64) {
    let m = f.len() - 1;
    for top in (m..a.len()).rev() {
        let lead = a[top];
        if lead == 0 {
            continue;
        }
        for (k, &fk) in f.iter().enumerate().take(m) {
            let idx = top - m + k;
            let sub = lead * fk.into() % p;
            a[idx] = (a[idx] + p - sub) % p;
        }
        a[top] = 0;
    }
    a.truncate(m.max(1));
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    reduce_monic(&mut prod, f, p);
    prod
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("division by zero polynomial");
    let inv_lead = pow_mod(b[db], p - 2, p);
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * inv_lead % p;
        for k in 0..=db {
            let idx = dr - db + k;
            r[idx] = (r[idx] + p - factor * b[k] % p) % p;
        }
    }
    trim(&mut r);
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn eval_poly(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
}

/// Irreducibility of a monic `f` of degree m over GF(p): root search for
/// m <= 3, Rabin's test otherwise.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    match m {
        0 => false,
        1 => true,
        2 | 3 => (0..p).all(|x| eval_poly(f, x, p) != 0),
        _ => rabin_irreducible(f, p),
    }
}

fn rabin_irreducible(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u64;
    let x = vec![0u64, 1];
    // x^(p^k) mod f for k = 0..=m
    let mut frob = vec![x.clone()];
    for k in 1..=m as usize {
        let next = poly_powmod(&frob[k - 1], p, f, p);
        frob.push(next);
    }
    let mut top = frob[m as usize].clone();
    trim(&mut top);
    if top != x {
        return false;
    }
    for r in prime_factors(m) {
        let mut h = frob[(m / r) as usize].clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(&mut h);
        if degree(&h).is_none() {
            return false;
        }
        let g = poly_gcd(f, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn is_primitive_poly(a: &[u64], f: &[u64], p: u64, q: u64, group_primes: &[u64]) -> bool {
    if a.iter().all(|&c| c == 0) {
        return false;
    }
    let is_one = |v: &[u64]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
    group_primes.iter().all(|&r| {
        let mut v = poly_powmod(a, (q - 1) / r, f, p);
        v.resize(f.len() - 1, 0);
        !is_one(&v)
    })
}
