//! Primes, factorizations and the squarefree/Möbius index stream.
//!
//! Every density sum in the crate runs over squarefree `k` weighted by
//! `μ(k)`, and every empirical count runs over a range of rational primes.
//! Both streams live here.

mod factor;
mod sieve;

pub(crate) use factor::factor_powers;
pub use factor::{factorize, is_prime, mul_mod, pow_mod};
pub use sieve::{sieve_primes, PrimeRange, SegmentedSieve, DEFAULT_MAX_HI, DEFAULT_SEGMENT_LEN};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("range bound {requested} exceeds configured maximum {max}")]
    Capacity { requested: u64, max: u64 },
    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
}

/// Largest limit accepted by [`squarefree_stream`]; the smallest-prime-factor
/// table costs four bytes per integer.
pub const SQUAREFREE_MAX_LIMIT: u64 = 50_000_000;

/// A squarefree `k ≥ 1` together with `μ(k)` and its prime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeTerm {
    pub k: u64,
    pub mu: i8,
    pub factors: Vec<u64>,
}

impl SquarefreeTerm {
    pub fn one() -> Self {
        SquarefreeTerm { k: 1, mu: 1, factors: Vec::new() }
    }

    /// Builds the term for `k`, or `None` when `k` is not squarefree.
    pub fn new(k: u64) -> Option<Self> {
        if k == 0 {
            return None;
        }
        let mut factors = factorize(k);
        let before = factors.len();
        factors.dedup();
        if factors.len() != before {
            return None;
        }
        let mu = if factors.len() % 2 == 0 { 1 } else { -1 };
        Some(SquarefreeTerm { k, mu, factors })
    }

    /// All squarefree divisors of `k`, each as a term, in increasing order.
    pub fn divisors(&self) -> Vec<SquarefreeTerm> {
        let n = self.factors.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1u32 << n) {
            let factors: Vec<u64> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.factors[i])
                .collect();
            let k = factors.iter().product();
            let mu = if factors.len() % 2 == 0 { 1 } else { -1 };
            out.push(SquarefreeTerm { k, mu, factors });
        }
        out.sort_by_key(|t| t.k);
        out
    }
}

/// Möbius function by factorization. Cheap for single values; use
/// [`squarefree_stream`] for ranges.
pub fn mobius(n: u64) -> i8 {
    match SquarefreeTerm::new(n) {
        Some(t) => t.mu,
        None => 0,
    }
}

/// All squarefree `k ≤ limit` in increasing order with `μ(k)` and factors.
///
/// Built from a smallest-prime-factor table, so the cost is linear in
/// `limit` rather than one factorization per `k`.
pub fn squarefree_stream(limit: u64) -> Result<Vec<SquarefreeTerm>, PrimeError> {
    if limit > SQUAREFREE_MAX_LIMIT {
        return Err(PrimeError::Capacity { requested: limit, max: SQUAREFREE_MAX_LIMIT });
    }
    if limit == 0 {
        return Ok(Vec::new());
    }
    let n = limit as usize;
    let spf = smallest_prime_factors(n);
    let mut out = Vec::with_capacity(n * 61 / 100 + 8);
    out.push(SquarefreeTerm::one());
    'outer: for k in 2..=n {
        let mut m = k;
        let mut factors = Vec::new();
        while m > 1 {
            let p = spf[m] as usize;
            m /= p;
            if m % p == 0 {
                continue 'outer;
            }
            factors.push(p as u64);
        }
        let mu = if factors.len() % 2 == 0 { 1 } else { -1 };
        out.push(SquarefreeTerm { k: k as u64, mu, factors });
    }
    Ok(out)
}

/// Linear sieve; `spf[i]` is the least prime dividing `i` for `i ≥ 2`.
fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let j = i * p as usize;
            if p > si || j > n {
                break;
            }
            spf[j] = p;
        }
    }
    spf
}
