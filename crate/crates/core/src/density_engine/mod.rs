//! The density series `𝔣 = Σ μ(k) δ_k` and everything needed to evaluate
//! and bound it.
//!
//! A [`FamilyDescriptor`] supplies `δ_k` for squarefree `k` together with
//! tail data `(c, e)` such that `δ_k ≤ c/k^e`. From that the engine
//! produces exact truncations, rational tail bounds, Euler products for
//! multiplicative families and positivity verdicts. All density values are
//! exact rationals; floats appear only in [`envelope`].

mod compare;
pub mod envelope;
pub mod rational;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use compare::{
    compare_families, Certificate, ComparisonVerdict, Containment, FamilyData, FamilyComparison, Hypothesis,
    LevelData, COMPARE_MAX_ORDER,
};
pub use envelope::{
    chebotarev_error, cutoff_s, cutoff_y, discriminant_log_bound, envelope_exponents, error_envelope, log_integral,
    tail_envelope, ErrorBudget, LI_2,
};

use crate::prime_engine::{sieve_primes, squarefree_stream, PrimeError, PrimeRange, SquarefreeTerm};
use rational::{big, inv_pow_upper, tree_product, tree_sum};

/// Truncation used by predictions unless configured otherwise.
pub const DEFAULT_TRUNCATION: u64 = 10_000;
/// Prime bound of the Euler product behind a positivity certificate.
pub const POSITIVITY_PRIME_BOUND: u64 = 100;
/// Squarefree `k` up to this bound are checked by [`FamilyDescriptor::validate`].
pub const VALIDATION_LIMIT: u64 = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("invalid family descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("family is not multiplicative")]
    NotMultiplicative,
    #[error("truncation point must be at least 1")]
    InvalidTruncation,
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("invalid error budget: {0}")]
    InvalidBudget(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("group of order {requested} exceeds the enumeration limit {max}")]
    Capacity { requested: u64, max: u64 },
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

/// `δ_k ≤ c / k^e` for all squarefree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailData {
    pub constant: BigRational,
    pub exponent: Rational64,
    /// `false` when `c` is a guess rather than a proven constant.
    pub certified: bool,
}

impl TailData {
    /// `c = 1`, `e = 3/2`, uncertified.
    pub fn heuristic() -> Self {
        TailData { constant: BigRational::one(), exponent: Rational64::new(3, 2), certified: false }
    }

    pub fn certified(constant: BigRational, exponent: Rational64) -> Self {
        TailData { constant, exponent, certified: true }
    }
}

impl Default for TailData {
    fn default() -> Self {
        TailData::heuristic()
    }
}

pub type DeltaFn = dyn Fn(&SquarefreeTerm) -> BigRational + Send + Sync;

/// A family of splitting conditions seen only through `k ↦ δ_k`.
#[derive(Clone)]
pub struct FamilyDescriptor {
    delta: Arc<DeltaFn>,
    pub multiplicative: bool,
    pub tail: TailData,
}

impl fmt::Debug for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyDescriptor")
            .field("multiplicative", &self.multiplicative)
            .field("tail", &self.tail)
            .finish_non_exhaustive()
    }
}

impl FamilyDescriptor {
    pub fn new<F>(delta: F, multiplicative: bool) -> Self
    where
        F: Fn(&SquarefreeTerm) -> BigRational + Send + Sync + 'static,
    {
        FamilyDescriptor { delta: Arc::new(delta), multiplicative, tail: TailData::heuristic() }
    }

    pub fn with_tail(mut self, tail: TailData) -> Self {
        self.tail = tail;
        self
    }

    pub fn delta_term(&self, term: &SquarefreeTerm) -> BigRational {
        (self.delta)(term)
    }

    /// `δ_k`, or an error when `k` is not squarefree.
    pub fn delta(&self, k: u64) -> Result<BigRational, DensityError> {
        let term = SquarefreeTerm::new(k).ok_or(DensityError::NotSquarefree(k))?;
        Ok(self.delta_term(&term))
    }

    /// Checks `0 ≤ δ_k ≤ 1`, monotonicity under divisibility and the tail
    /// inequality for squarefree `k ≤ 1000`, all exactly.
    pub fn validate(&self) -> Result<(), DensityError> {
        let e = self.tail.exponent;
        if *e.numer() <= 0 {
            return Err(DensityError::InvalidDescriptor("tail exponent must be positive".into()));
        }
        if self.tail.constant.is_negative() {
            return Err(DensityError::InvalidDescriptor("tail constant must be non-negative".into()));
        }
        let terms = squarefree_stream(VALIDATION_LIMIT)?;
        let deltas: BTreeMap<u64, BigRational> = terms.iter().map(|t| (t.k, self.delta_term(t))).collect();
        let c_pow = num_traits::pow(self.tail.constant.clone(), *e.denom() as usize);
        for t in &terms {
            let d = &deltas[&t.k];
            if d.is_negative() || *d > BigRational::one() {
                return Err(DensityError::InvalidDescriptor(format!("δ_{} = {d} outside [0, 1]", t.k)));
            }
            for q in &t.factors {
                if *d > deltas[&(t.k / q)] {
                    return Err(DensityError::InvalidDescriptor(format!(
                        "δ_{} exceeds δ_{}",
                        t.k,
                        t.k / q
                    )));
                }
            }
            // δ^q · k^p ≤ c^q with e = p/q
            let lhs = num_traits::pow(d.clone(), *e.denom() as usize)
                * BigRational::from_integer(BigInt::from(t.k).pow(*e.numer() as u32));
            if lhs > c_pow {
                return Err(DensityError::InvalidDescriptor(format!("tail bound fails at k = {}", t.k)));
            }
        }
        Ok(())
    }
}

/// `center ± tail`, with the truncation point that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityInterval {
    pub center: BigRational,
    pub tail: BigRational,
    pub y: u64,
    pub tail_certified: bool,
}

impl DensityInterval {
    pub fn lo(&self) -> BigRational {
        &self.center - &self.tail
    }

    pub fn hi(&self) -> BigRational {
        &self.center + &self.tail
    }

    pub fn width(&self) -> BigRational {
        &self.tail + &self.tail
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn overlaps(&self, other: &DensityInterval) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }
}

/// `Σ_{k ≤ y squarefree} μ(k) δ_k`, exactly.
pub fn truncated_series(desc: &FamilyDescriptor, y: u64) -> Result<BigRational, DensityError> {
    if y == 0 {
        return Err(DensityError::InvalidTruncation);
    }
    let terms: Vec<BigRational> = squarefree_stream(y)?
        .iter()
        .map(|t| {
            let d = desc.delta_term(t);
            if t.mu < 0 {
                -d
            } else {
                d
            }
        })
        .collect();
    Ok(tree_sum(terms))
}

/// Rational upper bound on `Σ_{k>y} c/k^e`: the first omitted term plus
/// `c/(e−1)·(y+1)^(1−e)`.
pub fn tail_bound(desc: &FamilyDescriptor, y: u64) -> Result<BigRational, DensityError> {
    let TailData { constant: c, exponent: e, .. } = &desc.tail;
    if *e <= Rational64::one() {
        return Err(DensityError::InvalidDescriptor(format!("tail exponent {e} must exceed 1")));
    }
    let first = c * inv_pow_upper(y + 1, *e);
    let rest = c / big(*e - Rational64::one()) * inv_pow_upper(y + 1, *e - Rational64::one());
    Ok(first + rest)
}

pub fn density_with_interval(desc: &FamilyDescriptor, y: u64) -> Result<DensityInterval, DensityError> {
    let center = truncated_series(desc, y)?;
    let tail = tail_bound(desc, y)?;
    Ok(DensityInterval { center, tail, y, tail_certified: desc.tail.certified })
}

/// `Π_{q ≤ Q} (1 − δ_q)`. The limit lies in `[P(1 − T), P]` with
/// `T ≥ Σ_{q>Q} δ_q`, reported as `center = P`, `tail = P·T`.
pub fn euler_product(desc: &FamilyDescriptor, q_bound: u64) -> Result<DensityInterval, DensityError> {
    if !desc.multiplicative {
        return Err(DensityError::NotMultiplicative);
    }
    let primes = if q_bound >= 2 { sieve_primes(PrimeRange::new(2, q_bound)?)? } else { Vec::new() };
    let factors: Vec<BigRational> = primes
        .iter()
        .map(|&q| BigRational::one() - desc.delta_term(&SquarefreeTerm { k: q, mu: -1, factors: vec![q] }))
        .collect();
    let center = tree_product(factors);
    let tail = &center * tail_bound(desc, q_bound)?;
    Ok(DensityInterval { center, tail, y: q_bound, tail_certified: desc.tail.certified })
}

/// `Σ_{k | l} μ(k) δ_k`.
pub fn partial_density(l: u64, desc: &FamilyDescriptor) -> Result<BigRational, DensityError> {
    let term = SquarefreeTerm::new(l).ok_or(DensityError::NotSquarefree(l))?;
    let terms = term
        .divisors()
        .iter()
        .map(|t| {
            let d = desc.delta_term(t);
            if t.mu < 0 {
                -d
            } else {
                d
            }
        })
        .collect();
    Ok(tree_sum(terms))
}

/// What made a density vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmptyClass {
    /// `C_q = ∅` at this prime.
    Prime(u64),
    /// The congruence condition admits no residue.
    Condition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityVerdict {
    Zero(EmptyClass),
    /// `𝔣 ≥ lower_bound > 0`, from the Euler product over `q ≤ prime_bound`.
    Positive { lower_bound: BigRational, prime_bound: u64, tail_certified: bool },
    Inconclusive(String),
}

/// Zero when some `C_q` is flagged empty; positive when the family is
/// multiplicative, every `δ_q < 1` and the tail is summable; otherwise
/// inconclusive. Positivity is never inferred beyond these criteria.
pub fn positivity_check(desc: &FamilyDescriptor, empty: &BTreeMap<u64, bool>) -> PositivityVerdict {
    if let Some((&q, _)) = empty.iter().find(|(_, &e)| e) {
        return PositivityVerdict::Zero(EmptyClass::Prime(q));
    }
    if !desc.multiplicative {
        return PositivityVerdict::Inconclusive("family is not multiplicative".into());
    }
    let q_bound = POSITIVITY_PRIME_BOUND;
    let Ok(tail) = tail_bound(desc, q_bound) else {
        return PositivityVerdict::Inconclusive("tail exponent does not give a summable bound".into());
    };
    if tail >= BigRational::one() {
        return PositivityVerdict::Inconclusive("tail bound is not below 1".into());
    }
    let Ok(prod) = euler_product(desc, q_bound) else {
        return PositivityVerdict::Inconclusive("Euler product unavailable".into());
    };
    if prod.center.is_zero() {
        return PositivityVerdict::Inconclusive("some δ_q equals 1".into());
    }
    let lower_bound = &prod.center * (BigRational::one() - tail);
    PositivityVerdict::Positive { lower_bound, prime_bound: q_bound, tail_certified: desc.tail.certified }
}
