//! Reduction of `y² = x³ + ax + b` and its rational points modulo primes.
//!
//! The per-prime pipeline is [`reduce_curve`] → [`count_points`] →
//! [`group_structure`] → [`decompose_point`] for every listed point →
//! [`quotient_invariants`]. [`ReductionRecord::build`] runs all of it.
//! A curve `E` with points `a_1, …, a_g` is primitive-cyclic at `p` when
//! `E(F_p)/⟨ā_1, …, ā_g⟩` is cyclic, and for a prime `q ≠ p` the quotient
//! contains `(ℤ/q)²` exactly when `p` splits completely in the q-division
//! field; that is the witness checked by [`splitting_witness`].

mod count;
mod curve;
mod dlog;
pub mod field;
mod snf;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use count::{count_legendre, count_naive, hasse_interval, NAIVE_COUNT_LIMIT};
pub use curve::{Point, ReducedCurve};
pub use dlog::{decompose_brute_force, decompose_pohlig_hellman, dlog_prime_power, BRUTE_FORCE_LIMIT};
pub use snf::{invariant_factors, quotient_invariants};
pub use structure::{GroupStructure, SylowPart};

use crate::prime_engine::{factorize, is_prime};

/// Largest prime the per-prime pipeline accepts; keeps F_p products in u64.
pub const MAX_PRIME: u64 = u32::MAX as u64;
/// Bound on `|a|` and `|b|`, so that `4a³ + 27b²` factors in 64 bits.
pub const MAX_COEFFICIENT: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("prime {0} is in the excluded set")]
    ExcludedPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    Singular,
    #[error("coefficient out of range (|a|, |b| <= {MAX_COEFFICIENT})")]
    CoefficientRange,
    #[error("point ({0}) is not on the curve")]
    PointNotOnCurve(String),
    #[error("group structure search did not converge at p = {p}")]
    StructureSearch { p: u64 },
}

/// An affine rational point or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalPoint {
    Identity,
    Affine { x: Ratio<i64>, y: Ratio<i64> },
}

impl RationalPoint {
    pub fn affine(x: Ratio<i64>, y: Ratio<i64>) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn integral(x: i64, y: i64) -> Self {
        RationalPoint::Affine { x: Ratio::from_integer(x), y: Ratio::from_integer(y) }
    }

    fn denominators(&self) -> [i64; 2] {
        match self {
            RationalPoint::Identity => [1, 1],
            RationalPoint::Affine { x, y } => [*x.denom(), *y.denom()],
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Identity => write!(f, "O"),
            RationalPoint::Affine { x, y } => write!(f, "{x},{y}"),
        }
    }
}

fn big(r: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `y² = x³ + ax + b` over ℚ with a finite list of rational points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    a: i64,
    b: i64,
    points: Vec<RationalPoint>,
    conductor_support: BTreeSet<u64>,
}

impl CurveSpec {
    /// `extra_bad_primes` is merged into the primes dividing the discriminant.
    pub fn new(a: i64, b: i64, points: Vec<RationalPoint>, extra_bad_primes: &[u64]) -> Result<Self, EcError> {
        if a.abs() > MAX_COEFFICIENT || b.abs() > MAX_COEFFICIENT {
            return Err(EcError::CoefficientRange);
        }
        let disc = 4 * (a as i128).pow(3) + 27 * (b as i128).pow(2);
        if disc == 0 {
            return Err(EcError::Singular);
        }
        let (ba, bb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        for pt in &points {
            if let RationalPoint::Affine { x, y } = pt {
                let (x, y) = (big(x), big(y));
                let lhs = &y * &y;
                let rhs = &x * &x * &x + &ba * &x + &bb;
                if lhs != rhs {
                    return Err(EcError::PointNotOnCurve(pt.to_string()));
                }
            }
        }
        let mut support: BTreeSet<u64> = factorize(disc.unsigned_abs() as u64).into_iter().collect();
        support.insert(2);
        support.extend(extra_bad_primes.iter().copied().filter(|&p| is_prime(p)));
        Ok(CurveSpec { a, b, points, conductor_support: support })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    /// Primes treated as dividing `2N`: 2, the primes of `4a³ + 27b²`, and
    /// any user-supplied conductor primes.
    pub fn conductor_support(&self) -> &BTreeSet<u64> {
        &self.conductor_support
    }

    /// `p` is excluded when it divides `2N`, the modulus `f`, or a
    /// denominator of a listed point.
    pub fn is_excluded(&self, p: u64, f: u64) -> bool {
        if self.conductor_support.contains(&p) || (f > 1 && f % p == 0) {
            return true;
        }
        self.points.iter().flat_map(|pt| pt.denominators()).any(|d| d as u64 % p == 0)
    }

    fn reduce_point(&self, pt: &RationalPoint, p: u64) -> Point {
        match pt {
            RationalPoint::Identity => Point::Infinity,
            RationalPoint::Affine { x, y } => {
                let red = |r: &Ratio<i64>| {
                    let n = field::from_i64(*r.numer(), p);
                    let d = field::from_i64(*r.denom(), p);
                    field::mul(n, field::inv(d, p), p)
                };
                Point::Affine(red(x), red(y))
            }
        }
    }

    /// The listed points reduced modulo `p`.
    pub fn reduced_points(&self, rc: &ReducedCurve) -> Vec<Point> {
        self.points.iter().map(|pt| self.reduce_point(pt, rc.p)).collect()
    }
}

/// Reduction modulo `p`, or [`EcError::ExcludedPrime`] when `p` lies in
/// the excluded set for conductor `f`.
pub fn reduce_curve(curve: &CurveSpec, p: u64, f: u64) -> Result<ReducedCurve, EcError> {
    if p > MAX_PRIME {
        return Err(EcError::PrimeTooLarge(p));
    }
    if !is_prime(p) {
        return Err(EcError::NotPrime(p));
    }
    if curve.is_excluded(p, f) {
        return Err(EcError::ExcludedPrime(p));
    }
    let rc = ReducedCurve { p, a: field::from_i64(curve.a, p), b: field::from_i64(curve.b, p) };
    let disc = field::add(
        field::mul(4, field::mul(rc.a, field::mul(rc.a, rc.a, p), p), p),
        field::mul(27, field::mul(rc.b, rc.b, p), p),
        p,
    );
    if disc == 0 {
        // unreachable when the support includes every prime of the discriminant
        return Err(EcError::ExcludedPrime(p));
    }
    Ok(rc)
}

/// `#E(F_p)` and `a_p = p + 1 − #E(F_p)`.
pub fn count_points(rc: &ReducedCurve) -> (u64, i64) {
    count::count_points(rc, &mut rng_for(rc))
}

pub fn group_structure(rc: &ReducedCurve, n: u64) -> Result<GroupStructure, EcError> {
    structure::group_structure(rc, n, &mut rng_for(rc))
}

/// `(u, v)` with `pt = u·P1 + v·P2`.
pub fn decompose_point(rc: &ReducedCurve, pt: &Point, gs: &GroupStructure) -> (u64, u64) {
    dlog::decompose_point(rc, pt, gs)
}

/// Seeded from the curve so every record is reproducible.
fn rng_for(rc: &ReducedCurve) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(rc.p ^ rc.a.rotate_left(21) ^ rc.b.rotate_left(42))
}

/// Everything the experiments need to know about one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub p: u64,
    pub n: u64,
    pub a_p: i64,
    pub structure: GroupStructure,
    /// Coordinates of each reduced point in the basis of `structure`.
    pub images: Vec<(u64, u64)>,
    pub quotient: (u64, u64),
    /// `p mod f`
    pub residue: u64,
}

impl ReductionRecord {
    pub fn build(curve: &CurveSpec, p: u64, f: u64) -> Result<Self, EcError> {
        let rc = reduce_curve(curve, p, f)?;
        let mut rng = rng_for(&rc);
        let (n, a_p) = count::count_points(&rc, &mut rng);
        let gs = structure::group_structure(&rc, n, &mut rng)?;
        let images: Vec<(u64, u64)> =
            curve.reduced_points(&rc).iter().map(|pt| dlog::decompose_point(&rc, pt, &gs)).collect();
        let quotient = quotient_invariants(gs.d1, gs.d2, &images);
        Ok(ReductionRecord { p, n, a_p, structure: gs, images, quotient, residue: p % f.max(1) })
    }
}

/// The quotient by the reduced points is cyclic.
pub fn is_primitive_cyclic(record: &ReductionRecord) -> bool {
    record.quotient.0 == 1
}

/// The quotient contains `(ℤ/q)²`, i.e. `q | e1`.
pub fn splitting_witness(record: &ReductionRecord, q: u64) -> bool {
    q > 1 && record.quotient.0 % q == 0
}

/// Same property computed without the Smith form: `q | d1` and every
/// image lies in `q·E(F_p)`.
pub fn splitting_witness_direct(record: &ReductionRecord, q: u64) -> bool {
    let gs = &record.structure;
    q > 1 && gs.d1 % q == 0 && record.images.iter().all(|&(u, v)| u % q == 0 && v % q == 0)
}

/// `q | p − 1`, `q² | p + 1 − a_p` and `q | a_p − 2`.
pub fn check_divisibility_relations(record: &ReductionRecord, q: u64) -> bool {
    let q = q as i128;
    let p = record.p as i128;
    let a = record.a_p as i128;
    (p - 1) % q == 0 && (p + 1 - a) % (q * q) == 0 && (a - 2) % q == 0
}

/// Hasse bound `|a_p| ≤ 2√p`, checked in integers as `a_p² ≤ 4p`.
pub fn within_hasse(record: &ReductionRecord) -> bool {
    (record.a_p as i128).pow(2) <= 4 * record.p as i128
}

/// Parses `"x"` or `"n/d"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n.trim().parse().ok()?, d))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}
