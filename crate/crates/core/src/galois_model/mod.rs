//! Exact splitting densities from a finite model of `Gal(L_k F/ℚ)`.
//!
//! In the generic model the division field `L_q` of a curve with `g`
//! points has group `(ℤ/q)^{2g} ⋊ GL₂(ℤ/q)`, the fields `L_q` are
//! independent across `q`, and `F = ℚ(ζ_f)` meets `L_k` only through the
//! determinant: `det M ≡ u (mod gcd(k, f))`. Per-prime degree overrides
//! replace `#G_q` for curves whose image is known to be smaller.

mod explicit;
mod probe;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use explicit::{
    brute_force_count, gl2_vs_determinant, ExplicitGroupModel, ModelElement, BRUTE_FORCE_CAPACITY,
};
pub use probe::{image_probe, ProbeReport, ProbeVerdict, MIN_PROBE_BUDGET, PROBE_MAX_Q, PROBE_SCAN_LIMIT};

use crate::density_engine::{FamilyDescriptor, TailData};
use crate::ec_reduction::EcError;
use crate::prime_engine::{factor_powers, is_prime, PrimeError, SquarefreeTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("invalid congruence condition: {0}")]
    InvalidCondition(String),
    #[error("degree override {degree} at q = {q} is invalid: {reason}")]
    InvalidOverride { q: u64, degree: u64, reason: String },
    #[error("enumeration of {requested} elements exceeds capacity {max}")]
    Capacity { requested: u128, max: u128 },
    #[error("probe needs q prime and at most {PROBE_MAX_Q}, got {0}")]
    InvalidProbe(u64),
    #[error("only {found} usable primes found, {needed} required")]
    InsufficientSamples { found: usize, needed: usize },
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factor_powers(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `F = ℚ(ζ_f)` with the Frobenius classes `C_F ⊆ (ℤ/f)^×`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCondition {
    pub f: u64,
    pub residues: BTreeSet<u64>,
}

impl CongruenceCondition {
    /// Residues are reduced modulo `f`; each must be a unit.
    pub fn new(f: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, GaloisError> {
        if f == 0 {
            return Err(GaloisError::InvalidCondition("modulus must be at least 1".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().map(|c| c % f).collect();
        if let Some(c) = residues.iter().find(|&&c| c.gcd(&f) != 1) {
            return Err(GaloisError::InvalidCondition(format!("residue {c} is not a unit mod {f}")));
        }
        Ok(CongruenceCondition { f, residues })
    }

    /// No condition: `f = 1`, every prime admissible.
    pub fn trivial() -> Self {
        CongruenceCondition { f: 1, residues: BTreeSet::from([0]) }
    }

    /// Every unit modulo `f`.
    pub fn full(f: u64) -> Self {
        let residues = (0..f).filter(|c| c.gcd(&f) == 1).collect();
        CongruenceCondition { f, residues }
    }

    /// `(ℤ/f)^× ∖ C_F`.
    pub fn complement(&self) -> Self {
        let residues = (0..self.f).filter(|c| c.gcd(&self.f) == 1 && !self.residues.contains(c)).collect();
        CongruenceCondition { f: self.f, residues }
    }

    pub fn is_full(&self) -> bool {
        self.residues.len() as u64 == totient(self.f)
    }

    pub fn admits(&self, p: u64) -> bool {
        self.residues.contains(&(p % self.f))
    }
}

/// `#GL₂(ℤ/k) = Π_{q | k} (q² − 1)(q² − q)` for squarefree `k`.
pub fn gl2_order(k: u64) -> Result<BigUint, GaloisError> {
    let term = SquarefreeTerm::new(k).ok_or(GaloisError::NotSquarefree(k))?;
    Ok(term.factors.iter().map(|&q| gl2_prime_order(q)).product())
}

fn gl2_prime_order(q: u64) -> BigUint {
    BigUint::from(q * q - 1) * BigUint::from(q * q - q)
}

/// Generic image model for a curve with `g` points, with optional exact
/// degrees `[L_q : ℚ]` at individual primes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GenericImageModel {
    pub g: u32,
    pub degree_overrides: BTreeMap<u64, u64>,
}

impl GenericImageModel {
    pub fn new(g: u32) -> Self {
        GenericImageModel { g, degree_overrides: BTreeMap::new() }
    }

    /// Overrides must sit at primes and divide the generic `q^{2g}·#GL₂(ℤ/q)`.
    pub fn with_overrides(g: u32, overrides: BTreeMap<u64, u64>) -> Result<Self, GaloisError> {
        let model = GenericImageModel { g, degree_overrides: overrides };
        for (&q, &degree) in &model.degree_overrides {
            let fail = |reason: &str| GaloisError::InvalidOverride { q, degree, reason: reason.into() };
            if !is_prime(q) {
                return Err(fail("not a prime"));
            }
            if degree == 0 {
                return Err(fail("degree must be positive"));
            }
            if !(model.generic_prime_degree(q) % BigUint::from(degree)).is_zero() {
                return Err(fail("does not divide the generic degree"));
            }
        }
        Ok(model)
    }

    fn generic_prime_degree(&self, q: u64) -> BigUint {
        BigUint::from(q).pow(2 * self.g) * gl2_prime_order(q)
    }

    fn prime_degree(&self, q: u64) -> BigUint {
        match self.degree_overrides.get(&q) {
            Some(&d) => BigUint::from(d),
            None => self.generic_prime_degree(q),
        }
    }

    fn degree_of(&self, term: &SquarefreeTerm) -> BigUint {
        term.factors.iter().map(|&q| self.prime_degree(q)).product()
    }

    /// `[L_k : ℚ]`, multiplied out over `q | k`.
    pub fn generic_degree(&self, k: u64) -> Result<BigUint, GaloisError> {
        let term = SquarefreeTerm::new(k).ok_or(GaloisError::NotSquarefree(k))?;
        Ok(self.degree_of(&term))
    }

    /// `δ_k = 1/[L_k : ℚ]`.
    pub fn delta_k(&self, k: u64) -> Result<BigRational, GaloisError> {
        Ok(recip(self.generic_degree(k)?))
    }

    /// `#{c ∈ C_F : c ≡ 1 mod d} / ([L_k : ℚ] · φ(f)/φ(d))` with `d = gcd(k, f)`.
    pub fn delta_cf_k(&self, k: u64, cond: &CongruenceCondition) -> Result<BigRational, GaloisError> {
        let term = SquarefreeTerm::new(k).ok_or(GaloisError::NotSquarefree(k))?;
        Ok(self.delta_cf_term(&term, cond))
    }

    fn delta_cf_term(&self, term: &SquarefreeTerm, cond: &CongruenceCondition) -> BigRational {
        let d = term.k.gcd(&cond.f);
        let hits = cond.residues.iter().filter(|&&c| c % d == 1 % d).count();
        let denom = self.degree_of(term) * BigUint::from(totient(cond.f) / totient(d));
        BigRational::new(BigInt::from(hits), BigInt::from(denom))
    }

    /// `δ_k ≤ c/k³` with `c = 4/3 · Π_{q overridden} max(1, q³/[L_q : ℚ])`.
    ///
    /// Unoverridden primes satisfy `#G_q ≥ (q² − 1)(q² − q) ≥ q³` for
    /// `q ≥ 3` and `= 3/4 · 2³` at `q = 2`.
    pub fn certified_tail(&self) -> TailData {
        let mut c = BigRational::new(4.into(), 3.into());
        for (&q, &deg) in &self.degree_overrides {
            let ratio = BigRational::new(BigInt::from(q).pow(3), BigInt::from(deg));
            if ratio > BigRational::one() {
                c *= ratio;
            }
        }
        TailData::certified(c, Rational64::from_integer(3))
    }

    /// `k ↦ δ_{C_F,k}` with certified tail data. Multiplicative exactly when
    /// the condition does not restrict the Frobenius.
    pub fn family(&self, cond: &CongruenceCondition) -> FamilyDescriptor {
        let model = self.clone();
        let cond_c = cond.clone();
        let multiplicative = cond.is_full();
        FamilyDescriptor::new(move |t: &SquarefreeTerm| model.delta_cf_term(t, &cond_c), multiplicative)
            .with_tail(self.certified_tail())
    }

    /// `k ↦ δ_k`, multiplicative.
    pub fn cyclicity_family(&self) -> FamilyDescriptor {
        self.family(&CongruenceCondition::trivial())
    }
}

fn recip(d: BigUint) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density_engine;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gl2_examples() {
        assert_eq!(gl2_order(1).unwrap(), BigUint::one());
        assert_eq!(gl2_order(2).unwrap(), BigUint::from(6u32));
        assert_eq!(gl2_order(6).unwrap(), BigUint::from(288u32));
        assert_eq!(gl2_order(4), Err(GaloisError::NotSquarefree(4)));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(GenericImageModel::new(0).generic_degree(2).unwrap(), BigUint::from(6u32));
        assert_eq!(GenericImageModel::new(1).generic_degree(2).unwrap(), BigUint::from(24u32));
        assert_eq!(GenericImageModel::new(0).generic_degree(1).unwrap(), BigUint::one());
    }

    #[test]
    fn delta_examples() {
        let m = GenericImageModel::new(0);
        assert_eq!(m.delta_k(1).unwrap(), r(1, 1));
        assert_eq!(m.delta_k(2).unwrap(), r(1, 6));
        assert_eq!(m.delta_k(3).unwrap(), r(1, 48));
        let c = CongruenceCondition::new(4, [3]).unwrap();
        assert_eq!(m.delta_cf_k(1, &c).unwrap(), r(1, 2));
        assert_eq!(m.delta_cf_k(2, &c).unwrap(), r(1, 12));
        assert_eq!(m.delta_cf_k(3, &c).unwrap(), r(1, 96));
    }

    #[test]
    fn overrides() {
        let m = GenericImageModel::with_overrides(0, BTreeMap::from([(2, 1)])).unwrap();
        assert_eq!(m.delta_k(2).unwrap(), r(1, 1));
        assert_eq!(m.delta_k(6).unwrap(), r(1, 48));
        assert!(GenericImageModel::with_overrides(0, BTreeMap::from([(2, 4)])).is_err());
        assert!(GenericImageModel::with_overrides(0, BTreeMap::from([(4, 2)])).is_err());
        assert!(GenericImageModel::with_overrides(0, BTreeMap::from([(3, 0)])).is_err());
        assert!(m.cyclicity_family().validate().is_ok());
    }

    #[test]
    fn condition_validation() {
        assert!(CongruenceCondition::new(4, [2]).is_err());
        assert!(CongruenceCondition::new(0, [1]).is_err());
        assert_eq!(CongruenceCondition::new(5, [7]).unwrap().residues, BTreeSet::from([2]));
        assert_eq!(CongruenceCondition::new(8, [1]).unwrap().complement().residues, BTreeSet::from([3, 5, 7]));
        assert!(CongruenceCondition::trivial().is_full());
        assert!(CongruenceCondition::trivial().admits(17));
        assert_eq!(totient(1), 1);
        assert_eq!(totient(8), 4);
        assert_eq!(totient(30), 8);
    }

    #[test]
    fn families_validate() {
        for g in 0..3 {
            let m = GenericImageModel::new(g);
            assert!(m.cyclicity_family().validate().is_ok());
            for f in [3, 4, 5, 8] {
                for c in CongruenceCondition::full(f).residues {
                    let cond = CongruenceCondition::new(f, [c]).unwrap();
                    assert!(m.family(&cond).validate().is_ok());
                }
            }
        }
    }

    #[test]
    fn complement_identity() {
        let m = GenericImageModel::new(0);
        for f in 1..=8u64 {
            let units: Vec<u64> = CongruenceCondition::full(f).residues.into_iter().collect();
            for mask in 0u32..(1 << units.len()) {
                let cond =
                    CongruenceCondition::new(f, units.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c))
                        .unwrap();
                let comp = cond.complement();
                for k in (1..=30).filter(|&k| SquarefreeTerm::new(k).is_some()) {
                    let sum = m.delta_cf_k(k, &cond).unwrap() + m.delta_cf_k(k, &comp).unwrap();
                    assert_eq!(sum, m.delta_k(k).unwrap(), "f = {f}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn series_from_model() {
        let fam = GenericImageModel::new(0).cyclicity_family();
        assert_eq!(density_engine::truncated_series(&fam, 3).unwrap(), r(13, 16));
        let half = GenericImageModel::new(0).family(&CongruenceCondition::new(4, [3]).unwrap());
        assert!(!half.multiplicative);
        let a = density_engine::truncated_series(&half, 100).unwrap();
        let b = density_engine::truncated_series(&fam, 100).unwrap();
        assert_eq!(a * BigRational::from_integer(2.into()), b);
    }
}
