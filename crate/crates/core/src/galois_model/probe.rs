//! Empirical test of whether the mod-q image of a curve could be all of
//! `GL₂(ℤ/q)`.
//!
//! Frobenius at `p` has characteristic polynomial `x² − a_p x + p` mod `q`.
//! Under a surjective image every pair `(t, d)` with `d ≠ 0` occurs with
//! density `#{M : tr M = t, det M = d} / #GL₂(ℤ/q) ≥ 1/(q² − 1)`. A pair
//! whose expected count is large but which never occurs is evidence
//! against surjectivity.

use std::collections::BTreeMap;

use serde::Serialize;

use super::GaloisError;
use crate::ec_reduction::{count_points, reduce_curve, CurveSpec};
use crate::prime_engine::{is_prime, PrimeRange, SegmentedSieve};

pub const PROBE_MAX_Q: u64 = 13;
pub const MIN_PROBE_BUDGET: usize = 100;
/// Primes are taken in increasing order below this bound.
pub const PROBE_SCAN_LIMIT: u64 = 1 << 24;
/// A class is reported missing only if its expected count reaches this.
const MIN_EXPECTED: f64 = 12.0;
const SCAN_WINDOW: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProbeVerdict {
    ConsistentWithSurjective,
    /// `(trace, det)` classes never observed, with their expected counts.
    NonSurjective { missing: Vec<(u64, u64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub q: u64,
    pub sampled: usize,
    pub largest_prime: u64,
    pub verdict: ProbeVerdict,
}

impl ProbeReport {
    pub fn is_surjective_consistent(&self) -> bool {
        self.verdict == ProbeVerdict::ConsistentWithSurjective
    }
}

/// Matrices in `GL₂(ℤ/q)` with characteristic polynomial `x² − tx + d`.
fn class_size(q: u64, t: u64, d: u64) -> u64 {
    let roots = (0..q).filter(|&x| (x * x + q * q - t * x % q + d) % q == 0).count();
    match roots {
        0 => q * q - q,
        1 => q * q,
        _ => q * q + q,
    }
}

/// Samples the first `budget` usable primes and tallies `(a_p mod q, p mod q)`.
pub fn image_probe(curve: &CurveSpec, q: u64, budget: usize) -> Result<ProbeReport, GaloisError> {
    if !is_prime(q) || q > PROBE_MAX_Q {
        return Err(GaloisError::InvalidProbe(q));
    }
    if budget < MIN_PROBE_BUDGET {
        return Err(GaloisError::InsufficientSamples { found: 0, needed: MIN_PROBE_BUDGET });
    }
    let mut tally: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut sampled = 0usize;
    let mut largest = 0u64;
    let sieve = SegmentedSieve::default();
    let mut lo = 3u64;
    while sampled < budget && lo <= PROBE_SCAN_LIMIT {
        let hi = (lo + SCAN_WINDOW - 1).min(PROBE_SCAN_LIMIT);
        for p in sieve.primes(PrimeRange::new(lo, hi)?)? {
            if sampled == budget {
                break;
            }
            if p == q {
                continue;
            }
            let Ok(rc) = reduce_curve(curve, p, 1) else { continue };
            let (_, a_p) = count_points(&rc);
            let t = a_p.rem_euclid(q as i64) as u64;
            *tally.entry((t, p % q)).or_default() += 1;
            sampled += 1;
            largest = p;
        }
        lo = hi + 1;
    }
    if sampled < budget {
        return Err(GaloisError::InsufficientSamples { found: sampled, needed: budget });
    }
    let gl2 = ((q * q - 1) * (q * q - q)) as f64;
    let mut missing = Vec::new();
    for d in 1..q {
        for t in 0..q {
            let expected = sampled as f64 * class_size(q, t, d) as f64 / gl2;
            if expected >= MIN_EXPECTED && !tally.contains_key(&(t, d)) {
                missing.push((t, d, expected));
            }
        }
    }
    let verdict =
        if missing.is_empty() { ProbeVerdict::ConsistentWithSurjective } else { ProbeVerdict::NonSurjective { missing } };
    Ok(ProbeReport { q, sampled, largest_prime: largest, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes_partition_gl2() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let total: u64 = (1..q).flat_map(|d| (0..q).map(move |t| class_size(q, t, d))).sum();
            assert_eq!(total, (q * q - 1) * (q * q - q));
        }
        // brute force at q = 3
        let mut counts = BTreeMap::new();
        for a in 0..3u64 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let det = (a * d + 9 - b * c) % 3;
                        if det != 0 {
                            *counts.entry(((a + d) % 3, det)).or_insert(0u64) += 1;
                        }
                    }
                }
            }
        }
        for ((t, d), n) in counts {
            assert_eq!(class_size(3, t, d), n);
        }
    }

    #[test]
    fn full_two_torsion_detected() {
        let curve = CurveSpec::new(-1, 0, vec![], &[]).unwrap();
        let r = image_probe(&curve, 2, 500).unwrap();
        assert_eq!(r.sampled, 500);
        match r.verdict {
            ProbeVerdict::NonSurjective { missing } => assert!(missing.iter().any(|&(t, d, _)| t == 1 && d == 1)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn irreducible_cubic_consistent() {
        // x³ + x + 1 is irreducible over ℚ with discriminant −31
        let curve = CurveSpec::new(1, 1, vec![], &[]).unwrap();
        let r = image_probe(&curve, 2, 500).unwrap();
        assert!(r.is_surjective_consistent(), "{r:?}");
    }

    #[test]
    fn budget_and_q_checks() {
        let curve = CurveSpec::new(1, 1, vec![], &[]).unwrap();
        assert!(matches!(image_probe(&curve, 2, 0), Err(GaloisError::InsufficientSamples { .. })));
        assert!(matches!(image_probe(&curve, 4, 500), Err(GaloisError::InvalidProbe(4))));
        assert!(matches!(image_probe(&curve, 17, 500), Err(GaloisError::InvalidProbe(17))));
        let a = image_probe(&curve, 3, 300).unwrap();
        let b = image_probe(&curve, 3, 300).unwrap();
        assert_eq!(a, b);
    }
}
