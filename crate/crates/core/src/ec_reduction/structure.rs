//! Invariant factors and an explicit basis of `E(F_p)`, one Sylow subgroup
//! at a time and without the Weil pairing.
//!
//! For `ℓ^e ‖ n` the ℓ-part is `ℤ/ℓ^a × ℤ/ℓ^b` with `a ≤ b`. It is cyclic
//! unless `ℓ | p − 1` and `e ≥ 2`. Otherwise a point `B` of maximal order
//! `ℓ^b` is found by sampling, then a complement `A` of order `ℓ^(e−b)`
//! whose order-ℓ multiple avoids `⟨B⟩`. Finding such a pair certifies the
//! decomposition, since `⟨A⟩ ⊕ ⟨B⟩` then has order `ℓ^e`.

use rand::Rng;

use super::curve::{Point, ReducedCurve};
use super::dlog::dlog_prime_power;
use super::EcError;
use crate::prime_engine::factor_powers;

const MAX_SYLOW_SAMPLES: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SylowPart {
    pub l: u64,
    /// exponent of ℓ in d1
    pub a: u32,
    /// exponent of ℓ in d2
    pub b: u32,
}

/// `E(F_p) = ⟨P1⟩ ⊕ ⟨P2⟩ ≅ ℤ/d1 × ℤ/d2` with `d1 | d2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub n: u64,
    pub d1: u64,
    pub d2: u64,
    pub p1: Point,
    pub p2: Point,
    pub sylow: Vec<SylowPart>,
}

impl GroupStructure {
    pub fn is_cyclic(&self) -> bool {
        self.d1 == 1
    }
}

fn l_order(rc: &ReducedCurve, pt: &Point, l: u64, e: u32) -> u32 {
    let mut cur = *pt;
    for t in 0..=e {
        if cur.is_infinity() {
            return t;
        }
        cur = rc.mul(&cur, l);
    }
    unreachable!("point outside the ℓ-Sylow subgroup")
}

fn sample_sylow<R: Rng>(rc: &ReducedCurve, cof: u64, rng: &mut R) -> Result<Point, EcError> {
    let pt = rc.random_point(rng).ok_or(EcError::StructureSearch { p: rc.p })?;
    Ok(rc.mul(&pt, cof))
}

/// Returns `(A, B, a, b)` for the ℓ-part.
fn sylow_basis<R: Rng>(rc: &ReducedCurve, n: u64, l: u64, e: u32, rng: &mut R) -> Result<(Point, Point, u32, u32), EcError> {
    let cof = n / l.pow(e);
    let cyclic_forced = e == 1 || (rc.p - 1) % l != 0;
    let mut best = Point::Infinity;
    let mut b = 0u32;
    for _ in 0..MAX_SYLOW_SAMPLES {
        let q = sample_sylow(rc, cof, rng)?;
        let t = l_order(rc, &q, l, e);
        if t > b {
            best = q;
            b = t;
            if b == e {
                return Ok((Point::Infinity, best, 0, e));
            }
            continue;
        }
        if cyclic_forced {
            continue;
        }
        let a = e - b;
        if a > b || a == 0 {
            continue;
        }
        // Try to turn q into a complement of ⟨best⟩.
        let la = l.pow(a);
        let Some(w) = dlog_prime_power(rc, &rc.mul(&q, la), &best, l, b) else { continue };
        if w % la != 0 {
            continue;
        }
        let c = rc.sub(&q, &rc.mul(&best, w / la));
        if !rc.mul(&c, la).is_infinity() {
            continue;
        }
        let y = rc.mul(&c, la / l);
        if y.is_infinity() {
            continue;
        }
        if dlog_prime_power(rc, &y, &best, l, b).is_none() {
            return Ok((c, best, a, b));
        }
    }
    Err(EcError::StructureSearch { p: rc.p })
}

/// Invariant factors and basis of a group of known order `n`.
pub fn group_structure<R: Rng>(rc: &ReducedCurve, n: u64, rng: &mut R) -> Result<GroupStructure, EcError> {
    let mut gs = GroupStructure { n, d1: 1, d2: 1, p1: Point::Infinity, p2: Point::Infinity, sylow: Vec::new() };
    for (l, e) in factor_powers(n) {
        let (pa, pb, a, b) = sylow_basis(rc, n, l, e, rng)?;
        gs.p1 = rc.add(&gs.p1, &pa);
        gs.p2 = rc.add(&gs.p2, &pb);
        gs.d1 *= l.pow(a);
        gs.d2 *= l.pow(b);
        gs.sylow.push(SylowPart { l, a, b });
    }
    Ok(gs)
}
