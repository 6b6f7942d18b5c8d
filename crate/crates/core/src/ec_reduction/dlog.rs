//! Discrete logarithms in `E(F_p) ≅ ℤ/d1 × ℤ/d2`.
//!
//! Each Sylow piece is handled separately. A cyclic piece goes through
//! Pohlig–Hellman with BSGS per digit. A rank-two piece `ℤ/ℓ^a × ℤ/ℓ^b`
//! first peels off `v mod ℓ^(b−a)` through the `ℓ^a` multiple, leaving an
//! equal-order `ℤ/ℓ^a × ℤ/ℓ^a` problem that is solved digit by digit.

use std::collections::HashMap;

use super::curve::{Point, ReducedCurve};
use super::structure::GroupStructure;

/// Groups at or below this order are decomposed by exhaustive search.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

const LINEAR_SCAN_LIMIT: u64 = 64;

/// `x` in `[0, l)` with `x·gen = target`, where `gen` has prime order `l`.
fn dlog_prime_order(rc: &ReducedCurve, target: &Point, gen: &Point, l: u64) -> Option<u64> {
    if l <= LINEAR_SCAN_LIMIT {
        let mut cur = Point::Infinity;
        for x in 0..l {
            if cur == *target {
                return Some(x);
            }
            cur = rc.add(&cur, gen);
        }
        return None;
    }
    let s = (l as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(s as usize);
    let mut cur = Point::Infinity;
    for j in 0..s {
        baby.entry(cur).or_insert(j);
        cur = rc.add(&cur, gen);
    }
    let giant = rc.neg(&rc.mul(gen, s));
    let mut r = *target;
    for i in 0..=s {
        if let Some(&j) = baby.get(&r) {
            let x = i * s + j;
            if x < l {
                return Some(x);
            }
        }
        r = rc.add(&r, &giant);
    }
    None
}

/// `x mod l^e` with `x·gen = target`, where `gen` has order exactly `l^e`.
/// Returns `None` when `target ∉ ⟨gen⟩`.
pub fn dlog_prime_power(rc: &ReducedCurve, target: &Point, gen: &Point, l: u64, e: u32) -> Option<u64> {
    if e == 0 {
        return target.is_infinity().then_some(0);
    }
    let gamma = rc.mul(gen, l.pow(e - 1));
    let mut x = 0u64;
    for k in 0..e {
        let rem = rc.sub(target, &rc.mul(gen, x));
        let h = rc.mul(&rem, l.pow(e - 1 - k));
        let d = dlog_prime_order(rc, &h, &gamma, l)?;
        x += d * l.pow(k);
    }
    (rc.mul(gen, x) == *target).then_some(x)
}

/// `(u, w)` in `[0, l^a)²` with `u·a_gen + w·b_gen = target`; both
/// generators of order `l^a` with trivially intersecting cyclic groups.
fn dlog_square(rc: &ReducedCurve, target: &Point, a_gen: &Point, b_gen: &Point, l: u64, a: u32) -> Option<(u64, u64)> {
    let a1 = rc.mul(a_gen, l.pow(a - 1));
    let b1 = rc.mul(b_gen, l.pow(a - 1));
    let mut table = HashMap::with_capacity(l as usize);
    let mut cur = Point::Infinity;
    for du in 0..l {
        table.insert(cur, du);
        cur = rc.add(&cur, &a1);
    }
    let (mut u, mut w) = (0u64, 0u64);
    for k in 0..a {
        let known = rc.add(&rc.mul(a_gen, u), &rc.mul(b_gen, w));
        let h = rc.mul(&rc.sub(target, &known), l.pow(a - 1 - k));
        let mut found = None;
        let mut probe = h;
        for dw in 0..l {
            if let Some(&du) = table.get(&probe) {
                found = Some((du, dw));
                break;
            }
            probe = rc.sub(&probe, &b1);
        }
        let (du, dw) = found?;
        u += du * l.pow(k);
        w += dw * l.pow(k);
    }
    Some((u, w))
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> (u64, u64) {
    // m1, m2 coprime
    if m1 == 1 {
        return (r2 % m2, m2);
    }
    if m2 == 1 {
        return (r1 % m1, m1);
    }
    let m = m1 as u128 * m2 as u128;
    let inv = super::field::inv(m1 % m2, m2) as u128;
    let t = ((r2 as u128 + m2 as u128 - r1 as u128 % m2 as u128) % m2 as u128) * inv % m2 as u128;
    (((r1 as u128 + m1 as u128 * t) % m) as u64, m as u64)
}

/// Coordinates `(u, v)` with `pt = u·P1 + v·P2`, `0 ≤ u < d1`, `0 ≤ v < d2`.
pub fn decompose_point(rc: &ReducedCurve, pt: &Point, gs: &GroupStructure) -> (u64, u64) {
    if gs.n <= BRUTE_FORCE_LIMIT {
        decompose_brute_force(rc, pt, gs)
    } else {
        decompose_pohlig_hellman(rc, pt, gs)
    }
}

pub fn decompose_brute_force(rc: &ReducedCurve, pt: &Point, gs: &GroupStructure) -> (u64, u64) {
    let mut row = Point::Infinity;
    for u in 0..gs.d1 {
        let mut cur = row;
        for v in 0..gs.d2 {
            if cur == *pt {
                return (u, v);
            }
            cur = rc.add(&cur, &gs.p2);
        }
        row = rc.add(&row, &gs.p1);
    }
    panic!("point {pt:?} not generated by the basis of {gs:?}");
}

pub fn decompose_pohlig_hellman(rc: &ReducedCurve, pt: &Point, gs: &GroupStructure) -> (u64, u64) {
    let (mut u, mut mu) = (0u64, 1u64);
    let (mut v, mut mv) = (0u64, 1u64);
    for part in &gs.sylow {
        let l = part.l;
        let (a, b) = (part.a, part.b);
        let cof = gs.n / l.pow(a + b);
        let ga = rc.mul(&gs.p1, cof);
        let gb = rc.mul(&gs.p2, cof);
        let x = rc.mul(pt, cof);
        let (ul, vl) = if a == 0 {
            let vl = dlog_prime_power(rc, &x, &gb, l, b).expect("Sylow component outside basis span");
            (0, vl)
        } else {
            let la = l.pow(a);
            let x1 = rc.mul(&x, la);
            let b1 = rc.mul(&gb, la);
            let v0 = dlog_prime_power(rc, &x1, &b1, l, b - a).expect("Sylow component outside basis span");
            let x2 = rc.sub(&x, &rc.mul(&gb, v0));
            let b2 = rc.mul(&gb, l.pow(b - a));
            let (ul, w) = dlog_square(rc, &x2, &ga, &b2, l, a).expect("Sylow component outside basis span");
            (ul, (v0 + w * l.pow(b - a)) % l.pow(b))
        };
        (u, mu) = crt_pair(u, mu, ul, l.pow(a));
        (v, mv) = crt_pair(v, mv, vl, l.pow(b));
    }
    debug_assert_eq!((mu, mv), (gs.d1, gs.d2));
    debug_assert_eq!(rc.add(&rc.mul(&gs.p1, u), &rc.mul(&gs.p2, v)), *pt);
    (u, v)
}
