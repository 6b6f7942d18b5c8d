//! Point counting: character sums below 2^16, baby-step giant-step order
//! finding inside the Hasse interval above.

use std::collections::HashMap;

use rand::Rng;

use super::curve::{Point, ReducedCurve};
use super::field;
use crate::prime_engine::factorize;

pub const NAIVE_COUNT_LIMIT: u64 = 1 << 16;

const MAX_POINT_SAMPLES: usize = 24;

/// `#E(F_p)` including the identity, and the trace `a_p = p + 1 − n`.
pub fn count_points<R: Rng>(rc: &ReducedCurve, rng: &mut R) -> (u64, i64) {
    let n = if rc.p < NAIVE_COUNT_LIMIT {
        count_naive(rc)
    } else {
        count_bsgs(rc, rng).unwrap_or_else(|| count_legendre(rc))
    };
    (n, rc.p as i64 + 1 - n as i64)
}

/// Character sum with a precomputed table of squares.
pub fn count_naive(rc: &ReducedCurve) -> u64 {
    let p = rc.p as usize;
    let mut square = vec![false; p];
    for y in 0..p.div_ceil(2) {
        square[y * y % p] = true;
    }
    let mut n = 1u64;
    for x in 0..rc.p {
        let r = rc.rhs(x) as usize;
        if r == 0 {
            n += 1;
        } else if square[r] {
            n += 2;
        }
    }
    n
}

/// Character sum with Euler's criterion per x; O(p log p), last resort.
pub fn count_legendre(rc: &ReducedCurve) -> u64 {
    let mut n = 1i64 + rc.p as i64;
    for x in 0..rc.p {
        n += field::legendre(rc.rhs(x), rc.p) as i64;
    }
    n as u64
}

/// Hasse interval `[p + 1 − w, p + 1 + w]` with `w = ⌈2√p⌉`.
pub fn hasse_interval(p: u64) -> (u64, u64) {
    let mut w = (4 * p).isqrt();
    if w * w < 4 * p {
        w += 1;
    }
    ((p + 1).saturating_sub(w), p + 1 + w)
}

/// Some `m` with `m·pt = O`, searched from `lo` upward by BSGS. Any point
/// order up to `hi` is found; the result may exceed `hi`.
pub fn annihilator_in(rc: &ReducedCurve, pt: &Point, lo: u64, hi: u64) -> u64 {
    let width = hi - lo;
    let s = ((width + 1) as f64).sqrt().ceil() as u64 + 1;
    let mut baby: HashMap<Point, u64> = HashMap::with_capacity(s as usize + 1);
    let mut cur = Point::Infinity;
    for j in 0..=s {
        baby.entry(cur).or_insert(j);
        cur = rc.add(&cur, pt);
    }
    let giant = rc.mul(pt, s);
    let mut r = rc.mul(pt, lo);
    let mut i = 0;
    loop {
        if let Some(&j) = baby.get(&rc.neg(&r)) {
            let m = lo + i * s + j;
            if m > 0 {
                return m;
            }
        }
        r = rc.add(&r, &giant);
        i += 1;
        debug_assert!(i <= s + 2, "no multiple found in Hasse window");
    }
}

/// Exact order of `pt` given any positive multiple of it.
pub fn order_from_multiple(rc: &ReducedCurve, pt: &Point, multiple: u64) -> u64 {
    let mut m = multiple;
    let mut primes = factorize(multiple);
    primes.dedup();
    for l in primes {
        while m % l == 0 && rc.mul(pt, m / l).is_infinity() {
            m /= l;
        }
    }
    m
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

fn candidates(lo: u64, hi: u64, step: u64) -> Vec<u64> {
    let first = lo.div_ceil(step) * step;
    (0..).map(|i| first + i * step).take_while(|&m| m <= hi).collect()
}

/// Exponent information accumulated from random point orders.
fn exponent_lcm<R: Rng>(rc: &ReducedCurve, rng: &mut R, samples: usize, stop_when_unique: bool) -> u64 {
    let (lo, hi) = hasse_interval(rc.p);
    let mut l = 1u64;
    for _ in 0..samples {
        let Some(pt) = rc.random_point(rng) else { break };
        let m = annihilator_in(rc, &pt, lo, hi);
        l = lcm(l, order_from_multiple(rc, &pt, m));
        if stop_when_unique && candidates(lo, hi, l).len() == 1 {
            break;
        }
    }
    l
}

fn count_bsgs<R: Rng>(rc: &ReducedCurve, rng: &mut R) -> Option<u64> {
    let p = rc.p;
    let (lo, hi) = hasse_interval(p);
    let l = exponent_lcm(rc, rng, MAX_POINT_SAMPLES, true);
    let cands = candidates(lo, hi, l);
    if cands.len() == 1 {
        return Some(cands[0]);
    }
    // Ambiguous: bring in the twist, whose order is 2p + 2 − n.
    let tw = rc.twist();
    let lt = exponent_lcm(&tw, rng, MAX_POINT_SAMPLES, false);
    let both: Vec<u64> = cands.into_iter().filter(|&n| (2 * p + 2 - n) % lt == 0).collect();
    if both.len() == 1 {
        Some(both[0])
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn naive_small_examples() {
        // y^2 = x^3 + 1 over F_5: 6 points; y^2 = x^3 - x over F_5: 8 points.
        assert_eq!(count_naive(&ReducedCurve { p: 5, a: 0, b: 1 }), 6);
        assert_eq!(count_naive(&ReducedCurve { p: 5, a: 4, b: 0 }), 8);
    }

    #[test]
    fn bsgs_agrees_with_character_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let primes = crate::prime_engine::sieve_primes(
            crate::prime_engine::PrimeRange::new(65_537, 67_500).unwrap(),
        )
        .unwrap();
        for &p in &primes {
            for &(a, b) in &[(0i64, 1i64), (-1, 0), (1, 1), (-16, 16), (0, 7)] {
                let rc = ReducedCurve { p, a: field::from_i64(a, p), b: field::from_i64(b, p) };
                let disc = (4 * rc.a % p * rc.a % p * rc.a + 27 * rc.b % p * rc.b) % p;
                if disc == 0 {
                    continue;
                }
                let fast = count_bsgs(&rc, &mut rng).unwrap_or_else(|| count_legendre(&rc));
                assert_eq!(fast, count_naive(&rc), "p={p} a={a} b={b}");
            }
        }
    }

    #[test]
    fn hasse_window() {
        assert_eq!(hasse_interval(5), (1, 11));
        let (lo, hi) = hasse_interval(1_000_003);
        assert!(lo <= 1_000_004 - 2000 && hi >= 1_000_004 + 2000);
    }
}
