//! Exact-rational helpers: balanced reductions and one-sided bounds on
//! rational powers.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

/// Fixed-point scale for power bounds, `2^48`.
const POWER_SCALE_BITS: u64 = 48;

/// Sum by pairwise reduction so intermediate denominators stay balanced.
pub fn tree_sum(mut terms: Vec<BigRational>) -> BigRational {
    if terms.is_empty() {
        return BigRational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

pub fn tree_product(mut terms: Vec<BigRational>) -> BigRational {
    if terms.is_empty() {
        return BigRational::one();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// A rational `L` with `0 < L ≤ base^e`, for `base ≥ 1` and `e ≥ 0`.
pub fn pow_lower(base: u64, e: Rational64) -> BigRational {
    debug_assert!(base >= 1 && *e.numer() >= 0);
    let p = *e.numer() as u32;
    let q = *e.denom() as u32;
    let scale = BigUint::one() << POWER_SCALE_BITS;
    // floor((base^p · S^q)^(1/q)) / S
    let radicand = BigUint::from(base).pow(p) * scale.pow(q);
    let root = radicand.nth_root(q);
    BigRational::new(BigInt::from(root), BigInt::from(scale))
}

/// A rational upper bound on `base^(−e)`.
pub fn inv_pow_upper(base: u64, e: Rational64) -> BigRational {
    pow_lower(base, e).recip()
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
