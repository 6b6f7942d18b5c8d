//! 64-bit factorization: trial division, then Miller–Rabin with a
//! deterministic base set and Pollard–Brent rho on what remains.

const TRIAL_LIMIT: u64 = 10_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for all `n < 2^64` (first twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant; `n` must be an odd composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factors of `n` with multiplicity, sorted ascending. `factorize(1)`
/// is empty; `factorize(0)` is treated the same way.
pub fn factorize(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut m = n;
    while m % 2 == 0 {
        out.push(2);
        m /= 2;
    }
    let mut d = 3;
    while d <= TRIAL_LIMIT && d * d <= m {
        while m % d == 0 {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        if d * d > m {
            out.push(m);
        } else {
            split_into(m, &mut out);
        }
    }
    out.sort_unstable();
    out
}

/// Distinct primes with exponents, ascending.
pub(crate) fn factor_powers(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in factorize(n) {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial(n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            while m % d == 0 {
                out.push(d);
                m /= d;
            }
            d += 1;
        }
        if m > 1 {
            out.push(m);
        }
        out
    }

    #[test]
    fn small_cases() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(8), vec![2, 2, 2]);
        assert_eq!(factorize(1_000_003), vec![1_000_003]);
        assert_eq!(trial(1_000_003), vec![1_000_003]);
        assert_eq!(factor_powers(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn large_semiprimes() {
        let p = 4_294_967_291u64;
        let q = 4_294_967_279u64;
        assert_eq!(factorize(p * q), vec![q, p]);
        let r = 1_000_000_007u64;
        assert_eq!(factorize(r * r), vec![r, r]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn recomposes_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().product::<u64>(), n);
            assert_eq!(f, trial(n), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn recomposes(n in 1u64..u64::MAX) {
            let f = factorize(n);
            prop_assert_eq!(f.iter().map(|&p| p as u128).product::<u128>(), n as u128);
            prop_assert!(f.iter().all(|&p| is_prime(p)));
        }
    }
}
