//! Independent brute-force oracles. Nothing here calls the library's
//! arithmetic; points, group law and orders are recomputed from scratch.
#![allow(dead_code)]

use std::collections::HashMap;

/// `None` is the point at infinity.
pub type Pt = Option<(i64, i64)>;

pub fn modp(v: i64, p: i64) -> i64 {
    v.rem_euclid(p)
}

fn inv(a: i64, p: i64) -> i64 {
    // Fermat
    let mut r = 1i64;
    let mut b = modp(a, p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[derive(Clone, Copy, Debug)]
pub struct Curve {
    pub p: i64,
    pub a: i64,
    pub b: i64,
}

impl Curve {
    pub fn new(p: i64, a: i64, b: i64) -> Self {
        Curve { p, a: modp(a, p), b: modp(b, p) }
    }

    pub fn is_singular(&self) -> bool {
        let p = self.p;
        modp(4 * self.a % p * self.a % p * self.a + 27 * self.b % p * self.b, p) == 0
    }

    pub fn add(&self, u: Pt, v: Pt) -> Pt {
        let p = self.p;
        let (Some((x1, y1)), Some((x2, y2))) = (u, v) else { return u.or(v) };
        let lam = if x1 == x2 {
            if modp(y1 + y2, p) == 0 {
                return None;
            }
            modp(3 * x1 % p * x1 + self.a, p) * inv(2 * y1, p) % p
        } else {
            modp(y2 - y1, p) * inv(modp(x2 - x1, p), p) % p
        };
        let x3 = modp(lam * lam - x1 - x2, p);
        let y3 = modp(lam * (x1 - x3) - y1, p);
        Some((x3, y3))
    }

    pub fn mul(&self, mut k: u64, pt: Pt) -> Pt {
        let mut acc = None;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Every point, by tabulating squares.
    pub fn points(&self) -> Vec<Pt> {
        let p = self.p;
        let mut roots: HashMap<i64, Vec<i64>> = HashMap::new();
        for y in 0..p {
            roots.entry(y * y % p).or_default().push(y);
        }
        let mut out = vec![None];
        for x in 0..p {
            let r = modp(x * x % p * x + self.a * x + self.b, p);
            if let Some(ys) = roots.get(&r) {
                out.extend(ys.iter().map(|&y| Some((x, y))));
            }
        }
        out
    }

    pub fn reduce(&self, num_x: i64, den_x: i64, num_y: i64, den_y: i64) -> Pt {
        let p = self.p;
        Some((modp(num_x, p) * inv(den_x, p) % p, modp(num_y, p) * inv(den_y, p) % p))
    }
}

/// Element orders in an abelian group given by its elements and an
/// addition on indices. Walks cyclic subgroups, so each element is
/// labelled from the walk of some generator of its own cyclic group.
fn orders<F: Fn(usize, usize) -> usize>(n: usize, zero: usize, add: F) -> Vec<usize> {
    let mut ord = vec![0usize; n];
    ord[zero] = 1;
    for start in 0..n {
        if ord[start] != 0 {
            continue;
        }
        let mut walk = vec![start];
        let mut cur = start;
        loop {
            cur = add(cur, start);
            if cur == zero {
                break;
            }
            walk.push(cur);
        }
        let k = walk.len() + 1;
        for (i, &e) in walk.iter().enumerate() {
            let j = i + 1;
            ord[e] = k / gcd(j, k);
        }
    }
    ord
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(d1, d2)` of a rank ≤ 2 abelian group from its order and exponent.
fn invariants(order: usize, ords: &[usize]) -> (u64, u64) {
    let exp = ords.iter().copied().max().unwrap_or(1);
    ((order / exp) as u64, exp as u64)
}

pub struct GroupOracle {
    pub n: u64,
    pub structure: (u64, u64),
    pub quotient: (u64, u64),
}

/// Point count, invariant factors, and invariant factors of the quotient by
/// the subgroup generated by `gens`, all by enumeration.
pub fn group_oracle(curve: &Curve, gens: &[Pt]) -> GroupOracle {
    let pts = curve.points();
    let n = pts.len();
    let index: HashMap<Pt, usize> = pts.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let add = |i: usize, j: usize| index[&curve.add(pts[i], pts[j])];
    let zero = index[&None];
    let ords = orders(n, zero, add);
    let structure = invariants(n, &ords);

    // subgroup H generated by gens
    let mut in_h = vec![false; n];
    in_h[zero] = true;
    let mut h = vec![zero];
    let mut frontier = vec![zero];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let s = add(e, index[g]);
            if !in_h[s] {
                in_h[s] = true;
                h.push(s);
                frontier.push(s);
            }
        }
    }
    // cosets
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for e in 0..n {
        if coset[e] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for &x in &h {
            coset[add(e, x)] = id;
        }
    }
    let m = reps.len();
    let qzero = coset[zero];
    let qords = orders(m, qzero, |a, b| coset[add(reps[a], reps[b])]);
    GroupOracle { n: n as u64, structure, quotient: invariants(m, &qords) }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime factors of `n`, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A curve `y² = x³ + ax + b` with rational points as `(nx, dx, ny, dy)`.
pub struct TestCurve {
    pub a: i64,
    pub b: i64,
    pub points: Vec<(i64, i64, i64, i64)>,
}

impl TestCurve {
    pub fn point_strings(&self) -> Vec<String> {
        self.points.iter().map(|&(nx, dx, ny, dy)| format!("{nx}/{dx},{ny}/{dy}")).collect()
    }

    pub fn bad_prime(&self, p: u64) -> bool {
        let disc = 4 * (self.a as i128).pow(3) + 27 * (self.b as i128).pow(2);
        p == 2 || disc % p as i128 == 0 || self.points.iter().any(|&(_, dx, _, dy)| dx % p as i64 == 0 || dy % p as i64 == 0)
    }
}

fn int(a: i64, b: i64, pts: &[(i64, i64)]) -> TestCurve {
    TestCurve { a, b, points: pts.iter().map(|&(x, y)| (x, 1, y, 1)).collect() }
}

/// Twenty curves with zero to three listed points, including torsion
/// points, dependent points and a non-integral point.
pub fn fixed_curves() -> Vec<TestCurve> {
    let mut v = vec![
        int(-1, 0, &[]),
        int(-16, 16, &[]),
        int(-16, 16, &[(0, 4)]),
        int(0, 1, &[(2, 3)]),
        int(0, -2, &[(3, 5)]),
        int(0, 17, &[(-2, 3), (4, 9)]),
        int(0, 17, &[(-2, 3), (-1, 4), (2, 5)]),
        int(-2, 5, &[(1, 2)]),
        int(1, 1, &[(0, 1)]),
        int(-7, 10, &[(1, 2), (2, 2)]),
        int(0, 8, &[(1, 3), (2, 4)]),
        int(-3, 3, &[(1, 1)]),
        int(0, -11, &[(3, 4)]),
        int(-4, 4, &[(0, 2), (1, 1)]),
        int(2, 3, &[]),
        int(-1, 0, &[(0, 0)]),
        int(5, -3, &[]),
        int(0, 1, &[(2, 3), (-1, 0)]),
        int(-16, 16, &[(0, 4), (4, 4)]),
    ];
    // (129/100, −383/1000) on y² = x³ − 2
    v.push(TestCurve { a: 0, b: -2, points: vec![(3, 1, 5, 1), (129, 100, -383, 1000)] });
    v
}
