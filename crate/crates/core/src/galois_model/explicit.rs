//! The model group `{(M, t, u) : M ∈ GL₂(ℤ/k), t ∈ (ℤ/k)^{2g}, u ∈ (ℤ/f)^×,
//! det M ≡ u mod gcd(k, f)}` enumerated element by element.
//!
//! `(M, t)` acts on `(ℤ/k)² × …` as the affine map `x ↦ Mx + t`, with one
//! translation column per point, so composition is
//! `(M, t, u)(M', t', u') = (MM', Mt' + t, uu')`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::{totient, GaloisError};
use crate::density_engine::{Containment, FamilyComparison, FamilyData, LevelData};
use crate::prime_engine::SquarefreeTerm;

/// Largest `k^4 · φ(f) · k^{2g}` accepted for enumeration.
pub const BRUTE_FORCE_CAPACITY: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelElement {
    /// `[a, b, c, d]` for the matrix `((a, b), (c, d))`.
    pub m: [u64; 4],
    /// `2g` entries; point `i` uses `t[2i]` and `t[2i + 1]`.
    pub t: Vec<u64>,
    pub u: u64,
}

impl ModelElement {
    pub fn det(&self, k: u64) -> u64 {
        let [a, b, c, d] = self.m;
        (a * d % k + k - b * c % k) % k
    }

    /// The restriction to `L_q` is trivial: `M ≡ I` and `t ≡ 0` mod `q`.
    pub fn is_identity_mod(&self, q: u64) -> bool {
        let [a, b, c, d] = self.m;
        a % q == 1 % q && b % q == 0 && c % q == 0 && d % q == 1 % q && self.t.iter().all(|&x| x % q == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplicitGroupModel {
    pub k: u64,
    pub f: u64,
    pub g: u32,
}

impl ExplicitGroupModel {
    pub fn new(k: u64, f: u64, g: u32) -> Result<Self, GaloisError> {
        if SquarefreeTerm::new(k).is_none() {
            return Err(GaloisError::NotSquarefree(k));
        }
        if f == 0 {
            return Err(GaloisError::InvalidCondition("modulus must be at least 1".into()));
        }
        Ok(ExplicitGroupModel { k, f, g })
    }

    fn d(&self) -> u64 {
        self.k.gcd(&self.f)
    }

    /// `k^{2g} · #GL₂(ℤ/k) · φ(f)/φ(gcd(k, f))`.
    pub fn order(&self) -> u128 {
        let gl2: u128 = SquarefreeTerm::new(self.k)
            .map(|t| t.factors.iter().map(|&q| ((q * q - 1) * (q * q - q)) as u128).product())
            .unwrap_or(0);
        (self.k as u128).pow(2 * self.g) * gl2 * (totient(self.f) / totient(self.d())) as u128
    }

    /// Work measure of a full enumeration, `k^4 · φ(f) · k^{2g}`.
    pub fn enumeration_size(&self) -> u128 {
        (self.k as u128).pow(4 + 2 * self.g) * totient(self.f) as u128
    }

    pub fn identity(&self) -> ModelElement {
        ModelElement { m: [1 % self.k, 0, 0, 1 % self.k], t: vec![0; 2 * self.g as usize], u: 1 % self.f }
    }

    pub fn contains(&self, e: &ModelElement) -> bool {
        let k = self.k;
        let d = self.d();
        e.m.iter().all(|&x| x < k)
            && e.t.len() == 2 * self.g as usize
            && e.t.iter().all(|&x| x < k)
            && e.u < self.f
            && e.u.gcd(&self.f) == 1
            && e.det(k).gcd(&k) == 1
            && e.det(k) % d == e.u % d
    }

    pub fn compose(&self, x: &ModelElement, y: &ModelElement) -> ModelElement {
        let k = self.k;
        let [a, b, c, d] = x.m;
        let [e, f, g, h] = y.m;
        let m = [(a * e + b * g) % k, (a * f + b * h) % k, (c * e + d * g) % k, (c * f + d * h) % k];
        let t = (0..self.g as usize)
            .flat_map(|i| {
                let (s0, s1) = (y.t[2 * i], y.t[2 * i + 1]);
                [(a * s0 + b * s1 + x.t[2 * i]) % k, (c * s0 + d * s1 + x.t[2 * i + 1]) % k]
            })
            .collect();
        ModelElement { m, t, u: x.u * y.u % self.f }
    }

    /// Visits every element once, in a fixed order.
    pub fn for_each<F: FnMut(&ModelElement)>(&self, mut visit: F) -> Result<(), GaloisError> {
        let size = self.enumeration_size();
        if size > BRUTE_FORCE_CAPACITY {
            return Err(GaloisError::Capacity { requested: size, max: BRUTE_FORCE_CAPACITY });
        }
        let (k, f, d) = (self.k, self.f, self.d());
        let units: Vec<u64> = (0..f).filter(|u| u.gcd(&f) == 1).collect();
        let tlen = 2 * self.g as usize;
        let mut e = self.identity();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for dd in 0..k {
                        e.m = [a, b, c, dd];
                        let det = e.det(k);
                        if det.gcd(&k) != 1 {
                            continue;
                        }
                        for &u in units.iter().filter(|&&u| u % d == det % d) {
                            e.u = u;
                            e.t.iter_mut().for_each(|x| *x = 0);
                            loop {
                                visit(&e);
                                // odometer over (ℤ/k)^{2g}
                                let mut i = 0;
                                while i < tlen {
                                    e.t[i] += 1;
                                    if e.t[i] < k {
                                        break;
                                    }
                                    e.t[i] = 0;
                                    i += 1;
                                }
                                if i == tlen {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> Result<Vec<ModelElement>, GaloisError> {
        let mut out = Vec::new();
        self.for_each(|e| out.push(e.clone()))?;
        Ok(out)
    }
}

/// Number of model elements satisfying `predicate`, by full enumeration.
pub fn brute_force_count<P: Fn(&ModelElement) -> bool>(model: &ExplicitGroupModel, predicate: P) -> Result<u64, GaloisError> {
    let mut n = 0u64;
    model.for_each(|e| {
        if predicate(e) {
            n += 1;
        }
    })?;
    Ok(n)
}

fn reduce(m: &[u64; 4], q: u64) -> [u64; 4] {
    [m[0] % q, m[1] % q, m[2] % q, m[3] % q]
}

/// `GL₂(ℤ/l)` for `l = Π primes` against its determinant quotient
/// `(ℤ/l)^×`, level by level. `C_q` is `{M mod q : primary(q, M)}` and
/// `C'_q` is `{u mod q : aux(q, u)}`.
pub fn gl2_vs_determinant<P, A>(primes: &[u64], primary: P, aux: A) -> Result<FamilyComparison, GaloisError>
where
    P: Fn(u64, &[u64; 4]) -> bool,
    A: Fn(u64, u64) -> bool,
{
    let l: u64 = primes.iter().product();
    let top = ExplicitGroupModel::new(l, 1, 0)?;
    let elements = top.elements()?;
    let units_l: Vec<u64> = (0..l).filter(|u| u.gcd(&l) == 1).collect();
    let unit_index: HashMap<u64, usize> = units_l.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    let mut levels = BTreeMap::new();
    let mut aux_levels = BTreeMap::new();
    let mut containment = BTreeMap::new();
    for &q in primes {
        let gq = ExplicitGroupModel::new(q, 1, 0)?.elements()?;
        let index: HashMap<[u64; 4], usize> = gq.iter().enumerate().map(|(i, e)| (e.m, i)).collect();
        let projection = elements.iter().map(|e| index[&reduce(&e.m, q)]).collect();
        let class = gq.iter().enumerate().filter(|(_, e)| primary(q, &e.m)).map(|(i, _)| i).collect();
        levels.insert(q, LevelData { size: gq.len(), projection, class });

        let units_q: Vec<u64> = (0..q).filter(|u| u.gcd(&q) == 1).collect();
        let uq_index: HashMap<u64, usize> = units_q.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let projection = units_l.iter().map(|u| uq_index[&(u % q)]).collect();
        let class = units_q.iter().enumerate().filter(|(_, &u)| aux(q, u)).map(|(i, _)| i).collect();
        aux_levels.insert(q, LevelData { size: units_q.len(), projection, class });

        let restriction = gq.iter().map(|e| uq_index[&e.det(q)]).collect();
        containment.insert(q, Containment { into: q, restriction });
    }
    let top_map = elements.iter().map(|e| unit_index[&e.det(l)]).collect();
    Ok(FamilyComparison {
        primary: FamilyData { order: elements.len(), levels },
        aux: FamilyData { order: units_l.len(), levels: aux_levels },
        containment,
        top: top_map,
    })
}
