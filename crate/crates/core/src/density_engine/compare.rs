//! Comparison of two families of splitting conditions on explicit finite
//! Galois data.
//!
//! The primary family is `Gal(L_l/K)` with a projection to each `G_q`,
//! `q ∈ T`; the auxiliary one is `Gal(L'_{l'}/K)` with projections to each
//! `G'_{q'}`, `q' ∈ T'`. Groups are given by element indices only. The
//! checker confirms that every auxiliary field sits inside a primary one,
//! that the class sets pull back into each other, and that the restriction
//! maps commute, then counts both sides of
//! `#{σ : σ|_{L_q} ∈ C_q ∀q} ≥ [L_l : L_{l'}] · #{σ' : σ'|_{L'_{q'}} ∈ C'_{q'} ∀q'}`.

use std::collections::{BTreeMap, BTreeSet};

use super::DensityError;

/// Largest top-level group the checker enumerates.
pub const COMPARE_MAX_ORDER: usize = 10_000_000;

/// One level `G_q` of a family: the projection from the top group and the
/// class set `C_q ⊆ G_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelData {
    pub size: usize,
    pub projection: Vec<usize>,
    pub class: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyData {
    pub order: usize,
    pub levels: BTreeMap<u64, LevelData>,
}

impl FamilyData {
    /// Elements whose every projection lies in the class set.
    pub fn count_in_classes(&self) -> u64 {
        (0..self.order)
            .filter(|&s| self.levels.values().all(|lv| lv.class.contains(&lv.projection[s])))
            .count() as u64
    }

    fn well_formed(&self) -> Result<(), String> {
        for (q, lv) in &self.levels {
            if lv.projection.len() != self.order {
                return Err(format!("projection to level {q} has wrong length"));
            }
            if lv.projection.iter().chain(lv.class.iter()).any(|&i| i >= lv.size) {
                return Err(format!("level {q} index out of range"));
            }
            if !is_uniform_surjection(&lv.projection, lv.size) {
                return Err(format!("projection to level {q} is not a uniform surjection"));
            }
        }
        Ok(())
    }
}

/// `L'_{q'} ⊆ L_q` with restriction `G_q → G'_{q'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub into: u64,
    pub restriction: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyComparison {
    pub primary: FamilyData,
    pub aux: FamilyData,
    /// Keyed by the auxiliary prime `q'`.
    pub containment: BTreeMap<u64, Containment>,
    /// Restriction `Gal(L_l/K) → Gal(L'_{l'}/K)`.
    pub top: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hypothesis {
    /// Every `L'_{q'}` lies in some `L_q` and every `L_q` contains some `L'_{q'}`.
    Containment,
    /// Each `L_q` contains only finitely many `L'_{q'}`.
    Finiteness,
    /// `π^{-1}(C'_{q'}) ⊆ C_q` whenever `L'_{q'} ⊆ L_q`.
    ClassPreimage,
    /// The supplied restriction maps commute with the projections.
    Compatibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub left: u64,
    pub right: u64,
    pub index: u64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.left >= self.index * self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComparisonVerdict {
    /// Hypotheses hold and the count inequality is confirmed.
    FGeFPrime(Certificate),
    HypothesesViolated(Vec<(Hypothesis, String)>),
    /// Hypotheses hold yet the counts disagree; the data is inconsistent.
    InequalityFailed(Certificate),
}

fn is_uniform_surjection(map: &[usize], target: usize) -> bool {
    if target == 0 {
        return false;
    }
    let mut fibres = vec![0usize; target];
    for &i in map {
        if i >= target {
            return false;
        }
        fibres[i] += 1;
    }
    fibres.iter().all(|&c| c == fibres[0] && c > 0)
}

pub fn compare_families(cmp: &FamilyComparison) -> Result<ComparisonVerdict, DensityError> {
    for fam in [&cmp.primary, &cmp.aux] {
        if fam.order > COMPARE_MAX_ORDER {
            return Err(DensityError::Capacity { requested: fam.order as u64, max: COMPARE_MAX_ORDER as u64 });
        }
        fam.well_formed().map_err(DensityError::InvalidDescriptor)?;
    }
    let mut violations = Vec::new();

    for q_aux in cmp.aux.levels.keys() {
        match cmp.containment.get(q_aux) {
            None => violations.push((Hypothesis::Containment, format!("L'_{q_aux} is not contained in any L_q"))),
            Some(c) if !cmp.primary.levels.contains_key(&c.into) => violations
                .push((Hypothesis::Containment, format!("L'_{q_aux} maps into unknown level {}", c.into))),
            _ => {}
        }
    }
    for q in cmp.primary.levels.keys() {
        if !cmp.containment.values().any(|c| c.into == *q) {
            violations.push((Hypothesis::Containment, format!("L_{q} contains no L'_q'")));
        }
    }
    for q_aux in cmp.containment.keys() {
        if !cmp.aux.levels.contains_key(q_aux) {
            violations.push((Hypothesis::Finiteness, format!("containment lists unknown level {q_aux}")));
        }
    }
    if !violations.is_empty() {
        return Ok(ComparisonVerdict::HypothesesViolated(violations));
    }

    for (q_aux, c) in &cmp.containment {
        let lv = &cmp.primary.levels[&c.into];
        let lv_aux = &cmp.aux.levels[q_aux];
        if c.restriction.len() != lv.size || !is_uniform_surjection(&c.restriction, lv_aux.size) {
            violations.push((Hypothesis::Compatibility, format!("restriction to L'_{q_aux} is malformed")));
            continue;
        }
        let bad = (0..lv.size).filter(|&g| lv_aux.class.contains(&c.restriction[g]) && !lv.class.contains(&g)).count();
        if bad > 0 {
            violations.push((
                Hypothesis::ClassPreimage,
                format!("{bad} elements of G_{} over C'_{q_aux} lie outside C_{}", c.into, c.into),
            ));
        }
    }
    if cmp.top.len() != cmp.primary.order || !is_uniform_surjection(&cmp.top, cmp.aux.order) {
        violations.push((Hypothesis::Compatibility, "top-level restriction is not a uniform surjection".into()));
    } else {
        for (q_aux, c) in &cmp.containment {
            let lv = &cmp.primary.levels[&c.into];
            let lv_aux = &cmp.aux.levels[q_aux];
            if c.restriction.len() != lv.size {
                continue;
            }
            if (0..cmp.primary.order)
                .any(|s| lv_aux.projection[cmp.top[s]] != c.restriction[lv.projection[s]])
            {
                violations.push((Hypothesis::Compatibility, format!("restrictions to L'_{q_aux} do not commute")));
            }
        }
    }
    if !violations.is_empty() {
        return Ok(ComparisonVerdict::HypothesesViolated(violations));
    }

    let cert = Certificate {
        left: cmp.primary.count_in_classes(),
        right: cmp.aux.count_in_classes(),
        index: (cmp.primary.order / cmp.aux.order) as u64,
    };
    Ok(if cert.holds() { ComparisonVerdict::FGeFPrime(cert) } else { ComparisonVerdict::InequalityFailed(cert) })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ℤ/4` over its quotient `ℤ/2`, one level each.
    fn cyclic_pair(class: &[usize], class_aux: &[usize]) -> FamilyComparison {
        let primary = FamilyData {
            order: 4,
            levels: BTreeMap::from([(
                2,
                LevelData { size: 4, projection: vec![0, 1, 2, 3], class: class.iter().copied().collect() },
            )]),
        };
        let aux = FamilyData {
            order: 2,
            levels: BTreeMap::from([(
                2,
                LevelData { size: 2, projection: vec![0, 1], class: class_aux.iter().copied().collect() },
            )]),
        };
        FamilyComparison {
            primary,
            aux,
            containment: BTreeMap::from([(2, Containment { into: 2, restriction: vec![0, 1, 0, 1] })]),
            top: vec![0, 1, 0, 1],
        }
    }

    #[test]
    fn identical_families() {
        let p = cyclic_pair(&[1, 2, 3], &[]).primary;
        let ident: Vec<usize> = (0..4).collect();
        let cmp = FamilyComparison {
            primary: p.clone(),
            aux: p,
            containment: BTreeMap::from([(2, Containment { into: 2, restriction: ident.clone() })]),
            top: ident,
        };
        assert_eq!(
            compare_families(&cmp).unwrap(),
            ComparisonVerdict::FGeFPrime(Certificate { left: 3, right: 3, index: 1 })
        );
    }

    #[test]
    fn preimage_classes() {
        let v = compare_families(&cyclic_pair(&[1, 3], &[1])).unwrap();
        assert_eq!(v, ComparisonVerdict::FGeFPrime(Certificate { left: 2, right: 1, index: 2 }));
        let v = compare_families(&cyclic_pair(&[1, 2, 3], &[1])).unwrap();
        assert_eq!(v, ComparisonVerdict::FGeFPrime(Certificate { left: 3, right: 1, index: 2 }));
    }

    #[test]
    fn violated_preimage() {
        match compare_families(&cyclic_pair(&[1], &[1])).unwrap() {
            ComparisonVerdict::HypothesesViolated(v) => assert_eq!(v[0].0, Hypothesis::ClassPreimage),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_containment() {
        let mut cmp = cyclic_pair(&[1, 3], &[1]);
        cmp.containment.clear();
        match compare_families(&cmp).unwrap() {
            ComparisonVerdict::HypothesesViolated(v) => assert!(v.iter().all(|(h, _)| *h == Hypothesis::Containment)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn incompatible_maps() {
        let mut cmp = cyclic_pair(&[1, 2, 3], &[1]);
        cmp.top = vec![1, 0, 1, 0];
        match compare_families(&cmp).unwrap() {
            ComparisonVerdict::HypothesesViolated(v) => assert_eq!(v[0].0, Hypothesis::Compatibility),
            other => panic!("{other:?}"),
        }
    }
}
