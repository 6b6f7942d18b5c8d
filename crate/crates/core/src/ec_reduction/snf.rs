//! Smith normal form over ℤ for small dense relation matrices.

/// Nonzero invariant factors `s1 | s2 | …` of an integer matrix.
pub fn invariant_factors(matrix: &[Vec<i128>]) -> Vec<i128> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<i128>> = matrix.to_vec();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let Some((pr, pc)) = smallest_entry(&m, t) else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the whole trailing block
            let piv = m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j];
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
    }
    out
}

fn smallest_entry(m: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.is_none_or(|(_, _, b)| v.abs() < b) {
                best = Some((i, j, v.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Invariant factors `(e1, e2)`, `e1 | e2`, of `(ℤ/d1 × ℤ/d2) / ⟨images⟩`.
pub fn quotient_invariants(d1: u64, d2: u64, images: &[(u64, u64)]) -> (u64, u64) {
    let mut rel = vec![vec![d1 as i128, 0], vec![0, d2 as i128]];
    rel.extend(images.iter().map(|&(u, v)| vec![u as i128, v as i128]));
    let f = invariant_factors(&rel);
    debug_assert_eq!(f.len(), 2);
    (f[0] as u64, f[1] as u64)
}
