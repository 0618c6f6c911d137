//! Minimal non-negative solutions of homogeneous linear Diophantine systems.
//!
//! Uses the completion procedure of Contejean and Devie: start from the unit
//! vectors and increase a component only when doing so moves the defect
//! vector towards zero (negative scalar product). Candidates dominated by an
//! already found solution are discarded, so every solution reported is
//! minimal.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophSystem {
    /// One row per equation `sum_k rows[i][k] * x_k = 0`.
    pub rows: Vec<Vec<i64>>,
    /// Unknowns that may be zero in a final assignment (identity axiom).
    /// The basis itself never depends on this; it only matters to callers
    /// combining basis vectors.
    pub zero_allowed: Vec<bool>,
}

impl DiophSystem {
    /// The single equation `sum lhs[i] x_i = sum rhs[j] y_j`, unknowns
    /// ordered left side first.
    pub fn from_sides(lhs: &[u32], rhs: &[u32]) -> Self {
        let mut row: Vec<i64> = lhs.iter().map(|&a| a as i64).collect();
        row.extend(rhs.iter().map(|&b| -(b as i64)));
        let n = row.len();
        DiophSystem { rows: vec![row], zero_allowed: vec![false; n] }
    }

    pub fn unknowns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn defect(&self, v: &[u32]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(&c, &x)| c * x as i64).sum()).collect()
    }

    /// The basis of minimal non-zero solutions, sorted lexicographically.
    /// Fails with [`Error::ResourceLimit`] once more than `cap` solutions
    /// have been found.
    pub fn solve(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let n = self.unknowns();
        if n == 0 {
            return Ok(Vec::new());
        }
        let unit = |k: usize| {
            let mut e = vec![0u32; n];
            e[k] = 1;
            e
        };
        let unit_defects: Vec<Vec<i64>> = (0..n).map(|k| self.defect(&unit(k))).collect();
        let dominated = |m: &[Vec<u32>], v: &[u32]| m.iter().any(|s| s.iter().zip(v).all(|(a, b)| a <= b));
        let mut basis: Vec<Vec<u32>> = Vec::new();
        let mut frontier: Vec<Vec<u32>> = (0..n).map(unit).collect();
        while !frontier.is_empty() {
            let mut next: Vec<Vec<u32>> = Vec::new();
            for v in frontier {
                let d = self.defect(&v);
                if d.iter().all(|&x| x == 0) {
                    if !dominated(&basis, &v) {
                        basis.push(v);
                        if basis.len() > cap {
                            return Err(Error::ResourceLimit(format!(
                                "Diophantine basis exceeds {cap} solutions"
                            )));
                        }
                    }
                    continue;
                }
                if dominated(&basis, &v) {
                    continue;
                }
                for (k, ek) in unit_defects.iter().enumerate() {
                    let dot: i64 = d.iter().zip(ek).map(|(a, b)| a * b).sum();
                    if dot < 0 {
                        let mut w = v.clone();
                        w[k] += 1;
                        if !next.contains(&w) {
                            next.push(w);
                        }
                    }
                }
            }
            next.retain(|w| !dominated(&basis, w));
            frontier = next;
        }
        basis.sort();
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search up to `bound` per component, keeping the minimal
    /// non-zero solutions.
    fn oracle(sys: &DiophSystem, bound: u32) -> Vec<Vec<u32>> {
        let n = sys.unknowns();
        let mut all = Vec::new();
        let mut v = vec![0u32; n];
        loop {
            if v.iter().any(|&x| x > 0) && sys.defect(&v).iter().all(|&d| d == 0) {
                all.push(v.clone());
            }
            let mut k = 0;
            while k < n {
                if v[k] < bound {
                    v[k] += 1;
                    break;
                }
                v[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        let mut min: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| !all.iter().any(|o| o != *s && o.iter().zip(s.iter()).all(|(a, b)| a <= b)))
            .cloned()
            .collect();
        min.sort();
        min
    }

    #[test]
    fn single_pair() {
        let sys = DiophSystem::from_sides(&[1], &[1]);
        assert_eq!(sys.solve(100).unwrap(), vec![vec![1, 1]]);
    }

    #[test]
    fn two_x_equals_y_plus_z() {
        let sys = DiophSystem::from_sides(&[2], &[1, 1]);
        let expected = oracle(&sys, 3);
        assert_eq!(expected, vec![vec![1, 0, 2], vec![1, 1, 1], vec![1, 2, 0]]);
        assert_eq!(sys.solve(100).unwrap(), expected);
    }

    #[test]
    fn cap_is_enforced() {
        let sys = DiophSystem::from_sides(&[1, 1], &[3]);
        assert!(matches!(sys.solve(1), Err(Error::ResourceLimit(_))));
        assert_eq!(sys.solve(10).unwrap(), oracle(&sys, 3));
    }

    #[test]
    fn matches_oracle_on_small_equations() {
        let cases: &[(&[u32], &[u32])] = &[
            (&[1, 1], &[2]),
            (&[2, 1], &[1, 1]),
            (&[1, 1], &[1, 1, 1]),
            (&[2], &[2]),
            (&[3], &[2]),
            (&[1, 2], &[1, 1, 2]),
        ];
        for (l, r) in cases {
            let sys = DiophSystem::from_sides(l, r);
            assert_eq!(sys.solve(1000).unwrap(), oracle(&sys, 3), "{l:?} = {r:?}");
        }
    }

    #[test]
    fn empty_side_has_no_solutions() {
        let sys = DiophSystem::from_sides(&[1, 1], &[]);
        assert!(sys.solve(10).unwrap().is_empty());
    }
}
