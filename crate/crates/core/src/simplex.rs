//! Two-phase tableau simplex over exact rationals, with Bland's rule.
//!
//! Solves `maximize c·x  subject to  A x = b, x >= 0`.

use num_traits::{One, Signed, Zero};

use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, col: usize, obj: &mut [Rational]) {
        let inv = Rational::one() / self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = col;
    }

    fn reduced_costs(&self, c: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = (0..=self.width)
            .map(|j| c.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = c.get(b).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (x, v) in d.iter_mut().zip(row) {
                *x -= &cb * v;
            }
        }
        d
    }

    /// Runs simplex iterations over columns `< allowed`. Returns false when
    /// the objective is unbounded.
    fn optimize(&mut self, obj: &mut Vec<Rational>, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, enter, obj),
            }
        }
    }
}

pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        debug_assert_eq!(row.len(), n);
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };

    // phase 1: maximize -(sum of artificials)
    let phase1: Vec<Rational> = (0..width)
        .map(|j| if j >= n { -Rational::one() } else { Rational::zero() })
        .collect();
    let mut obj = t.reduced_costs(&phase1);
    t.optimize(&mut obj, n);
    let infeasibility: Rational = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(row, _)| row[width].clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Rational::zero(); width + 1];
                    t.pivot(r, j, &mut dummy);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    let mut obj = t.reduced_costs(c);
    if !t.optimize(&mut obj, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[width].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn small_optimum() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![
            vec![rat(1), rat(2), rat(1), rat(0)],
            vec![rat(3), rat(1), rat(0), rat(1)],
        ];
        let out = maximize(&a, &[rat(4), rat(6)], &[rat(1), rat(1), rat(0), rat(0)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, crate::ring::ratio(14, 5));
                assert_eq!(x[0], crate::ring::ratio(8, 5));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x = -1 with x >= 0
        assert_eq!(maximize(&[vec![rat(1)]], &[rat(-1)], &[rat(0)]), LpOutcome::Infeasible);
        // max x s.t. x - y = 0
        assert_eq!(
            maximize(&[vec![rat(1), rat(-1)]], &[rat(0)], &[rat(1), rat(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn redundant_equalities() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        match maximize(&a, &[rat(1), rat(2)], &[rat(1), rat(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            o => panic!("{o:?}"),
        }
    }
}
