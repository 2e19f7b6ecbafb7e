//! Quasi-homogeneity: variable weights and entry degrees.
//!
//! Weights are found by an exact linear program. Every monomial of a nonzero
//! entry `(i, j)` contributes the equality `<e, w> = r_i + c_j`; the minimum
//! weight is maximized subject to `w <= 1`, and a positive optimum is
//! rescaled so that the smallest weight becomes 1.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{rat, Monomial, Poly, Rational};
use crate::simplex::{maximize, LpOutcome};

/// Positive variable weights and row/column degrees; entry `(i, j)` has
/// degree `r_i + c_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Rational>,
    row_degrees: Vec<Rational>,
    col_degrees: Vec<Rational>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Rational>, row_degrees: Vec<Rational>, col_degrees: Vec<Rational>) -> Self {
        assert!(weights.iter().all(Signed::is_positive), "weights must be positive");
        WeightSystem {
            weights,
            row_degrees,
            col_degrees,
        }
    }

    /// Weights only, for functions and ideals.
    pub fn for_variables(weights: Vec<Rational>) -> Self {
        WeightSystem::new(weights, Vec::new(), Vec::new())
    }

    pub fn standard(nvars: usize) -> Self {
        WeightSystem::for_variables(vec![Rational::one(); nvars])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn row_degrees(&self) -> &[Rational] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[Rational] {
        &self.col_degrees
    }

    pub fn entry_degree(&self, i: usize, j: usize) -> Rational {
        &self.row_degrees[i] + &self.col_degrees[j]
    }

    pub fn max_weight(&self) -> Rational {
        self.weights.iter().max().cloned().unwrap_or_else(Rational::one)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "w=({})", join(&self.weights))?;
        if !self.row_degrees.is_empty() {
            write!(f, " r=({}) c=({})", join(&self.row_degrees), join(&self.col_degrees))?;
        }
        Ok(())
    }
}

/// One equality `<mono, w> = Σ coeff·free[k]`.
pub(crate) struct DegreeConstraint {
    pub mono: Monomial,
    pub free: Vec<(usize, i64)>,
}

/// Maximizes the minimum weight under the given constraints. Returns the
/// rescaled weights (minimum 1) and the free degree values, or `None` when
/// no strictly positive solution exists.
pub(crate) fn solve_grading(
    nvars: usize,
    nfree: usize,
    constraints: &[DegreeConstraint],
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    // columns: w (nvars) | f+ (nfree) | f- (nfree) | t | sigma (nvars) | rho (nvars)
    let t_col = nvars + 2 * nfree;
    let ncols = t_col + 1 + 2 * nvars;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for c in constraints {
        let mut row = vec![Rational::zero(); ncols];
        for (k, &e) in c.mono.exponents().iter().enumerate() {
            row[k] += rat(e as i64);
        }
        for &(k, coef) in &c.free {
            row[nvars + k] -= rat(coef);
            row[nvars + nfree + k] += rat(coef);
        }
        a.push(row);
        b.push(Rational::zero());
    }
    for k in 0..nvars {
        // w_k - t - sigma_k = 0
        let mut row = vec![Rational::zero(); ncols];
        row[k] = Rational::one();
        row[t_col] = -Rational::one();
        row[t_col + 1 + k] = -Rational::one();
        a.push(row);
        b.push(Rational::zero());
        // w_k + rho_k = 1
        let mut row = vec![Rational::zero(); ncols];
        row[k] = Rational::one();
        row[t_col + 1 + nvars + k] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let mut c = vec![Rational::zero(); ncols];
    c[t_col] = Rational::one();
    let x = match maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, value } if value.is_positive() || nvars == 0 => x,
        _ => return None,
    };
    let min = x[..nvars].iter().min().cloned().unwrap_or_else(Rational::one);
    let w = x[..nvars].iter().map(|v| v / &min).collect();
    let free = (0..nfree)
        .map(|k| (&x[nvars + k] - &x[nvars + nfree + k]) / &min)
        .collect();
    Some((w, free))
}

/// Weights making `f` weighted homogeneous, with its degree.
pub fn function_weights(f: &Poly) -> Option<(WeightSystem, Rational)> {
    let (ws, degs) = ideal_weights(std::slice::from_ref(f))?;
    Some((ws, degs.into_iter().next().unwrap_or_else(Rational::zero)))
}

/// Weights making every generator weighted homogeneous, with their degrees
/// (zero generators get degree 0).
pub fn ideal_weights(gens: &[Poly]) -> Option<(WeightSystem, Vec<Rational>)> {
    let nvars = gens.first().map_or(0, Poly::nvars);
    let constraints: Vec<DegreeConstraint> = gens
        .iter()
        .enumerate()
        .flat_map(|(g, p)| {
            p.terms().map(move |(m, _)| DegreeConstraint {
                mono: m.clone(),
                free: vec![(g, 1)],
            })
        })
        .collect();
    let (w, degs) = solve_grading(nvars, gens.len(), &constraints)?;
    Some((WeightSystem::for_variables(w), degs))
}

/// Least common multiple of the denominators.
pub(crate) fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> num_bigint::BigInt {
    values
        .into_iter()
        .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales rationals by `scale` and converts them to machine integers. The
/// caller guarantees integrality.
pub(crate) fn to_int(v: &Rational, scale: &num_bigint::BigInt) -> i64 {
    let s = v * Rational::from_integer(scale.clone());
    debug_assert!(s.is_integer());
    s.to_integer().to_i64().expect("degree fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::roster;

    #[test]
    fn quasi_homogeneous_function() {
        let v = roster(&["x", "y"]);
        let f = parse_poly("x^3 + y^4", &v).unwrap();
        let (ws, d) = function_weights(&f).unwrap();
        // scaled so that the minimum weight is 1
        assert_eq!(ws.weights(), &[rat(4) / rat(3), rat(1)][..]);
        assert_eq!(d, rat(4));
        let g = parse_poly("x^2 + x^3", &v).unwrap();
        assert!(function_weights(&g).is_none());
    }

    #[test]
    fn ideal_degrees() {
        let v = roster(&["x", "y"]);
        let gens: Vec<Poly> = ["x", "y^2", "y^3"].iter().map(|s| parse_poly(s, &v).unwrap()).collect();
        let (ws, degs) = ideal_weights(&gens).unwrap();
        for (g, d) in gens.iter().zip(&degs) {
            assert_eq!(g.weighted_homogeneous_degree(ws.weights()), Some(Some(d.clone())));
        }
    }
}
