//! Extended tangent spaces, Tjurina numbers and miniversal deformations.
//!
//! Matrices are flattened row-major over [`Kind::components`]. Under a
//! weight system component `(i, j)` carries degree `r_i + c_j`, which makes
//! every generator of the tangent space homogeneous when the family is.

use std::fmt;

use crate::error::{Error, Result};
use crate::family::{Kind, MatrixFamily, PolyMatrix};
use crate::localalg::{graded_codimension, local_codimension, GradedQuotient, ModuleGeneratorSet};
use crate::ring::{Monomial, Poly, Rational, Roster};
use crate::weights::WeightSystem;

fn flatten(kind: Kind, m: &PolyMatrix) -> Vec<Poly> {
    kind.components(m.size())
        .into_iter()
        .map(|(i, j)| m.get(i, j).clone())
        .collect()
}

/// `∂M/∂x_i` and `E_jl M`, `M E_pq` (square) or `E_jl M + M E_lj`
/// (symmetric and skew), flattened.
pub fn tangent_generators(m: &MatrixFamily) -> ModuleGeneratorSet {
    let n = m.size();
    let kind = m.kind();
    let vars = m.vars();
    let mat = m.matrix();
    let mut gens = Vec::new();
    for v in 0..m.nvars() {
        let d = PolyMatrix::from_fn(vars, n, |i, j| mat.get(i, j).derivative(v));
        gens.push(flatten(kind, &d));
    }
    let zero = Poly::zero(vars);
    for j in 0..n {
        for l in 0..n {
            // E_jl M: row j of the result is row l of M
            let left = |i: usize, c: usize| if i == j { mat.get(l, c).clone() } else { zero.clone() };
            // M E_lj: column j of the result is column l of M
            let right = |r: usize, c: usize| if c == j { mat.get(r, l).clone() } else { zero.clone() };
            match kind {
                Kind::Sq => {
                    gens.push(flatten(kind, &PolyMatrix::from_fn(vars, n, left)));
                    // M E_pq with (p, q) = (l, j)
                    gens.push(flatten(kind, &PolyMatrix::from_fn(vars, n, right)));
                }
                Kind::Sym | Kind::Sk => {
                    let sum = PolyMatrix::from_fn(vars, n, |r, c| left(r, c) + right(r, c));
                    gens.push(flatten(kind, &sum));
                }
            }
        }
    }
    ModuleGeneratorSet::new(vars, kind.ambient_rank(n), gens).expect("consistent shapes")
}

/// Component degrees `r_i + c_j` in flattening order.
pub fn component_degrees(kind: Kind, n: usize, w: &WeightSystem) -> Vec<Rational> {
    kind.components(n)
        .into_iter()
        .map(|(i, j)| w.entry_degree(i, j))
        .collect()
}

/// Tjurina number for a given weight system (EXACT when `m` is
/// quasi-homogeneous for it, otherwise the local engine).
pub fn tjurina(m: &MatrixFamily, w: &WeightSystem, max_degree: u32) -> Result<GradedQuotient> {
    let t = tangent_generators(m);
    if w.row_degrees().len() != m.size() {
        return Ok(local_codimension(&t, max_degree));
    }
    graded_codimension(&t, w.weights(), &component_degrees(m.kind(), m.size(), w), max_degree)
}

/// Tjurina number with weights found automatically; families without a
/// weight system go through the local engine.
pub fn tau(m: &MatrixFamily, max_degree: u32) -> Result<GradedQuotient> {
    match m.find_weights() {
        Some(w) => tjurina(m, &w, max_degree),
        None => Ok(local_codimension(&tangent_generators(m), max_degree)),
    }
}

/// Tjurina number in the local engine only, for comparisons between
/// families that are not homogeneous for a common grading.
pub fn tau_local(m: &MatrixFamily, max_degree: u32) -> GradedQuotient {
    local_codimension(&tangent_generators(m), max_degree)
}

/// A monomial times a matrix unit pattern: `E_ij` (square), `E_ij + E_ji`
/// (symmetric, `E_ii` on the diagonal) or `E_ij − E_ji` (skew).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub monomial: Monomial,
    pub i: usize,
    pub j: usize,
}

impl Direction {
    pub fn matrix(&self, kind: Kind, vars: &Roster, n: usize) -> PolyMatrix {
        let p = Poly::term(vars, self.monomial.clone(), Rational::from_integer(1.into()));
        let mut out = PolyMatrix::zero(vars, n);
        out.set(self.i, self.j, p.clone());
        match kind {
            Kind::Sq => {}
            Kind::Sym => out.set(self.j, self.i, p),
            Kind::Sk => out.set(self.j, self.i, -p),
        }
        out
    }

    fn describe(&self, kind: Kind, vars: &Roster) -> String {
        let mono = Poly::term(vars, self.monomial.clone(), Rational::from_integer(1.into()));
        let (i, j) = (self.i + 1, self.j + 1);
        let pattern = match kind {
            Kind::Sq => format!("E({i},{j})"),
            Kind::Sym if i == j => format!("E({i},{j})"),
            Kind::Sym => format!("(E({i},{j}) + E({j},{i}))"),
            Kind::Sk => format!("(E({i},{j}) - E({j},{i}))"),
        };
        if self.monomial.is_one() {
            pattern
        } else {
            format!("{mono}*{pattern}")
        }
    }
}

#[derive(Clone, Debug)]
pub struct MiniversalDeformation {
    pub base: MatrixFamily,
    pub directions: Vec<Direction>,
    pub quotient: GradedQuotient,
}

impl MiniversalDeformation {
    pub fn parameter_names(&self) -> Vec<String> {
        let taken: Vec<&String> = self.base.vars().iter().collect();
        (1..=self.directions.len())
            .map(|k| {
                let mut name = format!("l{k}");
                while taken.contains(&&name) {
                    name.push('_');
                }
                name
            })
            .collect()
    }

    /// `M + Σ λ_k φ_k` over the roster extended by the deformation
    /// parameters.
    pub fn family(&self) -> Result<MatrixFamily> {
        let mut names: Vec<String> = self.base.vars().to_vec();
        names.extend(self.parameter_names());
        let roster: Roster = crate::ring::roster(&names);
        let base = self.base.embed(&roster)?;
        let n = base.size();
        let mut mat = base.matrix().clone();
        let s = self.base.nvars();
        for (k, d) in self.directions.iter().enumerate() {
            let mut e = d.monomial.exponents().to_vec();
            e.resize(names.len(), 0);
            e[s + k] += 1;
            let dir = Direction {
                monomial: Monomial::from_exponents(e),
                i: d.i,
                j: d.j,
            };
            mat = mat.add(&dir.matrix(base.kind(), &roster, n));
        }
        MatrixFamily::new(base.kind(), mat)
    }
}

impl fmt::Display for MiniversalDeformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.parameter_names();
        let terms: Vec<String> = self
            .directions
            .iter()
            .zip(&names)
            .map(|(d, l)| format!("{l}*{}", d.describe(self.base.kind(), self.base.vars())))
            .collect();
        if terms.is_empty() {
            write!(f, "M")
        } else {
            write!(f, "M + {}", terms.join(" + "))
        }
    }
}

/// Miniversal deformation from a certified, finite quotient basis.
pub fn miniversal(m: &MatrixFamily, max_degree: u32) -> Result<MiniversalDeformation> {
    let q = tau(m, max_degree)?;
    if q.value().is_none() {
        return Err(Error::InfiniteCodimension(format!("{max_degree}")));
    }
    let comps = m.kind().components(m.size());
    let directions = q
        .basis
        .iter()
        .map(|(mono, c)| {
            let (i, j) = comps[*c];
            Direction {
                monomial: mono.clone(),
                i,
                j,
            }
        })
        .collect();
    Ok(MiniversalDeformation {
        base: m.clone(),
        directions,
        quotient: q,
    })
}

pub fn describe_direction(d: &Direction, kind: Kind, vars: &Roster) -> String {
    d.describe(kind, vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::{Codim, Exactness};

    #[test]
    fn symmetric_pair_has_tau_two() {
        let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y"], &["y", "x"]]).unwrap();
        let q = tau(&m, 20).unwrap();
        assert_eq!(q.codim, Codim::Finite(2));
        assert_eq!(q.exactness, Exactness::Exact);
    }

    #[test]
    fn submersion_has_tau_zero() {
        let m = MatrixFamily::from_strs(Kind::Sq, &["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]).unwrap();
        let d = miniversal(&m, 20).unwrap();
        assert!(d.directions.is_empty());
    }

    #[test]
    fn zero_skew_family_is_infinite() {
        let m = MatrixFamily::from_strs(Kind::Sk, &["x"], &[&["0", "0"], &["0", "0"]]).unwrap();
        assert_eq!(tau(&m, 10).unwrap().value(), None);
    }
}
