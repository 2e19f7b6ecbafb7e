//! Codimension of submodules `T ⊆ O_s^N` of the local ring.
//!
//! Two engines:
//!
//! * graded — every generator is homogeneous for a grading in which the
//!   monomial-vector `m·e_c` has degree `wdeg(m) − d_c`. Degree pieces are
//!   ranked one at a time; once the quotient vanishes on a window of width
//!   `max weight` past the last nonzero piece (and past every constant
//!   degree), each higher monomial-vector is a variable multiple of a
//!   covered one, so the count is final.
//! * local — the m-adic filtration. With `c_k = dim O^N/(T + m^{k+1})`,
//!   a repeat `c_k = c_{k−1}` means `m^k O^N ⊆ T + m^{k+1} O^N`, hence
//!   `m^k O^N ⊆ T` by Nakayama, and the codimension is `c_{k−1}`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{RowReducer, SparseRow};
use crate::ring::{same_roster, Monomial, Poly, Rational, Roster};
use crate::weights::{common_denominator, ideal_weights, to_int};

/// Default cutoff (weighted degree for the graded engine, total degree for
/// the local one).
pub const DEFAULT_MAX_DEGREE: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Codim {
    Finite(usize),
    Infinite,
}

impl Codim {
    pub fn finite(self) -> Option<usize> {
        match self {
            Codim::Finite(n) => Some(n),
            Codim::Infinite => None,
        }
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(n) => write!(f, "{n}"),
            Codim::Infinite => f.write_str("INFINITE"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// Local computation modulo `m^{degree+1}`; `certified` when the
    /// filtration repeated below the cutoff.
    Truncated { degree: u32, certified: bool },
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => f.write_str("EXACT"),
            Exactness::Truncated { degree, .. } => write!(f, "TRUNCATED({degree})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuotient {
    pub codim: Codim,
    /// Monomial-vectors `(m, c)` spanning the quotient, by increasing degree.
    pub basis: Vec<(Monomial, usize)>,
    /// Last degree examined.
    pub stabilized_at: Rational,
    pub exactness: Exactness,
    /// Nonzero quotient dimensions by degree (weighted degree in graded
    /// mode, total degree of the monomial in local mode).
    pub pieces: Vec<(Rational, usize)>,
}

impl GradedQuotient {
    /// The codimension when it is finite and certified.
    pub fn value(&self) -> Option<usize> {
        match self.exactness {
            Exactness::Truncated { certified: false, .. } => None,
            _ => self.codim.finite(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.value().is_some()
    }
}

/// Generators of a submodule of `O_s^N`, each a vector of `N` polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleGeneratorSet {
    vars: Roster,
    rank: usize,
    generators: Vec<Vec<Poly>>,
}

impl ModuleGeneratorSet {
    pub fn new(vars: &Roster, rank: usize, generators: Vec<Vec<Poly>>) -> Result<Self> {
        for g in &generators {
            if g.len() != rank {
                return Err(Error::InvalidOperation(format!(
                    "generator has {} components, expected {rank}",
                    g.len()
                )));
            }
            for p in g {
                if !same_roster(p.vars(), vars) {
                    return Err(Error::RosterMismatch(p.vars().join(" "), vars.join(" ")));
                }
            }
        }
        Ok(ModuleGeneratorSet {
            vars: vars.clone(),
            rank,
            generators,
        })
    }

    /// The ideal generated by `gens` as a submodule of `O^1`.
    pub fn ideal(vars: &Roster, gens: &[Poly]) -> Result<Self> {
        ModuleGeneratorSet::new(vars, 1, gens.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn vars(&self) -> &Roster {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<Poly>] {
        &self.generators
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Degree of a homogeneous generator under the grading; `Some(None)` for
    /// the zero vector and `None` when inhomogeneous.
    fn generator_degree(g: &[Poly], weights: &[i64], comp: &[i64]) -> Option<Option<i64>> {
        let mut deg = None;
        for (c, p) in g.iter().enumerate() {
            for (m, _) in p.terms() {
                let d = m.int_degree(weights) - comp[c];
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 == d => {}
                    Some(_) => return None,
                }
            }
        }
        Some(deg)
    }

    /// Whether every generator is homogeneous for the grading.
    pub fn is_homogeneous(&self, weights: &[Rational], component_degrees: &[Rational]) -> bool {
        let (w, d, _) = integer_grading(weights, component_degrees);
        self.generators
            .iter()
            .all(|g| ModuleGeneratorSet::generator_degree(g, &w, &d).is_some())
    }
}

fn integer_grading(weights: &[Rational], component_degrees: &[Rational]) -> (Vec<i64>, Vec<i64>, BigInt) {
    let scale = common_denominator(weights.iter().chain(component_degrees));
    let w = weights.iter().map(|x| to_int(x, &scale)).collect();
    let d = component_degrees.iter().map(|x| to_int(x, &scale)).collect();
    (w, d, scale)
}

fn unscale(e: i64, scale: &BigInt) -> Rational {
    Rational::new(BigInt::from(e), scale.clone())
}

/// Codimension of `T` for the grading given by positive variable weights and
/// per-component degrees. Inhomogeneous generators fall back to the local
/// engine with `max_degree` as the truncation degree.
pub fn graded_codimension(
    t: &ModuleGeneratorSet,
    weights: &[Rational],
    component_degrees: &[Rational],
    max_degree: u32,
) -> Result<GradedQuotient> {
    if weights.len() != t.nvars() || component_degrees.len() != t.rank {
        return Err(Error::InvalidOperation("grading does not match the module".into()));
    }
    if !t.is_homogeneous(weights, component_degrees) {
        return Ok(local_codimension(t, max_degree));
    }
    let (w, comp, scale) = integer_grading(weights, component_degrees);
    let gens: Vec<(i64, &Vec<Poly>)> = t
        .generators
        .iter()
        .filter_map(|g| {
            ModuleGeneratorSet::generator_degree(g, &w, &comp)
                .expect("checked homogeneous")
                .map(|d| (d, g))
        })
        .collect();
    let max_w = w.iter().copied().max().unwrap_or(1);
    let e_min = comp.iter().map(|d| -d).min().unwrap_or(0);
    let e_const = comp.iter().map(|d| -d).max().unwrap_or(0);
    let cutoff = to_int(&Rational::from_integer(BigInt::from(max_degree)), &scale);

    let mut basis = Vec::new();
    let mut pieces = Vec::new();
    let mut last_nonzero = e_min - 1;
    let mut e = e_min;
    loop {
        if e > cutoff {
            return Ok(GradedQuotient {
                codim: Codim::Infinite,
                basis,
                stabilized_at: unscale(e - 1, &scale),
                exactness: Exactness::Exact,
                pieces,
            });
        }
        let free = degree_piece(&gens, &w, &comp, e);
        if !free.is_empty() {
            pieces.push((unscale(e, &scale), free.len()));
            basis.extend(free);
            last_nonzero = e;
        }
        if e >= e_const && e - last_nonzero >= max_w {
            break;
        }
        e += 1;
    }
    Ok(GradedQuotient {
        codim: Codim::Finite(basis.len()),
        basis,
        stabilized_at: unscale(e, &scale),
        exactness: Exactness::Exact,
        pieces,
    })
}

/// Quotient basis of the degree-`e` piece: columns are ordered by component,
/// then grlex, and the non-pivot columns are returned.
fn degree_piece(
    gens: &[(i64, &Vec<Poly>)],
    w: &[i64],
    comp: &[i64],
    e: i64,
) -> Vec<(Monomial, usize)> {
    let mut cols: Vec<(usize, Monomial)> = Vec::new();
    for (c, d) in comp.iter().enumerate() {
        let mut ms = Monomial::all_of_weighted_degree(w, e + d);
        ms.sort_by(|a, b| a.grlex_cmp(b));
        cols.extend(ms.into_iter().map(|m| (c, m)));
    }
    if cols.is_empty() {
        return Vec::new();
    }
    let index: HashMap<(usize, Monomial), usize> =
        cols.iter().cloned().enumerate().map(|(k, key)| (key, k)).collect();
    let mut red = RowReducer::new(cols.len());
    'gens: for (dg, g) in gens {
        if *dg > e {
            continue;
        }
        for mult in Monomial::all_of_weighted_degree(w, e - dg) {
            let row = product_row(g, &mult, |c, m| index.get(&(c, m)).copied());
            red.insert(row);
            if red.is_full() {
                break 'gens;
            }
        }
    }
    red.free_columns()
        .into_iter()
        .map(|k| {
            let (c, m) = cols[k].clone();
            (m, c)
        })
        .collect()
}

/// Sparse row of `mult · g` over the columns found by `lookup`; terms
/// without a column are dropped.
fn product_row(
    g: &[Poly],
    mult: &Monomial,
    lookup: impl Fn(usize, Monomial) -> Option<usize>,
) -> SparseRow {
    let mut acc: HashMap<usize, Rational> = HashMap::new();
    for (c, p) in g.iter().enumerate() {
        for (m, coeff) in p.terms() {
            if let Some(k) = lookup(c, m.mul(mult)) {
                *acc.entry(k).or_insert_with(Rational::zero) += coeff;
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// m-adic computation: doubles the truncation degree up to `max_degree`
/// until the filtration repeats.
pub fn local_codimension(t: &ModuleGeneratorSet, max_degree: u32) -> GradedQuotient {
    let mut d = 4.min(max_degree.max(1));
    loop {
        let q = local_at(t, d);
        if q.exactness
            == (Exactness::Truncated {
                degree: d,
                certified: true,
            })
            || d >= max_degree
        {
            return q;
        }
        d = (2 * d).min(max_degree);
    }
}

/// Dimensions `c_k` of `O^N/(T + m^{k+1})` for `k = 0..=degree`.
pub fn local_filtration(t: &ModuleGeneratorSet, degree: u32) -> Vec<usize> {
    local_echelon(t, degree).1
}

fn local_echelon(t: &ModuleGeneratorSet, degree: u32) -> (Vec<(Monomial, usize)>, Vec<usize>, RowReducer) {
    let n = t.nvars();
    // columns sorted by (degree, component, grlex); index reversed so the
    // lowest degree leads
    let mut cols: Vec<(Monomial, usize)> = Vec::new();
    for k in 0..=degree {
        for c in 0..t.rank {
            let mut ms = Monomial::all_of_degree(n, k);
            ms.sort_by(|a, b| a.grlex_cmp(b));
            cols.extend(ms.into_iter().map(|m| (m, c)));
        }
    }
    let total = cols.len();
    let index: HashMap<(usize, Monomial), usize> = cols
        .iter()
        .enumerate()
        .map(|(k, (m, c))| ((*c, m.clone()), total - 1 - k))
        .collect();
    let mut red = RowReducer::new(total);
    for g in &t.generators {
        let ord = g.iter().filter_map(Poly::order).min();
        let Some(ord) = ord else { continue };
        if ord > degree {
            continue;
        }
        for k in 0..=degree - ord {
            for mult in Monomial::all_of_degree(n, k) {
                let row = product_row(g, &mult, |c, m| {
                    if m.degree() <= degree {
                        index.get(&(c, m)).copied()
                    } else {
                        None
                    }
                });
                red.insert(row);
            }
        }
    }
    let mut c_k = Vec::with_capacity(degree as usize + 1);
    let mut free = 0;
    let mut pos = 0;
    for k in 0..=degree {
        while pos < total && cols[pos].0.degree() == k {
            if !red.is_pivot(total - 1 - pos) {
                free += 1;
            }
            pos += 1;
        }
        c_k.push(free);
    }
    (cols, c_k, red)
}

fn local_at(t: &ModuleGeneratorSet, degree: u32) -> GradedQuotient {
    let (cols, c_k, red) = local_echelon(t, degree);
    let total = cols.len();
    let repeat = (0..=degree as usize).find(|&k| {
        let prev = if k == 0 { 0 } else { c_k[k - 1] };
        c_k[k] == prev
    });
    let (limit, certified) = match repeat {
        Some(k) => (k as i64 - 1, true),
        None => (degree as i64, false),
    };
    let basis: Vec<(Monomial, usize)> = cols
        .iter()
        .enumerate()
        .filter(|(pos, (m, _))| (m.degree() as i64) <= limit && !red.is_pivot(total - 1 - pos))
        .map(|(_, mc)| mc.clone())
        .collect();
    let mut pieces = Vec::new();
    for k in 0..=limit.max(-1) {
        let k = k as usize;
        let prev = if k == 0 { 0 } else { c_k[k - 1] };
        if c_k[k] > prev {
            pieces.push((Rational::from_integer(BigInt::from(k)), c_k[k] - prev));
        }
    }
    GradedQuotient {
        codim: if certified {
            Codim::Finite(basis.len())
        } else {
            Codim::Infinite
        },
        basis,
        stabilized_at: Rational::from_integer(BigInt::from(degree)),
        exactness: Exactness::Truncated { degree, certified },
        pieces,
    }
}

/// Codimension of the ideal generated by `gens`; graded when some positive
/// weights make every generator homogeneous, local otherwise.
pub fn ideal_codimension(gens: &[Poly], max_degree: u32) -> Result<GradedQuotient> {
    let vars = match gens.first() {
        Some(g) => g.vars().clone(),
        None => return Err(Error::InvalidOperation("empty generator list".into())),
    };
    let t = ModuleGeneratorSet::ideal(&vars, gens)?;
    match ideal_weights(gens) {
        Some((ws, _)) => graded_codimension(&t, ws.weights(), &[Rational::zero()], max_degree),
        None => Ok(local_codimension(&t, max_degree)),
    }
}

/// Codimension of the ideal for the given weights (generators must be
/// homogeneous for an EXACT answer).
pub fn ideal_codimension_weighted(gens: &[Poly], weights: &[Rational], max_degree: u32) -> Result<GradedQuotient> {
    let vars = match gens.first() {
        Some(g) => g.vars().clone(),
        None => return Err(Error::InvalidOperation("empty generator list".into())),
    };
    let t = ModuleGeneratorSet::ideal(&vars, gens)?;
    graded_codimension(&t, weights, &[Rational::zero()], max_degree)
}

/// Milnor number: codimension of the Jacobian ideal. Uncertified results
/// count as infinite.
pub fn milnor_number(f: &Poly) -> Codim {
    milnor_number_with(f, DEFAULT_MAX_DEGREE)
}

pub fn milnor_number_with(f: &Poly, max_degree: u32) -> Codim {
    if f.nvars() == 0 {
        return Codim::Finite(0);
    }
    let partials: Vec<Poly> = (0..f.nvars()).map(|i| f.derivative(i)).collect();
    match ideal_codimension(&partials, max_degree) {
        Ok(q) => match q.value() {
            Some(v) => Codim::Finite(v),
            None => Codim::Infinite,
        },
        Err(_) => Codim::Infinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::{rat, roster};

    fn polys(vars: &Roster, src: &[&str]) -> Vec<Poly> {
        src.iter().map(|s| parse_poly(s, vars).unwrap()).collect()
    }

    #[test]
    fn full_module_has_codim_zero() {
        let v = roster(&["x", "y"]);
        let gens: Vec<Vec<Poly>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { Poly::one(&v) } else { Poly::zero(&v) }).collect())
            .collect();
        let t = ModuleGeneratorSet::new(&v, 6, gens).unwrap();
        let q = graded_codimension(&t, &[rat(1), rat(1)], &vec![rat(0); 6], 10).unwrap();
        assert_eq!(q.codim, Codim::Finite(0));
        assert_eq!(q.exactness, Exactness::Exact);
    }

    #[test]
    fn ideal_examples() {
        let v = roster(&["x", "y"]);
        let q = ideal_codimension(&polys(&v, &["x", "y"]), 20).unwrap();
        assert_eq!(q.value(), Some(1));
        let q = ideal_codimension(&polys(&v, &["x", "y^2", "y^3"]), 20).unwrap();
        assert_eq!(q.value(), Some(2));
        let y = Monomial::var(2, 1);
        assert_eq!(q.basis, vec![(Monomial::one(2), 0), (y, 0)]);
        let q = ideal_codimension(&polys(&v, &["x^2", "x*y", "y^2"]), 20).unwrap();
        assert_eq!(q.value(), Some(3));
    }

    #[test]
    fn milnor_examples() {
        let v = roster(&["x", "y"]);
        assert_eq!(milnor_number(&parse_poly("x^2 + y^2", &v).unwrap()), Codim::Finite(1));
        assert_eq!(milnor_number(&parse_poly("x^3 + y^4", &v).unwrap()), Codim::Finite(6));
        assert_eq!(milnor_number(&parse_poly("x^2*y", &v).unwrap()), Codim::Infinite);
    }

    #[test]
    fn local_engine_matches_graded() {
        let v = roster(&["x", "y"]);
        // x^2 + y^3 + x*y^3 is not quasi-homogeneous but has mu = 2
        let f = parse_poly("x^2 + y^3 + x*y^3", &v).unwrap();
        assert_eq!(milnor_number(&f), Codim::Finite(2));
        let gens = polys(&v, &["x^3", "y^4"]);
        let t = ModuleGeneratorSet::ideal(&v, &gens).unwrap();
        let local = local_codimension(&t, 20);
        assert_eq!(local.value(), Some(12));
        assert_eq!(local_filtration(&t, 3), vec![1, 3, 6, 9]);
    }
}
