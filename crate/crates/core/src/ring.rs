//! Sparse multivariate polynomials with rational coefficients.
//!
//! Polynomials carry their ordered variable roster. Binary operations require
//! both operands to live over the same roster; the checked entry points
//! ([`Poly::arith`], [`Poly::substitute`]) report a mismatch as an error while
//! the operator impls treat it as a programming error and panic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Ordered list of variable names shared by polynomials over the same ring.
pub type Roster = Arc<[String]>;

pub fn roster<S: AsRef<str>>(names: &[S]) -> Roster {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn same_roster(a: &Roster, b: &Roster) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

/// Exponent vector indexed by variable position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(weights)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, w)| w * rat(e as i64))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Weighted degree under integer weights.
    pub fn int_degree(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// Graded lexicographic comparison: total degree first, then exponents
    /// compared from the first variable on.
    pub fn grlex_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Every monomial in `nvars` variables of total degree `degree`.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let weights = vec![1i64; nvars];
        Monomial::all_of_weighted_degree(&weights, degree as i64)
    }

    /// Every monomial whose weighted degree under positive integer weights
    /// equals `degree`.
    pub fn all_of_weighted_degree(weights: &[i64], degree: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if degree < 0 {
            return out;
        }
        let mut current = vec![0u32; weights.len()];
        fn rec(
            weights: &[i64],
            idx: usize,
            remaining: i64,
            current: &mut Vec<u32>,
            out: &mut Vec<Monomial>,
        ) {
            if idx == weights.len() {
                if remaining == 0 {
                    out.push(Monomial(current.clone()));
                }
                return;
            }
            let w = weights[idx];
            let mut e = 0;
            while e as i64 * w <= remaining {
                current[idx] = e;
                rec(weights, idx + 1, remaining - e as i64 * w, current, out);
                e += 1;
            }
            current[idx] = 0;
        }
        if weights.is_empty() {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(weights, 0, degree, &mut current, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial: map from monomials to nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Roster,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &Roster) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Roster) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Roster, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn int(vars: &Roster, c: i64) -> Self {
        Poly::constant(vars, rat(c))
    }

    pub fn var(vars: &Roster, index: usize) -> Self {
        Poly::term(vars, Monomial::var(vars.len(), index), Rational::one())
    }

    pub fn var_named(vars: &Roster, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UndefinedVariable(name.to_string()))?;
        Ok(Poly::var(vars, idx))
    }

    pub fn term(vars: &Roster, mono: Monomial, coeff: Rational) -> Self {
        assert_eq!(mono.len(), vars.len(), "monomial length differs from roster");
        let mut p = Poly::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(mono, coeff);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(vars: &Roster, terms: I) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Roster {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn coeff(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// True when the constant term is nonzero, i.e. the germ is invertible.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        debug_assert_eq!(mono.len(), self.nvars());
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Highest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn weighted_order(&self, weights: &[Rational]) -> Option<Rational> {
        self.terms.keys().map(|m| m.weighted_degree(weights)).min()
    }

    fn check_roster(&self, other: &Poly) -> Result<()> {
        if same_roster(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::RosterMismatch(
                self.vars.join(" "),
                other.vars.join(" "),
            ))
        }
    }

    pub fn arith(&self, other: &Poly, op: ArithOp) -> Result<Poly> {
        self.check_roster(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other),
            ArithOp::Sub => self.sub_unchecked(other),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub_unchecked(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x * c))
                .collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div(mono)?, c.clone());
        }
        Some(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, index: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[index] -= 1;
                out.add_term(Monomial(exps), c * rat(e as i64));
            }
        }
        out
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of total degree exactly `degree`.
    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact composition `self ∘ map`. The map supplies one image per
    /// variable of `self`; the result lives over the images' roster.
    pub fn substitute(&self, map: &PolyMap) -> Result<Poly> {
        if map.images.len() != self.nvars() {
            let missing = self
                .vars
                .get(map.images.len())
                .cloned()
                .unwrap_or_else(|| "<extra image>".to_string());
            return Err(Error::UndefinedVariable(missing));
        }
        let target = map.target();
        let mut powers: Vec<Vec<Poly>> = map
            .images
            .iter()
            .map(|img| vec![Poly::one(&target), img.clone()])
            .collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &map.images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
            }
            out += &prod;
        }
        Ok(out)
    }

    /// `self ∘ map` with every term of total degree above `max_degree`
    /// discarded along the way.
    pub fn substitute_truncated(&self, map: &PolyMap, max_degree: u32) -> Result<Poly> {
        if map.images.len() != self.nvars() {
            return Err(Error::UndefinedVariable(format!("{} images for {} variables", map.images.len(), self.nvars())));
        }
        let target = map.target();
        let images: Vec<Poly> = map.images.iter().map(|p| p.truncate(max_degree)).collect();
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|img| vec![Poly::one(&target), img.clone()])
            .collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = (&powers[i][powers[i].len() - 1] * &images[i]).truncate(max_degree);
                    powers[i].push(next);
                }
                prod = (&prod * &powers[i][e as usize]).truncate(max_degree);
                if prod.is_zero() {
                    break;
                }
            }
            out += &prod;
        }
        Ok(out)
    }

    /// Splits into weighted-homogeneous parts, ordered by strictly increasing
    /// degree. The zero polynomial yields an empty list.
    pub fn weighted_decompose(&self, weights: &[Rational]) -> Vec<(Rational, Poly)> {
        let mut parts: BTreeMap<Rational, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.weighted_degree(weights))
                .or_insert_with(|| Poly::zero(&self.vars))
                .add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// The common weighted degree of all terms, if there is one. The zero
    /// polynomial is homogeneous of every degree and yields `Some(None)`.
    pub fn weighted_homogeneous_degree(&self, weights: &[Rational]) -> Option<Option<Rational>> {
        let mut degree: Option<Rational> = None;
        for m in self.terms.keys() {
            let d = m.weighted_degree(weights);
            match &degree {
                None => degree = Some(d),
                Some(d0) if *d0 == d => {}
                Some(_) => return None,
            }
        }
        Some(degree)
    }

    /// Re-expresses the polynomial over a roster containing all of its
    /// (actually occurring) variables.
    pub fn embed(&self, target: &Roster) -> Result<Poly> {
        if same_roster(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut index = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|m| m.0[i] > 0);
            match target.iter().position(|t| t == name) {
                Some(j) => index.push(Some(j)),
                None if !used => index.push(None),
                None => return Err(Error::UndefinedVariable(name.clone())),
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[index[i].expect("used variable is mapped")] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Evaluates the variables listed in `values` (by index) at rationals.
    pub fn evaluate_partial(&self, values: &[(usize, Rational)]) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let mut coeff = c.clone();
            for (i, v) in values {
                let k = e[*i];
                if k > 0 {
                    coeff *= num_traits::pow(v.clone(), k as usize);
                    e[*i] = 0;
                }
            }
            out.add_term(Monomial(e), coeff);
        }
        out
    }

    /// Indices of variables that occur in some term.
    pub fn support_variables(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// Terms in canonical printing order (graded lexicographic, descending).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.grlex_cmp(a.0));
        t
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.vars.join(","), self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.check_roster(rhs).expect("polynomial roster mismatch");
                self.$inner(rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.check_roster(rhs).expect("polynomial roster mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.check_roster(rhs).expect("polynomial roster mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// A polynomial substitution: one image per source variable, all over a
/// common target roster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    images: Vec<Poly>,
    target: Roster,
}

impl PolyMap {
    pub fn new(target: &Roster, images: Vec<Poly>) -> Result<Self> {
        for img in &images {
            img.check_roster(&Poly::zero(target))?;
        }
        Ok(PolyMap {
            images,
            target: target.clone(),
        })
    }

    pub fn identity(vars: &Roster) -> Self {
        PolyMap {
            images: (0..vars.len()).map(|i| Poly::var(vars, i)).collect(),
            target: vars.clone(),
        }
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn target(&self) -> Roster {
        self.target.clone()
    }

    /// A germ substitution fixes the origin: every image has zero constant term.
    pub fn is_germ(&self) -> bool {
        self.images.iter().all(|p| p.constant_term().is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.images.len() == self.target.len()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| *p == Poly::var(&self.target, i))
    }

    /// Linear part as a rational matrix: row `i` holds the coefficients of
    /// image `i` on each target variable.
    pub fn linear_part(&self) -> Vec<Vec<Rational>> {
        let n = self.target.len();
        self.images
            .iter()
            .map(|p| (0..n).map(|j| p.coeff(&Monomial::var(n, j))).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Roster {
        roster(&["x", "y"])
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let lhs = (&x + &y).arith(&(&x - &y), ArithOp::Mul).unwrap();
        assert_eq!(lhs, &x * &x - &y * &y);
    }

    #[test]
    fn additive_identity_and_scalar() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &x + &y.scale(&rat(2));
        assert_eq!(p.arith(&Poly::zero(&v), ArithOp::Add).unwrap(), p);
        let three = Poly::int(&v, 3);
        assert_eq!(p.arith(&three, ArithOp::Mul).unwrap(), x.scale(&rat(3)) + y.scale(&rat(6)));
    }

    #[test]
    fn roster_mismatch_is_an_error() {
        let a = Poly::var(&xy(), 0);
        let b = Poly::var(&roster(&["x", "z"]), 0);
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(Error::RosterMismatch(..))));
    }

    #[test]
    fn substitution_examples() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let sq = &x * &x;
        // x ↦ x + y, y ↦ y
        let map = PolyMap::new(&v, vec![&x + &y, y.clone()]).unwrap();
        assert_eq!(
            sq.substitute(&map).unwrap(),
            &x * &x + (&x * &y).scale(&rat(2)) + &y * &y
        );
        let p = &x * &x * &y + Poly::int(&v, 5);
        assert_eq!(p.substitute(&PolyMap::identity(&v)).unwrap(), p);
        let swap = PolyMap::new(&v, vec![y.clone(), x.clone()]).unwrap();
        assert_eq!((&x * &y).substitute(&swap).unwrap(), &x * &y);
    }

    #[test]
    fn substitution_needs_every_variable() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let map = PolyMap::new(&v, vec![x.clone()]).unwrap();
        assert!(matches!(x.substitute(&map), Err(Error::UndefinedVariable(_))));
    }

    #[test]
    fn weighted_decomposition_examples() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &x * &x + y.pow(3);
        let parts = p.weighted_decompose(&[rat(3), rat(2)]);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, rat(6));

        let u = roster(&["x"]);
        let t = Poly::var(&u, 0);
        let q = &t + &t * &t;
        let parts = q.weighted_decompose(&[rat(1)]);
        assert_eq!(parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), vec![rat(1), rat(2)]);
        assert!(Poly::zero(&v).weighted_decompose(&[rat(1), rat(1)]).is_empty());
    }

    #[test]
    fn printing_is_grlex_descending() {
        let v = roster(&["x", "y", "z"]);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let z = Poly::var(&v, 2);
        let p = &z * &z - &x * &x + &y * &y - Poly::constant(&v, ratio(1, 2)) * &x;
        assert_eq!(p.to_string(), "-x^2 + y^2 + z^2 - 1/2*x");
        assert_eq!(Poly::zero(&v).to_string(), "0");
        assert_eq!(Poly::int(&v, -3).to_string(), "-3");
    }

    #[test]
    fn monomials_of_weighted_degree() {
        let ms = Monomial::all_of_weighted_degree(&[2, 3], 6);
        assert_eq!(ms.len(), 2);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
    }

    #[test]
    fn embedding_maps_by_name() {
        let v = xy();
        let w = roster(&["y", "z", "x"]);
        let p = &Poly::var(&v, 0) * &Poly::var(&v, 1).pow(2);
        let q = p.embed(&w).unwrap();
        assert_eq!(q, &Poly::var(&w, 2) * &Poly::var(&w, 0).pow(2));
        assert!(q.embed(&roster(&["x"])).is_err());
    }
}
