//! Recognition of the singularity class of a function germ (the simple
//! classes and the three fencing classes), one-variable normal forms of
//! square and skew families, the trace-form complement in `Sk_2k`, and the
//! dimensional constraints on skew-simple families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{Kind, MatrixFamily, PolyMatrix, RowColOp, Side};
use crate::linalg::{nullspace, rank};
use crate::localalg::{milnor_number_with, Codim, DEFAULT_MAX_DEGREE};
use crate::ring::{roster, Monomial, Poly, PolyMap, Rational, Roster};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fence {
    P8,
    X9,
    J10,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingClass {
    Regular,
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    Fence(Fence),
    NonSimple,
    Undetermined(String),
}

impl fmt::Display for SingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingClass::Regular => write!(f, "Regular"),
            SingClass::A(m) => write!(f, "A{m}"),
            SingClass::D(m) => write!(f, "D{m}"),
            SingClass::E6 => write!(f, "E6"),
            SingClass::E7 => write!(f, "E7"),
            SingClass::E8 => write!(f, "E8"),
            SingClass::Fence(Fence::P8) => write!(f, "P8"),
            SingClass::Fence(Fence::X9) => write!(f, "X9"),
            SingClass::Fence(Fence::J10) => write!(f, "J10"),
            SingClass::NonSimple => write!(f, "NonSimple"),
            SingClass::Undetermined(why) => write!(f, "Undetermined({why})"),
        }
    }
}

impl FromStr for SingClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidOperation(format!("unknown singularity class `{s}`"));
        let index = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
        Ok(match s {
            "Regular" => SingClass::Regular,
            "E6" => SingClass::E6,
            "E7" => SingClass::E7,
            "E8" => SingClass::E8,
            "P8" => SingClass::Fence(Fence::P8),
            "X9" => SingClass::Fence(Fence::X9),
            "J10" => SingClass::Fence(Fence::J10),
            "NonSimple" => SingClass::NonSimple,
            _ if s.starts_with('A') => {
                let m = index(&s[1..])?;
                if m < 1 {
                    return Err(bad());
                }
                SingClass::A(m)
            }
            _ if s.starts_with('D') => {
                let m = index(&s[1..])?;
                if m < 4 {
                    return Err(bad());
                }
                SingClass::D(m)
            }
            _ => return Err(bad()),
        })
    }
}

fn hessian(f: &Poly) -> Vec<Vec<Rational>> {
    let n = f.nvars();
    let mut h = vec![vec![Rational::zero(); n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let mono = Monomial::var(n, i).mul(&Monomial::var(n, j));
            let c = f.coeff(&mono);
            *x = if i == j { c * Rational::from_integer(2.into()) } else { c };
        }
    }
    h
}

/// Corank of the Hessian at the origin.
pub fn hessian_corank(f: &Poly) -> usize {
    f.nvars() - rank(&hessian(f))
}

/// Congruence-diagonalizes a symmetric matrix: returns `P` (the new
/// coordinates are the columns), the diagonal of `PᵀHP`, and for each new
/// coordinate the original variable whose name it inherits.
fn diagonalize(h: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<Rational>, Vec<usize>) {
    let n = h.len();
    let mut a = h.to_vec();
    let mut p: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut label: Vec<usize> = (0..n).collect();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                for row in p.iter_mut() {
                    row.swap(k, j);
                }
                label.swap(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in p.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            } else {
                continue;
            }
        }
        for j in k + 1..n {
            if a[j][k].is_zero() {
                continue;
            }
            let c = &a[j][k] / &a[k][k];
            for col in 0..n {
                let v = &c * &a[k][col];
                a[j][col] -= v;
            }
            for row in 0..n {
                let v = &c * &a[row][k];
                a[row][j] -= v;
            }
            for row in p.iter_mut() {
                let v = &c * &row[k];
                row[j] -= v;
            }
        }
    }
    let diag = (0..n).map(|k| a[k][k].clone()).collect();
    (p, diag, label)
}

/// Splitting lemma on jets: eliminates the non-degenerate quadratic
/// directions of `f` and returns the remaining function of the Hessian
/// kernel, truncated at `jet_degree`.
///
/// The kernel coordinates inherit names from the input variables.
pub fn residual_part(f: &Poly, jet_degree: u32) -> Poly {
    let n = f.nvars();
    let vars = f.vars().clone();
    let f = f.truncate(jet_degree);
    let (p, diag, label) = diagonalize(&hessian(&f));
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            let mut img = Poly::zero(&vars);
            for (k, c) in p[i].iter().enumerate() {
                if !c.is_zero() {
                    img.add_term(Monomial::var(n, k), c.clone());
                }
            }
            img
        })
        .collect();
    let g = f
        .substitute_truncated(&PolyMap::new(&vars, images).expect("same roster"), jet_degree)
        .expect("one image per variable");
    let nondeg: Vec<usize> = (0..n).filter(|&k| !diag[k].is_zero()).collect();
    let kernel: Vec<usize> = (0..n).filter(|&k| diag[k].is_zero()).collect();

    // critical point in the non-degenerate directions as a series in the kernel
    let mut crit: Vec<Poly> = vec![Poly::zero(&vars); n];
    let rest: Vec<(usize, Poly)> = nondeg
        .iter()
        .map(|&k| {
            let lin = Poly::term(&vars, Monomial::var(n, k), diag[k].clone());
            (k, g.derivative(k) - lin)
        })
        .collect();
    // each pass gains one order, so pass t only needs degree t + 2
    for t in 0..=jet_degree {
        let d = (t + 2).min(jet_degree);
        let map = substitution(&vars, &crit, &kernel);
        let next: Vec<(usize, Poly)> = rest
            .iter()
            .map(|(k, r)| {
                let v = r.substitute_truncated(&map, d).expect("arity");
                (*k, v.scale(&(-Rational::one() / &diag[*k])))
            })
            .collect();
        let mut changed = false;
        for (k, v) in next {
            if crit[k] != v {
                crit[k] = v;
                changed = true;
            }
        }
        if d == jet_degree && !changed {
            break;
        }
    }
    let h = g
        .substitute_truncated(&substitution(&vars, &crit, &kernel), jet_degree)
        .expect("arity");

    // re-express over the kernel variables, in the original name order
    let mut order: Vec<usize> = kernel.clone();
    order.sort_by_key(|&k| label[k]);
    let names: Vec<&str> = order.iter().map(|&k| vars[label[k]].as_str()).collect();
    let out_vars = roster(&names);
    Poly::from_terms(
        &out_vars,
        h.terms().map(|(m, c)| {
            let e = order.iter().map(|&k| m.exponents()[k]).collect();
            (Monomial::from_exponents(e), c.clone())
        }),
    )
}

fn substitution(vars: &Roster, crit: &[Poly], kernel: &[usize]) -> PolyMap {
    let images = (0..vars.len())
        .map(|k| {
            if kernel.contains(&k) {
                Poly::var(vars, k)
            } else {
                crit[k].clone()
            }
        })
        .collect();
    PolyMap::new(vars, images).expect("same roster")
}

fn coefficient(p: &Poly, exps: &[u32]) -> Rational {
    p.coeff(&Monomial::from_exponents(exps.to_vec()))
}

/// Factor pattern of a nonzero binary cubic.
#[derive(Debug, PartialEq, Eq)]
enum CubicFactors {
    Distinct,
    Double,
    Cube,
}

fn binary_cubic_factors(c: &Poly) -> CubicFactors {
    let a = coefficient(c, &[3, 0]);
    let b = coefficient(c, &[2, 1]);
    let cc = coefficient(c, &[1, 2]);
    let d = coefficient(c, &[0, 3]);
    let r = |n: i64| Rational::from_integer(n.into());
    let disc = &b * &b * &cc * &cc - r(4) * &a * &cc * &cc * &cc - r(4) * &b * &b * &b * &d
        - r(27) * &a * &a * &d * &d
        + r(18) * &a * &b * &cc * &d;
    if !disc.is_zero() {
        return CubicFactors::Distinct;
    }
    // the Hessian covariant vanishes exactly on cubes
    let hxx = c.derivative(0).derivative(0);
    let hyy = c.derivative(1).derivative(1);
    let hxy = c.derivative(0).derivative(1);
    if (&hxx * &hyy - &hxy * &hxy).is_zero() {
        CubicFactors::Cube
    } else {
        CubicFactors::Double
    }
}

/// For a residual `h(X, Y)` whose cubic part is a cube and whose Milnor
/// number is 10: J10 when the weighted 6-jet `X³ + aX²Y² + bXY⁴ + cY⁶` (in
/// coordinates where the cube is `X³`) is nondegenerate with a nonzero `Y⁶`
/// term after removing `X²Y²`.
fn is_j10(h: &Poly) -> bool {
    let vars = h.vars().clone();
    let cubic = h.homogeneous_part(3);
    let a = coefficient(&cubic, &[3, 0]);
    let (map, lead) = if !a.is_zero() {
        let b = coefficient(&cubic, &[2, 1]);
        // X = X' − (b/3a) Y
        let shift = -(b / (&a * Rational::from_integer(3.into())));
        let x = Poly::var(&vars, 0) + Poly::var(&vars, 1).scale(&shift);
        (PolyMap::new(&vars, vec![x, Poly::var(&vars, 1)]).expect("roster"), a)
    } else {
        let d = coefficient(&cubic, &[0, 3]);
        (PolyMap::new(&vars, vec![Poly::var(&vars, 1), Poly::var(&vars, 0)]).expect("roster"), d)
    };
    let g = h.substitute_truncated(&map, 6).expect("arity").scale(&(Rational::one() / lead));
    let c = |e: [u32; 2]| coefficient(&g, &e);
    if !c([3, 0]).is_one() || [[0, 4], [1, 3], [0, 5]].iter().any(|e| !c(*e).is_zero()) {
        return false;
    }
    let (a2, b2, c2) = (c([2, 2]), c([1, 4]), c([0, 6]));
    let three = Rational::from_integer(3.into());
    let p = &b2 - &a2 * &a2 / &three;
    let q = Rational::from_integer(2.into()) * &a2 * &a2 * &a2 / Rational::from_integer(27.into()) - &a2 * &b2 / &three
        + &c2;
    let disc = Rational::from_integer(4.into()) * &p * &p * &p + Rational::from_integer(27.into()) * &q * &q;
    !disc.is_zero() && !q.is_zero()
}

/// Milnor number through the splitting lemma: `μ(f) = μ(h)` for the
/// residual `h` in the Hessian kernel, computed on growing jets. A jet of
/// degree `J` settles it once `μ(h_J) + 1 ≤ J`, since both germs are then
/// `(μ+1)`-determined and agree to that order.
pub fn milnor_number_reduced(f: &Poly, max_degree: u32) -> Codim {
    let n = f.nvars();
    let f = f - Poly::constant(f.vars(), f.constant_term());
    if (0..n).any(|i| !f.coeff(&Monomial::var(n, i)).is_zero()) {
        return Codim::Finite(0);
    }
    let corank = hessian_corank(&f);
    if corank == 0 {
        return Codim::Finite(1);
    }
    if corank == n {
        return milnor_number_with(&f, max_degree);
    }
    let mut jet = 4.min(max_degree.max(2));
    loop {
        let h = residual_part(&f, jet);
        if let Codim::Finite(mu) = milnor_number_with(&h, jet) {
            if mu < jet as usize {
                return Codim::Finite(mu);
            }
        }
        if jet >= max_degree {
            return Codim::Infinite;
        }
        jet = (2 * jet).min(max_degree);
    }
}

/// Singularity class of a function germ (its value at 0 is ignored).
pub fn classify_function(f: &Poly) -> SingClass {
    classify_function_with(f, DEFAULT_MAX_DEGREE)
}

pub fn classify_function_with(f: &Poly, max_degree: u32) -> SingClass {
    let n = f.nvars();
    let f = f - Poly::constant(f.vars(), f.constant_term());
    if (0..n).any(|i| !f.coeff(&Monomial::var(n, i)).is_zero()) {
        return SingClass::Regular;
    }
    let mu = match milnor_number_reduced(&f, max_degree) {
        Codim::Finite(mu) => mu,
        Codim::Infinite => {
            return SingClass::Undetermined(format!("Milnor number not certified up to degree {max_degree}"))
        }
    };
    let corank = hessian_corank(&f);
    let jet = (mu as u32 + 2).min(7);
    match corank {
        0 => SingClass::A(1),
        1 => SingClass::A(mu),
        2 => {
            let h = residual_part(&f, jet);
            let cubic = h.homogeneous_part(3);
            if cubic.is_zero() {
                let quartic = h.homogeneous_part(4);
                return if !quartic.is_zero() && milnor_number_with(&quartic, max_degree) == Codim::Finite(9) {
                    SingClass::Fence(Fence::X9)
                } else {
                    SingClass::NonSimple
                };
            }
            match binary_cubic_factors(&cubic) {
                CubicFactors::Distinct => SingClass::D(4),
                CubicFactors::Double => SingClass::D(mu),
                CubicFactors::Cube => match mu {
                    6 => SingClass::E6,
                    7 => SingClass::E7,
                    8 => SingClass::E8,
                    10 if is_j10(&h) => SingClass::Fence(Fence::J10),
                    _ => SingClass::NonSimple,
                },
            }
        }
        3 => {
            let cubic = residual_part(&f, 3).homogeneous_part(3);
            if !cubic.is_zero() && milnor_number_with(&cubic, max_degree) == Codim::Finite(8) {
                SingClass::Fence(Fence::P8)
            } else {
                SingClass::NonSimple
            }
        }
        _ => SingClass::NonSimple,
    }
}

// ---------------------------------------------------------------------------
// one-variable normal forms

#[derive(Clone, Debug)]
pub struct OneVariableReduction {
    /// Sorted ascending.
    pub orders: Vec<u32>,
    /// Replaying these on the input with [`MatrixFamily::apply_ops`] gives
    /// the normal form, exactly when `exact`, otherwise modulo
    /// `x^(trunc+1)`.
    pub ops: Vec<RowColOp>,
    pub normal_form: MatrixFamily,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionFailure {
    pub partial: Vec<u32>,
    pub reason: String,
}

impl fmt::Display for ReductionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (orders so far: {:?})", self.reason, self.partial)
    }
}

fn one_variable(m: &MatrixFamily, kind: Kind) -> std::result::Result<(), ReductionFailure> {
    let fail = |reason: String| ReductionFailure {
        partial: Vec::new(),
        reason,
    };
    if m.kind() != kind {
        return Err(fail(format!("expected a {kind} family, got {}", m.kind())));
    }
    if m.nvars() != 1 {
        return Err(fail(format!("expected one variable, got {}", m.nvars())));
    }
    Ok(())
}

fn truncated(m: &PolyMatrix, trunc: u32) -> PolyMatrix {
    PolyMatrix::from_fn(m.vars(), m.size(), |i, j| m.get(i, j).truncate(trunc))
}

/// Inverse of a one-variable unit modulo `x^prec`.
fn series_inverse(u: &Poly, prec: u32) -> Poly {
    let vars = u.vars().clone();
    let coeff = |k: u32| u.coeff(&Monomial::from_exponents(vec![k]));
    let u0 = coeff(0);
    let mut inv: Vec<Rational> = vec![Rational::one() / &u0];
    for k in 1..prec {
        let mut s = Rational::zero();
        for j in 1..=k {
            s += coeff(j) * &inv[(k - j) as usize];
        }
        inv.push(-s / &u0);
    }
    Poly::from_terms(
        &vars,
        inv.into_iter()
            .enumerate()
            .map(|(k, c)| (Monomial::from_exponents(vec![k as u32]), c)),
    )
}

/// `⊕ x^{a_i} J_2` over the roster of `vars`.
pub fn skew_normal_form(vars: &Roster, orders: &[u32]) -> MatrixFamily {
    let n = 2 * orders.len();
    let mut m = PolyMatrix::zero(vars, n);
    for (b, &a) in orders.iter().enumerate() {
        let p = Poly::term(vars, Monomial::from_exponents(vec![a]), Rational::one());
        m.set(2 * b + 1, 2 * b, -&p);
        m.set(2 * b, 2 * b + 1, p);
    }
    MatrixFamily::new(Kind::Sk, m).expect("skew by construction")
}

/// `diag(x^{a_i})` over the roster of `vars`.
pub fn square_normal_form(vars: &Roster, orders: &[u32]) -> MatrixFamily {
    let mut m = PolyMatrix::zero(vars, orders.len());
    for (b, &a) in orders.iter().enumerate() {
        m.set(b, b, Poly::term(vars, Monomial::from_exponents(vec![a]), Rational::one()));
    }
    MatrixFamily::new(Kind::Sq, m).expect("square")
}

fn min_order_entry(m: &PolyMatrix, from: usize, upper_only: bool) -> Option<(usize, usize, u32)> {
    let n = m.size();
    let mut best: Option<(usize, usize, u32)> = None;
    for i in from..n {
        for j in from..n {
            if upper_only && j <= i {
                continue;
            }
            if let Some(o) = m.get(i, j).order() {
                if best.is_none_or(|(_, _, b)| o < b) {
                    best = Some((i, j, o));
                }
            }
        }
    }
    best
}

struct Worker {
    kind: Kind,
    m: PolyMatrix,
    trunc: u32,
    ops: Vec<RowColOp>,
}

impl Worker {
    fn push(&mut self, op: RowColOp) {
        let fam = MatrixFamily::new(self.kind, self.m.clone()).expect("valid work matrix");
        let next = fam.apply_ops(std::slice::from_ref(&op)).expect("valid operation");
        self.m = truncated(next.matrix(), self.trunc);
        self.ops.push(op);
    }
}

/// Writes `D = A_1 ⋯ A_m` as a product of elementary operation matrices.
fn elementary_factors(d: &[Vec<Rational>], vars: &Roster) -> Vec<RowColOp> {
    let n = d.len();
    let mut work = d.to_vec();
    let mut ops = Vec::new();
    let constant = |c: Rational| Poly::constant(vars, c);
    // row reduction E_m ⋯ E_1 D = I, so D = E_1⁻¹ ⋯ E_m⁻¹
    for c in 0..n {
        let p = (c..n).find(|&r| !work[r][c].is_zero()).expect("invertible");
        if p != c {
            work.swap(p, c);
            ops.push(RowColOp::swap(p, c));
        }
        let pivot = work[c][c].clone();
        if !pivot.is_one() {
            let inv = Rational::one() / &pivot;
            for x in work[c].iter_mut() {
                *x *= &inv;
            }
            ops.push(RowColOp::scale(c, constant(pivot)));
        }
        for r in 0..n {
            if r != c && !work[r][c].is_zero() {
                let f = work[r][c].clone();
                for k in 0..n {
                    let v = &f * &work[c][k];
                    work[r][k] -= v;
                }
                // inverse of `row r −= f · row c` is `I + f E_rc`
                ops.push(RowColOp::t(r, c, constant(f)));
            }
        }
    }
    ops
}

/// Constant congruence splitting `M = Σ x^a K_a` into `⊕ x^{a_i} J_2`, when
/// one exists that can be built order by order: at each order the
/// complement of the radical is taken inside the radicals of all higher
/// orders.
fn graded_skew_split(m: &MatrixFamily) -> Option<(Vec<Vec<Rational>>, Vec<u32>)> {
    let n = m.size();
    let mut forms: BTreeMap<u32, Vec<Vec<Rational>>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for (mono, c) in m.entry(i, j).terms() {
                let k = forms
                    .entry(mono.exponents()[0])
                    .or_insert_with(|| vec![vec![Rational::zero(); n]; n]);
                k[i][j] = c.clone();
            }
        }
    }
    let degrees: Vec<u32> = forms.keys().copied().collect();
    let pair = |k: &[Vec<Rational>], u: &[Rational], v: &[Rational]| -> Rational {
        let mut s = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() && !k[i][j].is_zero() {
                    s += ui * &k[i][j] * vj;
                }
            }
        }
        s
    };
    let combine = |basis: &[Vec<Rational>], coords: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (b, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(b) {
                    *o += c * x;
                }
            }
        }
        out
    };
    let mut sub: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut orders = Vec::new();
    for (idx, &a) in degrees.iter().enumerate() {
        let dim = sub.len();
        if dim == 0 {
            break;
        }
        let restrict = |k: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            sub.iter().map(|u| sub.iter().map(|v| pair(k, u, v)).collect()).collect()
        };
        let g = restrict(&forms[&a]);
        if g.iter().all(|row| row.iter().all(Zero::is_zero)) {
            continue;
        }
        let radical = nullspace(&g, dim);
        let higher: Vec<Vec<Rational>> = degrees[idx + 1..].iter().flat_map(|b| restrict(&forms[b])).collect();
        let allowed = if higher.is_empty() {
            (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect()
        } else {
            nullspace(&higher, dim)
        };
        let mut span = radical.clone();
        let mut w: Vec<Vec<Rational>> = Vec::new();
        for u in allowed {
            span.push(u.clone());
            if rank(&span) == span.len() {
                w.push(u);
            } else {
                span.pop();
            }
        }
        if span.len() != dim {
            return None;
        }
        // symplectic basis of w
        while !w.is_empty() {
            let e = w.remove(0);
            let k = w.iter().position(|f| !pair(&g, &e, f).is_zero())?;
            let f = w.remove(k);
            let s = Rational::one() / pair(&g, &e, &f);
            let f: Vec<Rational> = f.iter().map(|x| x * &s).collect();
            for v in w.iter_mut() {
                let kf = pair(&g, v, &f);
                let ke = pair(&g, v, &e);
                for t in 0..dim {
                    let val = &kf * &e[t];
                    v[t] -= val;
                    let val = &ke * &f[t];
                    v[t] += val;
                }
            }
            cols.push(combine(&sub, &e));
            cols.push(combine(&sub, &f));
            orders.push(a);
        }
        sub = radical.iter().map(|r| combine(&sub, r)).collect();
    }
    if !sub.is_empty() {
        return None;
    }
    let d = (0..n).map(|i| (0..n).map(|c| cols[c][i].clone()).collect()).collect();
    Some((d, orders))
}

/// One-variable skew family to `⊕ x^{a_i} J_2` with `a_1 ≤ … ≤ a_k`; all
/// series are cut at `x^(trunc+1)`. Constant pivots give orders 0.
pub fn reduce_one_variable_sk(m: &MatrixFamily, trunc: u32) -> std::result::Result<OneVariableReduction, ReductionFailure> {
    one_variable(m, Kind::Sk)?;
    let vars = m.vars().clone();
    if let Some((d, orders)) = graded_skew_split(m) {
        let ops = elementary_factors(&d, &vars);
        let normal_form = skew_normal_form(&vars, &orders);
        if m.apply_ops(&ops).ok().as_ref() == Some(&normal_form) {
            return Ok(OneVariableReduction {
                orders,
                ops,
                normal_form,
                exact: true,
            });
        }
    }
    let n = m.size();
    let mut w = Worker {
        kind: Kind::Sk,
        m: truncated(m.matrix(), trunc),
        trunc,
        ops: Vec::new(),
    };
    let mut orders = Vec::new();
    let mut p = 0;
    while p < n {
        let Some((i, j, a)) = min_order_entry(&w.m, p, true) else {
            return Err(ReductionFailure {
                partial: orders,
                reason: format!("remaining {}×{} block vanishes modulo x^{}", n - p, n - p, trunc + 1),
            });
        };
        if i != p {
            w.push(RowColOp::swap(i, p));
        }
        if j != p + 1 {
            w.push(RowColOp::swap(j, p + 1));
        }
        let pivot = w.m.get(p, p + 1).clone();
        let unit = pivot.div_monomial(&Monomial::from_exponents(vec![a])).expect("order a");
        if unit != Poly::one(&vars) {
            w.push(RowColOp::scale(p, series_inverse(&unit, trunc + 1 - a)));
        }
        let xa = Monomial::from_exponents(vec![a]);
        for r in p + 2..n {
            let beta = w.m.get(p, r).div_monomial(&xa).expect("order at least a");
            if !beta.is_zero() {
                w.push(RowColOp::t(p + 1, r, -beta));
            }
            let gamma = w.m.get(p + 1, r).div_monomial(&xa).expect("order at least a");
            if !gamma.is_zero() {
                w.push(RowColOp::t(p, r, gamma));
            }
        }
        orders.push(a);
        p += 2;
    }
    finish(m, w.ops, orders, trunc)
}

fn finish(
    m: &MatrixFamily,
    ops: Vec<RowColOp>,
    orders: Vec<u32>,
    trunc: u32,
) -> std::result::Result<OneVariableReduction, ReductionFailure> {
    let vars = m.vars().clone();
    let normal_form = match m.kind() {
        Kind::Sk => skew_normal_form(&vars, &orders),
        _ => square_normal_form(&vars, &orders),
    };
    let replayed = m.apply_ops(&ops).map_err(|e| ReductionFailure {
        partial: orders.clone(),
        reason: e.to_string(),
    })?;
    let exact = replayed == normal_form;
    if !exact && truncated(replayed.matrix(), trunc) != *normal_form.matrix() {
        return Err(ReductionFailure {
            partial: orders,
            reason: "replayed operations do not reach the normal form".into(),
        });
    }
    Ok(OneVariableReduction {
        orders,
        ops,
        normal_form,
        exact,
    })
}

/// Smith form of a one-variable square family over truncated power series:
/// `diag(x^{a_1}, …, x^{a_k})` with `a_1 ≤ … ≤ a_k`.
pub fn reduce_one_variable_sq(m: &MatrixFamily, trunc: u32) -> std::result::Result<OneVariableReduction, ReductionFailure> {
    one_variable(m, Kind::Sq)?;
    let vars = m.vars().clone();
    let n = m.size();
    let mut w = Worker {
        kind: Kind::Sq,
        m: truncated(m.matrix(), trunc),
        trunc,
        ops: Vec::new(),
    };
    let mut orders = Vec::new();
    for p in 0..n {
        let Some((i, j, a)) = min_order_entry(&w.m, p, false) else {
            return Err(ReductionFailure {
                partial: orders,
                reason: format!("remaining {}×{} block vanishes modulo x^{}", n - p, n - p, trunc + 1),
            });
        };
        if i != p {
            w.push(RowColOp::swap(i, p).on(Side::Rows));
        }
        if j != p {
            w.push(RowColOp::swap(j, p).on(Side::Cols));
        }
        let xa = Monomial::from_exponents(vec![a]);
        let unit = w.m.get(p, p).div_monomial(&xa).expect("order a");
        if unit != Poly::one(&vars) {
            w.push(RowColOp::scale(p, series_inverse(&unit, trunc + 1 - a)).on(Side::Rows));
        }
        for r in p + 1..n {
            let q = w.m.get(r, p).div_monomial(&xa).expect("order at least a");
            if !q.is_zero() {
                w.push(RowColOp::t(p, r, -q).on(Side::Rows));
            }
        }
        for c in p + 1..n {
            let q = w.m.get(p, c).div_monomial(&xa).expect("order at least a");
            if !q.is_zero() {
                w.push(RowColOp::t(p, c, -q).on(Side::Cols));
            }
        }
        orders.push(a);
    }
    finish(m, w.ops, orders, trunc)
}

// ---------------------------------------------------------------------------
// trace-form duality and dimensional constraints

/// A constant matrix, row-major.
pub type ConstMatrix = Vec<Vec<Rational>>;

fn upper_coords(m: &ConstMatrix) -> Vec<Rational> {
    let n = m.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[i][j].clone());
        }
    }
    out
}

fn from_upper(n: usize, v: &[Rational]) -> ConstMatrix {
    let mut m = vec![vec![Rational::zero(); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[i][j] = v[k].clone();
            m[j][i] = -v[k].clone();
            k += 1;
        }
    }
    m
}

/// Basis of `{Y ∈ Sk_n : tr(XY) = 0 for all X in span}`.
///
/// `tr(XY) = −2 Σ_{i<j} X_ij Y_ij`, so this is the orthogonal complement in
/// upper-triangle coordinates.
pub fn perp(span: &[ConstMatrix], n: usize) -> Result<Vec<ConstMatrix>> {
    for x in span {
        if x.len() != n || x.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidOperation(format!("expected {n}×{n} matrices")));
        }
        for i in 0..n {
            for j in 0..n {
                if x[i][j] != -x[j][i].clone() {
                    return Err(Error::InvalidFamily("matrix is not skew-symmetric".into()));
                }
            }
        }
    }
    let rows: Vec<Vec<Rational>> = span.iter().map(upper_coords).collect();
    let dim = n * n.saturating_sub(1) / 2;
    let basis = if rows.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        nullspace(&rows, dim)
    };
    Ok(basis.iter().map(|v| from_upper(n, v)).collect())
}

/// Verdicts on a dimensional triple `(s, k, r)`: `s` parameters, `2k × 2k`
/// skew matrices, rank `r` of the linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionVerdict {
    /// `r(N − r) ≤ 4k² − 1`, the Grassmannian fits in the group.
    pub inequality: bool,
    /// Rank allowed once the Pfaffian restricted to the linear part is taken
    /// into account.
    pub rank_allowed: bool,
    /// The list of admissible triples.
    pub allowed: bool,
    pub rule: String,
}

pub fn simple_dimension_cases(s: usize, k: usize, r: usize) -> Result<DimensionVerdict> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let n = k * (2 * k - 1);
    if r > s.min(n) {
        return Err(Error::OutOfRange(format!("r = {r} exceeds min(s, N) = {}", s.min(n))));
    }
    let inequality = r * (n - r) < 4 * k * k;
    let rank_allowed = r <= 1 || r + 1 >= n || (k == 2 && (2..=4).contains(&r)) || (k == 3 && (r == 2 || r == 13));
    let (allowed, rule) = if k == 1 {
        (true, "k=1: Sk_2 families are functions up to contact equivalence".to_string())
    } else if s == 1 && r <= 1 {
        (true, "case a): s=1, r=0,1, any k".to_string())
    } else if k == 2 && s >= 2 {
        (true, "case e): k=2, s>=2".to_string())
    } else if k == 3 && s == 2 {
        (true, "case c): k=3, s=2>=r".to_string())
    } else if k == 3 && r == 13 {
        let mut rule = "case d): k=3, r=13<=s".to_string();
        if s > 13 {
            rule.push_str("; refined: there are no simple Sk_6 maps of rank 13 with s>13");
        }
        (true, rule)
    } else if k >= 3 && s + 1 >= n && r + 1 >= n {
        (true, "case b): s>=N-1, r=N-1,N, k>=3".to_string())
    } else {
        (false, format!("no admissible case for s={s}, k={k}, r={r}"))
    };
    Ok(DimensionVerdict {
        inequality,
        rank_allowed,
        allowed,
        rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::rat;

    fn f(src: &str, names: &[&str]) -> Poly {
        parse_poly(src, &roster(names)).unwrap()
    }

    #[test]
    fn reduced_milnor_numbers() {
        let xyz = ["x", "y", "z"];
        for (src, mu) in [("x^2 + y^2 + z^2", 1), ("x^2 + y^2 + z^7", 6), ("(x + y)^2 + (x - z)^2 + y^4 + x^5", 3)] {
            assert_eq!(milnor_number_reduced(&f(src, &xyz), 40), Codim::Finite(mu), "{src}");
        }
        // non-isolated: the residual does not involve one kernel direction
        let g = f("(x + y)^2 + (x - y + z)^3", &xyz);
        assert_eq!(milnor_number_reduced(&g, 12), Codim::Infinite);
        assert!(matches!(classify_function_with(&g, 12), SingClass::Undetermined(_)));
        let e6 = f("(x + y)^2 + (x - y + z)^3 + z^4", &xyz);
        assert_eq!(milnor_number_reduced(&e6, 40), Codim::Finite(6));
        assert_eq!(classify_function(&e6), SingClass::E6);
    }

    #[test]
    fn hessian_coranks() {
        assert_eq!(hessian_corank(&f("x^2+y^2", &["x", "y"])), 0);
        assert_eq!(hessian_corank(&f("x^2+y^3", &["x", "y"])), 1);
        assert_eq!(hessian_corank(&f("x^3+y^3", &["x", "y"])), 2);
        assert_eq!(hessian_corank(&f("x*y", &["x", "y"])), 0);
    }

    #[test]
    fn residuals() {
        let r = residual_part(&f("x^2 + y^3 + x*y^3", &["x", "y"]), 6);
        assert_eq!(r, f("y^3 - 1/4*y^6", &["y"]));
        let r = residual_part(&f("x^2 + y^2", &["x", "y"]), 6);
        assert_eq!(r.nvars(), 0);
        assert!(r.is_zero());
        let r = residual_part(&f("z^2 + x^3 + y^4", &["x", "y", "z"]), 6);
        assert_eq!(r, f("x^3 + y^4", &["x", "y"]));
    }

    #[test]
    fn classes() {
        let xy = ["x", "y"];
        assert_eq!(classify_function(&f("x+y^2", &xy)), SingClass::Regular);
        assert_eq!(classify_function(&f("x^2+y^3", &xy)), SingClass::A(2));
        assert_eq!(classify_function(&f("x^2*y+y^3", &xy)), SingClass::D(4));
        assert_eq!(classify_function(&f("x^2*y+y^4", &xy)), SingClass::D(5));
        assert_eq!(classify_function(&f("x^3+y^4", &xy)), SingClass::E6);
        assert_eq!(classify_function(&f("x^3+x*y^3", &xy)), SingClass::E7);
        assert_eq!(classify_function(&f("x^3+y^5", &xy)), SingClass::E8);
        assert_eq!(classify_function(&f("x^4+y^4", &xy)), SingClass::Fence(Fence::X9));
        assert_eq!(classify_function(&f("x^3+y^6", &xy)), SingClass::Fence(Fence::J10));
        assert_eq!(classify_function(&f("x^3+x*y^4", &xy)), SingClass::NonSimple);
        let xyz = ["x", "y", "z"];
        assert_eq!(classify_function(&f("x^3+y^3+z^3", &xyz)), SingClass::Fence(Fence::P8));
    }

    #[test]
    fn class_names_round_trip() {
        for c in [SingClass::A(3), SingClass::D(5), SingClass::E7, SingClass::Fence(Fence::J10), SingClass::NonSimple] {
            assert_eq!(c.to_string().parse::<SingClass>().unwrap(), c);
        }
        assert!("D3".parse::<SingClass>().is_err());
    }

    #[test]
    fn skew_reduction_of_normal_form() {
        let vars = roster(&["x"]);
        let n = skew_normal_form(&vars, &[1, 2]);
        let r = reduce_one_variable_sk(&n, 10).unwrap();
        assert_eq!(r.orders, vec![1, 2]);
        assert!(r.ops.is_empty());
        assert!(r.exact);
    }

    #[test]
    fn skew_reduction_with_unit_factor() {
        let m = MatrixFamily::from_strs(Kind::Sk, &["x"], &[&["0", "x+x^2"], &["-x-x^2", "0"]]).unwrap();
        let r = reduce_one_variable_sk(&m, 8).unwrap();
        assert_eq!(r.orders, vec![1]);
        assert!(!r.exact);
        let zero = MatrixFamily::from_strs(Kind::Sk, &["x"], &[&["0", "0"], &["0", "0"]]).unwrap();
        assert!(reduce_one_variable_sk(&zero, 8).is_err());
    }

    #[test]
    fn square_reduction() {
        let m = MatrixFamily::from_strs(Kind::Sq, &["x"], &[&["x", "0"], &["0", "x^3"]]).unwrap();
        assert_eq!(reduce_one_variable_sq(&m, 10).unwrap().orders, vec![1, 3]);
        let m = MatrixFamily::from_strs(Kind::Sq, &["x"], &[&["x", "x"], &["0", "x^2"]]).unwrap();
        let r = reduce_one_variable_sq(&m, 10).unwrap();
        assert_eq!(r.orders, vec![1, 2]);
        assert!(r.exact);
        let z = MatrixFamily::from_strs(Kind::Sq, &["x"], &[&["0", "0"], &["0", "0"]]).unwrap();
        assert!(reduce_one_variable_sq(&z, 10).is_err());
    }

    #[test]
    fn perp_of_one_unit() {
        let e12 = from_upper(4, &[rat(1), rat(0), rat(0), rat(0), rat(0), rat(0)]);
        let p = perp(&[e12.clone()], 4).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.iter().all(|y| y[0][1].is_zero()));
        let all: Vec<ConstMatrix> = perp(&[], 4).unwrap();
        assert_eq!(all.len(), 6);
        assert!(perp(&all, 4).unwrap().is_empty());
    }

    #[test]
    fn dimension_cases() {
        let v = simple_dimension_cases(2, 3, 2).unwrap();
        assert!(v.allowed);
        let v = simple_dimension_cases(2, 4, 2).unwrap();
        assert!(v.inequality && !v.allowed);
        let v = simple_dimension_cases(13, 3, 13).unwrap();
        assert!(v.allowed);
        let v = simple_dimension_cases(14, 3, 13).unwrap();
        assert!(v.allowed && v.rule.contains("refined"));
        assert!(simple_dimension_cases(2, 3, 3).is_err());
    }
}
