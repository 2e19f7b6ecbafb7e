//! Matrix families of the three kinds and the row/column operation engine.
//!
//! Operations are stored 0-based. `T { i, j, alpha }` is the elementary
//! matrix `A = I + alpha·E_ij`: column `j` gains `alpha` times column `i`
//! and, acting on rows, row `j` gains `alpha` times row `i`. On both sides
//! this is the congruence `M ↦ AᵀMA`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::parse::{parse_poly, parse_poly_with, relocate, split_row, Params};
use crate::ring::{same_roster, Poly, PolyMap, Rational, Roster};
use crate::weights::{solve_grading, DegreeConstraint, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Sq,
    Sym,
    Sk,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sq => "sq",
            Kind::Sym => "sym",
            Kind::Sk => "sk",
        }
    }

    /// Number of independent entries of an `n×n` matrix of this kind.
    pub fn ambient_rank(self, n: usize) -> usize {
        match self {
            Kind::Sq => n * n,
            Kind::Sym => n * (n + 1) / 2,
            Kind::Sk => n * n.saturating_sub(1) / 2,
        }
    }

    /// Independent positions in row-major order: everything for `Sq`, the
    /// upper triangle with diagonal for `Sym`, the strict upper triangle for
    /// `Sk`.
    pub fn components(self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.ambient_rank(n));
        for i in 0..n {
            for j in 0..n {
                let keep = match self {
                    Kind::Sq => true,
                    Kind::Sym => j >= i,
                    Kind::Sk => j > i,
                };
                if keep {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sq" => Ok(Kind::Sq),
            "sym" => Ok(Kind::Sym),
            "sk" => Ok(Kind::Sk),
            other => Err(Error::InvalidFamily(format!("unknown kind `{other}`"))),
        }
    }
}

/// Square matrix of polynomials over a common roster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    vars: Roster,
    rows: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(vars: &Roster, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidFamily(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for p in row {
                if !same_roster(p.vars(), vars) {
                    return Err(Error::RosterMismatch(p.vars().join(" "), vars.join(" ")));
                }
            }
        }
        Ok(PolyMatrix {
            vars: vars.clone(),
            rows,
        })
    }

    pub fn from_fn(vars: &Roster, n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        PolyMatrix {
            vars: vars.clone(),
            rows: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn zero(vars: &Roster, n: usize) -> Self {
        PolyMatrix::from_fn(vars, n, |_, _| Poly::zero(vars))
    }

    pub fn identity(vars: &Roster, n: usize) -> Self {
        PolyMatrix::from_fn(vars, n, |i, j| if i == j { Poly::one(vars) } else { Poly::zero(vars) })
    }

    /// Block diagonal `J_2 ⊕ … ⊕ J_2` with `J_2 = (0, 1; −1, 0)`.
    pub fn symplectic(vars: &Roster, n: usize) -> Self {
        assert!(n % 2 == 0);
        PolyMatrix::from_fn(vars, n, |i, j| {
            if i % 2 == 0 && j == i + 1 {
                Poly::one(vars)
            } else if j % 2 == 0 && i == j + 1 {
                Poly::int(vars, -1)
            } else {
                Poly::zero(vars)
            }
        })
    }

    pub fn vars(&self) -> &Roster {
        &self.vars
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.rows[i][j] = p;
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.vars, self.size(), |i, j| self.rows[j][i].clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.size();
        assert_eq!(n, other.size());
        PolyMatrix::from_fn(&self.vars, n, |i, j| {
            let mut acc = Poly::zero(&self.vars);
            for k in 0..n {
                if !self.rows[i][k].is_zero() && !other.rows[k][j].is_zero() {
                    acc += &(&self.rows[i][k] * &other.rows[k][j]);
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(&self.vars, self.size(), |i, j| &self.rows[i][j] + &other.rows[i][j])
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix::from_fn(&self.vars, self.size(), |i, j| &self.rows[i][j] * p)
    }

    pub fn substitute(&self, map: &PolyMap) -> Result<PolyMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|p| p.substitute(map)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            vars: map.target(),
            rows,
        })
    }

    pub fn embed(&self, target: &Roster) -> Result<PolyMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|p| p.embed(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            vars: target.clone(),
            rows,
        })
    }

    pub fn constant_part(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(Poly::constant_term).collect())
            .collect()
    }

    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let (a, b) = (self.size(), other.size());
        PolyMatrix::from_fn(&self.vars, a + b, |i, j| {
            if i < a && j < a {
                self.rows[i][j].clone()
            } else if i >= a && j >= a {
                other.rows[i - a][j - a].clone()
            } else {
                Poly::zero(&self.vars)
            }
        })
    }

    /// Principal submatrix on the index range.
    pub fn block(&self, range: std::ops::Range<usize>) -> PolyMatrix {
        let start = range.start;
        PolyMatrix::from_fn(&self.vars, range.len(), |i, j| self.rows[start + i][start + j].clone())
    }

    /// Fraction-free Laplace expansion along rows, memoized on the set of
    /// remaining columns.
    pub fn determinant(&self) -> Poly {
        let n = self.size();
        assert!(n < 64, "matrix too large");
        let mut memo: HashMap<u64, Poly> = HashMap::new();
        self.det_rec((1u64 << n) - 1, &mut memo)
    }

    fn det_rec(&self, cols: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
        if cols == 0 {
            return Poly::one(&self.vars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let n = self.size();
        let row = n - cols.count_ones() as usize;
        let mut acc = Poly::zero(&self.vars);
        let mut pos = 0;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &self.rows[row][j];
            if !entry.is_zero() {
                let minor = self.det_rec(cols & !(1 << j), memo);
                let term = entry * &minor;
                if pos % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// First-row expansion `Pf = Σ_{j≥2} (−1)^j m_1j Pf(minor_1j)`
    /// (1-based), memoized on the set of remaining indices.
    pub fn pfaffian(&self) -> Poly {
        let n = self.size();
        assert!(n < 64 && n % 2 == 0);
        let mut memo = HashMap::new();
        self.pf_rec((1u64 << n) - 1, &mut memo)
    }

    fn pf_rec(&self, idx: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
        if idx == 0 {
            return Poly::one(&self.vars);
        }
        if let Some(p) = memo.get(&idx) {
            return p.clone();
        }
        let first = idx.trailing_zeros() as usize;
        let rest = idx & !(1 << first);
        let mut acc = Poly::zero(&self.vars);
        let mut pos = 1;
        for j in first + 1..self.size() {
            if rest & (1 << j) == 0 {
                continue;
            }
            let entry = &self.rows[first][j];
            if !entry.is_zero() {
                let term = entry * &self.pf_rec(rest & !(1 << j), memo);
                if pos % 2 == 1 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            pos += 1;
        }
        memo.insert(idx, acc.clone());
        acc
    }

    /// Invertible as a germ: the determinant has a nonzero constant term.
    pub fn is_invertible(&self) -> bool {
        let c = self.constant_part();
        linalg::rank(&c) == self.size()
    }
}

/// A germ of a matrix family: kind tag plus an `n×n` polynomial matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFamily {
    kind: Kind,
    matrix: PolyMatrix,
}

impl MatrixFamily {
    /// Validates the kind invariants; inputs are never symmetrized.
    pub fn new(kind: Kind, matrix: PolyMatrix) -> Result<Self> {
        let n = matrix.size();
        match kind {
            Kind::Sq => {}
            Kind::Sym => {
                for i in 0..n {
                    for j in i + 1..n {
                        if matrix.rows[i][j] != matrix.rows[j][i] {
                            return Err(Error::InvalidFamily(format!(
                                "not symmetric: entry ({},{}) differs from ({},{})",
                                i + 1,
                                j + 1,
                                j + 1,
                                i + 1
                            )));
                        }
                    }
                }
            }
            Kind::Sk => {
                if n % 2 != 0 {
                    return Err(Error::InvalidFamily(format!("skew family of odd size {n}")));
                }
                for i in 0..n {
                    if !matrix.rows[i][i].is_zero() {
                        return Err(Error::InvalidFamily(format!(
                            "not skew: diagonal entry ({},{}) is nonzero",
                            i + 1,
                            i + 1
                        )));
                    }
                    for j in i + 1..n {
                        if matrix.rows[i][j] != -&matrix.rows[j][i] {
                            return Err(Error::InvalidFamily(format!(
                                "not skew: entry ({},{}) is not minus ({},{})",
                                i + 1,
                                j + 1,
                                j + 1,
                                i + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(MatrixFamily { kind, matrix })
    }

    pub fn from_rows(kind: Kind, vars: &Roster, rows: Vec<Vec<Poly>>) -> Result<Self> {
        MatrixFamily::new(kind, PolyMatrix::new(vars, rows)?)
    }

    /// Builds a family from expression strings.
    pub fn from_strs(kind: Kind, vars: &[&str], rows: &[&[&str]]) -> Result<Self> {
        let roster = crate::ring::roster(vars);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| crate::parse::parse_poly(s, &roster)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MatrixFamily::from_rows(kind, &roster, rows)
    }

    /// Skew family from its strict upper triangle listed row by row.
    pub fn skew_from_upper(vars: &Roster, n: usize, upper: Vec<Poly>) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidFamily("wrong number of upper entries".into()));
        }
        let mut m = PolyMatrix::zero(vars, n);
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let p = it.next().expect("counted");
                m.rows[j][i] = -&p;
                m.rows[i][j] = p;
            }
        }
        MatrixFamily::new(Kind::Sk, m)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn vars(&self) -> &Roster {
        self.matrix.vars()
    }

    pub fn nvars(&self) -> usize {
        self.vars().len()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        self.matrix.get(i, j)
    }

    /// Independent entries in the flattening order of [`Kind::components`].
    pub fn components(&self) -> Vec<Poly> {
        self.kind
            .components(self.size())
            .into_iter()
            .map(|(i, j)| self.entry(i, j).clone())
            .collect()
    }

    pub fn determinant(&self) -> Poly {
        self.matrix.determinant()
    }

    pub fn pfaffian(&self) -> Result<Poly> {
        if self.kind != Kind::Sk {
            return Err(Error::KindMismatch(format!("Pfaffian needs a skew family, got {}", self.kind)));
        }
        Ok(self.matrix.pfaffian())
    }

    /// `n − rank M(0)`.
    pub fn matrix_corank(&self) -> usize {
        self.size() - linalg::rank(&self.matrix.constant_part())
    }

    pub fn transpose(&self) -> MatrixFamily {
        MatrixFamily {
            kind: self.kind,
            matrix: self.matrix.transpose(),
        }
    }

    pub fn direct_sum(&self, other: &MatrixFamily) -> Result<MatrixFamily> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(format!("{} ⊕ {}", self.kind, other.kind)));
        }
        if !same_roster(self.vars(), other.vars()) {
            return Err(Error::RosterMismatch(self.vars().join(" "), other.vars().join(" ")));
        }
        Ok(MatrixFamily {
            kind: self.kind,
            matrix: self.matrix.direct_sum(&other.matrix),
        })
    }

    /// Reinterprets the matrix under another kind, re-validating.
    pub fn with_kind(&self, kind: Kind) -> Result<MatrixFamily> {
        MatrixFamily::new(kind, self.matrix.clone())
    }

    pub fn substitute(&self, map: &PolyMap) -> Result<MatrixFamily> {
        Ok(MatrixFamily {
            kind: self.kind,
            matrix: self.matrix.substitute(map)?,
        })
    }

    pub fn embed(&self, target: &Roster) -> Result<MatrixFamily> {
        Ok(MatrixFamily {
            kind: self.kind,
            matrix: self.matrix.embed(target)?,
        })
    }

    pub fn is_constant_zero_at_origin(&self) -> bool {
        self.matrix
            .rows
            .iter()
            .all(|r| r.iter().all(|p| p.constant_term().is_zero()))
    }

    /// Exact LP for positive weights with `deg m_ij = r_i + c_j`.
    pub fn find_weights(&self) -> Option<WeightSystem> {
        let n = self.size();
        let s = self.nvars();
        let symmetric = self.kind != Kind::Sq;
        let nfree = if symmetric { n } else { 2 * n };
        let mut constraints = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    continue;
                }
                let col = if symmetric { j } else { n + j };
                for (m, _) in self.entry(i, j).terms() {
                    let free = if col == i {
                        vec![(i, 2)]
                    } else {
                        vec![(i, 1), (col, 1)]
                    };
                    constraints.push(DegreeConstraint {
                        mono: m.clone(),
                        free,
                    });
                }
            }
        }
        let (w, free) = solve_grading(s, nfree, &constraints)?;
        if symmetric {
            Some(WeightSystem::new(w, free.clone(), free))
        } else {
            let mut r = free[..n].to_vec();
            let mut c = free[n..].to_vec();
            // fix the ambiguity r + t, c − t by making the smallest r zero
            if let Some(shift) = r.iter().min().cloned() {
                r.iter_mut().for_each(|x| *x -= &shift);
                c.iter_mut().for_each(|x| *x += &shift);
            }
            Some(WeightSystem::new(w, r, c))
        }
    }

    /// Whether every nonzero entry is homogeneous of degree `r_i + c_j`.
    pub fn is_quasi_homogeneous(&self, w: &WeightSystem) -> bool {
        let n = self.size();
        if w.weights().len() != self.nvars() || w.row_degrees().len() != n || w.col_degrees().len() != n {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let d = w.entry_degree(i, j);
                self.entry(i, j).terms().all(|(m, _)| m.weighted_degree(w.weights()) == d)
            })
        })
    }

    pub fn apply_ops(&self, ops: &[RowColOp]) -> Result<MatrixFamily> {
        let mut m = self.matrix.clone();
        for op in ops {
            op.validate(self.kind, self.size(), self.vars())?;
            op.act(&mut m);
        }
        Ok(MatrixFamily {
            kind: self.kind,
            matrix: m,
        })
    }

    /// Parses the family file format.
    pub fn parse(src: &str) -> Result<MatrixFamily> {
        parse_family_with(src, &Params::new())
    }

    /// Family file text; re-parses to an equal value.
    pub fn to_file_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "vars: {}", self.vars().join(" "))?;
        writeln!(f, "matrix:")?;
        for row in &self.matrix.rows {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses matrix rows (one bracketed row per line) starting at `first_line`
/// (1-based) over the given roster.
pub(crate) fn parse_rows(
    lines: &[(usize, &str)],
    vars: &Roster,
    params: &Params,
) -> Result<Vec<Vec<Poly>>> {
    let mut rows = Vec::new();
    for &(line_no, line) in lines {
        let cells = split_row(line, line_no)?;
        let mut row = Vec::with_capacity(cells.len());
        for (text, offset) in cells {
            if text.trim().is_empty() {
                return Err(Error::parse(line_no, offset + 1, "empty matrix entry"));
            }
            let p = parse_poly_with(&text, vars, params).map_err(|e| relocate(e, line_no, offset))?;
            row.push(p);
        }
        rows.push(row);
    }
    let n = rows.len();
    for (k, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::parse(
                lines[k].0,
                1,
                format!("row has {} entries but the matrix has {} rows", row.len(), n),
            ));
        }
    }
    Ok(rows)
}

pub(crate) fn parse_roster_line(value: &str, line_no: usize) -> Result<Roster> {
    let names: Vec<&str> = value.split_whitespace().collect();
    for (k, name) in names.iter().enumerate() {
        if !is_identifier(name) {
            return Err(Error::parse(line_no, 1, format!("invalid variable name `{name}`")));
        }
        if names[..k].contains(name) {
            return Err(Error::parse(line_no, 1, format!("duplicate variable `{name}`")));
        }
    }
    Ok(crate::ring::roster(&names))
}

pub(crate) fn parse_family_with(src: &str, params: &Params) -> Result<MatrixFamily> {
    let mut kind = None;
    let mut vars = None;
    let mut matrix_lines: Option<Vec<(usize, &str)>> = None;
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rows) = matrix_lines.as_mut() {
            if line.starts_with('[') {
                rows.push((line_no, raw));
                continue;
            }
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, 1, "expected `key: value`"))?;
        match key.trim() {
            "kind" => kind = Some(value.parse::<Kind>().map_err(|e| Error::parse(line_no, 1, e.to_string()))?),
            "vars" => vars = Some(parse_roster_line(value, line_no)?),
            "matrix" => {
                if !value.trim().is_empty() {
                    return Err(Error::parse(line_no, 8, "matrix rows start on the next line"));
                }
                if matrix_lines.is_some() {
                    return Err(Error::parse(line_no, 1, "repeated `matrix:` section"));
                }
                matrix_lines = Some(Vec::new());
            }
            // trailer of a command report, so that reports can be piped back in
            "status" => {}
            other => return Err(Error::parse(line_no, 1, format!("unknown key `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::parse(1, 1, "missing `kind:` line"))?;
    let vars = vars.ok_or_else(|| Error::parse(1, 1, "missing `vars:` line"))?;
    let lines = matrix_lines.ok_or_else(|| Error::parse(1, 1, "missing `matrix:` section"))?;
    let rows = parse_rows(&lines, &vars, params)?;
    MatrixFamily::from_rows(kind, &vars, rows)
}

/// Which side an operation acts on. Symmetric and skew families only admit
/// `Both` (congruence).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Both,
    Rows,
    Cols,
}

impl Side {
    fn rows(self) -> bool {
        self != Side::Cols
    }
    fn cols(self) -> bool {
        self != Side::Rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowColOp {
    /// `A = I + alpha·E_ij`.
    T { i: usize, j: usize, alpha: Poly, side: Side },
    /// Multiplies row and/or column `i` by the unit `u`.
    Scale { i: usize, u: Poly, side: Side },
    Swap { i: usize, j: usize, side: Side },
}

impl RowColOp {
    pub fn t(i: usize, j: usize, alpha: Poly) -> Self {
        RowColOp::T { i, j, alpha, side: Side::Both }
    }

    pub fn scale(i: usize, u: Poly) -> Self {
        RowColOp::Scale { i, u, side: Side::Both }
    }

    pub fn swap(i: usize, j: usize) -> Self {
        RowColOp::Swap { i, j, side: Side::Both }
    }

    pub fn on(self, side: Side) -> Self {
        match self {
            RowColOp::T { i, j, alpha, .. } => RowColOp::T { i, j, alpha, side },
            RowColOp::Scale { i, u, .. } => RowColOp::Scale { i, u, side },
            RowColOp::Swap { i, j, .. } => RowColOp::Swap { i, j, side },
        }
    }

    pub fn side(&self) -> Side {
        match self {
            RowColOp::T { side, .. } | RowColOp::Scale { side, .. } | RowColOp::Swap { side, .. } => *side,
        }
    }

    fn validate(&self, kind: Kind, n: usize, vars: &Roster) -> Result<()> {
        if kind != Kind::Sq && self.side() != Side::Both {
            return Err(Error::InvalidOperation(format!(
                "{kind} families only admit two-sided operations"
            )));
        }
        let in_range = |k: usize| {
            if k < n {
                Ok(())
            } else {
                Err(Error::InvalidOperation(format!("index {} out of range for size {n}", k + 1)))
            }
        };
        match self {
            RowColOp::T { i, j, alpha, .. } => {
                in_range(*i)?;
                in_range(*j)?;
                if !same_roster(alpha.vars(), vars) {
                    return Err(Error::RosterMismatch(alpha.vars().join(" "), vars.join(" ")));
                }
                if i == j && !(alpha + &Poly::one(vars)).is_unit() {
                    return Err(Error::NotUnit(format!("1 + {alpha}")));
                }
            }
            RowColOp::Scale { i, u, .. } => {
                in_range(*i)?;
                if !same_roster(u.vars(), vars) {
                    return Err(Error::RosterMismatch(u.vars().join(" "), vars.join(" ")));
                }
                if !u.is_unit() {
                    return Err(Error::NotUnit(u.to_string()));
                }
            }
            RowColOp::Swap { i, j, .. } => {
                in_range(*i)?;
                in_range(*j)?;
            }
        }
        Ok(())
    }

    fn act(&self, m: &mut PolyMatrix) {
        let n = m.size();
        let side = self.side();
        match self {
            RowColOp::T { i, j, alpha, .. } => {
                if alpha.is_zero() {
                    return;
                }
                if side.cols() {
                    for r in 0..n {
                        if !m.rows[r][*i].is_zero() {
                            let add = &m.rows[r][*i] * alpha;
                            m.rows[r][*j] += &add;
                        }
                    }
                }
                if side.rows() {
                    for c in 0..n {
                        if !m.rows[*i][c].is_zero() {
                            let add = &m.rows[*i][c] * alpha;
                            m.rows[*j][c] += &add;
                        }
                    }
                }
            }
            RowColOp::Scale { i, u, .. } => {
                if side.cols() {
                    for r in 0..n {
                        m.rows[r][*i] = &m.rows[r][*i] * u;
                    }
                }
                if side.rows() {
                    for c in 0..n {
                        m.rows[*i][c] = &m.rows[*i][c] * u;
                    }
                }
            }
            RowColOp::Swap { i, j, .. } => {
                if side.cols() {
                    for r in 0..n {
                        m.rows[r].swap(*i, *j);
                    }
                }
                if side.rows() {
                    m.rows.swap(*i, *j);
                }
            }
        }
    }

    /// The matrix `A` of the operation, so that the two-sided action is
    /// `AᵀMA`, the row action `AᵀM` and the column action `MA`.
    pub fn matrix(&self, vars: &Roster, n: usize) -> PolyMatrix {
        let mut a = PolyMatrix::identity(vars, n);
        match self {
            RowColOp::T { i, j, alpha, .. } => {
                let v = &a.rows[*i][*j] + alpha;
                a.rows[*i][*j] = v;
            }
            RowColOp::Scale { i, u, .. } => a.rows[*i][*i] = u.clone(),
            RowColOp::Swap { i, j, .. } => {
                a.rows.swap(*i, *j);
            }
        }
        a
    }
}

impl fmt::Display for RowColOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side() {
            Side::Both => "",
            Side::Rows => "rows:",
            Side::Cols => "cols:",
        };
        match self {
            RowColOp::T { i, j, alpha, .. } => write!(f, "{side}T({},{},{})", i + 1, j + 1, alpha),
            RowColOp::Scale { i, u, .. } => write!(f, "{side}Scale({},{})", i + 1, u),
            RowColOp::Swap { i, j, .. } => write!(f, "{side}Swap({},{})", i + 1, j + 1),
        }
    }
}

/// Parses a `;`-separated list in the printed form of [`RowColOp`]:
/// `T(i,j,alpha)`, `Scale(i,u)`, `Swap(i,j)`, optionally prefixed by
/// `rows:` or `cols:`; indices are 1-based.
pub fn parse_ops(src: &str, vars: &Roster) -> Result<Vec<RowColOp>> {
    let mut ops = Vec::new();
    for item in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = |why: &str| Error::InvalidOperation(format!("operation `{item}`: {why}"));
        let (side, body) = if let Some(rest) = item.strip_prefix("rows:") {
            (Side::Rows, rest.trim())
        } else if let Some(rest) = item.strip_prefix("cols:") {
            (Side::Cols, rest.trim())
        } else {
            (Side::Both, item)
        };
        let open = body.find('(').ok_or_else(|| bad("expected `name(...)`"))?;
        let args = body[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("missing closing parenthesis"))?;
        let index = |s: &str| -> Result<usize> {
            match s.trim().parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(bad("indices are positive integers")),
            }
        };
        let op = match body[..open].trim() {
            "T" => {
                let mut parts = args.splitn(3, ',');
                let (Some(i), Some(j), Some(a)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(bad("expected T(i,j,alpha)"));
                };
                RowColOp::t(index(i)?, index(j)?, parse_poly(a, vars)?)
            }
            "Scale" => {
                let (i, u) = args.split_once(',').ok_or_else(|| bad("expected Scale(i,u)"))?;
                RowColOp::scale(index(i)?, parse_poly(u, vars)?)
            }
            "Swap" => {
                let (i, j) = args.split_once(',').ok_or_else(|| bad("expected Swap(i,j)"))?;
                RowColOp::swap(index(i)?, index(j)?)
            }
            other => return Err(bad(&format!("unknown operation `{other}`"))),
        };
        ops.push(op.on(side));
    }
    Ok(ops)
}

/// Witness of `M1 ∘ φ = Aᵀ M2 B` (with `B = A` for symmetric and skew
/// families, where `b` is absent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub phi: PolyMap,
    pub a: PolyMatrix,
    pub b: Option<PolyMatrix>,
}

impl EquivalenceCertificate {
    pub fn identity(kind: Kind, vars: &Roster, n: usize) -> Self {
        let a = PolyMatrix::identity(vars, n);
        EquivalenceCertificate {
            phi: PolyMap::identity(vars),
            b: (kind == Kind::Sq).then(|| a.clone()),
            a,
        }
    }

    /// Certificate for `M.apply_ops(ops)` against `M`: the left side is the
    /// result, the right side the original.
    pub fn from_ops(kind: Kind, vars: &Roster, n: usize, ops: &[RowColOp]) -> Self {
        let mut a = PolyMatrix::identity(vars, n);
        let mut b = PolyMatrix::identity(vars, n);
        for op in ops {
            let m = op.matrix(vars, n);
            if op.side().rows() {
                a = a.mul(&m);
            }
            if op.side().cols() {
                b = b.mul(&m);
            }
        }
        EquivalenceCertificate {
            phi: PolyMap::identity(vars),
            a,
            b: (kind == Kind::Sq).then_some(b),
        }
    }
}

/// Tests `M1 ∘ φ = Aᵀ M2 B` exactly.
pub fn check_certificate(m1: &MatrixFamily, m2: &MatrixFamily, cert: &EquivalenceCertificate) -> Result<bool> {
    if m1.kind != m2.kind || m1.size() != m2.size() {
        return Err(Error::KindMismatch(format!(
            "{}×{} {} vs {}×{} {}",
            m1.size(),
            m1.size(),
            m1.kind,
            m2.size(),
            m2.size(),
            m2.kind
        )));
    }
    if !same_roster(m1.vars(), m2.vars()) {
        return Err(Error::RosterMismatch(m1.vars().join(" "), m2.vars().join(" ")));
    }
    let n = m1.size();
    let vars = m1.vars();
    let b = match (m1.kind, &cert.b) {
        (Kind::Sq, Some(b)) => b,
        (Kind::Sq, None) => return Err(Error::InvalidOperation("square certificate needs B".into())),
        (_, None) => &cert.a,
        (_, Some(_)) => {
            return Err(Error::InvalidOperation(
                "congruence certificate must not carry a separate B".into(),
            ))
        }
    };
    for m in [&cert.a, b] {
        if m.size() != n || !same_roster(m.vars(), vars) {
            return Err(Error::InvalidOperation("certificate matrix has the wrong shape".into()));
        }
        if !m.is_invertible() {
            return Err(Error::NotUnit("certificate matrix is not invertible at the origin".into()));
        }
    }
    if cert.phi.images().len() != m1.nvars() || !same_roster(&cert.phi.target(), vars) {
        return Err(Error::InvalidOperation("φ does not map the parameter space to itself".into()));
    }
    if !cert.phi.is_germ() {
        return Err(Error::InvalidOperation("φ does not fix the origin".into()));
    }
    if linalg::rank(&cert.phi.linear_part()) != m1.nvars() {
        return Err(Error::InvalidOperation("φ is not invertible".into()));
    }
    let lhs = m1.matrix.substitute(&cert.phi)?;
    let rhs = cert.a.transpose().mul(&m2.matrix).mul(b);
    Ok(lhs == rhs)
}

/// Result of splitting off the invertible part of `M(0)`.
#[derive(Clone, Debug)]
pub struct StableSplit {
    /// Block with `core(0) = 0`, of size equal to the matrix corank.
    pub core: MatrixFamily,
    /// Block-diagonal unit part: `I` / `J` when the pivots are constants
    /// (for `Sym`, constant diagonal entries), otherwise polynomial units.
    pub corner: MatrixFamily,
    pub ops: Vec<RowColOp>,
    /// Certifies `core ⊕ corner` against the input.
    pub certificate: EquivalenceCertificate,
}

impl StableSplit {
    pub fn split_form(&self) -> MatrixFamily {
        self.core.direct_sum(&self.corner).expect("same kind and roster")
    }
}

struct OpRecorder {
    kind: Kind,
    m: PolyMatrix,
    ops: Vec<RowColOp>,
}

impl OpRecorder {
    fn push(&mut self, op: RowColOp) {
        op.act(&mut self.m);
        self.ops.push(op);
    }

    fn swap(&mut self, i: usize, j: usize, side: Side) {
        if i != j {
            self.push(RowColOp::swap(i, j).on(side));
        }
    }

    /// Clears `target` against the unit pivot `u` in line `p`, so that the
    /// entry `a` at `(target, p)` (rows) or `(p, target)` (cols) vanishes.
    fn clear(&mut self, p: usize, target: usize, a: Poly, u: &Poly, side: Side) {
        if a.is_zero() {
            return;
        }
        if u.is_constant() {
            let inv = Rational::one() / u.constant_term();
            self.push(RowColOp::t(p, target, a.scale(&-inv)).on(side));
        } else {
            self.push(RowColOp::scale(target, u.clone()).on(side));
            self.push(RowColOp::t(p, target, -a).on(side));
        }
    }
}

fn first_unit(m: &PolyMatrix, active: usize, pred: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    (0..active)
        .flat_map(|i| (0..active).map(move |j| (i, j)))
        .find(|&(i, j)| pred(i, j) && m.rows[i][j].is_unit())
}

/// Moves unit pivots of `M(0)` to the end and clears their rows and
/// columns, leaving `core ⊕ corner`.
pub fn stable_split(m: &MatrixFamily) -> StableSplit {
    let n = m.size();
    let vars = m.vars().clone();
    let mut rec = OpRecorder {
        kind: m.kind,
        m: m.matrix.clone(),
        ops: Vec::new(),
    };
    let mut active = n;
    match m.kind {
        Kind::Sq => {
            while let Some((i, j)) = first_unit(&rec.m, active, |_, _| true) {
                let p = active - 1;
                rec.swap(i, p, Side::Rows);
                rec.swap(j, p, Side::Cols);
                let u = rec.m.rows[p][p].clone();
                for r in 0..p {
                    let a = rec.m.rows[r][p].clone();
                    rec.clear(p, r, a, &u, Side::Rows);
                }
                for c in 0..p {
                    let b = rec.m.rows[p][c].clone();
                    rec.clear(p, c, b, &u, Side::Cols);
                }
                if u.is_constant() && !u.constant_term().is_one() {
                    let inv = Rational::one() / u.constant_term();
                    rec.push(RowColOp::scale(p, Poly::constant(&vars, inv)).on(Side::Rows));
                }
                active -= 1;
            }
        }
        Kind::Sym => {
            while active > 0 {
                let pivot = match first_unit(&rec.m, active, |i, j| i == j) {
                    Some((i, _)) => i,
                    None => match first_unit(&rec.m, active, |i, j| i < j) {
                        Some((i, j)) => {
                            rec.push(RowColOp::t(j, i, Poly::one(&vars)));
                            i
                        }
                        None => break,
                    },
                };
                let p = active - 1;
                rec.swap(pivot, p, Side::Both);
                let u = rec.m.rows[p][p].clone();
                for r in 0..p {
                    let a = rec.m.rows[r][p].clone();
                    rec.clear(p, r, a, &u, Side::Both);
                }
                active -= 1;
            }
        }
        Kind::Sk => {
            while let Some((i, j)) = first_unit(&rec.m, active, |i, j| i < j) {
                let (p, q) = (active - 2, active - 1);
                rec.swap(i, p, Side::Both);
                let j = if j == p { i } else { j };
                rec.swap(j, q, Side::Both);
                let u = rec.m.rows[p][q].clone();
                for r in 0..p {
                    let a = rec.m.rows[r][p].clone();
                    let b = rec.m.rows[r][q].clone();
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    if u.is_constant() {
                        let inv = Rational::one() / u.constant_term();
                        if !b.is_zero() {
                            rec.push(RowColOp::t(p, r, b.scale(&-inv.clone())));
                        }
                        if !a.is_zero() {
                            rec.push(RowColOp::t(q, r, a.scale(&inv)));
                        }
                    } else {
                        rec.push(RowColOp::scale(r, u.clone()));
                        if !b.is_zero() {
                            rec.push(RowColOp::t(p, r, -b));
                        }
                        if !a.is_zero() {
                            rec.push(RowColOp::t(q, r, a));
                        }
                    }
                }
                if u.is_constant() && !u.constant_term().is_one() {
                    let inv = Rational::one() / u.constant_term();
                    rec.push(RowColOp::scale(p, Poly::constant(&vars, inv)));
                }
                active -= 2;
            }
        }
    }
    let kind = rec.kind;
    let certificate = EquivalenceCertificate::from_ops(kind, &vars, n, &rec.ops);
    StableSplit {
        core: MatrixFamily {
            kind,
            matrix: rec.m.block(0..active),
        },
        corner: MatrixFamily {
            kind,
            matrix: rec.m.block(active..n),
        },
        ops: rec.ops,
        certificate,
    }
}
