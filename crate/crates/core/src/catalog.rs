//! Registry of simple normal forms with their stated invariants, and batch
//! verification of every instance against the computational modules.
//!
//! The registry is a plain text file (`catalog/catalog.txt`, embedded at
//! build time) using the expression grammar of family files; integer
//! parameters appear in exponents and in the stated formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::determinator::{classify_function, SingClass};
use crate::error::{Error, Result};
use crate::family::{check_certificate, parse_roster_line, parse_rows, EquivalenceCertificate, Kind, MatrixFamily, PolyMatrix};
use crate::parse::{eval_int, parse_poly, Params};
use crate::ring::{Monomial, Poly, PolyMap, Roster};
use crate::suspend::{suspend, tau_relation_report, SuspensionKind, Verdict};
use crate::tangent::{miniversal, tau};

const BUILTIN: &str = include_str!("../catalog/catalog.txt");

/// A row of the correspondence between skew `2k × 2k` families in `s`
/// parameters and square `k × k` families in `source_dim` parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correspondence {
    Suspension {
        kind: SuspensionKind,
        source_dim: usize,
    },
    NoSimpleClasses,
}

/// Which suspension produces the simple skew classes in `s` parameters and
/// size `2k`, and from how many parameters.
pub fn table4_map(s: usize, k: usize) -> Correspondence {
    use SuspensionKind::*;
    let row = |kind, source_dim| Correspondence::Suspension { kind, source_dim };
    match (s, k) {
        (_, 0) | (0, _) => Correspondence::NoSimpleClasses,
        (1, _) => row(SqToSkTrivial, 1),
        (_, 1) => row(SqToSkTrivial, s),
        (2, 2) => row(SqToSkTrivial, 2),
        (3, 2) => row(SqToSkIntermediate, 2),
        (_, 2) => row(SqToSkFull, s - 2),
        (2, 3) => row(SqToSkTrivial, 2),
        (13, 3) => row(SqToSkFull, 7),
        _ if s + 1 >= k * (2 * k - 1) => row(SqToSkFull, s - k * (k - 1)),
        _ => Correspondence::NoSimpleClasses,
    }
}

/// Non-singular pencils of `3 × 3` matrices (rows in line format), kept
/// as reference data only.
pub const PENCILS: [(&str, &str); 5] = [
    ("a", "[x, 0, 0]; [0, x + y, 0]; [0, 0, y]"),
    ("b", "[x, y, 0]; [0, x, 0]; [0, 0, y]"),
    ("c", "[x, 0, 0]; [0, x, 0]; [0, 0, y]"),
    ("d", "[x, y, 0]; [0, x, y]; [0, 0, x]"),
    ("e", "[x, 0, y]; [0, x, 0]; [0, 0, x]"),
];

/// `(generic, degenerate)`: the orbit of the second lies in the closure of
/// the orbit of the first. Not verified.
pub const PENCIL_ADJACENCIES: [(&str, &str); 5] = [("a", "b"), ("b", "c"), ("b", "d"), ("c", "e"), ("d", "e")];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    pub lo: String,
    pub hi: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Generator {
    Matrix { vars: Roster, rows: Vec<(usize, String)> },
    Suspension { kind: SuspensionKind, of: String },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: Kind,
    pub source: String,
    pub params: Vec<ParamSpec>,
    pub generator: Generator,
    pub tau: Option<String>,
    pub tau_sk_triv: Option<String>,
    /// Stated class of the determinant (square) or Pfaffian (skew).
    pub fn_class: Option<String>,
    pub suspension_of: Option<(String, SuspensionKind)>,
    pub transpose_of: Option<String>,
    pub duplicate_of: Option<(String, Vec<(String, String)>)>,
    pub basis: Option<Vec<(String, usize, usize)>>,
    /// `(field, corrected formula)`
    pub errata: Vec<(String, String)>,
    pub note: Option<String>,
}

impl CatalogEntry {
    fn erratum(&self, field: &str) -> Option<&str> {
        self.errata.iter().find(|(f, _)| f == field).map(|(_, e)| e.as_str())
    }

    /// Size bound key: `k` for `k × k` square or `2k × 2k` skew matrices.
    fn k_of(&self, family: &MatrixFamily) -> usize {
        match self.kind {
            Kind::Sk => family.size() / 2,
            _ => family.size(),
        }
    }
}

/// Upper bounds for open parameter ranges. A name `a<digits>` falls back
/// to the bound for `a`; `k` bounds the matrix size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds(BTreeMap<String, i64>);

impl Default for Bounds {
    fn default() -> Self {
        Bounds::empty().with("p", 4).with("q", 4).with("mu", 10).with("a", 3).with("k", 3)
    }
}

impl Bounds {
    /// No bounds at all: entries with open parameter ranges enumerate
    /// nothing.
    pub fn empty() -> Self {
        Bounds(BTreeMap::new())
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    /// `p=4,q=4,...` on top of `self`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidOperation(format!("bound `{item}` is not `name=value`")))?;
            let value: i64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidOperation(format!("bound `{item}` is not an integer")))?;
            self.0.insert(name.trim().to_string(), value);
        }
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        if let Some(v) = self.0.get(name) {
            return Some(*v);
        }
        let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
        if stem != name && !stem.is_empty() {
            return self.0.get(stem).copied();
        }
        None
    }
}

#[derive(Clone, Debug, Default)]
pub struct Filter {
    pub kind: Option<Kind>,
    /// Case-insensitive substring of the source description.
    pub source: Option<String>,
    /// Prefix of the entry id.
    pub id: Option<String>,
    pub bounds: Bounds,
}

#[derive(Clone, Debug)]
pub struct Instance<'a> {
    pub catalog: &'a Catalog,
    pub entry: &'a CatalogEntry,
    pub params: Vec<(String, i64)>,
    pub family: MatrixFamily,
}

impl Instance<'_> {
    pub fn param_map(&self) -> Params {
        self.params.iter().cloned().collect()
    }

    /// `id[p=1,q=2]`
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.entry.id.clone()
        } else {
            format!("{}[{}]", self.entry.id, format_params(&self.params, ","))
        }
    }
}

fn format_params(params: &[(String, i64)], sep: &str) -> String {
    params.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(sep)
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The registry shipped with the crate.
    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::parse(BUILTIN).expect("built-in catalog is well formed"))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn parse(src: &str) -> Result<Catalog> {
        let lines: Vec<(usize, &str)> = src.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let mut entries = Vec::new();
        let mut block: Vec<(usize, &str)> = Vec::new();
        for &(no, line) in lines.iter().chain(std::iter::once(&(lines.len() + 1, ""))) {
            if line.trim_start().starts_with('#') {
                continue;
            }
            if line.trim().is_empty() {
                if !block.is_empty() {
                    entries.push(parse_entry(&block)?);
                    block.clear();
                }
            } else {
                block.push((no, line));
            }
        }
        let catalog = Catalog { entries };
        catalog.validate()?;
        Ok(catalog)
    }

    fn validate(&self) -> Result<()> {
        for (k, e) in self.entries.iter().enumerate() {
            if self.entries[..k].iter().any(|o| o.id == e.id) {
                return Err(Error::Catalog(format!("duplicate entry id `{}`", e.id)));
            }
            let refs = [
                e.suspension_of.as_ref().map(|(id, _)| id),
                e.transpose_of.as_ref(),
                e.duplicate_of.as_ref().map(|(id, _)| id),
                match &e.generator {
                    Generator::Suspension { of, .. } => Some(of),
                    Generator::Matrix { .. } => None,
                },
            ];
            for id in refs.into_iter().flatten() {
                if self.get(id).is_none() {
                    return Err(Error::Catalog(format!("entry `{}` refers to unknown entry `{id}`", e.id)));
                }
            }
        }
        Ok(())
    }

    /// The family of `entry` at the given parameter values.
    pub fn instantiate(&self, entry: &CatalogEntry, params: &Params) -> Result<MatrixFamily> {
        self.instantiate_depth(entry, params, 0)
    }

    fn instantiate_depth(&self, entry: &CatalogEntry, params: &Params, depth: usize) -> Result<MatrixFamily> {
        if depth > 8 {
            return Err(Error::Catalog(format!("generator chain too deep at `{}`", entry.id)));
        }
        let family = match &entry.generator {
            Generator::Matrix { vars, rows } => {
                let rows_ref: Vec<(usize, &str)> = rows.iter().map(|(n, s)| (*n, s.as_str())).collect();
                let rows = parse_rows(&rows_ref, vars, params)?;
                MatrixFamily::from_rows(entry.kind, vars, rows)?
            }
            Generator::Suspension { kind, of } => {
                let src = self.get(of).ok_or_else(|| Error::Catalog(format!("unknown entry `{of}`")))?;
                suspend(&self.instantiate_depth(src, params, depth + 1)?, *kind)?
            }
        };
        if family.kind() != entry.kind {
            return Err(Error::KindMismatch(format!(
                "entry `{}` is declared {} but generates {}",
                entry.id,
                entry.kind,
                family.kind()
            )));
        }
        Ok(family)
    }

    /// Parameter assignments of `entry` within `bounds`, in lexicographic
    /// order. Empty when some open range has no bound.
    pub fn assignments(&self, entry: &CatalogEntry, bounds: &Bounds) -> Result<Vec<Vec<(String, i64)>>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        expand(&entry.params, bounds, &mut current, &mut out)?;
        Ok(out)
    }

    /// Instances matching the filter, ordered by `(id, params)`.
    pub fn enumerate(&self, filter: &Filter) -> Result<Vec<Instance<'_>>> {
        let mut out = Vec::new();
        for entry in &self.entries {
            if filter.kind.is_some_and(|k| k != entry.kind) {
                continue;
            }
            if let Some(s) = &filter.source {
                if !entry.source.to_lowercase().contains(&s.to_lowercase()) {
                    continue;
                }
            }
            if let Some(prefix) = &filter.id {
                if !entry.id.starts_with(prefix.as_str()) {
                    continue;
                }
            }
            for params in self.assignments(entry, &filter.bounds)? {
                let map: Params = params.iter().cloned().collect();
                let family = self.instantiate(entry, &map)?;
                if let Some(k) = filter.bounds.get("k") {
                    if entry.k_of(&family) as i64 > k {
                        continue;
                    }
                }
                out.push(Instance {
                    catalog: self,
                    entry,
                    params,
                    family,
                });
            }
        }
        out.sort_by(|a, b| {
            (a.entry.id.as_str(), a.params.iter().map(|p| p.1).collect::<Vec<_>>())
                .cmp(&(b.entry.id.as_str(), b.params.iter().map(|p| p.1).collect::<Vec<_>>()))
        });
        Ok(out)
    }
}

fn expand(specs: &[ParamSpec], bounds: &Bounds, current: &mut Vec<(String, i64)>, out: &mut Vec<Vec<(String, i64)>>) -> Result<()> {
    let Some((spec, rest)) = specs.split_first() else {
        out.push(current.clone());
        return Ok(());
    };
    let env: Params = current.iter().cloned().collect();
    let lo = eval_int(&spec.lo, &env)?;
    let stated = spec.hi.as_deref().map(|h| eval_int(h, &env)).transpose()?;
    let hi = match (stated, bounds.get(&spec.name)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return Ok(()),
    };
    for v in lo..=hi {
        current.push((spec.name.clone(), v));
        expand(rest, bounds, current, out)?;
        current.pop();
    }
    Ok(())
}

fn catalog_err(line: usize, message: impl Into<String>) -> Error {
    Error::parse(line, 1, message)
}

fn parse_suspension_ref(value: &str, line: usize) -> Result<(SuspensionKind, String)> {
    let (kind, of) = value
        .split_once(" of ")
        .ok_or_else(|| catalog_err(line, "expected `<suspension> of <entry>`"))?;
    let kind = kind.trim().parse::<SuspensionKind>().map_err(|e| catalog_err(line, e.to_string()))?;
    Ok((kind, of.trim().to_string()))
}

fn parse_entry<'a>(block: &[(usize, &'a str)]) -> Result<CatalogEntry> {
    let first = block[0].0;
    let mut fields: BTreeMap<&'a str, (usize, String)> = BTreeMap::new();
    let mut errata = Vec::new();
    let mut rows: Option<Vec<(usize, String)>> = None;
    for &(no, raw) in block {
        if let Some(r) = rows.as_mut() {
            if raw.trim_start().starts_with('[') {
                r.push((no, raw.to_string()));
                continue;
            }
        }
        let (key, value) = raw
            .split_once(':')
            .ok_or_else(|| catalog_err(no, "expected `key: value`"))?;
        let key = key.trim();
        let value = value.trim().to_string();
        match key {
            "matrix" => {
                if !value.is_empty() {
                    return Err(catalog_err(no, "matrix rows start on the next line"));
                }
                rows = Some(Vec::new());
            }
            "erratum" => {
                let (field, expr) = value
                    .split_once('=')
                    .ok_or_else(|| catalog_err(no, "expected `erratum: <field> = <expr>`"))?;
                errata.push((field.trim().to_string(), expr.trim().to_string()));
            }
            "entry" | "kind" | "source" | "params" | "vars" | "generator" | "tau" | "tau-sk-triv" | "det" | "pf"
            | "suspension" | "transpose-of" | "duplicate-of" | "basis" | "note" => {
                if fields.insert(key, (no, value)).is_some() {
                    return Err(catalog_err(no, format!("repeated key `{key}`")));
                }
            }
            other => return Err(catalog_err(no, format!("unknown key `{other}`"))),
        }
    }
    let take = |k: &str| fields.get(k).cloned();
    let (_, id) = take("entry").ok_or_else(|| catalog_err(first, "missing `entry:`"))?;
    let (kline, kind) = take("kind").ok_or_else(|| catalog_err(first, format!("entry `{id}`: missing `kind:`")))?;
    let kind = kind.parse::<Kind>().map_err(|e| catalog_err(kline, e.to_string()))?;
    let source = take("source").map(|(_, s)| s).unwrap_or_default();

    let mut params = Vec::new();
    if let Some((no, spec)) = take("params") {
        for item in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, range) = item
                .split_once('=')
                .ok_or_else(|| catalog_err(no, format!("parameter `{item}` is not `name = lo..hi`")))?;
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| catalog_err(no, format!("parameter `{item}` has no `..` range")))?;
            let hi = hi.trim();
            params.push(ParamSpec {
                name: name.trim().to_string(),
                lo: lo.trim().to_string(),
                hi: (!hi.is_empty()).then(|| hi.to_string()),
            });
        }
    }

    let generator = match (take("generator"), take("vars"), rows) {
        (Some((no, g)), None, None) => {
            let (kind, of) = parse_suspension_ref(&g, no)?;
            Generator::Suspension { kind, of }
        }
        (None, Some((no, v)), Some(rows)) if !rows.is_empty() => Generator::Matrix {
            vars: parse_roster_line(&v, no)?,
            rows,
        },
        _ => {
            return Err(catalog_err(
                first,
                format!("entry `{id}`: give either `generator:` or `vars:` with `matrix:` rows"),
            ))
        }
    };

    let fn_class = match (take("det"), take("pf")) {
        (Some(_), Some((no, _))) => return Err(catalog_err(no, "give only one of `det:` and `pf:`")),
        (Some((no, c)), None) | (None, Some((no, c))) => {
            let expect = if kind == Kind::Sk { "pf" } else { "det" };
            if fields.contains_key(expect) {
                Some(c)
            } else {
                return Err(catalog_err(no, format!("a {kind} entry states `{expect}:`")));
            }
        }
        (None, None) => None,
    };

    let suspension_of = take("suspension")
        .map(|(no, s)| parse_suspension_ref(&s, no).map(|(k, of)| (of, k)))
        .transpose()?
        .or_else(|| match &generator {
            Generator::Suspension { kind, of } => Some((of.clone(), *kind)),
            Generator::Matrix { .. } => None,
        });

    let duplicate_of = match take("duplicate-of") {
        Some((no, d)) => {
            let mut parts = d.split_whitespace();
            let target = parts.next().ok_or_else(|| catalog_err(no, "missing entry id"))?.to_string();
            let mut map = Vec::new();
            for a in parts.flat_map(|p| p.split(',')).filter(|s| !s.is_empty()) {
                let (n, e) = a
                    .split_once('=')
                    .ok_or_else(|| catalog_err(no, format!("`{a}` is not `name=expr`")))?;
                map.push((n.to_string(), e.to_string()));
            }
            Some((target, map))
        }
        None => None,
    };

    let basis = match take("basis") {
        Some((no, b)) => {
            let mut out = Vec::new();
            for item in b.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let bad = || catalog_err(no, format!("basis element `{item}` is not `monomial@i,j`"));
                let (mono, pos) = item.split_once('@').ok_or_else(bad)?;
                let (i, j) = pos.split_once(',').ok_or_else(bad)?;
                let i: usize = i.trim().parse().map_err(|_| bad())?;
                let j: usize = j.trim().parse().map_err(|_| bad())?;
                if i == 0 || j == 0 {
                    return Err(bad());
                }
                out.push((mono.trim().to_string(), i, j));
            }
            Some(out)
        }
        None => None,
    };

    Ok(CatalogEntry {
        id,
        kind,
        source,
        params,
        generator,
        tau: take("tau").map(|(_, s)| s),
        tau_sk_triv: take("tau-sk-triv").map(|(_, s)| s),
        fn_class,
        suspension_of,
        transpose_of: take("transpose-of").map(|(_, s)| s),
        duplicate_of,
        basis,
        errata,
        note: take("note").map(|(_, s)| s),
    })
}

/// Evaluates a class expression such as `A(p+q-1)`, `D(2*p)` or `E6`;
/// `A(0)` is a regular point.
pub fn eval_class(expr: &str, params: &Params) -> Result<SingClass> {
    let expr = expr.trim();
    if let Some(open) = expr.find('(') {
        let inner = expr[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Catalog(format!("unbalanced class expression `{expr}`")))?;
        let n = eval_int(inner, params)?;
        let head = expr[..open].trim();
        return match (head, n) {
            ("A", 0) => Ok(SingClass::Regular),
            _ if n < 0 => Err(Error::Catalog(format!("negative class index in `{expr}`"))),
            _ => format!("{head}{n}").parse(),
        };
    }
    expr.parse()
}

/// One comparison in a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub id: String,
    pub params: Vec<(String, i64)>,
    /// Computed values, in computation order.
    pub numbers: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl EntryReport {
    /// The worst verdict over all checks that had something to compare.
    pub fn status(&self) -> Verdict {
        self.checks
            .iter()
            .map(|c| c.verdict)
            .filter(|v| *v != Verdict::NoPrediction)
            .fold(Verdict::Pass, Verdict::combine)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn number(&self, name: &str) -> Option<&str> {
        self.numbers.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "entry: {}", self.id)?;
        writeln!(f, "params: {}", format_params(&self.params, " "))?;
        for (n, v) in &self.numbers {
            writeln!(f, "{n}: {v}")?;
        }
        for c in &self.checks {
            writeln!(f, "check-{}: {} {}", c.name, c.verdict, c.detail)?;
        }
        write!(f, "status: {}", self.status())
    }
}

struct ReportBuilder {
    numbers: Vec<(String, String)>,
    checks: Vec<Check>,
}

impl ReportBuilder {
    fn number(&mut self, name: &str, value: impl ToString) {
        self.numbers.push((name.to_string(), value.to_string()));
    }

    fn check(&mut self, name: &str, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict,
            detail: detail.into(),
        });
    }

    /// Compares a computed number with a stated formula and its erratum.
    fn compare(&mut self, name: &str, computed: usize, stated: Option<&str>, erratum: Option<&str>, params: &Params) {
        let Some(stated) = stated else {
            self.check(name, Verdict::NoPrediction, format!("(computed {computed})"));
            return;
        };
        let eval = |e: &str| eval_int(e, params);
        let stated_value = match eval(stated) {
            Ok(v) => v,
            Err(e) => return self.check(name, Verdict::Undetermined, format!("(bad formula: {e})")),
        };
        if stated_value == computed as i64 {
            return self.check(name, Verdict::Pass, format!("(computed {computed}, stated {stated_value})"));
        }
        match erratum.map(eval) {
            Some(Ok(c)) if c == computed as i64 => self.check(
                name,
                Verdict::Erratum,
                format!("(computed {computed}, stated {stated_value}, corrected {c})"),
            ),
            _ => self.check(name, Verdict::Fail, format!("(computed {computed}, stated {stated_value})")),
        }
    }
}

fn certified_tau(m: &MatrixFamily, max_degree: u32) -> std::result::Result<usize, String> {
    match tau(m, max_degree) {
        Ok(q) => q
            .value()
            .ok_or_else(|| format!("not certified up to degree {max_degree}")),
        Err(e) => Err(e.to_string()),
    }
}

/// `[[0, I], [−I, 0]]`, which carries the trivial suspension of `M` to that
/// of `Mᵀ` by congruence.
fn block_swap(vars: &Roster, k: usize) -> PolyMatrix {
    PolyMatrix::from_fn(vars, 2 * k, |i, j| {
        if i < k && j == i + k {
            Poly::one(vars)
        } else if i >= k && j + k == i {
            -Poly::one(vars)
        } else {
            Poly::zero(vars)
        }
    })
}

/// Recomputes everything stated for the instance.
pub fn verify_entry(inst: &Instance<'_>, max_degree: u32) -> EntryReport {
    let entry = inst.entry;
    let params = inst.param_map();
    let m = &inst.family;
    let mut r = ReportBuilder {
        numbers: Vec::new(),
        checks: Vec::new(),
    };

    match m.find_weights() {
        Some(w) => {
            r.number("weights", &w);
            r.check("weights", Verdict::Pass, "(quasi-homogeneous)");
        }
        None => r.check("weights", Verdict::Fail, "(no weight system)"),
    }

    let tau_value = match tau(m, max_degree) {
        Ok(q) => {
            r.number("tau", q.codim);
            r.number("tau-exactness", q.exactness);
            match q.value() {
                Some(t) => {
                    r.compare("tau", t, entry.tau.as_deref(), entry.erratum("tau"), &params);
                    Some(t)
                }
                None => {
                    r.check("tau", Verdict::Undetermined, format!("(not certified up to degree {max_degree})"));
                    None
                }
            }
        }
        Err(e) => {
            r.check("tau", Verdict::Undetermined, format!("({e})"));
            None
        }
    };

    if let Some(stated) = &entry.fn_class {
        let (name, f) = if m.kind() == Kind::Sk {
            ("pf", m.pfaffian())
        } else {
            ("det", Ok(m.determinant()))
        };
        match (f, eval_class(stated, &params)) {
            (Ok(f), Ok(expected)) => {
                let got = classify_function(&f);
                r.number(&format!("{name}-class"), &got);
                let verdict = match &got {
                    SingClass::Undetermined(_) => Verdict::Undetermined,
                    g if *g == expected => Verdict::Pass,
                    _ => Verdict::Fail,
                };
                r.check(name, verdict, format!("(computed {got}, stated {expected})"));
            }
            (Err(e), _) | (_, Err(e)) => r.check(name, Verdict::Undetermined, format!("({e})")),
        }
    }

    if let Some(stated) = &entry.tau_sk_triv {
        match suspend(m, SuspensionKind::SqToSkTrivial).map_err(|e| e.to_string()).and_then(|s| certified_tau(&s, max_degree)) {
            Ok(t) => {
                r.number("tau-sk-triv", t);
                r.compare("tau-sk-triv", t, Some(stated), entry.erratum("tau-sk-triv"), &params);
            }
            Err(e) => r.check("tau-sk-triv", Verdict::Undetermined, format!("({e})")),
        }
    }

    if let Some((of, kind)) = &entry.suspension_of {
        check_suspension(&mut r, inst, of, *kind, tau_value, max_degree);
    }
    if let Some(of) = &entry.transpose_of {
        check_transpose(&mut r, inst, of);
    }
    if let Some((of, map)) = &entry.duplicate_of {
        check_duplicate(&mut r, inst, of, map, tau_value, max_degree);
    }
    if let Some(basis) = &entry.basis {
        check_basis(&mut r, m, basis, max_degree);
    }

    EntryReport {
        id: entry.id.clone(),
        params: inst.params.clone(),
        numbers: r.numbers,
        checks: r.checks,
    }
}

fn source_params(catalog: &Catalog, of: &str, params: &Params) -> Params {
    let names: Vec<&str> = catalog
        .get(of)
        .map(|e| e.params.iter().map(|p| p.name.as_str()).collect())
        .unwrap_or_default();
    params
        .iter()
        .filter(|(n, _)| names.contains(&n.as_str()))
        .map(|(n, v)| (n.clone(), *v))
        .collect()
}

fn check_suspension(
    r: &mut ReportBuilder,
    inst: &Instance<'_>,
    of: &str,
    kind: SuspensionKind,
    tau_value: Option<usize>,
    max_degree: u32,
) {
    let catalog = inst.catalog;
    let Some(src_entry) = catalog.get(of) else {
        return r.check("suspension", Verdict::Undetermined, format!("(unknown entry {of})"));
    };
    let src = match catalog.instantiate(src_entry, &source_params(catalog, of, &inst.param_map())) {
        Ok(s) => s,
        Err(e) => return r.check("suspension", Verdict::Undetermined, format!("({e})")),
    };
    let report = match tau_relation_report(&src, kind, max_degree) {
        Ok(rep) => rep,
        Err(e) => return r.check("suspension", Verdict::Undetermined, format!("({e})")),
    };
    r.number("suspension-relation", report.relation.formula());
    if let Some(kappa) = report.kappa {
        r.number("kappa", kappa);
    }
    let mut detail = format!(
        "({kind} of {of}: tau {} -> {}",
        report.tau_source, report.tau_suspended
    );
    if let Some(e) = report.expected {
        detail.push_str(&format!(", relation gives {e}"));
    }
    if let Some(c) = report.corrected {
        detail.push_str(&format!(", corrected {c}"));
    }
    detail.push(')');
    let verdict = match tau_value {
        Some(t) if t != report.tau_suspended => {
            detail.push_str(&format!(" entry tau {t} differs from the suspension"));
            Verdict::Fail
        }
        None => Verdict::Undetermined,
        _ => report.verdict,
    };
    r.check("suspension", verdict, detail);
}

fn check_transpose(r: &mut ReportBuilder, inst: &Instance<'_>, of: &str) {
    let catalog = inst.catalog;
    let Some(other_entry) = catalog.get(of) else {
        return r.check("transpose", Verdict::Undetermined, format!("(unknown entry {of})"));
    };
    let other = match catalog.instantiate(other_entry, &source_params(catalog, of, &inst.param_map())) {
        Ok(o) => o,
        Err(e) => return r.check("transpose", Verdict::Undetermined, format!("({e})")),
    };
    let m = &inst.family;
    if *m != other.transpose() {
        return r.check("transpose", Verdict::Fail, format!("(not the transpose of {of})"));
    }
    let (Ok(mine), Ok(theirs)) = (
        suspend(m, SuspensionKind::SqToSkTrivial),
        suspend(&other, SuspensionKind::SqToSkTrivial),
    ) else {
        return r.check("transpose", Verdict::Undetermined, "(suspension failed)");
    };
    let cert = EquivalenceCertificate {
        phi: PolyMap::identity(mine.vars()),
        a: block_swap(mine.vars(), m.size()),
        b: None,
    };
    match check_certificate(&mine, &theirs, &cert) {
        Ok(true) => r.check("transpose", Verdict::Pass, format!("(trivial suspensions congruent to those of {of})")),
        Ok(false) => r.check("transpose", Verdict::Fail, "(block-swap certificate rejected)"),
        Err(e) => r.check("transpose", Verdict::Undetermined, format!("({e})")),
    }
}

fn check_duplicate(
    r: &mut ReportBuilder,
    inst: &Instance<'_>,
    of: &str,
    map: &[(String, String)],
    tau_value: Option<usize>,
    max_degree: u32,
) {
    let catalog = inst.catalog;
    let params = inst.param_map();
    let mut target_params = Params::new();
    for (n, e) in map {
        match eval_int(e, &params) {
            Ok(v) => {
                target_params.insert(n.clone(), v);
            }
            Err(e) => return r.check("duplicate", Verdict::Undetermined, format!("({e})")),
        }
    }
    let Some(target_entry) = catalog.get(of) else {
        return r.check("duplicate", Verdict::Undetermined, format!("(unknown entry {of})"));
    };
    let label = format!("{of}[{}]", {
        let mut v: Vec<(String, i64)> = target_params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        v.sort();
        format_params(&v, ",")
    });
    let other = match catalog.instantiate(target_entry, &target_params) {
        Ok(o) => o,
        Err(e) => return r.check("duplicate", Verdict::Undetermined, format!("({e})")),
    };
    match (tau_value, certified_tau(&other, max_degree)) {
        (Some(a), Ok(b)) if a == b => r.check("duplicate", Verdict::Pass, format!("(same tau {a} as {label})")),
        (Some(a), Ok(b)) => r.check("duplicate", Verdict::Fail, format!("(tau {a} but {label} has {b})")),
        (_, Err(e)) => r.check("duplicate", Verdict::Undetermined, format!("({e})")),
        (None, _) => r.check("duplicate", Verdict::Undetermined, "(tau not certified)"),
    }
}

fn check_basis(r: &mut ReportBuilder, m: &MatrixFamily, basis: &[(String, usize, usize)], max_degree: u32) {
    let vars = m.vars();
    let mut stated = Vec::new();
    for (mono, i, j) in basis {
        let p = match parse_poly(mono, vars) {
            Ok(p) => p,
            Err(e) => return r.check("basis", Verdict::Undetermined, format!("({e})")),
        };
        let terms: Vec<(&Monomial, _)> = p.terms().collect();
        if terms.len() != 1 {
            return r.check("basis", Verdict::Undetermined, format!("(`{mono}` is not a monomial)"));
        }
        stated.push((terms[0].0.clone(), i - 1, j - 1));
    }
    let deformation = match miniversal(m, max_degree) {
        Ok(d) => d,
        Err(e) => return r.check("basis", Verdict::Undetermined, format!("({e})")),
    };
    let mut computed: Vec<(Monomial, usize, usize)> = deformation
        .directions
        .iter()
        .map(|d| (d.monomial.clone(), d.i, d.j))
        .collect();
    let describe = |v: &[(Monomial, usize, usize)]| {
        v.iter()
            .map(|(mono, i, j)| {
                let p = Poly::term(vars, mono.clone(), crate::ring::rat(1));
                format!("{p}@{},{}", i + 1, j + 1)
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    computed.sort();
    stated.sort();
    r.number("basis", describe(&computed));
    let verdict = if computed == stated { Verdict::Pass } else { Verdict::Fail };
    r.check("basis", verdict, format!("(stated {})", describe(&stated)));
}

/// Verifies every instance in parallel; reports come back in input order.
pub fn verify_all(instances: &[Instance<'_>], max_degree: u32) -> Vec<EntryReport> {
    instances.par_iter().map(|inst| verify_entry(inst, max_degree)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filter(id: &str, bounds: Bounds) -> Filter {
        Filter {
            id: Some(id.to_string()),
            bounds,
            ..Filter::default()
        }
    }

    #[test]
    fn builtin_parses() {
        let c = Catalog::builtin();
        assert!(c.get("t1-a").is_some());
        assert!(c.get("la").is_some());
    }

    #[test]
    fn correspondence_rows() {
        assert_eq!(
            table4_map(3, 2),
            Correspondence::Suspension {
                kind: SuspensionKind::SqToSkIntermediate,
                source_dim: 2
            }
        );
        assert_eq!(
            table4_map(13, 3),
            Correspondence::Suspension {
                kind: SuspensionKind::SqToSkFull,
                source_dim: 7
            }
        );
        assert_eq!(
            table4_map(2, 3),
            Correspondence::Suspension {
                kind: SuspensionKind::SqToSkTrivial,
                source_dim: 2
            }
        );
        assert_eq!(table4_map(5, 4), Correspondence::NoSimpleClasses);
    }

    #[test]
    fn series_enumeration_is_ordered() {
        let c = Catalog::builtin();
        let list = c.enumerate(&filter("t1-a", Bounds::default().with("p", 2).with("q", 2))).unwrap();
        let labels: Vec<String> = list.iter().map(Instance::label).collect();
        assert_eq!(labels, ["t1-a[p=1,q=1]", "t1-a[p=1,q=2]", "t1-a[p=2,q=2]"]);
        assert_eq!(list[1].family.entry(1, 0).to_string(), "y^2");
    }

    #[test]
    fn skew_sums_enumerate() {
        let c = Catalog::builtin();
        let list = c.enumerate(&filter("j1-k2", Bounds::default().with("a", 2))).unwrap();
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn unbounded_series_enumerate_nothing() {
        let c = Catalog::builtin();
        assert!(c.enumerate(&filter("t1-a", Bounds::empty())).unwrap().is_empty());
        assert!(c.enumerate(&filter("t1-a", Bounds::default().with("p", 0))).unwrap().is_empty());
    }

    #[test]
    fn class_expressions() {
        let params: Params = [("p".to_string(), 2), ("q".to_string(), 3)].into_iter().collect();
        assert_eq!(eval_class("A(p+q-1)", &params).unwrap(), SingClass::A(4));
        assert_eq!(eval_class("D(2*p)", &params).unwrap(), SingClass::D(4));
        assert_eq!(eval_class("A(p-2)", &params).unwrap(), SingClass::Regular);
        assert_eq!(eval_class("E7", &params).unwrap(), SingClass::E7);
    }

    #[test]
    fn verifies_a_sporadic() {
        let c = Catalog::builtin();
        let list = c.enumerate(&filter("t1-c-t", Bounds::default())).unwrap();
        let report = verify_entry(&list[0], 40);
        assert_eq!(report.status(), Verdict::Pass, "{report}");
        assert_eq!(report.check("transpose").unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn rejects_malformed_entries() {
        assert!(Catalog::parse("entry: a\nkind: Sq\n").is_err());
        assert!(Catalog::parse("entry: a\nkind: Sq\nvars: x\nmatrix:\n[x]\ntranspose-of: b\n").is_err());
        assert!(Catalog::parse("entry: a\nkind: Sq\nvars: x\nmatrix:\n[x]\ncolour: red\n").is_err());
    }
}
