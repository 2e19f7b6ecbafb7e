//! Suspensions: square families into skew ones (trivial, full and
//! intermediate) and symmetric families into square ones, together with the
//! Tjurina-number and Pfaffian identities that tie a suspension to its
//! source.

use std::fmt;
use std::str::FromStr;

use crate::catalog::{table4_map, Correspondence};
use crate::error::{Error, Result};
use crate::family::{Kind, MatrixFamily, PolyMatrix};
use crate::localalg::ideal_codimension;
use crate::ring::{roster, Poly, Roster};
use crate::tangent::tau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuspensionKind {
    SqToSkTrivial,
    SqToSkFull,
    SqToSkIntermediate,
    SymToSqTrivial,
    SymToSqFull,
}

impl SuspensionKind {
    pub const ALL: [SuspensionKind; 5] = [
        SuspensionKind::SqToSkTrivial,
        SuspensionKind::SqToSkFull,
        SuspensionKind::SqToSkIntermediate,
        SuspensionKind::SymToSqTrivial,
        SuspensionKind::SymToSqFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuspensionKind::SqToSkTrivial => "trivial",
            SuspensionKind::SqToSkFull => "full",
            SuspensionKind::SqToSkIntermediate => "intermediate",
            SuspensionKind::SymToSqTrivial => "sym-trivial",
            SuspensionKind::SymToSqFull => "sym-full",
        }
    }

    pub fn source_kind(self) -> Kind {
        match self {
            SuspensionKind::SymToSqTrivial | SuspensionKind::SymToSqFull => Kind::Sym,
            _ => Kind::Sq,
        }
    }

    pub fn target_kind(self) -> Kind {
        match self {
            SuspensionKind::SymToSqTrivial | SuspensionKind::SymToSqFull => Kind::Sq,
            _ => Kind::Sk,
        }
    }

    /// Number of variables the suspension adds to a size-`k` source.
    pub fn added_variables(self, k: usize) -> usize {
        match self {
            SuspensionKind::SqToSkTrivial | SuspensionKind::SymToSqTrivial => 0,
            SuspensionKind::SqToSkFull => k * (k - 1),
            SuspensionKind::SqToSkIntermediate => 1,
            SuspensionKind::SymToSqFull => k * (k - 1) / 2,
        }
    }
}

impl fmt::Display for SuspensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuspensionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuspensionKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::InvalidOperation(format!("unknown suspension type `{s}`")))
    }
}

/// `base` itself, or `base` followed by underscores until it is unused.
fn fresh_name(base: String, taken: &[String]) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Names for the upper entries of a generic `k × k` skew block: a bare
/// `letter` when there is a single entry, `letter{i}{j}` otherwise.
fn block_names(letter: char, k: usize, taken: &mut Vec<String>) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let base = if k == 2 {
                letter.to_string()
            } else if k < 10 {
                format!("{letter}{}{}", i + 1, j + 1)
            } else {
                format!("{letter}{}_{}", i + 1, j + 1)
            };
            let name = fresh_name(base, taken);
            taken.push(name.clone());
            out.push(name);
        }
    }
    out
}

/// Fills the strict upper triangle of the `k × k` block at `offset` with the
/// given variables and the lower triangle with their negatives.
fn place_skew_block(m: &mut PolyMatrix, offset: usize, k: usize, first_var: usize) {
    let vars = m.vars().clone();
    let mut v = first_var;
    for i in 0..k {
        for j in i + 1..k {
            let p = Poly::var(&vars, v);
            m.set(offset + j, offset + i, -&p);
            m.set(offset + i, offset + j, p);
            v += 1;
        }
    }
}

fn trivial_block(src: &PolyMatrix, vars: &Roster) -> PolyMatrix {
    let k = src.size();
    let mut m = PolyMatrix::zero(vars, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let p = src.get(i, j).clone();
            m.set(j + k, i, -&p);
            m.set(i, j + k, p);
        }
    }
    m
}

pub fn suspend(src: &MatrixFamily, kind: SuspensionKind) -> Result<MatrixFamily> {
    if src.kind() != kind.source_kind() {
        return Err(Error::KindMismatch(format!(
            "{kind} suspension needs a {} family, got {}",
            kind.source_kind(),
            src.kind()
        )));
    }
    let k = src.size();
    let mut names: Vec<String> = src.vars().to_vec();
    let s = names.len();
    match kind {
        SuspensionKind::SqToSkTrivial => {
            MatrixFamily::new(Kind::Sk, trivial_block(src.matrix(), src.vars()))
        }
        SuspensionKind::SqToSkFull => {
            block_names('v', k, &mut names);
            block_names('w', k, &mut names);
            let vars = roster(&names);
            let mut m = trivial_block(src.embed(&vars)?.matrix(), &vars);
            let half = k * (k - 1) / 2;
            place_skew_block(&mut m, 0, k, s);
            place_skew_block(&mut m, k, k, s + half);
            MatrixFamily::new(Kind::Sk, m)
        }
        SuspensionKind::SqToSkIntermediate => {
            if k != 2 {
                return Err(Error::InvalidFamily(format!(
                    "the intermediate suspension needs a 2×2 source, got {k}×{k}"
                )));
            }
            let z = fresh_name("z".into(), &names);
            names.push(z);
            let vars = roster(&names);
            let mut m = trivial_block(src.embed(&vars)?.matrix(), &vars);
            let z = Poly::var(&vars, s);
            m.set(0, 1, z.clone());
            m.set(1, 0, -&z);
            m.set(2, 3, z.clone());
            m.set(3, 2, -&z);
            MatrixFamily::new(Kind::Sk, m)
        }
        SuspensionKind::SymToSqTrivial => src.with_kind(Kind::Sq),
        SuspensionKind::SymToSqFull => {
            block_names('v', k, &mut names);
            let vars = roster(&names);
            let mut m = src.embed(&vars)?.matrix().clone();
            let mut v = PolyMatrix::zero(&vars, k);
            place_skew_block(&mut v, 0, k, s);
            m = m.add(&v);
            MatrixFamily::new(Kind::Sq, m)
        }
    }
}

/// Outcome of comparing a computed number with a stated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    /// The stated value is wrong, and the computed value matches a corrected
    /// formula recorded next to it.
    Erratum,
    /// Nothing was stated to compare with.
    NoPrediction,
    Undetermined,
    Fail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Erratum => "ERRATUM",
            Verdict::NoPrediction => "NO-PREDICTION",
            Verdict::Undetermined => "UNDETERMINED",
            Verdict::Fail => "FAIL",
        }
    }

    /// Whether the outcome counts as a failure for exit codes.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Undetermined)
    }

    pub fn combine(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The stated relation between `τ` of a suspension and `τ` of its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `τ_Sk = τ_Sq`
    Equal,
    /// `τ_Sk = τ_Sq + κ`
    PlusKappa,
    /// `τ_Sk = τ_Sq + 2κ`
    PlusTwoKappa,
    /// `τ_Sk = 2τ_Sq + 1` for one-parameter families.
    DoublePlusOne,
    None(String),
}

impl Relation {
    pub fn formula(&self) -> &str {
        match self {
            Relation::Equal => "tau_Sk = tau_Sq",
            Relation::PlusKappa => "tau_Sk = tau_Sq + kappa",
            Relation::PlusTwoKappa => "tau_Sk = tau_Sq + 2*kappa",
            Relation::DoublePlusOne => "tau_Sk = 2*tau_Sq + 1",
            Relation::None(why) => why,
        }
    }

    fn needs_kappa(&self) -> bool {
        matches!(self, Relation::PlusKappa | Relation::PlusTwoKappa)
    }
}

/// Relation stated for a suspension of the given kind landing in `s`
/// parameters and `2k × 2k` skew matrices.
pub fn applicable_relation(kind: SuspensionKind, s: usize, k: usize) -> Relation {
    if kind.target_kind() != Kind::Sk {
        return Relation::None("no Tjurina relation is stated for symmetric-to-square suspensions".into());
    }
    if s == 1 && kind != SuspensionKind::SqToSkIntermediate {
        return Relation::DoublePlusOne;
    }
    if k == 1 {
        return Relation::Equal;
    }
    match table4_map(s, k) {
        Correspondence::Suspension { kind: listed, .. } if listed == kind => match kind {
            SuspensionKind::SqToSkFull => Relation::Equal,
            SuspensionKind::SqToSkIntermediate => Relation::PlusKappa,
            _ if k == 2 => Relation::PlusTwoKappa,
            _ => Relation::None("no closed relation for k=3, s=2; the values are tabulated per class".into()),
        },
        Correspondence::Suspension { kind: listed, .. } => {
            Relation::None(format!("no stated relation: the simple classes here come from a {listed} suspension"))
        }
        Correspondence::NoSimpleClasses => Relation::None("no stated relation: no simple classes for these dimensions".into()),
    }
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub kind: SuspensionKind,
    /// Parameters and size of the suspended family.
    pub s: usize,
    pub k: usize,
    pub tau_source: usize,
    pub tau_suspended: usize,
    pub kappa: Option<usize>,
    pub relation: Relation,
    pub expected: Option<usize>,
    /// For one-parameter sources: `2τ_Sq + 1 − ord det`, the value the
    /// one-variable normal forms actually have.
    pub corrected: Option<usize>,
    pub verdict: Verdict,
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suspension: {}", self.kind)?;
        writeln!(f, "s: {}", self.s)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "tau-source: {}", self.tau_source)?;
        writeln!(f, "tau-suspended: {}", self.tau_suspended)?;
        if let Some(kappa) = self.kappa {
            writeln!(f, "kappa: {kappa}")?;
        }
        writeln!(f, "relation: {}", self.relation.formula())?;
        if let Some(e) = self.expected {
            writeln!(f, "expected: {e}")?;
        }
        if let Some(c) = self.corrected {
            writeln!(f, "corrected: {c}")?;
        }
        write!(f, "status: {}", self.verdict)
    }
}

fn certified_tau(m: &MatrixFamily, max_degree: u32, what: &str) -> Result<usize> {
    let q = tau(m, max_degree)?;
    q.value()
        .ok_or_else(|| Error::InfiniteCodimension(format!("{what}: no certified value up to degree {max_degree}")))
}

/// Computes `τ` of `src` and of its suspension and compares them with the
/// relation stated for the resulting `(s, k)`.
pub fn tau_relation_report(src: &MatrixFamily, kind: SuspensionKind, max_degree: u32) -> Result<RelationReport> {
    let sus = suspend(src, kind)?;
    let k = src.size();
    let s = sus.nvars();
    let tau_source = certified_tau(src, max_degree, "source")?;
    let tau_suspended = certified_tau(&sus, max_degree, "suspension")?;
    let relation = applicable_relation(kind, s, k);
    let kappa = if relation.needs_kappa() {
        let q = ideal_codimension(&src.components(), max_degree)?;
        Some(
            q.value()
                .ok_or_else(|| Error::InfiniteCodimension("entry ideal has infinite codimension".into()))?,
        )
    } else {
        None
    };
    let expected = match &relation {
        Relation::Equal => Some(tau_source),
        Relation::PlusKappa => kappa.map(|c| tau_source + c),
        Relation::PlusTwoKappa => kappa.map(|c| tau_source + 2 * c),
        Relation::DoublePlusOne => Some(2 * tau_source + 1),
        Relation::None(_) => None,
    };
    let corrected = match relation {
        Relation::DoublePlusOne => {
            let d = src.determinant();
            d.order().and_then(|o| (2 * tau_source + 1).checked_sub(o as usize))
        }
        _ => None,
    };
    let verdict = match expected {
        None => Verdict::NoPrediction,
        Some(e) if e == tau_suspended => Verdict::Pass,
        Some(_) if corrected == Some(tau_suspended) => Verdict::Erratum,
        Some(_) => Verdict::Fail,
    };
    Ok(RelationReport {
        kind,
        s,
        k,
        tau_source,
        tau_suspended,
        kappa,
        relation,
        expected,
        corrected,
        verdict,
    })
}

/// The polynomial the Pfaffian of a suspension should equal, over the
/// suspension's roster.
pub fn expected_pfaffian(src: &MatrixFamily, kind: SuspensionKind) -> Result<Poly> {
    let sus = suspend(src, kind)?;
    let vars = sus.vars().clone();
    let k = src.size();
    let det = src.embed(&vars)?.determinant();
    match kind {
        SuspensionKind::SqToSkTrivial => Ok(if (k * (k - 1) / 2) % 2 == 0 { det } else { -det }),
        SuspensionKind::SqToSkIntermediate => {
            let z = Poly::var(&vars, src.nvars());
            Ok(&z * &z - det)
        }
        SuspensionKind::SqToSkFull if k == 2 => {
            let v = Poly::var(&vars, src.nvars());
            let w = Poly::var(&vars, src.nvars() + 1);
            Ok(&v * &w - det)
        }
        SuspensionKind::SqToSkFull if k == 1 => Ok(det),
        _ => Err(Error::InvalidOperation(format!(
            "no closed Pfaffian identity for a {kind} suspension of size {k}"
        ))),
    }
}

/// `Pf(suspend(M̌))` against `±det M̌`, `z² − det M̌` or `vw − det M̌`.
pub fn pfaffian_relation_check(src: &MatrixFamily, kind: SuspensionKind) -> bool {
    let Ok(expected) = expected_pfaffian(src, kind) else {
        return false;
    };
    match suspend(src, kind).and_then(|m| m.pfaffian()) {
        Ok(pf) => pf == expected,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> MatrixFamily {
        MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y"], &["y", "x"]]).unwrap()
    }

    #[test]
    fn trivial_places_blocks() {
        let m = suspend(&pair(), SuspensionKind::SqToSkTrivial).unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(m.entry(0, 2).to_string(), "x");
        assert_eq!(m.entry(0, 3).to_string(), "y");
        assert_eq!(m.entry(1, 2).to_string(), "y");
        assert_eq!(m.entry(1, 3).to_string(), "x");
        assert!(m.entry(0, 1).is_zero() && m.entry(2, 3).is_zero());
    }

    #[test]
    fn intermediate_adds_z() {
        let m = suspend(&pair(), SuspensionKind::SqToSkIntermediate).unwrap();
        assert_eq!(m.vars().to_vec(), vec!["x", "y", "z"]);
        assert_eq!(m.entry(0, 1).to_string(), "z");
        assert_eq!(m.entry(2, 3).to_string(), "z");
        let expected = crate::parse::parse_poly("z^2 - x^2 + y^2", m.vars()).unwrap();
        assert_eq!(m.pfaffian().unwrap(), expected);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let m = MatrixFamily::from_strs(Kind::Sq, &["z", "v"], &[&["z", "v"], &["v", "z"]]).unwrap();
        let s = suspend(&m, SuspensionKind::SqToSkIntermediate).unwrap();
        assert_eq!(s.vars()[2], "z_");
        let f = suspend(&m, SuspensionKind::SqToSkFull).unwrap();
        assert_eq!(f.vars().to_vec(), vec!["z", "v", "v_", "w"]);
    }

    #[test]
    fn sym_full_adds_skew_part() {
        let m = MatrixFamily::from_strs(Kind::Sym, &["x", "y"], &[&["x", "0"], &["0", "y"]]).unwrap();
        let s = suspend(&m, SuspensionKind::SymToSqFull).unwrap();
        assert_eq!(s.kind(), Kind::Sq);
        assert_eq!(s.entry(0, 1).to_string(), "v");
        assert_eq!(s.entry(1, 0).to_string(), "-v");
        assert!(suspend(&pair(), SuspensionKind::SymToSqFull).is_err());
    }

    #[test]
    fn relations_for_the_symmetric_pair() {
        let expect = [
            (SuspensionKind::SqToSkTrivial, 4, Some(1)),
            (SuspensionKind::SqToSkIntermediate, 3, Some(1)),
            (SuspensionKind::SqToSkFull, 2, None),
        ];
        for (kind, tau_sk, kappa) in expect {
            let r = tau_relation_report(&pair(), kind, 30).unwrap();
            assert_eq!(r.tau_source, 2);
            assert_eq!(r.tau_suspended, tau_sk, "{kind}");
            assert_eq!(r.kappa, kappa);
            assert_eq!(r.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn pfaffian_identities() {
        for kind in [
            SuspensionKind::SqToSkTrivial,
            SuspensionKind::SqToSkIntermediate,
            SuspensionKind::SqToSkFull,
        ] {
            assert!(pfaffian_relation_check(&pair(), kind), "{kind}");
        }
    }
}
