//! Suspending a square family to a skew one and comparing Tjurina numbers
//! with the stated relations.

use matgerm::family::{Kind, MatrixFamily};
use matgerm::localalg::DEFAULT_MAX_DEGREE;
use matgerm::suspend::{expected_pfaffian, suspend, tau_relation_report, SuspensionKind};

fn main() -> matgerm::Result<()> {
    let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y"], &["y^2", "x"]])?;
    for kind in [SuspensionKind::SqToSkTrivial, SuspensionKind::SqToSkIntermediate, SuspensionKind::SqToSkFull] {
        let s = suspend(&m, kind)?;
        println!("--- {kind}\n{}", s.to_file_string());
        println!("pf: {}  (expected {})", s.pfaffian()?, expected_pfaffian(&m, kind)?);
        println!("{}\n", tau_relation_report(&m, kind, DEFAULT_MAX_DEGREE)?);
    }

    // one-parameter sources: the stated 2τ + 1 is off, the report says by how much
    let one = MatrixFamily::from_strs(Kind::Sq, &["x"], &[&["x^3"]])?;
    println!("{}", tau_relation_report(&one, SuspensionKind::SqToSkTrivial, DEFAULT_MAX_DEGREE)?);
    Ok(())
}
