//! Splitting off the invertible part of `M(0)` and checking equivalences
//! through certificates.

use matgerm::family::{check_certificate, parse_ops, stable_split, EquivalenceCertificate, Kind, MatrixFamily};

fn main() -> matgerm::Result<()> {
    let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["1", "x", "y"], &["y", "x", "y^2"], &["x", "y^2", "x"]])?;
    let split = stable_split(&m);
    println!("{m}\ncorank {}", m.matrix_corank());
    println!("core\n{}\nunit part\n{}", split.core, split.corner);
    println!("certificate checks: {}", check_certificate(&split.split_form(), &m, &split.certificate)?);

    let pair = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y"], &["y^2", "x"]])?;
    let ops = parse_ops("T(1,2,x); rows:Scale(2,1+y); cols:Swap(1,2)", pair.vars())?;
    let moved = pair.apply_ops(&ops)?;
    let cert = EquivalenceCertificate::from_ops(Kind::Sq, pair.vars(), 2, &ops);
    println!("\n{pair}\n  becomes\n{moved}\n  certified: {}", check_certificate(&moved, &pair, &cert)?);
    Ok(())
}
