//! Determinants and Pfaffians, and the identity `Pf² = det`.

use matgerm::family::{Kind, MatrixFamily};

fn main() -> matgerm::Result<()> {
    let sq = MatrixFamily::from_strs(Kind::Sq, &["x", "y", "z"], &[&["x", "y^2", "z"], &["y", "x", "0"], &["z", "0", "x + y"]])?;
    println!("det of\n{sq}\n  = {}\n", sq.determinant());

    let sk = MatrixFamily::from_strs(
        Kind::Sk,
        &["x", "y", "z"],
        &[
            &["0", "x", "y", "z"],
            &["-x", "0", "z^2", "y"],
            &["-y", "-z^2", "0", "x"],
            &["-z", "-y", "-x", "0"],
        ],
    )?;
    let pf = sk.pfaffian()?;
    println!("Pf of\n{sk}\n  = {pf}");
    println!("Pf^2 == det: {}", &pf * &pf == sk.determinant());
    Ok(())
}
