//! Weight systems: positive variable weights with row and column degrees
//! such that every entry is weighted homogeneous.

use matgerm::family::{Kind, MatrixFamily};
use matgerm::weights::function_weights;

fn main() -> matgerm::Result<()> {
    let families = [
        (Kind::Sq, vec![vec!["x", "y^3"], vec!["y^2", "x"]]),
        (Kind::Sym, vec![vec!["x", "y^2"], vec!["y^2", "x^3"]]),
        (Kind::Sq, vec![vec!["x + y^2", "y"], vec!["y", "x"]]),
    ];
    for (kind, rows) in families {
        let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        let m = MatrixFamily::from_strs(kind, &["x", "y"], &rows)?;
        match m.find_weights() {
            Some(w) => println!("{m}\n  weights: {w}\n"),
            None => println!("{m}\n  not quasi-homogeneous\n"),
        }
    }

    let f = matgerm::parse::parse_poly("x^3 + x*y^3", &matgerm::ring::roster(&["x", "y"]))?;
    if let Some((w, d)) = function_weights(&f) {
        println!("{f}: {w}, degree {d}");
    }
    Ok(())
}
