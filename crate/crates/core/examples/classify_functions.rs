//! Simple-singularity classes of functions, and of the determinant or
//! Pfaffian of a family.

use matgerm::determinator::{classify_function, classify_function_with, hessian_corank, milnor_number_reduced};
use matgerm::family::{Kind, MatrixFamily};
use matgerm::parse::parse_poly;
use matgerm::ring::roster;

fn main() -> matgerm::Result<()> {
    let xyz = roster(&["x", "y", "z"]);
    for src in [
        "x^2 + y^2 + z^2",
        "x^5 + y^2 + z^2",
        "x^2*y - y^4 + z^2",
        "x^3 + y^4 + z^2",
        "x^3 + x*y^3 + z^2",
        "x^3 + y^5 + z^2",
        "x^3 + y^3 + z^3",
        "x^4 + y^4 + z^2",
        "x^3 + x*y^4 + z^2",
        "(x + y)^2 + (x - y + z)^3 + z^4",
    ] {
        let f = parse_poly(src, &xyz)?;
        println!("{src:<34} mu = {:<3} corank {}  {}", milnor_number_reduced(&f, 40).to_string(), hessian_corank(&f), classify_function(&f));
    }

    // not isolated: no Milnor number is certified below the cutoff
    let src = "(x + y)^2 + (x - y + z)^3";
    println!("{src:<34} {}", classify_function_with(&parse_poly(src, &xyz)?, 12));

    let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y^2"], &["y^3", "x"]])?;
    println!("\ndet of (x, y^2; y^3, x) = {}: {}", m.determinant(), classify_function(&m.determinant()));
    Ok(())
}
