//! Tjurina number of a 2×2 family and its miniversal deformation.
//!
//! ```text
//! cargo run --example tjurina_and_miniversal
//! ```

use matgerm::family::{Kind, MatrixFamily};
use matgerm::localalg::DEFAULT_MAX_DEGREE;
use matgerm::tangent::{miniversal, tau};

fn main() -> matgerm::Result<()> {
    let y = |e: u32| if e == 1 { "y".to_string() } else { format!("y^{e}") };
    for (p, q) in [(1, 1), (1, 3), (2, 2), (2, 4)] {
        let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", &y(p)], &[&y(q), "x"]])?;
        let quotient = tau(&m, DEFAULT_MAX_DEGREE)?;
        println!("(x, {}; {}, x): tau = {} ({})", y(p), y(q), quotient.codim, quotient.exactness);
    }

    let m = MatrixFamily::from_strs(Kind::Sq, &["x", "y"], &[&["x", "y^2"], &["y^2", "x"]])?;
    let d = miniversal(&m, DEFAULT_MAX_DEGREE)?;
    println!("\nminiversal deformation of\n{m}");
    println!("  {d}");
    println!("  parameters: {}", d.parameter_names().join(" "));
    Ok(())
}
