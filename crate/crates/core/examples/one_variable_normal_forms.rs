//! Normal forms of one-variable families: diagonal `x^a` for square
//! matrices, `⊕ x^a J` for skew ones, with the operations that reach them.

use matgerm::determinator::{reduce_one_variable_sk, reduce_one_variable_sq, skew_normal_form};
use matgerm::family::{check_certificate, parse_ops, EquivalenceCertificate, Kind, MatrixFamily};
use matgerm::ring::roster;

fn main() -> matgerm::Result<()> {
    let sq = MatrixFamily::from_strs(Kind::Sq, &["x"], &[&["x^2 + x^3", "x"], &["x^4", "x^2"]])?;
    match reduce_one_variable_sq(&sq, 24) {
        Ok(r) => println!("{sq}\n  orders {:?}, exact {}\n  normal form\n{}\n", r.orders, r.exact, r.normal_form),
        Err(e) => println!("{e}"),
    }

    let sk = MatrixFamily::from_strs(
        Kind::Sk,
        &["x"],
        &[
            &["0", "x", "x^2", "0"],
            &["-x", "0", "x", "x^3"],
            &["-x^2", "-x", "0", "x^2"],
            &["0", "-x^3", "-x^2", "0"],
        ],
    )?;
    let r = reduce_one_variable_sk(&sk, 24).map_err(|e| matgerm::Error::InvalidOperation(e.to_string()))?;
    println!("{sk}\n  orders {:?}, exact {}", r.orders, r.exact);
    for op in &r.ops {
        println!("  {op}");
    }
    // the scaling above is the series 1/(1 - x^2) cut at the precision, so
    // the replay only matches modulo x^25
    println!("  normal form\n{}", r.normal_form);

    // a constant congruence of x J ⊕ x^3 J is undone exactly
    let x = roster(&["x"]);
    let scrambled = skew_normal_form(&x, &[3, 1]).apply_ops(&parse_ops("T(1,3,1); T(4,2,-2); Swap(2,3); T(1,4,1)", &x)?)?;
    let r = reduce_one_variable_sk(&scrambled, 24).map_err(|e| matgerm::Error::InvalidOperation(e.to_string()))?;
    println!("\n{scrambled}\n  orders {:?}, exact {}", r.orders, r.exact);
    let cert = EquivalenceCertificate::from_ops(Kind::Sk, scrambled.vars(), 4, &r.ops);
    println!("  certificate checks: {}", check_certificate(&r.normal_form, &scrambled, &cert)?);
    Ok(())
}
