//! Trace-form duals of linear parts and the dimensional constraints on
//! simple skew families.

use matgerm::determinator::{perp, simple_dimension_cases};
use matgerm::ring::rat;

fn main() -> matgerm::Result<()> {
    // span of E12 - E21 and E34 - E43 inside 4×4 skew matrices
    let e = |i: usize, j: usize| {
        let mut m = vec![vec![rat(0); 4]; 4];
        m[i][j] = rat(1);
        m[j][i] = rat(-1);
        m
    };
    let span = [e(0, 1), e(2, 3)];
    let orth = perp(&span, 4)?;
    println!("perp has dimension {}", orth.len());
    println!("perp of perp has dimension {}", perp(&orth, 4)?.len());

    println!("\n  s  k  r  inequality  rank-allowed  allowed");
    for (s, k, r) in [(1, 1, 1), (2, 2, 2), (3, 2, 3), (2, 3, 2), (2, 4, 2), (6, 3, 6)] {
        let v = simple_dimension_cases(s, k, r)?;
        println!("{s:>3}{k:>3}{r:>3}  {:<11} {:<13} {}  ({})", v.inequality, v.rank_allowed, v.allowed, v.rule);
    }
    Ok(())
}
