//! Enumerating the catalog of normal forms and re-deriving every stated
//! number.
//!
//! ```text
//! cargo run --release --example catalog_verify -- t3-
//! ```

use std::collections::BTreeMap;

use matgerm::catalog::{verify_all, Bounds, Catalog, Filter};
use matgerm::localalg::DEFAULT_MAX_DEGREE;

fn main() -> matgerm::Result<()> {
    let prefix = std::env::args().nth(1);
    let catalog = Catalog::builtin();
    let instances = catalog.enumerate(&Filter {
        id: prefix,
        bounds: Bounds::default().with("p", 3).with("q", 3),
        ..Filter::default()
    })?;
    let reports = verify_all(&instances, DEFAULT_MAX_DEGREE);
    let mut summary = BTreeMap::new();
    for r in &reports {
        *summary.entry(r.status()).or_insert(0) += 1;
        if r.status() != matgerm::suspend::Verdict::Pass {
            println!("{r}\n");
        }
    }
    println!("{} instances of {} entries", reports.len(), catalog.entries().len());
    for (verdict, n) in summary {
        println!("  {verdict}: {n}");
    }
    Ok(())
}
