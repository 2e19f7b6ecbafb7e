mod common;

use std::collections::BTreeSet;

use matgerm::catalog::{verify_all, Bounds, Catalog, Filter};
use matgerm::localalg::DEFAULT_MAX_DEGREE;
use matgerm::suspend::Verdict;

#[test]
fn default_bounds_verify_without_failures() {
    let cat = Catalog::builtin();
    let list = cat.enumerate(&Filter::default()).unwrap();
    let reports = verify_all(&list, DEFAULT_MAX_DEGREE);
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| r.status().is_failure())
        .map(|r| r.to_string())
        .collect();
    assert!(failing.is_empty(), "{}", failing.join("\n\n"));
    let errata: BTreeSet<&str> = reports
        .iter()
        .filter(|r| r.status() == Verdict::Erratum)
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(errata, BTreeSet::from(["j1-k1", "j1-k2", "j1-k3", "t3-a"]));
    // every entry contributes under the defaults
    let ids: BTreeSet<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.len(), cat.entries().len());
}

#[test]
fn larger_representatives_have_the_same_tau() {
    let cat = Catalog::builtin();
    let tau_of = |id: &str, bounds: Bounds| -> Vec<(Vec<(String, i64)>, Option<String>)> {
        let list = cat
            .enumerate(&Filter {
                id: Some(id.into()),
                bounds,
                ..Filter::default()
            })
            .unwrap()
            .into_iter()
            .filter(|i| i.entry.id == id)
            .collect::<Vec<_>>();
        verify_all(&list, DEFAULT_MAX_DEGREE)
            .into_iter()
            .map(|r| (r.params.clone(), r.number("tau").map(str::to_string)))
            .collect()
    };
    let mu3 = Bounds::default().with("mu", 3);
    assert_eq!(tau_of("f1-a", mu3.clone()), tau_of("f1-a-k3", mu3));
    assert_eq!(tau_of("s0-k2", Bounds::default()), tau_of("s0-k3", Bounds::default()));
}

#[test]
fn small_entries_agree_with_the_oracle() {
    let cat = Catalog::builtin();
    let list = cat
        .enumerate(&Filter {
            bounds: Bounds::default().with("p", 2).with("q", 2).with("mu", 3).with("a", 2),
            ..Filter::default()
        })
        .unwrap();
    let mut checked = 0;
    for inst in list.iter().filter(|i| i.family.nvars() <= 3) {
        let q = matgerm::tangent::tau(&inst.family, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(q.value(), common::oracle_tau(&inst.family, 16), "{}", inst.label());
        checked += 1;
    }
    assert!(checked > 40, "only {checked} instances checked");
}

#[test]
fn bounds_and_filters_compose() {
    let cat = Catalog::builtin();
    let sk = cat
        .enumerate(&Filter {
            kind: Some(matgerm::Kind::Sk),
            bounds: Bounds::empty(),
            ..Filter::default()
        })
        .unwrap();
    // open parameter ranges contribute nothing without a bound
    assert!(sk.iter().all(|i| i.entry.params.iter().all(|p| p.hi.is_some())));
    let by_source = cat
        .enumerate(&Filter {
            source: Some("sq2".into()),
            id: Some("t1-a".into()),
            bounds: Bounds::default().with_overrides("p=2,q=3").unwrap(),
            ..Filter::default()
        })
        .unwrap();
    let labels: Vec<String> = by_source.iter().map(|i| i.label()).collect();
    assert_eq!(labels, ["t1-a[p=1,q=1]", "t1-a[p=1,q=2]", "t1-a[p=1,q=3]", "t1-a[p=2,q=2]", "t1-a[p=2,q=3]"]);
}

#[test]
fn tau_is_the_milnor_number_of_the_determinant_with_extra_variables() {
    let list = Catalog::builtin()
        .enumerate(&Filter {
            id: Some("t2-".into()),
            bounds: Bounds::default().with("p", 3).with("q", 3),
            ..Filter::default()
        })
        .unwrap();
    assert!(list.len() >= 10);
    for inst in &list {
        let t = matgerm::tangent::tau(&inst.family, DEFAULT_MAX_DEGREE).unwrap().value();
        let mu = matgerm::localalg::milnor_number(&inst.family.determinant()).finite();
        assert_eq!(t, mu, "{}", inst.label());
    }
}

#[test]
fn split_cores_keep_tau() {
    use matgerm::family::{parse_ops, stable_split, MatrixFamily, PolyMatrix};
    use matgerm::ring::Poly;

    let list = Catalog::builtin()
        .enumerate(&Filter {
            id: Some("t1-".into()),
            bounds: Bounds::default().with("p", 2).with("q", 2),
            ..Filter::default()
        })
        .unwrap();
    for inst in &list {
        let m = &inst.family;
        let vars = m.vars().clone();
        let n = m.size();
        // M ⊕ (1), then mix the unit into the germ with constant operations
        let padded = PolyMatrix::from_fn(&vars, n + 1, |i, j| match (i < n, j < n) {
            (true, true) => m.entry(i, j).clone(),
            (false, false) => Poly::one(&vars),
            _ => Poly::zero(&vars),
        });
        let padded = MatrixFamily::new(m.kind(), padded).unwrap();
        let ops = parse_ops(&format!("T(1,{},2); rows:T({},2,-1); cols:T(2,{},x)", n + 1, n + 1, n + 1), &vars).unwrap();
        let mixed = padded.apply_ops(&ops).unwrap();
        let split = stable_split(&mixed);
        assert_eq!(split.core.size(), n);
        let expected = matgerm::tangent::tau(m, DEFAULT_MAX_DEGREE).unwrap().value();
        let got = matgerm::tangent::tau(&split.core, DEFAULT_MAX_DEGREE).unwrap().value();
        assert_eq!(got, expected, "{}", inst.label());
    }
}
