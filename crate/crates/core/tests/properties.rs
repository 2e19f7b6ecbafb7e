//! Invariants of the ring, the codimension engines, the matrix actions and
//! the suspensions, checked on random data.

mod common;

use matgerm::determinator::{classify_function, perp, skew_normal_form, ConstMatrix, SingClass};
use matgerm::family::{check_certificate, stable_split, Kind, MatrixFamily, PolyMatrix, RowColOp};
use matgerm::localalg::{ideal_codimension, local_codimension, milnor_number, Codim, ModuleGeneratorSet};
use matgerm::ring::{rat, roster, Monomial, Poly, PolyMap, Rational, Roster};
use matgerm::suspend::{suspend, SuspensionKind};
use matgerm::tangent::tau;
use proptest::prelude::*;

use common::{module_codim, oracle_milnor, oracle_tau};

const XY: [&str; 2] = ["x", "y"];

fn xy() -> Roster {
    roster(&XY)
}

/// Terms as `(exponents, coefficient)`; `min_deg` 1 keeps the germ at 0.
fn terms(nvars: usize, min_deg: u32, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, nvars), -3i64..=3),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .filter(|(e, _)| (min_deg..=max_deg).contains(&e.iter().sum()))
            .collect()
    })
}

fn build(vars: &Roster, ts: &[(Vec<u32>, i64)]) -> Poly {
    Poly::from_terms(vars, ts.iter().map(|(e, c)| (Monomial::from_exponents(e.clone()), rat(*c))))
}

fn poly_xy(min_deg: u32, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    terms(2, min_deg, max_deg, max_terms).prop_map(|ts| build(&xy(), &ts))
}

fn square(n: usize, max_deg: u32) -> impl Strategy<Value = MatrixFamily> {
    prop::collection::vec(poly_xy(1, max_deg, 3), n * n).prop_map(move |ps| {
        let rows = ps.chunks(n).map(<[Poly]>::to_vec).collect();
        MatrixFamily::from_rows(Kind::Sq, &xy(), rows).unwrap()
    })
}

fn skew(n: usize, max_deg: u32) -> impl Strategy<Value = MatrixFamily> {
    prop::collection::vec(poly_xy(0, max_deg, 3), n * (n - 1) / 2)
        .prop_map(move |ps| MatrixFamily::skew_from_upper(&xy(), n, ps).unwrap())
}

fn symmetric(n: usize, max_deg: u32) -> impl Strategy<Value = MatrixFamily> {
    prop::collection::vec(poly_xy(1, max_deg, 3), n * n).prop_map(move |ps| {
        let m = PolyMatrix::from_fn(&xy(), n, |i, j| ps[n * i.min(j) + i.max(j)].clone());
        MatrixFamily::new(Kind::Sym, m).unwrap()
    })
}

/// Two-sided operations for congruence kinds with constant or polynomial
/// multipliers; scalings use units.
fn ops(n: usize, len: usize) -> impl Strategy<Value = Vec<RowColOp>> {
    let op = (0..3u8, 0..n, 1..n, poly_xy(0, 2, 2), 1i64..=3).prop_map(move |(t, i, d, p, c)| {
        let j = (i + d) % n;
        match t {
            0 => RowColOp::t(i, j, p),
            1 => RowColOp::scale(i, Poly::int(&xy(), c) + p.truncate(2) - Poly::constant(&xy(), p.constant_term())),
            _ => RowColOp::swap(i, j),
        }
    });
    prop::collection::vec(op, 1..=len)
}

fn invertible2() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(-2i64..=2)).prop_filter("invertible", |a| a[0][0] * a[1][1] != a[0][1] * a[1][0])
}

fn linear_map(vars: &Roster, a: [[i64; 2]; 2]) -> PolyMap {
    let images = a
        .iter()
        .map(|r| Poly::int(vars, r[0]) * Poly::var(vars, 0) + Poly::int(vars, r[1]) * Poly::var(vars, 1))
        .collect();
    PolyMap::new(vars, images).unwrap()
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn multiplication_is_commutative_and_associative(f in poly_xy(0, 3, 4), g in poly_xy(0, 3, 4), h in poly_xy(0, 2, 3)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(f in poly_xy(0, 3, 4), g in poly_xy(0, 3, 4), a in poly_xy(1, 2, 3), b in poly_xy(1, 2, 3)) {
        let phi = PolyMap::new(&xy(), vec![a, b]).unwrap();
        let s = |p: &Poly| p.substitute(&phi).unwrap();
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
        prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
    }

    #[test]
    fn weighted_pieces_reassemble(f in poly_xy(0, 5, 6), w1 in 1i64..=4, w2 in 1i64..=4) {
        let w = [rat(w1), rat(w2)];
        let pieces = f.weighted_decompose(&w);
        let sum = pieces.iter().fold(Poly::zero(&xy()), |acc, (_, p)| acc + p);
        prop_assert_eq!(sum, f);
        for (d, p) in &pieces {
            prop_assert_eq!(p.weighted_homogeneous_degree(&w), Some(Some(d.clone())));
        }
    }

    #[test]
    fn order_is_additive(f in poly_xy(0, 4, 4), g in poly_xy(0, 4, 4)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!((&f * &g).order(), Some(f.order().unwrap() + g.order().unwrap()));
    }

    #[test]
    fn codimension_ignores_the_choice_of_generators(a in 2u32..=5, b in 2u32..=5, g in poly_xy(1, 4, 4), h in poly_xy(0, 2, 3), perm in 0usize..6) {
        let vars = xy();
        let gens = vec![
            Poly::var(&vars, 0).pow(a) + g.truncate(4) * Poly::var(&vars, 1),
            Poly::var(&vars, 1).pow(b),
            g.clone(),
        ];
        let base = ideal_codimension(&gens, 20).unwrap();
        let mut moved = gens.clone();
        moved.rotate_left(perm % 3);
        if perm >= 3 {
            moved.swap(0, 1);
        }
        let combined = &moved[2] + &(&h * &moved[0]);
        moved[2] = combined;
        let other = ideal_codimension(&moved, 20).unwrap();
        prop_assert_eq!(base.value(), other.value());
        let vecs: Vec<Vec<Poly>> = gens.iter().map(|p| vec![p.clone()]).collect();
        prop_assert_eq!(base.value(), module_codim(&vecs, 2, 12));
    }

    #[test]
    fn milnor_number_is_invariant_under_linear_changes(a in 2u32..=5, b in 2u32..=5, g in poly_xy(3, 5, 3), m in invertible2()) {
        let vars = xy();
        let f = Poly::var(&vars, 0).pow(a) + Poly::var(&vars, 1).pow(b) + g.truncate(2 + a.min(b));
        let before = milnor_number(&f);
        let after = milnor_number(&f.substitute(&linear_map(&vars, m)).unwrap());
        prop_assert_eq!(before, after);
        if let Codim::Finite(mu) = before {
            prop_assert_eq!(Some(mu), oracle_milnor(&f, 14));
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant(m in (1usize..=3).prop_flat_map(|h| skew(2 * h, 2))) {
        let pf = m.pfaffian().unwrap();
        prop_assert_eq!(&pf * &pf, m.determinant());
    }

    #[test]
    fn trivial_suspension_pfaffian_is_signed_determinant(m in (1usize..=3).prop_flat_map(|n| square(n, 2))) {
        let k = m.size();
        let pf = suspend(&m, SuspensionKind::SqToSkTrivial).unwrap().pfaffian().unwrap();
        let det = m.determinant();
        prop_assert_eq!(pf, if (k * (k - 1) / 2) % 2 == 0 { det } else { -det });
    }

    #[test]
    fn symmetric_suspensions_keep_the_determinant(m in (1usize..=3).prop_flat_map(|n| symmetric(n, 2))) {
        let det = m.determinant();
        prop_assert_eq!(suspend(&m, SuspensionKind::SymToSqTrivial).unwrap().determinant(), det.clone());
        let full = suspend(&m, SuspensionKind::SymToSqFull).unwrap();
        let zeroed: Vec<(usize, Rational)> = (2..full.nvars()).map(|v| (v, rat(0))).collect();
        let restricted = full.determinant().evaluate_partial(&zeroed);
        prop_assert_eq!(restricted, det.embed(full.vars()).unwrap());
    }

    #[test]
    fn suspensions_double_the_corank(m in (1usize..=3).prop_flat_map(|n| square(n, 2))) {
        let c = m.matrix_corank();
        prop_assert_eq!(suspend(&m, SuspensionKind::SqToSkTrivial).unwrap().matrix_corank(), 2 * c);
        prop_assert_eq!(suspend(&m, SuspensionKind::SqToSkFull).unwrap().matrix_corank(), 2 * c);
        if m.size() == 2 {
            prop_assert_eq!(suspend(&m, SuspensionKind::SqToSkIntermediate).unwrap().matrix_corank(), 2 * c);
        }
    }

    #[test]
    fn operations_keep_the_kind_and_the_certificate(m in skew(4, 2), o in ops(4, 5)) {
        let moved = m.apply_ops(&o).unwrap();
        prop_assert_eq!(moved.kind(), Kind::Sk);
        let cert = matgerm::EquivalenceCertificate::from_ops(Kind::Sk, m.vars(), 4, &o);
        prop_assert!(check_certificate(&moved, &m, &cert).unwrap());
    }

    #[test]
    fn entry_ideal_codimension_is_an_invariant(m in symmetric(2, 3), o in ops(2, 4)) {
        let moved = m.apply_ops(&o).unwrap();
        prop_assert_eq!(moved.kind(), Kind::Sym);
        let before = ideal_codimension(&m.components(), 12).unwrap();
        let after = ideal_codimension(&moved.components(), 12).unwrap();
        prop_assert_eq!(before.value(), after.value());
    }

    #[test]
    fn stable_split_keeps_the_corank(m in (2usize..=4).prop_flat_map(|n| square(n, 2)), c in prop::collection::vec(-2i64..=2, 16)) {
        let n = m.size();
        let vars = m.vars().clone();
        let shifted = PolyMatrix::from_fn(&vars, n, |i, j| m.entry(i, j) + &Poly::int(&vars, c[n * i + j]));
        let m = MatrixFamily::new(Kind::Sq, shifted).unwrap();
        let split = stable_split(&m);
        prop_assert_eq!(split.core.size(), m.matrix_corank());
        prop_assert!(split.core.is_constant_zero_at_origin());
        prop_assert!(check_certificate(&split.split_form(), &m, &split.certificate).unwrap());
    }

    #[test]
    fn families_survive_printing_and_parsing(m in (1usize..=3).prop_flat_map(|n| square(n, 3))) {
        prop_assert_eq!(MatrixFamily::parse(&m.to_file_string()).unwrap(), m);
    }

    #[test]
    fn perp_is_complementary_and_involutive(vs in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..=4)) {
        let span: Vec<ConstMatrix> = vs.iter().map(|v| skew_const(4, v)).collect();
        let p = perp(&span, 4).unwrap();
        let rank_span = matgerm::linalg::rank(&span.iter().map(upper).collect::<Vec<_>>());
        prop_assert_eq!(p.len() + rank_span, 6);
        let back = perp(&p, 4).unwrap();
        let mut rows: Vec<Vec<Rational>> = back.iter().map(upper).collect();
        prop_assert_eq!(matgerm::linalg::rank(&rows), rank_span);
        rows.extend(span.iter().map(upper));
        prop_assert_eq!(matgerm::linalg::rank(&rows), rank_span);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn graded_and_local_engines_agree_with_the_oracle(m in square(2, 2)) {
        let q = tau(&m, 20).unwrap();
        let oracle = oracle_tau(&m, 10);
        prop_assume!(oracle.is_some());
        prop_assert_eq!(q.value(), oracle);
        let local = local_codimension(&matgerm::tangent::tangent_generators(&m), 20);
        if let (Some(v), Some(l)) = (q.value(), local.value()) {
            prop_assert_eq!(v, l);
        }
    }

    #[test]
    fn tau_is_invariant_under_square_operations(p in 1u32..=3, q in 1u32..=3, o in ops(2, 3)) {
        let m = MatrixFamily::from_strs(Kind::Sq, &XY, &[&["x", &format!("y^{p}")], &[&format!("y^{q}"), "x"]]).unwrap();
        let base = tau(&m, 20).unwrap().value();
        prop_assert!(base.is_some());
        let o: Vec<RowColOp> = o.into_iter().map(|op| op.on(matgerm::Side::Rows)).collect();
        let moved = m.apply_ops(&o).unwrap();
        prop_assert_eq!(tau(&moved, 20).unwrap().value(), base);
    }

    #[test]
    fn weights_survive_suspension(p in 1u32..=4, q in 1u32..=4) {
        let m = MatrixFamily::from_strs(Kind::Sq, &XY, &[&["x", &format!("y^{p}")], &[&format!("y^{q}"), "x"]]).unwrap();
        prop_assert!(m.find_weights().is_some());
        for kind in [SuspensionKind::SqToSkTrivial, SuspensionKind::SqToSkIntermediate, SuspensionKind::SqToSkFull] {
            let s = suspend(&m, kind).unwrap();
            let w = s.find_weights();
            prop_assert!(w.is_some(), "{} lost its weights", kind);
            prop_assert!(s.is_quasi_homogeneous(&w.unwrap()));
        }
    }

    #[test]
    fn adding_squares_keeps_the_class(a in 1u32..=6, g in poly_xy(3, 6, 3)) {
        let vars = xy();
        let f = Poly::var(&vars, 0).pow(a + 1) + Poly::var(&vars, 1).pow(2) + g;
        let class = classify_function(&f);
        let wider = roster(&["x", "y", "z"]);
        let z = Poly::var(&wider, 2);
        let stabilized = f.embed(&wider).unwrap() + &z * &z;
        prop_assert_eq!(classify_function(&stabilized), class.clone());
        // e.g. x^6 + y^2 + 2x^3y = (y + x^3)^2 is not isolated
        prop_assert_eq!(matches!(class, SingClass::Undetermined(_)), milnor_number(&f) == Codim::Infinite);
    }

    #[test]
    fn one_variable_skew_forms_follow_the_corrected_count(mut orders in prop::collection::vec(1u32..=3, 1..=3)) {
        orders.sort_unstable();
        let k = orders.len();
        let m = skew_normal_form(&roster(&["x"]), &orders);
        let expected: u32 = orders.iter().enumerate().map(|(i, a)| (4 * (k - i - 1) as u32 + 1) * a).sum::<u32>() - 1;
        prop_assert_eq!(tau(&m, 40).unwrap().value(), Some(expected as usize));
    }
}

fn skew_const(n: usize, v: &[i64]) -> ConstMatrix {
    let mut m = vec![vec![rat(0); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[i][j] = rat(v[k]);
            m[j][i] = rat(-v[k]);
            k += 1;
        }
    }
    m
}

fn upper(m: &ConstMatrix) -> Vec<Rational> {
    let n = m.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[i][j].clone()).collect()
}

#[test]
fn redundant_generators_do_not_change_tau() {
    // adding a tangent vector that is already a combination of the others
    let m = MatrixFamily::from_strs(Kind::Sq, &XY, &[&["x", "y^2"], &["y^3", "x"]]).unwrap();
    let t = matgerm::tangent::tangent_generators(&m);
    let mut gens = t.generators().to_vec();
    let extra: Vec<Poly> = gens[0].iter().zip(&gens[1]).map(|(a, b)| a + &(b * &Poly::var(m.vars(), 1))).collect();
    gens.push(extra);
    let bigger = ModuleGeneratorSet::new(m.vars(), t.rank(), gens).unwrap();
    assert_eq!(local_codimension(&t, 20).value(), local_codimension(&bigger, 20).value());
    assert_eq!(tau(&m, 20).unwrap().value(), Some(6));
}
