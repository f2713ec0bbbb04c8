use proptest::prelude::*;

use super::*;
use crate::scalar::{parse_scalar, AlgebraKind};

fn plane() -> AlgebraifoldDescriptor {
    build_algebraifold(&ScalarContext::polynomial(&["x", "y"]).unwrap()).unwrap()
}

fn elliptic() -> AlgebraifoldDescriptor {
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2 - x^3 - 1")
        .build()
        .unwrap();
    build_algebraifold(&ctx).unwrap()
}

fn der(a: &AlgebraifoldDescriptor, cs: &[&str]) -> Derivation {
    Derivation::new(cs.iter().map(|c| a.parse(c).unwrap()).collect())
}

#[test]
fn coordinate_descriptors() {
    let a = plane();
    assert_eq!(a.dim(), 2);
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(a.action_table()[i][j].is_one(), i == j);
            assert_eq!(a.action_table()[i][j].is_zero(), i != j);
        }
    }
    let e = elliptic();
    assert_eq!(e.dim(), 1);
    assert!(e.action_table()[0][0].is_one());
    assert!(e.warnings().is_empty());
}

#[test]
fn degenerate_relation_rejected() {
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2")
        .build()
        .unwrap();
    assert!(matches!(build_algebraifold(&ctx), Err(Error::NotSeparable(_))));
}

#[test]
fn reducible_relation_rejected() {
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2 - x^2 - 2*x - 1")
        .build()
        .unwrap();
    match build_algebraifold(&ctx) {
        Err(Error::ReducibleRelation { root, .. }) => {
            assert!(root == "x + 1" || root == "-x - 1", "{root}");
        }
        other => panic!("expected a reducible relation, got {other:?}"),
    }
}

#[test]
fn high_degree_relation_carries_warning() {
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^5 - x")
        .build()
        .unwrap();
    let a = build_algebraifold(&ctx).unwrap();
    assert_eq!(a.warnings().len(), 1);
}

#[test]
fn apply_derivation_examples() {
    let a = plane();
    let dx = Derivation::basis(&a, 0);
    assert_eq!(a.apply_derivation(&dx, &a.parse("x^2*y").unwrap()).unwrap(), a.parse("2*x*y").unwrap());

    let e = elliptic();
    let d = Derivation::basis(&e, 0);
    let y = e.parse("y").unwrap();
    assert_eq!(e.apply_derivation(&d, &y).unwrap(), e.parse("3*x^2/(2*y)").unwrap());

    // ∂/∂y expressed through ∂/∂x
    let dy = der(&e, &["2*y/(3*x^2)"]);
    assert_eq!(e.apply_derivation(&dy, &e.parse("x").unwrap()).unwrap(), e.parse("2*y/(3*x^2)").unwrap());
    assert!(e.apply_derivation(&dy, &y).unwrap().is_one());
}

#[test]
fn differential_examples() {
    let a = plane();
    assert_eq!(a.differential_d(&a.parse("x^2").unwrap()).unwrap(), OneForm::new(vec![a.parse("2*x").unwrap(), a.zero()]));
    assert_eq!(
        a.differential_d(&a.parse("x*y").unwrap()).unwrap(),
        OneForm::new(vec![a.parse("y").unwrap(), a.parse("x").unwrap()])
    );
    let e = elliptic();
    assert_eq!(
        e.differential_d(&e.parse("y").unwrap()).unwrap(),
        OneForm::new(vec![e.parse("3*x^2/(2*y)").unwrap()])
    );
}

#[test]
fn bracket_examples() {
    let a = plane();
    let dx = Derivation::basis(&a, 0);
    let dy = Derivation::basis(&a, 1);
    assert!(a.lie_bracket(&dx, &dy).unwrap().is_zero());

    let xdx = der(&a, &["x", "0"]);
    let br = a.lie_bracket(&xdx, &dx).unwrap();
    assert_eq!(br, dx.scale(&a.parse("-1").unwrap()));
    // oracle: apply both sides to x and x²
    for f in ["x", "x^2"] {
        let f = a.parse(f).unwrap();
        let lhs = a.apply_derivation(&br, &f).unwrap();
        let uv = a.apply_derivation(&xdx, &a.apply_derivation(&dx, &f).unwrap()).unwrap();
        let vu = a.apply_derivation(&dx, &a.apply_derivation(&xdx, &f).unwrap()).unwrap();
        assert_eq!(lhs, &uv - &vu);
    }

    let x = a.parse("x").unwrap();
    let lhs = a.lie_bracket(&dx, &dy.scale(&x)).unwrap();
    let rhs = a
        .lie_bracket(&dx, &dy)
        .unwrap()
        .scale(&x)
        .add(&dy.scale(&a.apply_derivation(&dx, &x).unwrap()));
    assert_eq!(lhs, rhs);
}

#[test]
fn dual_basis_examples() {
    assert!(plane().dual_basis_verify().all_zero());
    let e = elliptic();
    let report = e.dual_basis_verify();
    assert!(report.all_zero());
    // one derivation identity per generator (x, y) plus one one-form identity
    assert_eq!(report.entries.len(), 3);

    let a = plane();
    let mut m: Vec<Vec<ScalarValue>> = a.action_table().to_vec();
    m[0][0] = a.zero();
    let broken = a.with_action_table_unchecked(m.clone()).unwrap();
    let report = broken.dual_basis_verify();
    assert!(!report.all_zero());
    assert!(report.nonzero().any(|r| r.identity == "derivation" && r.basis == 1));
    assert_eq!(plane().with_action_table(m).unwrap_err(), Error::SingularBasisAction);
}

#[test]
fn dimension_examples() {
    for n in 1..=4 {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let ctx = ScalarContext::builder(AlgebraKind::Polynomial).transcendentals(&names).build().unwrap();
        let a = build_algebraifold(&ctx).unwrap();
        assert_eq!(a.dimension(), ScalarValue::from_i64(a.context(), n as i64));
        assert!(a.constants_check(&a.dimension()).unwrap());
    }
    assert!(elliptic().dimension().is_one());
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .constants(&["m", "j"])
        .transcendentals(&["s", "x", "y", "z"])
        .build()
        .unwrap();
    let a = build_algebraifold(&ctx).unwrap();
    assert_eq!(a.dimension().to_string(), "4");
}

#[test]
fn constants_examples() {
    let ctx = ScalarContext::builder(AlgebraKind::Polynomial)
        .constants(&["m", "j"])
        .transcendentals(&["x"])
        .build()
        .unwrap();
    let a = build_algebraifold(&ctx).unwrap();
    assert!(a.constants_check(&a.parse("7/3").unwrap()).unwrap());
    assert!(a.constants_check(&a.parse("m*j").unwrap()).unwrap());
    assert!(!a.constants_check(&a.parse("x").unwrap()).unwrap());
    let other = plane();
    assert_eq!(a.constants_check(&other.parse("x").unwrap()), Err(Error::ContextMismatch));
}

fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..4).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn derivation() -> impl Strategy<Value = (String, String)> {
    (poly_text(), poly_text())
}

fn mk(a: &AlgebraifoldDescriptor, (p, q): &(String, String)) -> Derivation {
    der(a, &[p, q])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn leibniz_and_pairing(v in derivation(), f in poly_text(), g in poly_text()) {
        let a = plane();
        let v = mk(&a, &v);
        let f = parse_scalar(&f, a.context()).unwrap();
        let g = parse_scalar(&g, a.context()).unwrap();
        let lhs = a.apply_derivation(&v, &(&f * &g)).unwrap();
        let rhs = &(&a.apply_derivation(&v, &f).unwrap() * &g) + &(&f * &a.apply_derivation(&v, &g).unwrap());
        prop_assert_eq!(lhs, rhs);

        let dfg = a.differential_d(&(&f * &g)).unwrap();
        let expected = a.differential_d(&f).unwrap().scale(&g).add(&a.differential_d(&g).unwrap().scale(&f));
        prop_assert_eq!(dfg, expected);

        prop_assert_eq!(a.differential_d(&f).unwrap().pair(&a, &v), a.apply_derivation(&v, &f).unwrap());
    }

    #[test]
    fn jacobi_identity(u in derivation(), v in derivation(), w in derivation()) {
        let a = plane();
        let (u, v, w) = (mk(&a, &u), mk(&a, &v), mk(&a, &w));
        let br = |p: &Derivation, q: &Derivation| a.lie_bracket(p, q).unwrap();
        let total = br(&br(&u, &v), &w).add(&br(&br(&v, &w), &u)).add(&br(&br(&w, &u), &v));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn bracket_leibniz(u in derivation(), v in derivation(), f in poly_text()) {
        let a = plane();
        let (u, v) = (mk(&a, &u), mk(&a, &v));
        let f = parse_scalar(&f, a.context()).unwrap();
        let lhs = a.lie_bracket(&u, &v.scale(&f)).unwrap();
        let rhs = a.lie_bracket(&u, &v).unwrap().scale(&f).add(&v.scale(&a.apply_derivation(&u, &f).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
}
