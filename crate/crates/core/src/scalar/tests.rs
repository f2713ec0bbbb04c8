use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;

fn poly_ctx() -> Arc<ScalarContext> {
    ScalarContext::polynomial(&["x", "y"]).unwrap()
}

fn field_ctx() -> Arc<ScalarContext> {
    ScalarContext::field(&["x", "y"]).unwrap()
}

fn elliptic() -> Arc<ScalarContext> {
    ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2 - x^3 - 1")
        .build()
        .unwrap()
}

fn p(ctx: &Arc<ScalarContext>, s: &str) -> ScalarValue {
    parse_scalar(s, ctx).unwrap()
}

#[test]
fn addition_examples() {
    let c = poly_ctx();
    assert_eq!(&p(&c, "x + y") + &p(&c, "x - y"), p(&c, "2*x"));
    assert_eq!(&p(&c, "1/2") + &p(&c, "1/3"), p(&c, "5/6"));
    let e = elliptic();
    assert_eq!(&p(&e, "y") + &p(&e, "y"), p(&e, "2*y"));
}

#[test]
fn multiplication_examples() {
    let c = poly_ctx();
    assert_eq!(&p(&c, "x + y") * &p(&c, "x - y"), p(&c, "x^2 - y^2"));
    assert!((&p(&c, "0") * &p(&c, "x^5 + 3")).is_zero());
    let e = elliptic();
    let yy = &p(&e, "y") * &p(&e, "y");
    assert_eq!(yy, p(&e, "x^3 + 1"));
    assert_eq!(yy.level(), "polynomial");
}

#[test]
fn division_examples() {
    let c = poly_ctx();
    assert_eq!(scalar_div(&p(&c, "x^2 - 1"), &p(&c, "x - 1")).unwrap(), p(&c, "x + 1"));
    assert!(matches!(
        scalar_div(&p(&c, "x"), &p(&c, "x + 1")),
        Err(Error::NotDivisible { .. })
    ));
    assert_eq!(scalar_div(&p(&c, "x"), &p(&c, "0")), Err(Error::DivisionByZero));

    let e = elliptic();
    let inv = scalar_div(&p(&e, "1"), &p(&e, "y")).unwrap();
    // multiply back and reduce
    assert!((&inv * &p(&e, "y")).is_one());
    assert_eq!(inv, p(&e, "y / (x^3 + 1)"));
}

#[test]
fn gcd_examples() {
    let c = field_ctx();
    let poly = |s: &str| match p(&c, s).repr().clone() {
        Repr::Poly(q) => q,
        other => panic!("not a polynomial: {other:?}"),
    };
    assert_eq!(poly_gcd(&poly("x^2 - 1"), &poly("x - 1")), poly("x - 1"));
    assert!(poly_gcd(&poly("x"), &poly("y")).is_one());
    let g = poly_gcd(&poly("x^2*y + x*y^2"), &poly("x*y"));
    assert_eq!(g, poly("x*y"));
    assert!(poly("x^2*y + x*y^2").exact_div(&g).is_some());
    assert!(poly("x*y").exact_div(&g).is_some());
}

#[test]
fn partial_examples() {
    let c = poly_ctx();
    assert_eq!(scalar_partial(&p(&c, "x^3 + 1"), "x").unwrap(), p(&c, "3*x^2"));

    let e = elliptic();
    let dy = scalar_partial(&p(&e, "y"), "x").unwrap();
    assert_eq!(dy, p(&e, "3*x^2 / (2*y)"));
    assert_eq!(scalar_partial(&p(&e, "y"), "y"), Err(Error::UnknownVariable("y".into())));

    let m = ScalarContext::builder(AlgebraKind::Polynomial)
        .constants(&["m"])
        .transcendentals(&["x"])
        .build()
        .unwrap();
    assert_eq!(scalar_partial(&p(&m, "m*x"), "x").unwrap(), p(&m, "m"));
    assert_eq!(scalar_partial(&p(&m, "m*x"), "m"), Err(Error::UnknownVariable("m".into())));
}

#[test]
fn substitute_examples() {
    let src = poly_ctx();
    let line = ScalarContext::polynomial(&["t"]).unwrap();
    let mut b = BTreeMap::new();
    b.insert("x".to_string(), p(&line, "t^2"));
    b.insert("y".to_string(), p(&line, "t^3"));
    assert_eq!(substitute(&p(&src, "x^2 + y"), &b, &line).unwrap(), p(&line, "t^4 + t^3"));

    let fsrc = ScalarContext::field(&["x"]).unwrap();
    let fline = ScalarContext::field(&["t"]).unwrap();
    let mut b = BTreeMap::new();
    b.insert("x".to_string(), p(&fline, "t^2"));
    assert_eq!(substitute(&p(&fsrc, "1/x"), &b, &fline).unwrap(), p(&fline, "1/t^2"));
    b.insert("x".to_string(), p(&fline, "0"));
    assert_eq!(substitute(&p(&fsrc, "1/x"), &b, &fline), Err(Error::TargetDivisionByZero));

    let empty = BTreeMap::new();
    assert!(matches!(
        substitute(&p(&fsrc, "x"), &empty, &fline),
        Err(Error::IncompleteBindings(_))
    ));
}

#[test]
fn parse_examples() {
    let c = poly_ctx();
    assert_eq!(p(&c, "1 + x^2"), p(&c, "x^2 + 1"));
    assert!(matches!(parse_scalar("x +", &c), Err(Error::SyntaxError { position: 3, .. })));
    assert!(matches!(parse_scalar("x + z", &c), Err(Error::UnknownIdentifier(_))));
    assert!(matches!(parse_scalar("x $ 1", &c), Err(Error::SyntaxError { position: 2, .. })));
    assert!(matches!(parse_scalar("(x", &c), Err(Error::SyntaxError { .. })));
    assert_eq!(parse_scalar("x^-1", &c), Err(Error::NegativeExponent));
    // unary minus applies to the whole power
    assert_eq!(p(&c, "-x^2"), p(&c, "-(x^2)"));
    assert_eq!(p(&c, "2^-1"), p(&c, "1/2"));
    let f = field_ctx();
    assert_eq!(p(&f, "x^-2"), p(&f, "1/x^2"));
}

#[test]
fn render_examples() {
    let c = poly_ctx();
    assert_eq!(p(&c, "(x - y)*(x + y)").to_string(), "x^2 - y^2");
    assert_eq!(p(&c, "1/2 + 1/3").to_string(), "5/6");
    assert_eq!(p(&c, "-x*y + 2*x - 3/4").to_string(), "-x * y + 2 * x - 3/4");
    assert_eq!(p(&c, "0").to_string(), "0");

    let f = field_ctx();
    let s = p(&f, "3*x^2 / (2*y)").to_string();
    assert_eq!(s, "3/2 * x^2 / y");
    assert_eq!(p(&f, &s), p(&f, "3*x^2 / (2*y)"));
    assert_eq!(p(&f, "(x + 1) / (x*y - y)").to_string(), "(x + 1) / (x * y - y)");
    assert_eq!(p(&f, "1 / (x*y)").to_string(), "1 / (x * y)");

    let e = elliptic();
    let d = p(&e, "3*x^2 / (2*y)");
    assert_eq!(d.to_string(), "3/2 * x^2 * y / (x^3 + 1)");
    assert_eq!(p(&e, &d.to_string()), d);
}

#[test]
fn demotes_to_lowest_level() {
    let f = field_ctx();
    assert_eq!(p(&f, "(x^2 - 1)/(x - 1)").level(), "polynomial");
    assert_eq!(p(&f, "x/x").level(), "rational");
    assert_eq!(p(&f, "1/x").level(), "rational_function");
}

#[test]
fn parameters_allowed_in_polynomial_denominators() {
    let c = ScalarContext::builder(AlgebraKind::Polynomial)
        .constants(&["m"])
        .transcendentals(&["x"])
        .build()
        .unwrap();
    let v = p(&c, "x / m");
    assert!(v.in_algebra());
    assert!(matches!(parse_scalar("m / x", &c), Err(Error::NotDivisible { .. })));
}

#[test]
fn context_validation() {
    assert!(matches!(
        ScalarContext::polynomial(&["x", "x"]),
        Err(Error::InvalidContext(_))
    ));
    assert!(matches!(
        ScalarContext::builder(AlgebraKind::Field)
            .transcendentals(&["x"])
            .extension("y", "y^2 - x")
            .extension("z", "z^2 - y")
            .build(),
        Err(Error::UnsupportedTower)
    ));
    let a = poly_ctx();
    let b = ScalarContext::polynomial(&["x", "z"]).unwrap();
    assert_eq!(p(&a, "x").try_add(&p(&b, "x")), Err(Error::ContextMismatch));
}

#[test]
fn degenerate_relation_is_not_separable() {
    let ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2")
        .build()
        .unwrap();
    assert!(!ctx.extension().unwrap().is_separable());
    let e = elliptic();
    assert!(e.extension().unwrap().is_separable());
}

// Random scalars.

fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2), 1..4).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn ratfunc_in(ctx: Arc<ScalarContext>) -> impl Strategy<Value = ScalarValue> {
    (poly_text(), poly_text()).prop_filter_map("zero denominator", move |(n, d)| {
        let d = parse_scalar(&d, &ctx).unwrap();
        if d.is_zero() {
            return None;
        }
        Some(parse_scalar(&n, &ctx).unwrap().checked_div(&d).unwrap())
    })
}

fn x_poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i64..=3, 0u32..=3), 1..3).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a)| format!("({c})*x^{a}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn ext_elem() -> impl Strategy<Value = ScalarValue> {
    (x_poly_text(), x_poly_text(), x_poly_text()).prop_filter_map("zero", |(a, b, d)| {
        let e = elliptic();
        let d = parse_scalar(&d, &e).unwrap();
        if d.is_zero() {
            return None;
        }
        let v = parse_scalar(&format!("{a} + ({b})*y"), &e).unwrap();
        Some(v.checked_div(&d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ratfunc_field_axioms(
        a in ratfunc_in(field_ctx()),
        b in ratfunc_in(field_ctx()),
        c in ratfunc_in(field_ctx()),
    ) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn ext_field_axioms(a in ext_elem(), b in ext_elem(), c in ext_elem()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn leibniz_rule(a in ratfunc_in(field_ctx()), b in ratfunc_in(field_ctx())) {
        let lhs = (&a * &b).partial("x").unwrap();
        let rhs = &(&a.partial("x").unwrap() * &b) + &(&a * &b.partial("x").unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule_in_extension(a in ext_elem(), b in ext_elem()) {
        let lhs = (&a * &b).partial("x").unwrap();
        let rhs = &(&a.partial("x").unwrap() * &b) + &(&a * &b.partial("x").unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(a in ratfunc_in(field_ctx())) {
        let xy = a.partial("x").unwrap().partial("y").unwrap();
        let yx = a.partial("y").unwrap().partial("x").unwrap();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn parse_render_round_trip(a in ratfunc_in(field_ctx()), e in ext_elem()) {
        let c = field_ctx();
        prop_assert_eq!(parse_scalar(&a.to_string(), &c).unwrap(), a);
        prop_assert_eq!(parse_scalar(&e.to_string(), &elliptic()).unwrap(), e);
    }

    #[test]
    fn lifted_arithmetic_matches_reduced(
        a in (x_poly_text(), x_poly_text()),
        b in (x_poly_text(), x_poly_text()),
    ) {
        // multiply as polynomials in ℚ[x,y] then reduce
        let plain = field_ctx();
        let e = elliptic();
        let fa = format!("{} + ({})*y", a.0, a.1);
        let fb = format!("{} + ({})*y", b.0, b.1);
        let lifted = p(&plain, &format!("({fa})*({fb})"));
        let reduced = &p(&e, &fa) * &p(&e, &fb);
        let Repr::Poly(lp) = lifted.repr().clone() else {
            prop_assert!(lifted.level() == "rational");
            return Ok(());
        };
        let lp = MultiPoly::from_terms(e.vars().clone(), lp.terms().to_vec());
        prop_assert_eq!(ScalarValue::from_poly(&e, lp).unwrap(), reduced);
    }
}
