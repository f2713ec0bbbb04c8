use proptest::prelude::*;

use super::*;
use crate::connection::{levi_civita, standard_connection};
use crate::tensor::{metric_inverse, Tensor};

fn plane() -> AlgebraifoldDescriptor {
    build_algebraifold(&ScalarContext::polynomial(&["x", "y"]).unwrap()).unwrap()
}

fn images(target: &AlgebraifoldDescriptor, pairs: &[(&str, &str)]) -> BTreeMap<String, ScalarValue> {
    pairs
        .iter()
        .map(|(g, v)| (g.to_string(), target.parse(v).unwrap()))
        .collect()
}

fn hom(source: &AlgebraifoldDescriptor, target: &AlgebraifoldDescriptor, pairs: &[(&str, &str)]) -> Result<AlgebraifoldHom> {
    build_hom(source, target, images(target, pairs))
}

fn form(a: &AlgebraifoldDescriptor, cs: &[&str]) -> OneForm {
    OneForm::new(cs.iter().map(|c| a.parse(c).unwrap()).collect())
}

fn pulled(line: &FormalLine, cs: &[&str]) -> PulledModuleElem {
    PulledModuleElem::new(cs.iter().map(|c| line.parse(c).unwrap()).collect())
}

fn poly_metric_connection(a: &AlgebraifoldDescriptor) -> ConnectionCoeffs {
    let rows: Vec<Vec<ScalarValue>> = [["1", "x"], ["x", "1 + x^2"]]
        .iter()
        .map(|r| r.iter().map(|e| a.parse(e).unwrap()).collect())
        .collect();
    let m = metric_inverse(a, &Tensor::covariant_matrix(a, &rows).unwrap()).unwrap();
    levi_civita(a, &m).unwrap()
}

#[test]
fn cusp_pullbacks_and_differential() {
    let a = plane();
    let line = FormalLine::polynomial("t").unwrap();
    let phi = hom(&a, line.descriptor(), &[("x", "t^2"), ("y", "t^3")]).unwrap();
    assert_eq!(phi.apply(&a.parse("x*y + 1").unwrap()).unwrap(), line.parse("t^5 + 1").unwrap());
    let lt = line.descriptor();
    assert_eq!(pullback_one_form(&phi, &form(&a, &["1", "0"])).unwrap(), form(lt, &["2*t"]));
    assert_eq!(pullback_one_form(&phi, &form(&a, &["y", "0"])).unwrap(), form(lt, &["2*t^4"]));
    assert_eq!(pullback_one_form(&phi, &form(&a, &["0", "1"])).unwrap(), form(lt, &["3*t^2"]));
    assert_eq!(differential(&phi, &line.del()).unwrap(), pulled(&line, &["2*t", "3*t^2"]));
}

#[test]
fn hom_validation() {
    let a = plane();
    let line = FormalLine::polynomial("t").unwrap();
    let lt = line.descriptor();
    assert_eq!(hom(&a, lt, &[("x", "t")]).unwrap_err(), Error::MissingImage("y".into()));
    assert_eq!(
        hom(&a, lt, &[("x", "t"), ("y", "t"), ("z", "t")]).unwrap_err(),
        Error::UnknownIdentifier("z".into())
    );

    let conic_ctx = ScalarContext::builder(AlgebraKind::Field)
        .transcendentals(&["x"])
        .extension("y", "y^2 - x^2 - 1")
        .build()
        .unwrap();
    let conic = build_algebraifold(&conic_ctx).unwrap();
    let rline = FormalLine::rational("t").unwrap();
    let bad = hom(&conic, rline.descriptor(), &[("x", "t"), ("y", "t")]);
    assert!(matches!(bad, Err(Error::RelationNotPreserved { residual, .. }) if residual == "-1"));

    // rational parametrization of y² = x² + 1
    let phi = hom(
        &conic,
        rline.descriptor(),
        &[("x", "2*t/(1 - t^2)"), ("y", "(1 + t^2)/(1 - t^2)")],
    )
    .unwrap();
    let dy = conic.differential_d(&conic.parse("y").unwrap()).unwrap();
    let lhs = pullback_one_form(&phi, &dy).unwrap();
    let rhs = rline.descriptor().differential_d(&rline.parse("(1 + t^2)/(1 - t^2)").unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(!rline.is_formal_line());
    assert!(line.is_formal_line());
}

#[test]
fn parametrized_line_requires_declared_constants() {
    let ctx = ScalarContext::builder(AlgebraKind::Polynomial)
        .constants(&["m"])
        .transcendentals(&["x"])
        .build()
        .unwrap();
    let a = build_algebraifold(&ctx).unwrap();
    let bare = FormalLine::polynomial("t").unwrap();
    assert!(matches!(
        hom(&a, bare.descriptor(), &[("x", "t")]),
        Err(Error::InvalidContext(_))
    ));
    let line = FormalLine::new("t", &["m"], LineKind::Polynomial).unwrap();
    let phi = hom(&a, line.descriptor(), &[("x", "m*t")]).unwrap();
    assert_eq!(phi.apply(&a.parse("m*x^2").unwrap()).unwrap(), line.parse("m^3*t^2").unwrap());
}

#[test]
fn pushforward_examples() {
    let a = plane();
    let line = FormalLine::polynomial("t").unwrap();
    let phi = hom(&a, line.descriptor(), &[("x", "t"), ("y", "0")]).unwrap();
    let flat = standard_connection(&a);
    let s = pulled(&line, &["t^2", "1"]);
    assert_eq!(pushforward_connection(&phi, &flat, &line.del(), &s).unwrap(), pulled(&line, &["2*t", "0"]));

    let c = poly_metric_connection(&a);
    // velocity (1, 0) along x = t picks up Γ^k_{11}(t) = (−t, 1)
    let s = pulled(&line, &["1", "0"]);
    assert_eq!(pushforward_connection(&phi, &c, &line.del(), &s).unwrap(), pulled(&line, &["-t", "1"]));
    assert_eq!(
        pushforward_connection(&phi, &c, &line.del(), &pulled(&line, &["1"])).unwrap_err(),
        Error::LengthMismatch { expected: 2, found: 1 }
    );
}

#[test]
fn geodesic_examples() {
    let a = plane();
    let line = FormalLine::polynomial("t").unwrap();
    let lt = line.descriptor();
    let flat = standard_connection(&a);
    let straight = hom(&a, lt, &[("x", "2*t + 1"), ("y", "3*t")]).unwrap();
    assert!(geodesic_residual(&straight, &flat).unwrap().is_zero());
    let bent = hom(&a, lt, &[("x", "t^2"), ("y", "t")]).unwrap();
    assert_eq!(geodesic_residual(&bent, &flat).unwrap(), pulled(&line, &["2", "0"]));

    let c = poly_metric_connection(&a);
    let vertical = hom(&a, lt, &[("x", "0"), ("y", "t")]).unwrap();
    assert!(geodesic_residual(&vertical, &c).unwrap().is_zero());
    let horizontal = hom(&a, lt, &[("x", "t"), ("y", "0")]).unwrap();
    assert_eq!(geodesic_residual(&horizontal, &c).unwrap(), pulled(&line, &["-t", "1"]));

    let id = hom(&a, &a, &[("x", "x"), ("y", "y")]).unwrap();
    assert!(matches!(geodesic_residual(&id, &flat), Err(Error::NotALine(_))));
}

#[test]
fn antiderivative_examples() {
    let line = FormalLine::polynomial("t").unwrap();
    assert_eq!(line.antiderivative(&line.parse("t^2").unwrap()).unwrap(), line.parse("t^3/3").unwrap());
    assert_eq!(line.antiderivative(&line.parse("5").unwrap()).unwrap(), line.parse("5*t").unwrap());
    assert!(line.antiderivative(&line.zero()).unwrap().is_zero());

    let r = FormalLine::rational("t").unwrap();
    assert!(matches!(r.antiderivative(&r.parse("1/t").unwrap()), Err(Error::NoAntiderivative(_))));
    assert_eq!(r.antiderivative(&r.parse("1/t^2").unwrap()).unwrap(), r.parse("-1/t").unwrap());
    assert!(matches!(
        r.antiderivative(&r.parse("1/(t^2 + 1)").unwrap()),
        Err(Error::NoAntiderivative(_))
    ));

    let p = FormalLine::new("t", &["m"], LineKind::Polynomial).unwrap();
    assert_eq!(p.antiderivative(&p.parse("2*m*t").unwrap()).unwrap(), p.parse("m*t^2").unwrap());
}

impl FormalLine {
    fn zero(&self) -> ScalarValue {
        self.descriptor().zero()
    }
}

fn poly_t() -> impl Strategy<Value = String> {
    prop::collection::vec((-4i64..=4, 0u32..=4), 1..4).prop_map(|terms| {
        terms.iter().map(|(c, e)| format!("({c})*t^{e}")).collect::<Vec<_>>().join(" + ")
    })
}

fn poly_xy() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..3).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antiderivative_inverts_derivative(p in poly_t(), q in poly_t(), k in 1u32..3) {
        let line = FormalLine::polynomial("t").unwrap();
        let a = line.parse(&p).unwrap();
        let ia = line.antiderivative(&a).unwrap();
        prop_assert_eq!(line.descriptor().apply_derivation(&line.del(), &ia).unwrap(), a);

        // derivatives of rational functions with a pole at 0 integrate back
        let r = FormalLine::rational("t").unwrap();
        let f = r.parse(&format!("({q}) / (t^{k} + 1) + ({p}) / t^{k}")).unwrap();
        let df = r.descriptor().apply_derivation(&r.del(), &f).unwrap();
        let back = r.antiderivative(&df).unwrap();
        prop_assert!(r.descriptor().constants_check(&(&back - &f)).unwrap());
    }

    #[test]
    fn pullback_adjoint_to_differential(px in poly_t(), py in poly_t(), xi0 in poly_xy(), xi1 in poly_xy(), w in poly_t()) {
        let a = plane();
        let line = FormalLine::polynomial("t").unwrap();
        let lt = line.descriptor();
        let phi = hom(&a, lt, &[("x", &px), ("y", &py)]).unwrap();
        let xi = form(&a, &[&xi0, &xi1]);
        let w = line.del().scale(&line.parse(&w).unwrap());
        let lhs = pullback_one_form(&phi, &xi).unwrap().pair(lt, &w);
        let rhs = pair_pulled(&phi, &xi, &differential(&phi, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // characterization of D_φ: pairing with da_i gives w(φ(a_i))
        for (i, g) in ["x", "y"].iter().enumerate() {
            let img = phi.images()[*g].clone();
            prop_assert_eq!(differential(&phi, &w).unwrap().coeffs()[i].clone(), lt.apply_derivation(&w, &img).unwrap());
        }
        // Ω_φ(df) = d(φ f)
        let f = a.parse(&xi0).unwrap();
        prop_assert_eq!(
            pullback_one_form(&phi, &a.differential_d(&f).unwrap()).unwrap(),
            lt.differential_d(&phi.apply(&f).unwrap()).unwrap()
        );
    }

    #[test]
    fn pullback_is_functorial(f in poly_xy(), g in poly_xy(), px in poly_t(), py in poly_t(), xi0 in poly_xy(), xi1 in poly_xy()) {
        let a = plane();
        let line = FormalLine::polynomial("t").unwrap();
        let phi = hom(&a, &a, &[("x", &f), ("y", &g)]).unwrap();
        let psi = hom(&a, line.descriptor(), &[("x", &px), ("y", &py)]).unwrap();
        let both = phi.then(&psi).unwrap();
        let xi = form(&a, &[&xi0, &xi1]);
        let step = pullback_one_form(&psi, &pullback_one_form(&phi, &xi).unwrap()).unwrap();
        prop_assert_eq!(pullback_one_form(&both, &xi).unwrap(), step);
    }

    // affine reparametrization of a geodesic scales the residual by the
    // square of the speed change
    #[test]
    fn affine_reparametrization(px in poly_t(), py in poly_t(), a0 in 1i64..4, b0 in -3i64..4) {
        let a = plane();
        let line = FormalLine::polynomial("t").unwrap();
        let lt = line.descriptor();
        let c = poly_metric_connection(&a);
        let gamma = hom(&a, lt, &[("x", &px), ("y", &py)]).unwrap();
        let reparam = hom(lt, lt, &[("t", &format!("{a0}*t + ({b0})"))]).unwrap();
        let moved = gamma.then(&reparam).unwrap();
        let r = geodesic_residual(&gamma, &c).unwrap();
        let expected: Vec<ScalarValue> = r
            .coeffs()
            .iter()
            .map(|v| reparam.apply(v).unwrap().scale(&crate::scalar::rational(a0 * a0, 1)))
            .collect();
        prop_assert_eq!(geodesic_residual(&moved, &c).unwrap(), PulledModuleElem::new(expected));
    }
}
