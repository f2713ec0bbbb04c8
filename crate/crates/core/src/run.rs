//! Command dispatch: runs the requested checks on a manifest and collects
//! the outcomes into a [`ReportDocument`].

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebraifold::Derivation;
use crate::connection::{curvature_report, efe_residual, levi_civita};
use crate::error::{Error, Result};
use crate::manifest::{Command, Manifest};
use crate::maps::{build_hom, differential, geodesic_residual, pair_pulled, pullback_one_form, AlgebraifoldHom, LineKind};
use crate::report::{
    derivation_json, one_form_json, pulled_json, tensor_json, CheckOutcome, ReportDocument,
};
use crate::tensor::{kronecker, lie_derivative, metric_inverse, Metric, Tensor};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the manifest's `checks` list for the `check` command.
    pub checks: Option<Vec<Command>>,
}

pub fn run_command(m: &Manifest, command: Command, options: &RunOptions) -> ReportDocument {
    let mut results = BTreeMap::new();
    match command {
        Command::Check => {
            results.insert("algebraifold".to_string(), outcome(structure(m)));
            let checks = options.checks.clone().unwrap_or_else(|| m.checks.clone());
            let checks: Vec<Command> = checks.into_iter().filter(|c| *c != Command::Check).collect();
            // checks are independent; run them side by side and collect in order
            let outcomes: Vec<(Command, CheckOutcome)> = std::thread::scope(|s| {
                let handles: Vec<_> = checks
                    .iter()
                    .map(|&c| (c, s.spawn(move || single(m, c))))
                    .collect();
                handles
                    .into_iter()
                    .map(|(c, h)| (c, h.join().expect("check thread panicked")))
                    .collect()
            });
            for (c, o) in outcomes {
                results.insert(c.as_str().to_string(), o);
            }
        }
        other => {
            results.insert(other.as_str().to_string(), single(m, other));
        }
    }
    ReportDocument {
        command: command.as_str().to_string(),
        inputs: serde_json::to_value(&m.raw).expect("manifest serializes"),
        results,
        warnings: m.algebra.warnings().to_vec(),
    }
}

fn outcome(r: Result<CheckOutcome>) -> CheckOutcome {
    r.unwrap_or_else(CheckOutcome::Failed)
}

fn single(m: &Manifest, c: Command) -> CheckOutcome {
    outcome(match c {
        Command::Check => structure(m),
        Command::Dim => Ok(CheckOutcome::ok(json!({ "dimension": m.algebra.dimension().to_string() }))),
        Command::Christoffel => christoffel(m),
        Command::Curvature => curvature(m),
        Command::Efe => efe(m),
        Command::Geodesic => geodesic(m),
        Command::Lie => lie(m),
        Command::Bracket => bracket(m),
        Command::Pullback => pullback(m),
    })
}

fn missing(what: &str) -> Error {
    Error::ValidationError(format!("the manifest declares no {what}"))
}

fn metric(m: &Manifest) -> Result<Metric> {
    let g = m.metric.as_ref().ok_or_else(|| missing("metric"))?;
    metric_inverse(&m.algebra, g).map_err(|e| e.at("metric"))
}

fn structure(m: &Manifest) -> Result<CheckOutcome> {
    let report = m.algebra.dual_basis_verify();
    let residuals: Vec<Value> = report
        .nonzero()
        .map(|r| {
            json!({
                "identity": r.identity,
                "basis": r.basis,
                "generator": r.generator,
                "residual": r.residual.to_string(),
            })
        })
        .collect();
    let mut value = json!({
        "dimension": m.algebra.dimension().to_string(),
        "dual_basis_residuals": residuals,
    });
    let mut pass = report.all_zero();
    if m.metric.is_some() {
        let g = metric(m)?;
        value["metric_inverse"] = tensor_json(g.g_inv());
        let prod = g.g_inv().tensor_product(g.g())?.contract(2, 1)?;
        pass &= prod == kronecker(&m.algebra);
    }
    Ok(CheckOutcome::verdict(value, pass))
}

fn christoffel(m: &Manifest) -> Result<CheckOutcome> {
    let c = levi_civita(&m.algebra, &metric(m)?)?;
    Ok(CheckOutcome::ok(json!({ "christoffel": tensor_json(c.gamma()) })))
}

fn curvature(m: &Manifest) -> Result<CheckOutcome> {
    let r = curvature_report(&m.algebra, &metric(m)?)?;
    Ok(CheckOutcome::ok(json!({
        "riemann": tensor_json(&r.riemann),
        "ricci": tensor_json(&r.ricci),
        "scalar": r.scalar.to_string(),
        "einstein": tensor_json(&r.einstein),
    })))
}

fn efe(m: &Manifest) -> Result<CheckOutcome> {
    let g = metric(m)?;
    let zero = Tensor::zero(&m.algebra, 0, 2);
    let t = m.stress_energy.as_ref().unwrap_or(&zero);
    let residual = efe_residual(&m.algebra, &g, &m.lambda, &m.kappa, t)?;
    let pass = residual.is_zero();
    Ok(CheckOutcome::verdict(
        json!({
            "lambda": m.lambda.to_string(),
            "kappa": m.kappa.to_string(),
            "residual": tensor_json(&residual),
        }),
        pass,
    ))
}

fn curve_homs(m: &Manifest) -> Result<Vec<(&String, AlgebraifoldHom, LineKind)>> {
    if m.curves.is_empty() {
        return Err(missing("curves"));
    }
    m.curves
        .iter()
        .map(|(name, c)| {
            let hom = build_hom(&m.algebra, c.line.descriptor(), c.images.clone())
                .map_err(|e| e.at(format!("curves.{name}")))?;
            Ok((name, hom, c.line.kind()))
        })
        .collect()
}

fn line_kind(k: LineKind) -> &'static str {
    match k {
        LineKind::Polynomial => "polynomial",
        LineKind::Rational => "rational",
    }
}

fn geodesic(m: &Manifest) -> Result<CheckOutcome> {
    let conn = levi_civita(&m.algebra, &metric(m)?)?;
    let mut curves = Map::new();
    let mut all = true;
    for (name, hom, kind) in curve_homs(m)? {
        let del = Derivation::basis(hom.target(), 0);
        let velocity = differential(&hom, &del)?;
        let residual = geodesic_residual(&hom, &conn).map_err(|e| e.at(format!("curves.{name}")))?;
        let pass = residual.is_zero();
        all &= pass;
        curves.insert(
            name.clone(),
            json!({
                "line": line_kind(kind),
                "velocity": pulled_json(&velocity),
                "residual": pulled_json(&residual),
                "pass": pass,
            }),
        );
    }
    Ok(CheckOutcome::verdict(json!({ "curves": curves }), all))
}

fn pullback(m: &Manifest) -> Result<CheckOutcome> {
    let mut curves = Map::new();
    let mut all = true;
    for (name, hom, kind) in curve_homs(m)? {
        let line = hom.target();
        let del = Derivation::basis(line, 0);
        let d = differential(&hom, &del)?;
        let coords: Map<String, Value> = hom
            .images()
            .iter()
            .map(|(g, img)| Ok((g.clone(), one_form_json(&line.differential_d(img)?))))
            .collect::<Result<_>>()?;
        let mut forms = Map::new();
        for (fname, xi) in &m.one_forms {
            let pulled = pullback_one_form(&hom, xi)?;
            // Ω_φ(ξ)(∂) must agree with ⟨1 ⊗ ξ, D_φ ∂⟩
            all &= pulled.pair(line, &del) == pair_pulled(&hom, xi, &d)?;
            forms.insert(fname.clone(), one_form_json(&pulled));
        }
        curves.insert(
            name.clone(),
            json!({
                "line": line_kind(kind),
                "differential": pulled_json(&d),
                "coordinates": coords,
                "one_forms": forms,
            }),
        );
    }
    Ok(CheckOutcome::verdict(json!({ "curves": curves }), all))
}

fn lie(m: &Manifest) -> Result<CheckOutcome> {
    if m.vector_fields.is_empty() {
        return Err(missing("vector_fields"));
    }
    let a = &m.algebra;
    let delta = kronecker(a);
    let mut fields = Map::new();
    let mut all = true;
    for (name, u) in &m.vector_fields {
        let kron = lie_derivative(a, u, &delta)?.is_zero();
        all &= kron;
        let mut entry = json!({ "kronecker_invariant": kron });
        if let Some(g) = &m.metric {
            let lg = lie_derivative(a, u, g)?;
            entry["killing"] = Value::Bool(lg.is_zero());
            entry["metric"] = tensor_json(&lg);
        }
        let forms: Map<String, Value> = m
            .one_forms
            .iter()
            .map(|(fname, eta)| {
                let t = lie_derivative(a, u, &Tensor::from_one_form(a, eta)?)?;
                Ok((fname.clone(), one_form_json(&t.as_one_form().expect("rank (0,1)"))))
            })
            .collect::<Result<_>>()?;
        if !forms.is_empty() {
            entry["one_forms"] = Value::Object(forms);
        }
        fields.insert(name.clone(), entry);
    }
    Ok(CheckOutcome::verdict(json!({ "vector_fields": fields }), all))
}

fn bracket(m: &Manifest) -> Result<CheckOutcome> {
    if m.vector_fields.len() < 2 {
        return Err(Error::ValidationError(
            "bracket needs at least two vector_fields".into(),
        ));
    }
    let a = &m.algebra;
    let fields: Vec<(&String, &Derivation)> = m.vector_fields.iter().collect();
    let mut brackets = Map::new();
    for (i, (nu, u)) in fields.iter().enumerate() {
        for (nv, v) in &fields[i + 1..] {
            brackets.insert(format!("[{nu}, {nv}]"), derivation_json(&a.lie_bracket(u, v)?));
        }
    }
    let mut value = json!({ "brackets": brackets });
    let mut pass = true;
    if fields.len() >= 3 {
        let br = |p: &Derivation, q: &Derivation| a.lie_bracket(p, q);
        let mut jacobi = true;
        for i in 0..fields.len() {
            for j in i + 1..fields.len() {
                for k in j + 1..fields.len() {
                    let (u, v, w) = (fields[i].1, fields[j].1, fields[k].1);
                    let total = br(&br(u, v)?, w)?.add(&br(&br(v, w)?, u)?).add(&br(&br(w, u)?, v)?);
                    jacobi &= total.is_zero();
                }
            }
        }
        value["jacobi"] = Value::Bool(jacobi);
        pass = jacobi;
    }
    Ok(CheckOutcome::verdict(value, pass))
}

