//! JSON manifests: an algebra, an optional metric and Einstein data, curves,
//! vector fields and one-forms, and the checks to run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebraifold::{build_algebraifold, AlgebraifoldDescriptor, Derivation, OneForm};
use crate::error::{Error, Result};
use crate::maps::{FormalLine, LineKind};
use crate::scalar::{AlgebraKind, ScalarContext, ScalarValue};
use crate::tensor::Tensor;

/// The manifest exactly as written on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default)]
    pub base_constants: Vec<String>,
    pub algebra: RawAlgebra,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stress_energy: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_parameter: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curves: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vector_fields: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub one_forms: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    /// `"polynomial"` or `"field"`.
    pub kind: String,
    pub generators: Vec<String>,
    pub transcendence_basis: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

/// Commands understood by [`crate::run::run_command`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Check,
    Dim,
    Christoffel,
    Curvature,
    Efe,
    Geodesic,
    Lie,
    Bracket,
    Pullback,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Check,
        Command::Dim,
        Command::Christoffel,
        Command::Curvature,
        Command::Efe,
        Command::Geodesic,
        Command::Lie,
        Command::Bracket,
        Command::Pullback,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Dim => "dim",
            Command::Christoffel => "christoffel",
            Command::Curvature => "curvature",
            Command::Efe => "efe",
            Command::Geodesic => "geodesic",
            Command::Lie => "lie",
            Command::Bracket => "bracket",
            Command::Pullback => "pullback",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::ValidationError(format!("unknown command `{s}`")))
    }
}

/// A curve: generator images in a line over the base constants.
#[derive(Clone, Debug)]
pub struct Curve {
    pub line: FormalLine,
    pub images: BTreeMap<String, ScalarValue>,
}

/// A parsed and context-validated manifest.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub raw: RawManifest,
    pub algebra: AlgebraifoldDescriptor,
    pub metric: Option<Tensor>,
    pub lambda: ScalarValue,
    pub kappa: ScalarValue,
    pub stress_energy: Option<Tensor>,
    pub curves: BTreeMap<String, Curve>,
    pub vector_fields: BTreeMap<String, Derivation>,
    pub one_forms: BTreeMap<String, OneForm>,
    pub checks: Vec<Command>,
}

impl Manifest {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::FileNotFound(format!("{}: {e}", path.display())),
    })?;
    parse_manifest(&text)
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => Error::ParseError {
                line: e.line(),
                column: e.column(),
                message: strip_position(&e.to_string()),
            },
            Category::Data => Error::ValidationError(e.to_string()),
        }
    })?;
    validate(raw)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::ValidationError(msg.into())
}

fn at(location: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| e.at(location)
}

fn build_context(raw: &RawManifest) -> Result<Arc<ScalarContext>> {
    let alg = &raw.algebra;
    let kind = match alg.kind.as_str() {
        "polynomial" => AlgebraKind::Polynomial,
        "field" => AlgebraKind::Field,
        other => return Err(invalid(format!("algebra.kind must be `polynomial` or `field`, found `{other}`"))),
    };
    for b in &alg.transcendence_basis {
        if !alg.generators.contains(b) {
            return Err(invalid(format!("transcendence basis element `{b}` is not a generator")));
        }
    }
    let extra: Vec<&String> = alg
        .generators
        .iter()
        .filter(|g| !alg.transcendence_basis.contains(g))
        .collect();
    let expected_order: Vec<&String> = alg
        .transcendence_basis
        .iter()
        .chain(extra.iter().copied())
        .collect();
    if expected_order != alg.generators.iter().collect::<Vec<_>>() {
        return Err(invalid(
            "algebra.generators must list the transcendence basis first, in the same order",
        ));
    }
    let mut builder = ScalarContext::builder(kind)
        .constants(&raw.base_constants)
        .transcendentals(&alg.transcendence_basis);
    match (extra.as_slice(), alg.relations.as_slice()) {
        ([], []) => {}
        ([g], [rel]) => builder = builder.extension(g, rel),
        _ => {
            return Err(invalid(format!(
                "expected one relation per non-basis generator with at most one such generator, found {} generators and {} relations",
                extra.len(),
                alg.relations.len()
            )))
        }
    }
    builder.build().map_err(at("algebra"))
}

fn parse_matrix(
    a: &AlgebraifoldDescriptor,
    rows: &[Vec<String>],
    name: &str,
) -> Result<Tensor> {
    let n = a.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        let cols = rows.iter().map(|r| r.len().to_string()).collect::<Vec<_>>().join(",");
        return Err(invalid(format!(
            "{name} must be {n}x{n}, found {} rows with lengths [{cols}]",
            rows.len()
        )));
    }
    let mut m = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(n);
        for (j, e) in row.iter().enumerate() {
            r.push(a.parse(e).map_err(at(&format!("{name}[{}][{}]", i + 1, j + 1)))?);
        }
        m.push(r);
    }
    Tensor::covariant_matrix(a, &m)
}

fn parse_vector(a: &AlgebraifoldDescriptor, comps: &[String], location: &str) -> Result<Vec<ScalarValue>> {
    if comps.len() != a.dim() {
        return Err(invalid(format!(
            "{location} needs {} components, found {}",
            a.dim(),
            comps.len()
        )));
    }
    comps
        .iter()
        .enumerate()
        .map(|(i, c)| a.parse(c).map_err(at(&format!("{location}[{}]", i + 1))))
        .collect()
}

fn parse_curve(
    raw: &RawManifest,
    generators: &[String],
    parameter: &str,
    name: &str,
    table: &BTreeMap<String, String>,
) -> Result<Curve> {
    for g in generators {
        if !table.contains_key(g) {
            return Err(invalid(format!("curves.{name} has no image for `{g}`")));
        }
    }
    if let Some(k) = table.keys().find(|k| !generators.contains(k)) {
        return Err(invalid(format!("curves.{name} maps `{k}`, which is not a generator")));
    }
    let parse_all = |line: &FormalLine| -> Result<BTreeMap<String, ScalarValue>> {
        table
            .iter()
            .map(|(g, e)| Ok((g.clone(), line.parse(e).map_err(at(&format!("curves.{name}.{g}")))?)))
            .collect()
    };
    let line = FormalLine::new(parameter, &raw.base_constants, LineKind::Polynomial).map_err(at("curve_parameter"))?;
    if let Ok(images) = parse_all(&line) {
        return Ok(Curve { line, images });
    }
    let line = FormalLine::new(parameter, &raw.base_constants, LineKind::Rational).map_err(at("curve_parameter"))?;
    let images = parse_all(&line)?;
    Ok(Curve { line, images })
}

fn validate(raw: RawManifest) -> Result<Manifest> {
    let ctx = build_context(&raw)?;
    let algebra = build_algebraifold(&ctx).map_err(at("algebra"))?;

    let metric = raw
        .metric
        .as_ref()
        .map(|rows| parse_matrix(&algebra, rows, "metric"))
        .transpose()?;
    let stress_energy = raw
        .stress_energy
        .as_ref()
        .map(|rows| parse_matrix(&algebra, rows, "stress_energy"))
        .transpose()?;
    let scalar = |field: &Option<String>, name: &str, default: i64| -> Result<ScalarValue> {
        match field {
            Some(text) => algebra.parse(text).map_err(at(name)),
            None => Ok(ScalarValue::from_i64(algebra.context(), default)),
        }
    };
    let lambda = scalar(&raw.lambda, "lambda", 0)?;
    let kappa = scalar(&raw.kappa, "kappa", 1)?;

    let parameter = raw.curve_parameter.clone().unwrap_or_else(|| "t".to_string());
    let generators = ctx.generators();
    if generators.contains(&parameter) || raw.base_constants.contains(&parameter) {
        return Err(invalid(format!(
            "curve parameter `{parameter}` clashes with an identifier of the algebra; set curve_parameter"
        )));
    }
    let curves = raw
        .curves
        .iter()
        .map(|(name, table)| Ok((name.clone(), parse_curve(&raw, &generators, &parameter, name, table)?)))
        .collect::<Result<_>>()?;

    let vector_fields = raw
        .vector_fields
        .iter()
        .map(|(name, c)| {
            let v = parse_vector(&algebra, c, &format!("vector_fields.{name}"))?;
            Ok((name.clone(), Derivation::new(v)))
        })
        .collect::<Result<_>>()?;
    let one_forms = raw
        .one_forms
        .iter()
        .map(|(name, c)| {
            let v = parse_vector(&algebra, c, &format!("one_forms.{name}"))?;
            Ok((name.clone(), OneForm::new(v)))
        })
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    for c in &raw.checks {
        let cmd: Command = c.parse()?;
        if cmd == Command::Check {
            return Err(invalid("`check` cannot be listed among the checks"));
        }
        if !checks.contains(&cmd) {
            checks.push(cmd);
        }
    }

    Ok(Manifest {
        raw,
        algebra,
        metric,
        lambda,
        kappa,
        stress_energy,
        curves,
        vector_fields,
        one_forms,
        checks,
    })
}
