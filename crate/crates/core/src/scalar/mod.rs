//! Exact scalars: ℚ → ℚ[x̄] → ℚ(x̄) → ℚ(x̄)[y]/(p).
//!
//! Every [`ScalarValue`] belongs to a [`ScalarContext`], which fixes the
//! base constants (parameters, killed by every derivation), the
//! transcendental coordinates, at most one algebraic generator, and whether
//! the coordinate algebra is the polynomial ring or its fraction field.
//! Values are always stored at the lowest level of the tower that can
//! represent them.

mod ext;
mod gcd;
mod parse;
mod poly;
mod ratfunc;
pub(crate) mod render;
mod roots;
mod upoly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use ext::{ExtElem, Extension};
pub use gcd::poly_gcd;
pub use poly::{grlex_cmp, rational, Monomial, MultiPoly, Rational};
pub use ratfunc::RatFunc;
pub use upoly::UPoly;

pub(crate) use roots::{base_root, RootSearch};

use crate::error::{Error, Result};

/// Whether the coordinate algebra is a polynomial ring or a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Polynomial,
    Field,
}

#[derive(Debug)]
pub struct ScalarContext {
    kind: AlgebraKind,
    constants: Vec<String>,
    transcendentals: Vec<String>,
    extension: Option<Extension>,
    vars: Arc<[String]>,
}

impl PartialEq for ScalarContext {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.constants == other.constants
            && self.transcendentals == other.transcendentals
            && self.extension == other.extension
    }
}

/// Builder for [`ScalarContext`].
#[derive(Clone, Debug)]
pub struct ContextBuilder {
    kind: AlgebraKind,
    constants: Vec<String>,
    transcendentals: Vec<String>,
    extensions: Vec<(String, String)>,
}

impl ContextBuilder {
    pub fn constants<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.constants = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn transcendentals<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.transcendentals = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    /// Adds an algebraic generator with its defining relation, written in
    /// the expression grammar.
    pub fn extension(mut self, generator: &str, relation: &str) -> Self {
        self.extensions.push((generator.to_string(), relation.to_string()));
        self
    }

    pub fn build(self) -> Result<Arc<ScalarContext>> {
        if self.extensions.len() > 1 {
            return Err(Error::UnsupportedTower);
        }
        if !self.extensions.is_empty() && self.kind == AlgebraKind::Polynomial {
            return Err(Error::InvalidContext(
                "algebraic generators require a field context".into(),
            ));
        }
        let mut names: Vec<String> = self.constants.clone();
        names.extend(self.transcendentals.iter().cloned());
        names.extend(self.extensions.iter().map(|(g, _)| g.clone()));
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidContext(format!("`{name}` is not an identifier")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidContext(format!("identifier `{name}` declared twice")));
            }
        }
        let vars: Arc<[String]> = names.into();
        let extension = match self.extensions.into_iter().next() {
            None => None,
            Some((generator, text)) => {
                // parse the relation with every identifier as a free variable
                let plain = ScalarContext {
                    kind: AlgebraKind::Polynomial,
                    constants: Vec::new(),
                    transcendentals: vars.to_vec(),
                    extension: None,
                    vars: vars.clone(),
                };
                let plain = Arc::new(plain);
                let value = parse::parse(&text, &plain)?;
                let relation = match value.repr {
                    Repr::Poly(p) => p,
                    Repr::Rational(_) => {
                        return Err(Error::InvalidContext(format!(
                            "relation `{text}` does not involve `{generator}`"
                        )))
                    }
                    _ => {
                        return Err(Error::InvalidContext(format!(
                            "relation `{text}` must be a polynomial"
                        )))
                    }
                };
                let index = vars.len() - 1;
                if !relation.involves(index) {
                    return Err(Error::InvalidContext(format!(
                        "relation `{text}` does not involve `{generator}`"
                    )));
                }
                let c = self.constants.len();
                let trans: Vec<usize> = (c..c + self.transcendentals.len()).collect();
                Some(Extension::new(generator, index, relation, &trans))
            }
        };
        Ok(Arc::new(ScalarContext {
            kind: self.kind,
            constants: self.constants,
            transcendentals: self.transcendentals,
            extension,
            vars,
        }))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ScalarContext {
    pub fn builder(kind: AlgebraKind) -> ContextBuilder {
        ContextBuilder {
            kind,
            constants: Vec::new(),
            transcendentals: Vec::new(),
            extensions: Vec::new(),
        }
    }

    /// ℚ[vars].
    pub fn polynomial(vars: &[&str]) -> Result<Arc<Self>> {
        Self::builder(AlgebraKind::Polynomial)
            .transcendentals(vars)
            .build()
    }

    /// ℚ(vars).
    pub fn field(vars: &[&str]) -> Result<Arc<Self>> {
        Self::builder(AlgebraKind::Field).transcendentals(vars).build()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_field(&self) -> bool {
        self.kind == AlgebraKind::Field
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn transcendentals(&self) -> &[String] {
        &self.transcendentals
    }

    pub fn extension(&self) -> Option<&Extension> {
        self.extension.as_ref()
    }

    /// Every identifier, in variable order.
    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    /// Transcendentals followed by the algebraic generator, if any.
    pub fn generators(&self) -> Vec<String> {
        let mut g = self.transcendentals.clone();
        if let Some(e) = &self.extension {
            g.push(e.generator.clone());
        }
        g
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn transcendental_index(&self, name: &str) -> Option<usize> {
        self.transcendentals.iter().position(|v| v == name)
    }

    pub(crate) fn transcendental_var(&self, t: usize) -> usize {
        self.constants.len() + t
    }

    fn transcendental_vars(&self) -> Vec<usize> {
        (0..self.transcendentals.len())
            .map(|t| self.transcendental_var(t))
            .collect()
    }
}

/// Internal representation, lowest level that fits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Repr {
    Rational(Rational),
    Poly(MultiPoly),
    RatFunc(RatFunc),
    Ext(ExtElem),
}

#[derive(Clone)]
pub struct ScalarValue {
    ctx: Arc<ScalarContext>,
    repr: Repr,
}

impl PartialEq for ScalarValue {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.repr == other.repr
    }
}

impl Eq for ScalarValue {}

pub(crate) fn same_context(a: &Arc<ScalarContext>, b: &Arc<ScalarContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Debug for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", render::render_scalar(self))
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render_scalar(self))
    }
}

enum Pair {
    Q(Rational, Rational),
    P(MultiPoly, MultiPoly),
    F(RatFunc, RatFunc),
    E(ExtElem, ExtElem),
}

impl ScalarValue {
    pub fn zero(ctx: &Arc<ScalarContext>) -> Self {
        ScalarValue {
            ctx: ctx.clone(),
            repr: Repr::Rational(Rational::zero()),
        }
    }

    pub fn one(ctx: &Arc<ScalarContext>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Arc<ScalarContext>, n: i64) -> Self {
        Self::from_rational(ctx, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(ctx: &Arc<ScalarContext>, q: Rational) -> Self {
        ScalarValue {
            ctx: ctx.clone(),
            repr: Repr::Rational(q),
        }
    }

    pub fn from_ratio(ctx: &Arc<ScalarContext>, n: i64, d: i64) -> Self {
        Self::from_rational(ctx, rational(n, d))
    }

    /// A declared identifier (constant, transcendental or generator).
    pub fn variable(ctx: &Arc<ScalarContext>, name: &str) -> Result<Self> {
        let idx = ctx
            .var_index(name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        if let Some(e) = &ctx.extension {
            if idx == e.index {
                return Ok(Self::canonical(ctx, Repr::Ext(e.generator_elem())));
            }
        }
        Ok(ScalarValue {
            ctx: ctx.clone(),
            repr: Repr::Poly(MultiPoly::var(ctx.vars.clone(), idx)),
        })
    }

    /// Wraps a polynomial over the context's variable list. Polynomials that
    /// involve the algebraic generator are reduced modulo its relation.
    pub fn from_poly(ctx: &Arc<ScalarContext>, p: MultiPoly) -> Result<Self> {
        if p.vars().as_ref() != ctx.vars.as_ref() {
            return Err(Error::ContextMismatch);
        }
        if let Some(e) = &ctx.extension {
            if p.involves(e.index) {
                return Ok(Self::canonical(ctx, Repr::Ext(e.from_poly(&p))));
            }
        }
        Ok(Self::canonical(ctx, Repr::Poly(p)))
    }

    /// Wraps a rational function over the context's variable list.
    pub fn from_ratfunc(ctx: &Arc<ScalarContext>, f: RatFunc) -> Result<Self> {
        if f.vars().as_ref() != ctx.vars.as_ref() {
            return Err(Error::ContextMismatch);
        }
        if let Some(e) = &ctx.extension {
            if f.num().involves(e.index) || f.den().involves(e.index) {
                let x = e.from_ratfunc(&f).ok_or(Error::DivisionByZero)?;
                return Ok(Self::canonical(ctx, Repr::Ext(x)));
            }
        }
        let out = Self::canonical(ctx, Repr::RatFunc(f));
        match &out.repr {
            Repr::RatFunc(f) if !out.in_algebra() => Err(Error::NotDivisible {
                numerator: render::render_poly(f.num()),
                denominator: render::render_poly(f.den()),
            }),
            _ => Ok(out),
        }
    }

    pub(crate) fn canonical(ctx: &Arc<ScalarContext>, repr: Repr) -> Self {
        let repr = match repr {
            Repr::Ext(e) => match e.as_base() {
                Some(f) => Self::demote_ratfunc(f.clone()),
                None => Repr::Ext(e),
            },
            Repr::RatFunc(f) => Self::demote_ratfunc(f),
            Repr::Poly(p) => match p.as_constant() {
                Some(c) => Repr::Rational(c),
                None => Repr::Poly(p),
            },
            r => r,
        };
        ScalarValue {
            ctx: ctx.clone(),
            repr,
        }
    }

    fn demote_ratfunc(f: RatFunc) -> Repr {
        if f.is_polynomial() {
            match f.num().as_constant() {
                Some(c) => Repr::Rational(c),
                None => Repr::Poly(f.num().clone()),
            }
        } else {
            Repr::RatFunc(f)
        }
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.repr, Repr::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Rational(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Name of the tower level the value is stored at.
    pub fn level(&self) -> &'static str {
        match self.repr {
            Repr::Rational(_) => "rational",
            Repr::Poly(_) => "polynomial",
            Repr::RatFunc(_) => "rational_function",
            Repr::Ext(_) => "extension",
        }
    }

    fn level_rank(&self) -> u8 {
        match self.repr {
            Repr::Rational(_) => 0,
            Repr::Poly(_) => 1,
            Repr::RatFunc(_) => 2,
            Repr::Ext(_) => 3,
        }
    }

    fn as_poly(&self) -> MultiPoly {
        match &self.repr {
            Repr::Rational(q) => MultiPoly::constant(self.ctx.vars.clone(), q.clone()),
            Repr::Poly(p) => p.clone(),
            _ => unreachable!("lifted above polynomial level"),
        }
    }

    fn as_ratfunc(&self) -> RatFunc {
        match &self.repr {
            Repr::RatFunc(f) => f.clone(),
            Repr::Ext(_) => unreachable!("lifted above rational-function level"),
            _ => RatFunc::from_poly(self.as_poly()),
        }
    }

    fn as_ext(&self) -> ExtElem {
        let e = self.ctx.extension.as_ref().expect("extension context");
        match &self.repr {
            Repr::Ext(x) => x.clone(),
            _ => e.from_base(self.as_ratfunc()),
        }
    }

    fn pair(&self, other: &ScalarValue) -> Result<Pair> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(match self.level_rank().max(other.level_rank()) {
            0 => Pair::Q(
                self.as_rational().unwrap().clone(),
                other.as_rational().unwrap().clone(),
            ),
            1 => Pair::P(self.as_poly(), other.as_poly()),
            2 => Pair::F(self.as_ratfunc(), other.as_ratfunc()),
            _ => Pair::E(self.as_ext(), other.as_ext()),
        })
    }

    fn ext(&self) -> &Extension {
        self.ctx.extension.as_ref().expect("extension context")
    }

    pub fn try_add(&self, other: &ScalarValue) -> Result<ScalarValue> {
        let repr = match self.pair(other)? {
            Pair::Q(a, b) => Repr::Rational(a + b),
            Pair::P(a, b) => Repr::Poly(&a + &b),
            Pair::F(a, b) => Repr::RatFunc(a.add(&b)),
            Pair::E(a, b) => Repr::Ext(self.ext().add(&a, &b)),
        };
        Ok(Self::canonical(&self.ctx, repr))
    }

    pub fn try_sub(&self, other: &ScalarValue) -> Result<ScalarValue> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &ScalarValue) -> Result<ScalarValue> {
        let repr = match self.pair(other)? {
            Pair::Q(a, b) => Repr::Rational(a * b),
            Pair::P(a, b) => Repr::Poly(&a * &b),
            Pair::F(a, b) => Repr::RatFunc(a.mul(&b)),
            Pair::E(a, b) => {
                let e = self.ext();
                Repr::Ext(e.mul(&a, &b))
            }
        };
        Ok(Self::canonical(&self.ctx, repr))
    }

    /// Exact quotient. In polynomial contexts the quotient must lie in the
    /// coordinate ring.
    pub fn checked_div(&self, other: &ScalarValue) -> Result<ScalarValue> {
        if other.is_zero() {
            if !same_context(&self.ctx, &other.ctx) {
                return Err(Error::ContextMismatch);
            }
            return Err(Error::DivisionByZero);
        }
        let repr = match self.pair(other)? {
            Pair::Q(a, b) => Repr::Rational(a / b),
            Pair::P(a, b) => {
                if let Some(q) = a.exact_div(&b) {
                    Repr::Poly(q)
                } else {
                    Repr::RatFunc(RatFunc::new(a, b))
                }
            }
            Pair::F(a, b) => Repr::RatFunc(a.div(&b).ok_or(Error::DivisionByZero)?),
            Pair::E(a, b) => {
                let e = self.ext();
                let inv = e.inv(&b).ok_or(Error::DivisionByZero)?;
                Repr::Ext(e.mul(&a, &inv))
            }
        };
        let out = Self::canonical(&self.ctx, repr);
        if !out.in_algebra() {
            return Err(Error::NotDivisible {
                numerator: self.to_string(),
                denominator: other.to_string(),
            });
        }
        Ok(out)
    }

    /// True when the value lies in the coordinate algebra of its context
    /// (always in field contexts; in polynomial contexts the denominator may
    /// only involve base constants).
    pub fn in_algebra(&self) -> bool {
        match (&self.repr, self.ctx.kind) {
            (_, AlgebraKind::Field) => true,
            (Repr::RatFunc(f), AlgebraKind::Polynomial) => {
                f.den_free_of(&self.ctx.transcendental_vars())
            }
            _ => true,
        }
    }

    pub fn inv(&self) -> Result<ScalarValue> {
        ScalarValue::one(&self.ctx).checked_div(self)
    }

    pub fn neg(&self) -> ScalarValue {
        let repr = match &self.repr {
            Repr::Rational(q) => Repr::Rational(-q),
            Repr::Poly(p) => Repr::Poly(-p),
            Repr::RatFunc(f) => Repr::RatFunc(f.neg()),
            Repr::Ext(x) => Repr::Ext(self.ext().neg(x)),
        };
        ScalarValue {
            ctx: self.ctx.clone(),
            repr,
        }
    }

    pub fn scale(&self, q: &Rational) -> ScalarValue {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a * q),
            Repr::Poly(p) => Repr::Poly(p.scale(q)),
            Repr::RatFunc(f) => Repr::RatFunc(f.scale(q)),
            Repr::Ext(x) => Repr::Ext(
                self.ext()
                    .scale(x, &RatFunc::from_rational(self.ctx.vars.clone(), q.clone())),
            ),
        };
        Self::canonical(&self.ctx, repr)
    }

    /// Integer power; negative exponents go through [`checked_div`](Self::checked_div).
    pub fn pow(&self, e: i64) -> Result<ScalarValue> {
        if e < 0 {
            let p = self.pow(-e)?;
            return ScalarValue::one(&self.ctx)
                .checked_div(&p)
                .map_err(|err| match err {
                    Error::NotDivisible { .. } => Error::NegativeExponent,
                    other => other,
                });
        }
        let e = e as u32;
        let repr = match &self.repr {
            Repr::Rational(q) => Repr::Rational(num_traits::pow(q.clone(), e as usize)),
            Repr::Poly(p) => Repr::Poly(p.pow(e)),
            Repr::RatFunc(f) => Repr::RatFunc(f.pow(e)),
            Repr::Ext(_) => {
                let mut acc = ScalarValue::one(&self.ctx);
                let mut base = self.clone();
                let mut k = e;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = &acc * &base;
                    }
                    k >>= 1;
                    if k > 0 {
                        base = &base * &base;
                    }
                }
                return Ok(acc);
            }
        };
        Ok(Self::canonical(&self.ctx, repr))
    }

    /// ∂/∂(name) for a transcendental `name`.
    pub fn partial(&self, name: &str) -> Result<ScalarValue> {
        let t = self
            .ctx
            .transcendental_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        self.partial_index(t)
    }

    /// Partial derivative by the `t`-th transcendental.
    pub fn partial_index(&self, t: usize) -> Result<ScalarValue> {
        let var = self.ctx.transcendental_var(t);
        let repr = match &self.repr {
            Repr::Rational(_) => return Ok(ScalarValue::zero(&self.ctx)),
            Repr::Poly(p) => Repr::Poly(p.derivative(var)),
            Repr::RatFunc(f) => Repr::RatFunc(f.derivative(var)),
            Repr::Ext(x) => {
                let e = self.ext();
                Repr::Ext(
                    e.derivative(x, t, var)
                        .ok_or_else(|| Error::NotSeparable(render::render_poly(&e.relation)))?,
                )
            }
        };
        Ok(Self::canonical(&self.ctx, repr))
    }

    /// Identifiers the value actually depends on.
    pub fn free_identifiers(&self) -> Vec<String> {
        let support: Vec<usize> = match &self.repr {
            Repr::Rational(_) => Vec::new(),
            Repr::Poly(p) => p.support(),
            Repr::RatFunc(f) => {
                let mut s = f.num().support();
                s.extend(f.den().support());
                s
            }
            Repr::Ext(x) => {
                let mut s: Vec<usize> = x
                    .coeffs()
                    .iter()
                    .flat_map(|c| {
                        let mut v = c.num().support();
                        v.extend(c.den().support());
                        v
                    })
                    .collect();
                s.push(self.ext().index);
                s
            }
        };
        let mut names: Vec<String> = support.into_iter().map(|i| self.ctx.vars[i].clone()).collect();
        names.sort();
        names.dedup();
        names
    }

    /// Image under the ring homomorphism sending each identifier to its
    /// binding. Unbound base constants map to the same-named constant of
    /// the target.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, ScalarValue>,
        target: &Arc<ScalarContext>,
    ) -> Result<ScalarValue> {
        let images = binding_images(&self.ctx, bindings, target)?;
        let image_of = |p: &MultiPoly| eval_poly(p, &images, target);
        match &self.repr {
            Repr::Rational(q) => Ok(ScalarValue::from_rational(target, q.clone())),
            Repr::Poly(p) => image_of(p),
            Repr::RatFunc(f) => ratio_image(image_of(f.num())?, image_of(f.den())?),
            Repr::Ext(x) => {
                let e = self.ext();
                let y = images[e.index]
                    .clone()
                    .ok_or_else(|| Error::IncompleteBindings(e.generator.clone()))?;
                let mut acc = ScalarValue::zero(target);
                let mut ypow = ScalarValue::one(target);
                for c in x.coeffs() {
                    if !c.is_zero() {
                        let ci = ratio_image(image_of(c.num())?, image_of(c.den())?)?;
                        acc = acc.try_add(&ci.try_mul(&ypow)?)?;
                    }
                    ypow = ypow.try_mul(&y)?;
                }
                Ok(acc)
            }
        }
    }
}

fn binding_images(
    src: &ScalarContext,
    bindings: &BTreeMap<String, ScalarValue>,
    target: &Arc<ScalarContext>,
) -> Result<Vec<Option<ScalarValue>>> {
    let mut images: Vec<Option<ScalarValue>> = vec![None; src.vars.len()];
    for (i, name) in src.vars.iter().enumerate() {
        if let Some(v) = bindings.get(name) {
            if !same_context(v.context(), target) {
                return Err(Error::ContextMismatch);
            }
            images[i] = Some(v.clone());
        } else if src.constants.contains(name) && target.constants.contains(name) {
            images[i] = Some(ScalarValue::variable(target, name)?);
        }
    }
    Ok(images)
}

/// Image of a polynomial over `src`'s variable list (the algebraic
/// generator treated as a free variable).
pub(crate) fn substitute_poly(
    src: &ScalarContext,
    p: &MultiPoly,
    bindings: &BTreeMap<String, ScalarValue>,
    target: &Arc<ScalarContext>,
) -> Result<ScalarValue> {
    let images = binding_images(src, bindings, target)?;
    eval_poly(p, &images, target)
}

fn ratio_image(num: ScalarValue, den: ScalarValue) -> Result<ScalarValue> {
    if den.is_zero() {
        return Err(Error::TargetDivisionByZero);
    }
    num.checked_div(&den)
}

fn eval_poly(
    p: &MultiPoly,
    images: &[Option<ScalarValue>],
    target: &Arc<ScalarContext>,
) -> Result<ScalarValue> {
    let mut powers: Vec<Vec<ScalarValue>> = vec![Vec::new(); images.len()];
    let mut acc = ScalarValue::zero(target);
    for (m, c) in p.terms() {
        let mut term = ScalarValue::from_rational(target, c.clone());
        for (v, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = images[v]
                .as_ref()
                .ok_or_else(|| Error::IncompleteBindings(p.vars()[v].clone()))?;
            let cache = &mut powers[v];
            if cache.is_empty() {
                cache.push(ScalarValue::one(target));
            }
            while cache.len() <= e as usize {
                let next = cache.last().unwrap().try_mul(base)?;
                cache.push(next);
            }
            term = term.try_mul(&cache[e as usize])?;
        }
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

impl Add for &ScalarValue {
    type Output = ScalarValue;
    fn add(self, rhs: &ScalarValue) -> ScalarValue {
        self.try_add(rhs).expect("scalar context mismatch")
    }
}

impl Sub for &ScalarValue {
    type Output = ScalarValue;
    fn sub(self, rhs: &ScalarValue) -> ScalarValue {
        self.try_sub(rhs).expect("scalar context mismatch")
    }
}

impl Mul for &ScalarValue {
    type Output = ScalarValue;
    fn mul(self, rhs: &ScalarValue) -> ScalarValue {
        self.try_mul(rhs).expect("scalar context mismatch")
    }
}

impl Neg for &ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        ScalarValue::neg(self)
    }
}

pub fn scalar_add(a: &ScalarValue, b: &ScalarValue) -> Result<ScalarValue> {
    a.try_add(b)
}

pub fn scalar_mul(a: &ScalarValue, b: &ScalarValue) -> Result<ScalarValue> {
    a.try_mul(b)
}

pub fn scalar_div(a: &ScalarValue, b: &ScalarValue) -> Result<ScalarValue> {
    a.checked_div(b)
}

pub fn scalar_partial(a: &ScalarValue, var: &str) -> Result<ScalarValue> {
    a.partial(var)
}

pub fn substitute(
    a: &ScalarValue,
    bindings: &BTreeMap<String, ScalarValue>,
    target: &Arc<ScalarContext>,
) -> Result<ScalarValue> {
    a.substitute(bindings, target)
}

pub fn parse_scalar(text: &str, ctx: &Arc<ScalarContext>) -> Result<ScalarValue> {
    parse::parse(text, ctx)
}

pub fn render_scalar(a: &ScalarValue) -> String {
    render::render_scalar(a)
}

/// Σ over an iterator, starting from zero in `ctx`.
pub fn sum(ctx: &Arc<ScalarContext>, items: impl IntoIterator<Item = ScalarValue>) -> ScalarValue {
    items
        .into_iter()
        .fold(ScalarValue::zero(ctx), |acc, x| &acc + &x)
}

#[cfg(test)]
mod tests;
