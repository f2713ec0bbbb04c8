//! Algebraifold homomorphisms, pullbacks and differentials, transported
//! connections, formal lines and geodesic residuals.
//!
//! A homomorphism `φ: A → B` is given by the images of the generators of
//! `A`. Elements of `φ_* D_A = B ⊗ D_A` are coefficient vectors over `B`
//! against `1 ⊗ u_i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebraifold::{build_algebraifold, AlgebraifoldDescriptor, Derivation, OneForm};
use crate::connection::ConnectionCoeffs;
use crate::error::{Error, Result};
use crate::scalar::{
    render::render_poly, substitute_poly, sum, AlgebraKind, MultiPoly, RatFunc, Repr,
    ScalarContext, ScalarValue, UPoly,
};

/// An element `Σ b_i ⊗ u_i` of `φ_* D_A`, coefficients in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulledModuleElem {
    coeffs: Vec<ScalarValue>,
}

impl PulledModuleElem {
    pub fn new(coeffs: Vec<ScalarValue>) -> Self {
        PulledModuleElem { coeffs }
    }

    pub fn coeffs(&self) -> &[ScalarValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ScalarValue::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        PulledModuleElem {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, b: &ScalarValue) -> Self {
        PulledModuleElem {
            coeffs: self.coeffs.iter().map(|c| c * b).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraifoldHom {
    source: AlgebraifoldDescriptor,
    target: AlgebraifoldDescriptor,
    images: BTreeMap<String, ScalarValue>,
    /// `φ(a_i)`.
    coordinate_images: Vec<ScalarValue>,
}

impl AlgebraifoldHom {
    pub fn source(&self) -> &AlgebraifoldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &AlgebraifoldDescriptor {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<String, ScalarValue> {
        &self.images
    }

    /// `φ(a)`.
    pub fn apply(&self, a: &ScalarValue) -> Result<ScalarValue> {
        self.source.owns(a)?;
        a.substitute(&self.images, self.target.context())
    }

    /// `ψ ∘ φ` for `ψ` defined on the target of `self`.
    pub fn then(&self, psi: &AlgebraifoldHom) -> Result<AlgebraifoldHom> {
        if !self.target.same(&psi.source) {
            return Err(Error::DescriptorMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|(g, v)| Ok((g.clone(), psi.apply(v)?)))
            .collect::<Result<_>>()?;
        build_hom(&self.source, &psi.target, images)
    }
}

/// Validates generator images: every source generator needs an image in the
/// target, the source relation must map to zero, and the explicit pullback
/// must satisfy `Ω_φ(dg) = d(φ(g))` on every generator.
pub fn build_hom(
    source: &AlgebraifoldDescriptor,
    target: &AlgebraifoldDescriptor,
    images: BTreeMap<String, ScalarValue>,
) -> Result<AlgebraifoldHom> {
    let sctx = source.context();
    let generators = sctx.generators();
    for g in &generators {
        match images.get(g) {
            None => return Err(Error::MissingImage(g.clone())),
            Some(v) => target.owns(v)?,
        }
    }
    for name in images.keys() {
        if !generators.contains(name) {
            return Err(Error::UnknownIdentifier(name.clone()));
        }
    }
    for c in sctx.constants() {
        if !target.context().constants().contains(c) {
            return Err(Error::InvalidContext(format!(
                "base constant `{c}` is not declared in the target"
            )));
        }
    }
    if let Some(e) = sctx.extension() {
        let residual = substitute_poly(sctx, e.relation(), &images, target.context())?;
        if !residual.is_zero() {
            return Err(Error::RelationNotPreserved {
                relation: render_poly(e.relation()),
                residual: residual.to_string(),
            });
        }
    }
    let coordinate_images = sctx
        .transcendentals()
        .iter()
        .map(|x| images[x].clone())
        .collect();
    let hom = AlgebraifoldHom {
        source: source.clone(),
        target: target.clone(),
        images,
        coordinate_images,
    };
    for g in &generators {
        let gv = ScalarValue::variable(sctx, g)?;
        let lhs = pullback_one_form(&hom, &source.differential_d(&gv)?)?;
        let rhs = target.differential_d(&hom.images[g])?;
        let residual = lhs.sub(&rhs);
        if !residual.is_zero() {
            return Err(Error::PullbackVerificationFailed {
                generator: g.clone(),
                residual: residual.to_string(),
            });
        }
    }
    Ok(hom)
}

/// `Ω_φ(ξ) = Σ_i φ(ξ_i) d(φ(a_i))` in the target's `da` basis.
pub fn pullback_one_form(phi: &AlgebraifoldHom, xi: &OneForm) -> Result<OneForm> {
    let mut acc = OneForm::zero(&phi.target);
    for (c, img) in xi.coeffs().iter().zip(&phi.coordinate_images) {
        if c.is_zero() {
            continue;
        }
        let d = phi.target.differential_d(img)?;
        acc = acc.add(&d.scale(&phi.apply(c)?));
    }
    Ok(acc)
}

/// `D_φ(w) = Σ_i w(φ(a_i)) ⊗ u_i`.
pub fn differential(phi: &AlgebraifoldHom, w: &Derivation) -> Result<PulledModuleElem> {
    let coeffs = phi
        .coordinate_images
        .iter()
        .map(|img| phi.target.apply_derivation(w, img))
        .collect::<Result<_>>()?;
    Ok(PulledModuleElem { coeffs })
}

/// Pairs `1 ⊗ ξ` with an element of `φ_* D_A`: `Σ φ(ξ_i) b_i`.
pub fn pair_pulled(phi: &AlgebraifoldHom, xi: &OneForm, s: &PulledModuleElem) -> Result<ScalarValue> {
    let terms = xi
        .coeffs()
        .iter()
        .zip(s.coeffs())
        .map(|(c, b)| Ok(&phi.apply(c)? * b))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum(phi.target.context(), terms))
}

/// `(φ_*∇)_w (Σ_j b_j ⊗ u_j) = Σ_j [w(b_j) ⊗ u_j + b_j D_φ(w)_(1) ⊗ ∇_{D_φ(w)_(2)} u_j]`,
/// i.e. `w(b_k) + Σ_{i,j} c_i b_j φ(Γ^k_{ij})` with `c = D_φ(w)`.
pub fn pushforward_connection(
    phi: &AlgebraifoldHom,
    conn: &ConnectionCoeffs,
    w: &Derivation,
    s: &PulledModuleElem,
) -> Result<PulledModuleElem> {
    conn.gamma().check_owner(&phi.source)?;
    let n = phi.source.dim();
    if s.coeffs.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: s.coeffs.len() });
    }
    let c = differential(phi, w)?;
    let mut out: Vec<ScalarValue> = s
        .coeffs
        .iter()
        .map(|b| phi.target.apply_derivation(w, b))
        .collect::<Result<_>>()?;
    for (idx, g) in conn.gamma().entries() {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let weight = &c.coeffs[i] * &s.coeffs[j];
        if weight.is_zero() {
            continue;
        }
        out[k] = &out[k] + &(&weight * &phi.apply(g)?);
    }
    Ok(PulledModuleElem { coeffs: out })
}

/// Which line a [`FormalLine`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineKind {
    /// `k[t]`, a formal line.
    Polynomial,
    /// `k(t)`: carries `d/dt` but is not a formal line.
    Rational,
}

/// The line `k[t]` (or the diagnostic `k(t)`) with `∂ = d/dt`, over the
/// base constants `k = ℚ(params)`.
#[derive(Clone, Debug)]
pub struct FormalLine {
    descriptor: AlgebraifoldDescriptor,
    kind: LineKind,
}

impl FormalLine {
    pub fn new<S: AsRef<str>>(variable: &str, constants: &[S], kind: LineKind) -> Result<Self> {
        let algebra = match kind {
            LineKind::Polynomial => AlgebraKind::Polynomial,
            LineKind::Rational => AlgebraKind::Field,
        };
        let ctx = ScalarContext::builder(algebra)
            .constants(constants)
            .transcendentals(&[variable])
            .build()?;
        Ok(FormalLine {
            descriptor: build_algebraifold(&ctx)?,
            kind,
        })
    }

    /// `ℚ[t]`.
    pub fn polynomial(variable: &str) -> Result<Self> {
        Self::new::<&str>(variable, &[], LineKind::Polynomial)
    }

    /// `ℚ(t)`.
    pub fn rational(variable: &str) -> Result<Self> {
        Self::new::<&str>(variable, &[], LineKind::Rational)
    }

    pub fn descriptor(&self) -> &AlgebraifoldDescriptor {
        &self.descriptor
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        self.descriptor.context()
    }

    pub fn kind(&self) -> LineKind {
        self.kind
    }

    pub fn is_formal_line(&self) -> bool {
        self.kind == LineKind::Polynomial
    }

    /// `∂ = d/dt`.
    pub fn del(&self) -> Derivation {
        Derivation::basis(&self.descriptor, 0)
    }

    /// The element `t` with `∂t = 1`.
    pub fn t_elem(&self) -> ScalarValue {
        self.descriptor.dual_coordinates()[0].clone()
    }

    pub fn parse(&self, text: &str) -> Result<ScalarValue> {
        self.descriptor.parse(text)
    }

    /// `∫a` with zero constant term.
    pub fn antiderivative(&self, a: &ScalarValue) -> Result<ScalarValue> {
        self.descriptor.owns(a)?;
        let ctx = self.context();
        let t = ctx.transcendental_var(0);
        match a.repr() {
            Repr::Rational(_) | Repr::Poly(_) => {
                let p = match a.repr() {
                    Repr::Poly(p) => p.clone(),
                    Repr::Rational(q) => MultiPoly::constant(ctx.vars().clone(), q.clone()),
                    _ => unreachable!(),
                };
                ScalarValue::from_poly(ctx, integrate_poly(&p, t))
            }
            Repr::RatFunc(f) if !f.den().involves(t) => {
                let num = integrate_poly(f.num(), t);
                ScalarValue::from_ratfunc(ctx, RatFunc::new(num, f.den().clone()))
            }
            Repr::RatFunc(f) => {
                let r = rational_antiderivative(f, t)
                    .ok_or_else(|| Error::NoAntiderivative(a.to_string()))?;
                ScalarValue::from_ratfunc(ctx, r)
            }
            Repr::Ext(_) => Err(Error::NoAntiderivative(a.to_string())),
        }
    }
}

fn integrate_poly(p: &MultiPoly, t: usize) -> MultiPoly {
    MultiPoly::from_terms(
        p.vars().clone(),
        p.terms().iter().map(|(m, c)| {
            let mut m = m.clone();
            m[t] += 1;
            let e = m[t] as i64;
            (m, c / crate::scalar::rational(e, 1))
        }),
    )
}

/// Splits off the polynomial part and runs Ostrogradsky's method on the
/// proper part: `∫ P/Q = P₁/Q₁ + ∫ P₂/Q₂` with `Q₁ = gcd(Q, Q')`,
/// `Q₂ = Q/Q₁`. The antiderivative is rational exactly when `P₂ = 0`.
fn rational_antiderivative(f: &RatFunc, t: usize) -> Option<RatFunc> {
    let vars = f.vars().clone();
    let to_u = |p: &MultiPoly| {
        UPoly::new(
            vars.clone(),
            p.coeffs_in(t).into_iter().map(RatFunc::from_poly).collect(),
        )
    };
    let from_u = |u: &UPoly| -> RatFunc {
        let tv = RatFunc::from_poly(MultiPoly::var(vars.clone(), t));
        let mut acc = RatFunc::zero(vars.clone());
        for k in (0..u.coeffs().len()).rev() {
            acc = acc.mul(&tv).add(&u.coeff(k));
        }
        acc
    };
    let num = to_u(f.num());
    let den = to_u(f.den());
    let (quot, rem) = num.div_rem(&den);

    let q1 = den.gcd(&den.derivative());
    let (q2, _) = den.div_rem(&q1);
    let (h, _) = q1.derivative().mul(&q2).div_rem(&q1);
    let m1 = q1.degree().unwrap_or(0);
    let m2 = q2.degree().unwrap_or(0);
    let size = m1 + m2;
    let zero = RatFunc::zero(vars.clone());
    let monomial = |k: usize| {
        let mut c = vec![zero.clone(); k + 1];
        c[k] = RatFunc::one(vars.clone());
        UPoly::new(vars.clone(), c)
    };
    // columns: P₁ = Σ p_k t^k contributes (k t^{k−1}) Q₂ − t^k H, P₂ = Σ r_k t^k contributes t^k Q₁
    let mut columns: Vec<UPoly> = Vec::with_capacity(size);
    for k in 0..m1 {
        columns.push(monomial(k).derivative().mul(&q2).sub(&monomial(k).mul(&h)));
    }
    for k in 0..m2 {
        columns.push(monomial(k).mul(&q1));
    }
    let mut rows: Vec<Vec<RatFunc>> = (0..size)
        .map(|r| {
            let mut row: Vec<RatFunc> = columns.iter().map(|c| c.coeff(r)).collect();
            row.push(rem.coeff(r));
            row
        })
        .collect();
    let sol = solve(&mut rows, size)?;
    if sol[m1..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let p1 = UPoly::new(vars.clone(), sol[..m1].to_vec());
    let proper = from_u(&p1).div(&from_u(&q1))?;
    let poly_part = from_u(&quot);
    // ∫ of the polynomial part, whose coefficients are free of t
    let integrated = integrate_poly(poly_part.num(), t);
    Some(RatFunc::new(integrated, poly_part.den().clone()).add(&proper))
}

/// Gaussian elimination on an augmented square system; `None` if singular.
fn solve(rows: &mut [Vec<RatFunc>], n: usize) -> Option<Vec<RatFunc>> {
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].inv()?;
        for c in col..=n {
            rows[col][c] = rows[col][c].mul(&inv);
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=n {
                    let delta = factor.mul(&rows[col][c]);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[n].clone()).collect())
}

/// `(φ_*∇)_∂ (D_φ ∂)`; zero exactly for geodesics.
pub fn geodesic_residual(phi: &AlgebraifoldHom, conn: &ConnectionCoeffs) -> Result<PulledModuleElem> {
    let line = phi.target();
    if line.dim() != 1 {
        return Err(Error::NotALine(format!(
            "target has {} coordinates, expected 1",
            line.dim()
        )));
    }
    let del = Derivation::basis(line, 0);
    let velocity = differential(phi, &del)?;
    pushforward_connection(phi, conn, &del, &velocity)
}

pub fn antiderivative(line: &FormalLine, a: &ScalarValue) -> Result<ScalarValue> {
    line.antiderivative(a)
}

#[cfg(test)]
mod tests;
