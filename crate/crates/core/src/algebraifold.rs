//! Coordinate algebras with a free derivation basis and its dual basis.
//!
//! A descriptor fixes elements `a_1..a_n` (the transcendental coordinates)
//! and derivations `u_1..u_n` (the coordinate partials, with the algebraic
//! generator differentiated implicitly). Derivations and one-forms are
//! stored as coefficient vectors against `u_i` and `da_i` respectively.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{
    base_root, render_scalar, same_context, sum, RootSearch, ScalarContext, ScalarValue,
};

#[derive(Clone, Debug)]
pub struct AlgebraifoldDescriptor {
    ctx: Arc<ScalarContext>,
    dual_coordinates: Vec<ScalarValue>,
    action: Vec<Vec<ScalarValue>>,
    warnings: Vec<String>,
}

/// A derivation `Σ c_i u_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    coeffs: Vec<ScalarValue>,
}

/// A one-form `Σ c_i da_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    coeffs: Vec<ScalarValue>,
}

macro_rules! coefficient_vector {
    ($t:ident) => {
        impl $t {
            pub fn new(coeffs: Vec<ScalarValue>) -> Self {
                $t { coeffs }
            }

            pub fn zero(a: &AlgebraifoldDescriptor) -> Self {
                $t {
                    coeffs: vec![ScalarValue::zero(&a.ctx); a.dim()],
                }
            }

            /// The `i`-th basis element (0-based).
            pub fn basis(a: &AlgebraifoldDescriptor, i: usize) -> Self {
                let mut c = Self::zero(a);
                c.coeffs[i] = ScalarValue::one(&a.ctx);
                c
            }

            pub fn coeffs(&self) -> &[ScalarValue] {
                &self.coeffs
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(ScalarValue::is_zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                $t {
                    coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t {
                    coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
                }
            }

            /// Multiplication by an element of the algebra.
            pub fn scale(&self, a: &ScalarValue) -> Self {
                $t {
                    coeffs: self.coeffs.iter().map(|c| c * a).collect(),
                }
            }
        }
    };
}

coefficient_vector!(Derivation);
coefficient_vector!(OneForm);

impl OneForm {
    /// `η(v) = Σ η_i v_i`, using `da_i(u_j) = δ_ij`.
    pub fn pair(&self, a: &AlgebraifoldDescriptor, v: &Derivation) -> ScalarValue {
        sum(&a.ctx, self.coeffs.iter().zip(&v.coeffs).map(|(x, y)| x * y))
    }
}

impl AlgebraifoldDescriptor {
    pub fn context(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dual_coordinates.len()
    }

    pub fn dual_coordinates(&self) -> &[ScalarValue] {
        &self.dual_coordinates
    }

    /// The matrix `M[i][j] = u_i(a_j)`.
    pub fn action_table(&self) -> &[Vec<ScalarValue>] {
        &self.action
    }

    /// Notes raised while building (e.g. irreducibility not verified).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn zero(&self) -> ScalarValue {
        ScalarValue::zero(&self.ctx)
    }

    pub fn one(&self) -> ScalarValue {
        ScalarValue::one(&self.ctx)
    }

    pub fn parse(&self, text: &str) -> Result<ScalarValue> {
        crate::scalar::parse_scalar(text, &self.ctx)
    }

    pub(crate) fn same(&self, other: &AlgebraifoldDescriptor) -> bool {
        self.dim() == other.dim() && same_context(&self.ctx, &other.ctx)
    }

    pub(crate) fn owns(&self, a: &ScalarValue) -> Result<()> {
        if same_context(a.context(), &self.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.dim() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.dim(),
                found: n,
            })
        }
    }

    /// Replaces the action table with an arbitrary invertible matrix.
    pub fn with_action_table(self, m: Vec<Vec<ScalarValue>>) -> Result<Self> {
        let out = self.with_action_table_unchecked(m)?;
        let det = crate::tensor::determinant(&out.ctx, &out.action);
        if det.is_zero() {
            return Err(Error::SingularBasisAction);
        }
        Ok(out)
    }

    /// Replaces the action table without checking invertibility. Meant for
    /// exercising [`dual_basis_verify`] on broken data.
    pub fn with_action_table_unchecked(mut self, m: Vec<Vec<ScalarValue>>) -> Result<Self> {
        self.check_len(m.len())?;
        for row in &m {
            self.check_len(row.len())?;
            for v in row {
                self.owns(v)?;
            }
        }
        self.action = m;
        Ok(self)
    }

    /// `u_i(a)` for every basis derivation.
    pub fn basis_action(&self, a: &ScalarValue) -> Result<Vec<ScalarValue>> {
        self.owns(a)?;
        (0..self.dim()).map(|i| a.partial_index(i)).collect()
    }

    /// `da` expressed against `da_1..da_n`.
    pub fn differential_d(&self, a: &ScalarValue) -> Result<OneForm> {
        Ok(OneForm::new(self.basis_action(a)?))
    }

    pub fn apply_derivation(&self, v: &Derivation, a: &ScalarValue) -> Result<ScalarValue> {
        self.check_len(v.len())?;
        for c in v.coeffs() {
            self.owns(c)?;
        }
        let d = self.basis_action(a)?;
        Ok(sum(&self.ctx, v.coeffs().iter().zip(&d).map(|(c, x)| c * x)))
    }

    /// `[u,v]_j = u(v_j) − v(u_j)`.
    pub fn lie_bracket(&self, u: &Derivation, v: &Derivation) -> Result<Derivation> {
        let coeffs = (0..self.dim())
            .map(|j| {
                let a = self.apply_derivation(u, &v.coeffs()[j])?;
                let b = self.apply_derivation(v, &u.coeffs()[j])?;
                Ok(&a - &b)
            })
            .collect::<Result<_>>()?;
        Ok(Derivation::new(coeffs))
    }

    /// Residuals of the dual-basis identities, evaluated on every generator.
    pub fn dual_basis_verify(&self) -> DualBasisReport {
        let n = self.dim();
        let generators: Vec<(String, ScalarValue)> = self
            .ctx
            .generators()
            .into_iter()
            .map(|g| {
                let v = ScalarValue::variable(&self.ctx, &g).expect("declared generator");
                (g, v)
            })
            .collect();
        let partials: Vec<Vec<ScalarValue>> = generators
            .iter()
            .map(|(_, g)| self.basis_action(g).expect("own generator"))
            .collect();
        let mut entries = Vec::new();
        // Σ_i u_j(a_i) u_i − u_j applied to each generator
        for j in 0..n {
            for (gi, (name, _)) in generators.iter().enumerate() {
                let lhs = sum(
                    &self.ctx,
                    (0..n).map(|i| &self.action[j][i] * &partials[gi][i]),
                );
                let residual = &lhs - &partials[gi][j];
                entries.push(DualBasisResidual {
                    identity: "derivation",
                    basis: j + 1,
                    generator: name.clone(),
                    residual,
                });
            }
        }
        // Σ_i da_j(u_i) da_i − da_j applied to each u_k, where da_i(u_k) = M[k][i]
        for j in 0..n {
            for k in 0..n {
                let lhs = sum(
                    &self.ctx,
                    (0..n).map(|i| &self.action[i][j] * &self.action[k][i]),
                );
                let residual = &lhs - &self.action[k][j];
                entries.push(DualBasisResidual {
                    identity: "one_form",
                    basis: j + 1,
                    generator: format!("u{}", k + 1),
                    residual,
                });
            }
        }
        DualBasisReport { entries }
    }

    /// `Σ_i u_i(a_i)`, the trace of the action table.
    pub fn dimension(&self) -> ScalarValue {
        sum(&self.ctx, (0..self.dim()).map(|i| self.action[i][i].clone()))
    }

    /// True when every basis derivation kills `a`.
    pub fn constants_check(&self, a: &ScalarValue) -> Result<bool> {
        Ok(self.basis_action(a)?.iter().all(ScalarValue::is_zero))
    }
}

#[derive(Clone, Debug)]
pub struct DualBasisResidual {
    /// `"derivation"` or `"one_form"`.
    pub identity: &'static str,
    /// 1-based basis index `j`.
    pub basis: usize,
    /// Generator (or basis derivation) the identity was evaluated on.
    pub generator: String,
    pub residual: ScalarValue,
}

#[derive(Clone, Debug)]
pub struct DualBasisReport {
    pub entries: Vec<DualBasisResidual>,
}

impl DualBasisReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &DualBasisResidual> {
        self.entries.iter().filter(|e| !e.residual.is_zero())
    }
}

/// Coordinate descriptor: `a_i = x_i`, `u_i = ∂/∂x_i`.
pub fn build_algebraifold(ctx: &Arc<ScalarContext>) -> Result<AlgebraifoldDescriptor> {
    let mut warnings = Vec::new();
    if let Some(e) = ctx.extension() {
        let relation = crate::scalar::render::render_poly(e.relation());
        if !e.is_separable() || e.generator_derivatives.is_none() {
            return Err(Error::NotSeparable(relation));
        }
        match e.degree() {
            0 | 1 => {}
            2 | 3 => match base_root(e.relation(), e.index) {
                RootSearch::NoRoot => {}
                RootSearch::Root(r) => {
                    return Err(Error::ReducibleRelation {
                        relation,
                        root: crate::scalar::render::render_ratfunc(&r),
                    })
                }
                RootSearch::Inconclusive => warnings.push(format!(
                    "irreducibility of `{relation}` could not be decided; accepted as declared"
                )),
            },
            d => warnings.push(format!(
                "irreducibility of `{relation}` (degree {d} in `{}`) is not verified; accepted as declared",
                e.generator()
            )),
        }
    }
    let n = ctx.transcendentals().len();
    let dual_coordinates = ctx
        .transcendentals()
        .iter()
        .map(|x| ScalarValue::variable(ctx, x))
        .collect::<Result<Vec<_>>>()?;
    let action = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| dual_coordinates[j].partial_index(i))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgebraifoldDescriptor {
        ctx: ctx.clone(),
        dual_coordinates,
        action,
        warnings,
    })
}

pub fn apply_derivation(
    a: &AlgebraifoldDescriptor,
    v: &Derivation,
    x: &ScalarValue,
) -> Result<ScalarValue> {
    a.apply_derivation(v, x)
}

pub fn differential_d(a: &AlgebraifoldDescriptor, x: &ScalarValue) -> Result<OneForm> {
    a.differential_d(x)
}

pub fn lie_bracket(a: &AlgebraifoldDescriptor, u: &Derivation, v: &Derivation) -> Result<Derivation> {
    a.lie_bracket(u, v)
}

pub fn dual_basis_verify(a: &AlgebraifoldDescriptor) -> DualBasisReport {
    a.dual_basis_verify()
}

pub fn dimension(a: &AlgebraifoldDescriptor) -> ScalarValue {
    a.dimension()
}

pub fn constants_check(a: &AlgebraifoldDescriptor, x: &ScalarValue) -> Result<bool> {
    a.constants_check(x)
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(render_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl std::fmt::Display for OneForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(render_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests;
