//! Connections as difference tensors against the standard connection,
//! torsion, curvature, the Levi–Civita connection and Einstein tensors.
//!
//! Component conventions: `Γ^k_{ij}` is stored at `[k, i, j]` with `i` the
//! direction and `j` the argument, so `∇_u v = u(v^k) + Γ^k_{ij} u^i v^j`.
//! The Riemann tensor `R^k_{ijl}` is stored at `[k, i, j, l]` and equals the
//! `k`-th component of `R(u_i, u_j) u_l`. Ricci contracts the first argument
//! with the output: `Ric_{jl} = Σ_i R^i_{ijl}`.

use crate::algebraifold::{AlgebraifoldDescriptor, Derivation};
use crate::error::{Error, Result};
use crate::scalar::{rational, sum, ScalarValue};
use crate::tensor::{Metric, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionCoeffs {
    gamma: Tensor,
}

impl ConnectionCoeffs {
    /// Any rank-(1,2) tensor is admissible.
    pub fn new(a: &AlgebraifoldDescriptor, gamma: Tensor) -> Result<Self> {
        gamma.check_owner(a)?;
        gamma.expect_rank(1, 2)?;
        Ok(ConnectionCoeffs { gamma })
    }

    pub fn gamma(&self) -> &Tensor {
        &self.gamma
    }

    /// `Γ^k_{ij}`, 0-based.
    pub fn get(&self, k: usize, i: usize, j: usize) -> ScalarValue {
        self.gamma.get(&[k, i, j])
    }

    /// `A^k_l = Σ_i u^i Γ^k_{il}`, the correction matrix for direction `u`.
    fn correction(&self, a: &AlgebraifoldDescriptor, u: &Derivation) -> Vec<Vec<ScalarValue>> {
        let n = a.dim();
        let mut m = vec![vec![a.zero(); n]; n];
        for (idx, g) in self.gamma.entries() {
            let (k, i, l) = (idx[0], idx[1], idx[2]);
            let c = &u.coeffs()[i];
            if !c.is_zero() {
                m[k][l] = &m[k][l] + &(c * g);
            }
        }
        m
    }
}

/// Γ = 0.
pub fn standard_connection(a: &AlgebraifoldDescriptor) -> ConnectionCoeffs {
    ConnectionCoeffs {
        gamma: Tensor::zero(a, 1, 2),
    }
}

/// `∇_u v`.
pub fn nabla(
    a: &AlgebraifoldDescriptor,
    c: &ConnectionCoeffs,
    u: &Derivation,
    v: &Derivation,
) -> Result<Derivation> {
    c.gamma.check_owner(a)?;
    let m = c.correction(a, u);
    let coeffs = (0..a.dim())
        .map(|k| {
            let direct = a.apply_derivation(u, &v.coeffs()[k])?;
            let corr = sum(a.context(), (0..a.dim()).map(|l| &m[k][l] * &v.coeffs()[l]));
            Ok(&direct + &corr)
        })
        .collect::<Result<_>>()?;
    Ok(Derivation::new(coeffs))
}

/// `∇_u T`: the componentwise `u`-derivative, `+Γ` on every contravariant
/// slot and `−Γ` on every covariant slot.
pub fn covariant_derivative(
    a: &AlgebraifoldDescriptor,
    c: &ConnectionCoeffs,
    u: &Derivation,
    t: &Tensor,
) -> Result<Tensor> {
    t.check_owner(a)?;
    c.gamma.check_owner(a)?;
    let n = a.dim();
    let m = c.correction(a, u);
    let (r, _) = t.rank();
    let (tr, ts) = t.rank();
    let mut out = Tensor::zero(a, tr, ts);
    for (idx, v) in t.entries() {
        out.accumulate(idx.clone(), a.apply_derivation(u, v)?);
        for p in 0..idx.len() {
            for k in 0..n {
                let mut target = idx.clone();
                target[p] = k;
                if p < r {
                    let f = &m[k][idx[p]];
                    if !f.is_zero() {
                        out.accumulate(target, f * v);
                    }
                } else {
                    let f = &m[idx[p]][k];
                    if !f.is_zero() {
                        out.accumulate(target, (f * v).neg());
                    }
                }
            }
        }
    }
    Ok(out)
}

fn basis(a: &AlgebraifoldDescriptor) -> Vec<Derivation> {
    (0..a.dim()).map(|i| Derivation::basis(a, i)).collect()
}

/// `T(u,v) = ∇_u v − ∇_v u − [u,v]` on the basis, as a rank-(1,2) tensor.
pub fn torsion(a: &AlgebraifoldDescriptor, c: &ConnectionCoeffs) -> Result<Tensor> {
    let b = basis(a);
    let n = a.dim();
    let mut out = Tensor::zero(a, 1, 2);
    for i in 0..n {
        for j in 0..n {
            let t = nabla(a, c, &b[i], &b[j])?
                .sub(&nabla(a, c, &b[j], &b[i])?)
                .sub(&a.lie_bracket(&b[i], &b[j])?);
            for (k, v) in t.coeffs().iter().enumerate() {
                out.set(vec![k, i, j], v.clone())?;
            }
        }
    }
    Ok(out)
}

/// `R(u,v)w = ∇_u∇_v w − ∇_v∇_u w − ∇_{[u,v]} w` on the basis.
pub fn curvature_tensor(a: &AlgebraifoldDescriptor, c: &ConnectionCoeffs) -> Result<Tensor> {
    let b = basis(a);
    let n = a.dim();
    // inner[j][l] = ∇_{u_j} u_l
    let inner: Vec<Vec<Derivation>> = (0..n)
        .map(|j| (0..n).map(|l| nabla(a, c, &b[j], &b[l])).collect())
        .collect::<Result<_>>()?;
    let mut out = Tensor::zero(a, 1, 3);
    for i in 0..n {
        for j in 0..n {
            let bracket = a.lie_bracket(&b[i], &b[j])?;
            for l in 0..n {
                let mut r = nabla(a, c, &b[i], &inner[j][l])?.sub(&nabla(a, c, &b[j], &inner[i][l])?);
                if !bracket.is_zero() {
                    r = r.sub(&nabla(a, c, &bracket, &b[l])?);
                }
                for (k, v) in r.coeffs().iter().enumerate() {
                    out.set(vec![k, i, j, l], v.clone())?;
                }
            }
        }
    }
    Ok(out)
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_j g_{il} + ∂_i g_{jl} − ∂_l g_{ij})`.
pub fn levi_civita(a: &AlgebraifoldDescriptor, m: &Metric) -> Result<ConnectionCoeffs> {
    m.g().check_owner(a)?;
    let n = a.dim();
    let g = m.g().to_matrix().expect("rank two");
    let g_inv = m.g_inv().to_matrix().expect("rank two");
    // dg[l][i][j] = ∂_l g_ij
    let dg: Vec<Vec<Vec<ScalarValue>>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|i| (0..n).map(|j| g[i][j].partial_index(l)).collect())
                .collect()
        })
        .collect::<Result<_>>()?;
    let half = rational(1, 2);
    // first-kind symbols Γ_{l,ij}
    let first = |l: usize, i: usize, j: usize| -> ScalarValue {
        (&(&dg[j][i][l] + &dg[i][j][l]) - &dg[l][i][j]).scale(&half)
    };
    let mut gamma = Tensor::zero(a, 1, 2);
    for i in 0..n {
        for j in i..n {
            let lowered: Vec<ScalarValue> = (0..n).map(|l| first(l, i, j)).collect();
            for k in 0..n {
                let v = sum(a.context(), (0..n).map(|l| &g_inv[k][l] * &lowered[l]));
                if i != j {
                    gamma.set(vec![k, j, i], v.clone())?;
                }
                gamma.set(vec![k, i, j], v)?;
            }
        }
    }
    Ok(ConnectionCoeffs { gamma })
}

fn metric_pair(a: &AlgebraifoldDescriptor, m: &Metric, u: &Derivation, v: &Derivation) -> Result<ScalarValue> {
    m.g().check_owner(a)?;
    m.g().evaluate(&[], &[u.clone(), v.clone()])
}

/// Right-hand side of Koszul's formula for `g(∇_u v, w)`, bracket terms
/// included.
pub fn koszul_rhs(
    a: &AlgebraifoldDescriptor,
    m: &Metric,
    u: &Derivation,
    v: &Derivation,
    w: &Derivation,
) -> Result<ScalarValue> {
    let g = |x: &Derivation, y: &Derivation| metric_pair(a, m, x, y);
    let terms = [
        a.apply_derivation(u, &g(v, w)?)?,
        a.apply_derivation(v, &g(w, u)?)?,
        a.apply_derivation(w, &g(u, v)?)?.neg(),
        g(&a.lie_bracket(u, v)?, w)?,
        g(&a.lie_bracket(v, w)?, u)?.neg(),
        g(&a.lie_bracket(w, u)?, v)?,
    ];
    Ok(sum(a.context(), terms).scale(&rational(1, 2)))
}

/// `Ric(v,w) = Σ_i (R(u_i, v) w)(a_i)`.
pub fn ricci(a: &AlgebraifoldDescriptor, r: &Tensor) -> Result<Tensor> {
    r.check_owner(a)?;
    r.expect_rank(1, 3)?;
    r.contract(1, 1)
}

/// `S = Σ g^{ij} Ric_{ij}`.
pub fn ricci_scalar(a: &AlgebraifoldDescriptor, m: &Metric, ric: &Tensor) -> Result<ScalarValue> {
    ric.check_owner(a)?;
    ric.expect_rank(0, 2)?;
    let s = m.g_inv().tensor_product(ric)?.contract(1, 1)?.contract(1, 1)?;
    Ok(s.as_scalar().expect("rank (0,0)"))
}

/// Riemann, Ricci, scalar and Einstein tensors of a metric.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub connection: ConnectionCoeffs,
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub scalar: ScalarValue,
    pub einstein: Tensor,
}

pub fn curvature_report(a: &AlgebraifoldDescriptor, m: &Metric) -> Result<CurvatureReport> {
    let connection = levi_civita(a, m)?;
    let riemann = curvature_tensor(a, &connection)?;
    let ric = ricci(a, &riemann)?;
    let scalar = ricci_scalar(a, m, &ric)?;
    let einstein = ric.sub(&m.g().scale(&scalar.scale(&rational(1, 2)))?)?;
    Ok(CurvatureReport {
        connection,
        riemann,
        ricci: ric,
        scalar,
        einstein,
    })
}

/// `Ric − ½ S g`.
pub fn einstein_tensor(a: &AlgebraifoldDescriptor, m: &Metric) -> Result<Tensor> {
    Ok(curvature_report(a, m)?.einstein)
}

/// `Ric − ½ S g + Λ g − κ T`. Both couplings must be constants and `κ ≠ 0`.
pub fn efe_residual(
    a: &AlgebraifoldDescriptor,
    m: &Metric,
    lambda: &ScalarValue,
    kappa: &ScalarValue,
    t: &Tensor,
) -> Result<Tensor> {
    for c in [lambda, kappa] {
        if !a.constants_check(c)? {
            return Err(Error::NonConstantCoupling(c.to_string()));
        }
    }
    if kappa.is_zero() {
        return Err(Error::ZeroCoupling);
    }
    t.check_owner(a)?;
    t.expect_rank(0, 2)?;
    let einstein = einstein_tensor(a, m)?;
    einstein.add(&m.g().scale(lambda)?)?.sub(&t.scale(kappa)?)
}
