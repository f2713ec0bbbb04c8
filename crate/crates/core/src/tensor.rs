//! Rank-(r,s) tensors as sparse component tables in the fixed dual basis.
//!
//! Index tuples list the `r` contravariant indices first, then the `s`
//! covariant ones. The Rust API uses 0-based component indices; contraction
//! slots are numbered from 1 within each group, and rendered components are
//! 1-based.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebraifold::{AlgebraifoldDescriptor, Derivation, OneForm};
use crate::error::{Error, Result};
use crate::scalar::{same_context, ScalarContext, ScalarValue};

#[derive(Clone, Debug)]
pub struct Tensor {
    ctx: Arc<ScalarContext>,
    dim: usize,
    contravariant: usize,
    covariant: usize,
    components: BTreeMap<Vec<usize>, ScalarValue>,
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.contravariant == other.contravariant
            && self.covariant == other.covariant
            && same_context(&self.ctx, &other.ctx)
            && self.components == other.components
    }
}

impl Eq for Tensor {}

impl Tensor {
    pub fn zero(a: &AlgebraifoldDescriptor, contravariant: usize, covariant: usize) -> Self {
        Tensor {
            ctx: a.context().clone(),
            dim: a.dim(),
            contravariant,
            covariant,
            components: BTreeMap::new(),
        }
    }

    /// A rank-(0,0) tensor.
    pub fn scalar(a: &AlgebraifoldDescriptor, value: ScalarValue) -> Result<Self> {
        let mut t = Tensor::zero(a, 0, 0);
        t.set(vec![], value)?;
        Ok(t)
    }

    /// Builds a tensor from a dense nested description: `f(index)` gives each
    /// component.
    pub fn from_fn(
        a: &AlgebraifoldDescriptor,
        contravariant: usize,
        covariant: usize,
        mut f: impl FnMut(&[usize]) -> Result<ScalarValue>,
    ) -> Result<Self> {
        let mut t = Tensor::zero(a, contravariant, covariant);
        for idx in all_indices(a.dim(), contravariant + covariant) {
            let v = f(&idx)?;
            t.set(idx, v)?;
        }
        Ok(t)
    }

    /// An n×n matrix as a rank-(0,2) tensor.
    pub fn covariant_matrix(a: &AlgebraifoldDescriptor, m: &[Vec<ScalarValue>]) -> Result<Self> {
        Self::matrix(a, m, 0, 2)
    }

    /// An n×n matrix as a rank-(2,0) tensor.
    pub fn contravariant_matrix(a: &AlgebraifoldDescriptor, m: &[Vec<ScalarValue>]) -> Result<Self> {
        Self::matrix(a, m, 2, 0)
    }

    fn matrix(a: &AlgebraifoldDescriptor, m: &[Vec<ScalarValue>], r: usize, s: usize) -> Result<Self> {
        let n = a.dim();
        if m.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: m.len() });
        }
        for row in m {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: row.len() });
            }
        }
        Self::from_fn(a, r, s, |idx| Ok(m[idx[0]][idx[1]].clone()))
    }

    pub fn from_derivation(a: &AlgebraifoldDescriptor, v: &Derivation) -> Result<Self> {
        Self::from_fn(a, 1, 0, |idx| Ok(v.coeffs()[idx[0]].clone()))
    }

    pub fn from_one_form(a: &AlgebraifoldDescriptor, eta: &OneForm) -> Result<Self> {
        Self::from_fn(a, 0, 1, |idx| Ok(eta.coeffs()[idx[0]].clone()))
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(r, s)`.
    pub fn rank(&self) -> (usize, usize) {
        (self.contravariant, self.covariant)
    }

    /// Nonzero components in index order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarValue)> {
        self.components.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> ScalarValue {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| ScalarValue::zero(&self.ctx))
    }

    /// Sets a component; zero removes it.
    pub fn set(&mut self, idx: Vec<usize>, value: ScalarValue) -> Result<()> {
        if idx.len() != self.contravariant + self.covariant {
            return Err(Error::ArityMismatch {
                expected: self.contravariant + self.covariant,
                found: idx.len(),
            });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::SlotOutOfRange {
                slot: bad + 1,
                contravariant: self.contravariant,
                covariant: self.covariant,
            });
        }
        if !same_context(value.context(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        if value.is_zero() {
            self.components.remove(&idx);
        } else {
            self.components.insert(idx, value);
        }
        Ok(())
    }

    /// Adds `value` to a component (indices assumed valid).
    pub(crate) fn accumulate(&mut self, idx: Vec<usize>, value: ScalarValue) {
        if value.is_zero() {
            return;
        }
        match self.components.get(&idx) {
            Some(old) => {
                let new = old + &value;
                if new.is_zero() {
                    self.components.remove(&idx);
                } else {
                    self.components.insert(idx, new);
                }
            }
            None => {
                self.components.insert(idx, value);
            }
        }
    }

    /// The value of a rank-(0,0) tensor.
    pub fn as_scalar(&self) -> Option<ScalarValue> {
        (self.contravariant == 0 && self.covariant == 0).then(|| self.get(&[]))
    }

    pub fn as_derivation(&self) -> Option<Derivation> {
        (self.rank() == (1, 0)).then(|| Derivation::new((0..self.dim).map(|i| self.get(&[i])).collect()))
    }

    pub fn as_one_form(&self) -> Option<OneForm> {
        (self.rank() == (0, 1)).then(|| OneForm::new((0..self.dim).map(|i| self.get(&[i])).collect()))
    }

    fn compatible(&self, other: &Tensor) -> Result<()> {
        if self.dim == other.dim && same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub(crate) fn check_owner(&self, a: &AlgebraifoldDescriptor) -> Result<()> {
        if self.dim == a.dim() && same_context(&self.ctx, a.context()) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub(crate) fn expect_rank(&self, contravariant: usize, covariant: usize) -> Result<()> {
        if self.rank() == (contravariant, covariant) {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                contravariant,
                covariant,
                found_contravariant: self.contravariant,
                found_covariant: self.covariant,
            })
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.compatible(other)?;
        other.expect_rank(self.contravariant, self.covariant)?;
        let mut out = self.clone();
        for (idx, v) in &other.components {
            out.accumulate(idx.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Tensor {
        self.map(|v| v.neg())
    }

    /// Multiplication by an element of the algebra.
    pub fn scale(&self, a: &ScalarValue) -> Result<Tensor> {
        if !same_context(a.context(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(self.map(|v| v * a))
    }

    fn map(&self, f: impl Fn(&ScalarValue) -> ScalarValue) -> Tensor {
        let components = self
            .components
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Tensor {
            components,
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Tensor {
        Tensor {
            ctx: self.ctx.clone(),
            dim: self.dim,
            contravariant: self.contravariant,
            covariant: self.covariant,
            components: BTreeMap::new(),
        }
    }

    /// Rank (r+r', s+s'); indices ordered as `T^I U^I' T_J U_J'`.
    pub fn tensor_product(&self, other: &Tensor) -> Result<Tensor> {
        self.compatible(other)?;
        let mut out = Tensor {
            contravariant: self.contravariant + other.contravariant,
            covariant: self.covariant + other.covariant,
            ..self.clone_shape()
        };
        for (i, a) in &self.components {
            let (ic, iv) = i.split_at(self.contravariant);
            for (j, b) in &other.components {
                let (jc, jv) = j.split_at(other.contravariant);
                let mut idx = Vec::with_capacity(i.len() + j.len());
                idx.extend_from_slice(ic);
                idx.extend_from_slice(jc);
                idx.extend_from_slice(iv);
                idx.extend_from_slice(jv);
                out.accumulate(idx, a * b);
            }
        }
        Ok(out)
    }

    /// Sums the `contra_slot`-th contravariant index against the
    /// `cov_slot`-th covariant index (both 1-based).
    pub fn contract(&self, contra_slot: usize, cov_slot: usize) -> Result<Tensor> {
        let out_of_range = |slot| Error::SlotOutOfRange {
            slot,
            contravariant: self.contravariant,
            covariant: self.covariant,
        };
        if contra_slot == 0 || contra_slot > self.contravariant {
            return Err(out_of_range(contra_slot));
        }
        if cov_slot == 0 || cov_slot > self.covariant {
            return Err(out_of_range(cov_slot));
        }
        let p = contra_slot - 1;
        let q = self.contravariant + cov_slot - 1;
        let mut out = Tensor {
            contravariant: self.contravariant - 1,
            covariant: self.covariant - 1,
            ..self.clone_shape()
        };
        for (idx, v) in &self.components {
            if idx[p] != idx[q] {
                continue;
            }
            let reduced: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != p && k != q)
                .map(|(_, &i)| i)
                .collect();
            out.accumulate(reduced, v.clone());
        }
        Ok(out)
    }

    /// Full multilinear pairing against `r` one-forms and `s` derivations.
    pub fn evaluate(&self, oneforms: &[OneForm], derivations: &[Derivation]) -> Result<ScalarValue> {
        let arity = |expected, found| Error::ArityMismatch { expected, found };
        if oneforms.len() != self.contravariant {
            return Err(arity(self.contravariant, oneforms.len()));
        }
        if derivations.len() != self.covariant {
            return Err(arity(self.covariant, derivations.len()));
        }
        for c in oneforms
            .iter()
            .flat_map(|f| f.coeffs())
            .chain(derivations.iter().flat_map(|d| d.coeffs()))
        {
            if !same_context(c.context(), &self.ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        for len in oneforms.iter().map(|f| f.len()).chain(derivations.iter().map(|d| d.len())) {
            if len != self.dim {
                return Err(Error::LengthMismatch { expected: self.dim, found: len });
            }
        }
        let mut acc = ScalarValue::zero(&self.ctx);
        'outer: for (idx, v) in &self.components {
            let mut term = v.clone();
            for (k, &i) in idx.iter().enumerate() {
                let c = if k < self.contravariant {
                    &oneforms[k].coeffs()[i]
                } else {
                    &derivations[k - self.contravariant].coeffs()[i]
                };
                if c.is_zero() {
                    continue 'outer;
                }
                term = &term * c;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Dense `n × n` view of a rank-2 tensor.
    pub fn to_matrix(&self) -> Option<Vec<Vec<ScalarValue>>> {
        if self.contravariant + self.covariant != 2 {
            return None;
        }
        Some(
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.get(&[i, j])).collect())
                .collect(),
        )
    }
}

/// Every index tuple in `[0, n)^k`, lexicographically.
pub fn all_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn tensor_product(t: &Tensor, u: &Tensor) -> Result<Tensor> {
    t.tensor_product(u)
}

pub fn contract(t: &Tensor, contra_slot: usize, cov_slot: usize) -> Result<Tensor> {
    t.contract(contra_slot, cov_slot)
}

/// The identity rank-(1,1) tensor.
pub fn kronecker(a: &AlgebraifoldDescriptor) -> Tensor {
    let mut t = Tensor::zero(a, 1, 1);
    for i in 0..a.dim() {
        t.components.insert(vec![i, i], a.one());
    }
    t
}

pub fn evaluate_tensor(t: &Tensor, oneforms: &[OneForm], derivations: &[Derivation]) -> Result<ScalarValue> {
    t.evaluate(oneforms, derivations)
}

/// `L_u T` in components:
/// `u(T^I_J) − Σ_p ∂_k(u^{i_p}) T^{..k..}_J + Σ_q ∂_{j_q}(u^k) T^I_{..k..}`.
pub fn lie_derivative(a: &AlgebraifoldDescriptor, u: &Derivation, t: &Tensor) -> Result<Tensor> {
    t.check_owner(a)?;
    let n = a.dim();
    // du[i][k] = ∂_k(u^i)
    let du: Vec<Vec<ScalarValue>> = u
        .coeffs()
        .iter()
        .map(|c| a.basis_action(c))
        .collect::<Result<_>>()?;
    if du.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: du.len() });
    }
    let r = t.contravariant;
    let mut out = t.clone_shape();
    for (idx, v) in &t.components {
        out.accumulate(idx.clone(), a.apply_derivation(u, v)?);
        for p in 0..idx.len() {
            for k in 0..n {
                let mut target = idx.clone();
                target[p] = k;
                if p < r {
                    // component idx feeds target with i_p = k via −∂_{idx[p]}(u^k)
                    let c = &du[k][idx[p]];
                    if !c.is_zero() {
                        out.accumulate(target, (c * v).neg());
                    }
                } else {
                    let c = &du[idx[p]][k];
                    if !c.is_zero() {
                        out.accumulate(target, c * v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `g` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    g: Tensor,
    g_inv: Tensor,
}

impl Metric {
    pub fn g(&self) -> &Tensor {
        &self.g
    }

    pub fn g_inv(&self) -> &Tensor {
        &self.g_inv
    }
}

/// Determinant by fraction-free elimination.
pub fn determinant(ctx: &Arc<ScalarContext>, m: &[Vec<ScalarValue>]) -> ScalarValue {
    let n = m.len();
    if n == 0 {
        return ScalarValue::one(ctx);
    }
    let mut a: Vec<Vec<ScalarValue>> = m.to_vec();
    let mut sign = false;
    let mut prev = ScalarValue::one(ctx);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return ScalarValue::zero(ctx),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.checked_div(&prev).expect("fraction-free step is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

fn minor(m: &[Vec<ScalarValue>], row: usize, col: usize) -> Vec<Vec<ScalarValue>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Inverts a symmetric rank-(0,2) tensor by adjugate over determinant. In
/// polynomial contexts every entry of the inverse must lie in the algebra.
pub fn metric_inverse(a: &AlgebraifoldDescriptor, g: &Tensor) -> Result<Metric> {
    g.check_owner(a)?;
    g.expect_rank(0, 2)?;
    let n = a.dim();
    let m = g.to_matrix().expect("rank two");
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric(i + 1, j + 1));
            }
        }
    }
    let ctx = a.context();
    let det = determinant(ctx, &m);
    if det.is_zero() {
        return Err(Error::Degenerate);
    }
    let mut g_inv = Tensor::zero(a, 2, 0);
    for i in 0..n {
        for j in i..n {
            // inverse[i][j] = (−1)^{i+j} det(minor(j, i)) / det
            let c = determinant(ctx, &minor(&m, j, i));
            let c = if (i + j) % 2 == 1 { c.neg() } else { c };
            let v = c.checked_div(&det).map_err(|e| match e {
                Error::NotDivisible { .. } => Error::NotInvertibleInAlgebra(det.to_string()),
                other => other,
            })?;
            if i != j {
                g_inv.set(vec![j, i], v.clone())?;
            }
            g_inv.set(vec![i, j], v)?;
        }
    }
    Ok(Metric { g: g.clone(), g_inv })
}

/// `v ↦ g(v, ·)`.
pub fn musical_flat(a: &AlgebraifoldDescriptor, m: &Metric, v: &Derivation) -> Result<OneForm> {
    m.g.check_owner(a)?;
    let t = m.g.tensor_product(&Tensor::from_derivation(a, v)?)?.contract(1, 1)?;
    Ok(t.as_one_form().expect("rank (0,1)"))
}

/// `η ↦ g⁻¹(η, ·)`.
pub fn musical_sharp(a: &AlgebraifoldDescriptor, m: &Metric, eta: &OneForm) -> Result<Derivation> {
    m.g_inv.check_owner(a)?;
    let t = m.g_inv.tensor_product(&Tensor::from_one_form(a, eta)?)?.contract(1, 1)?;
    Ok(t.as_derivation().expect("rank (1,0)"))
}
