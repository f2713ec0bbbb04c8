//! Dense univariate polynomials whose coefficients are rational functions.
//! Coefficient `k` multiplies the `k`-th power; no trailing zeros.

use std::sync::Arc;

use super::ratfunc::RatFunc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    vars: Arc<[String]>,
    coeffs: Vec<RatFunc>,
}

impl UPoly {
    pub fn new(vars: Arc<[String]>, mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(RatFunc::is_zero) {
            coeffs.pop();
        }
        UPoly { vars, coeffs }
    }

    pub fn zero(vars: Arc<[String]>) -> Self {
        UPoly {
            vars,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: RatFunc) -> Self {
        let vars = c.vars().clone();
        UPoly::new(vars, vec![c])
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.vars.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> RatFunc {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.vars.clone()))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        UPoly::new(self.vars.clone(), coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect();
        UPoly::new(self.vars.clone(), coeffs)
    }

    pub fn scale(&self, c: &RatFunc) -> UPoly {
        UPoly::new(
            self.vars.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.vars.clone());
        }
        let mut out = vec![RatFunc::zero(self.vars.clone()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(self.vars.clone(), out)
    }

    /// Formal derivative in the polynomial variable.
    pub fn derivative(&self) -> UPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&super::poly::rational(k as i64, 1)))
            .collect();
        UPoly::new(self.vars.clone(), coeffs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.lead().inv().expect("nonzero lead");
        let mut rem = self.clone();
        let mut quot = vec![RatFunc::zero(self.vars.clone()); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = rem.lead().mul(&lead_inv);
            let shift = dr - dd;
            let mut sub = vec![RatFunc::zero(self.vars.clone()); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.mul(&q)));
            rem = rem.sub(&UPoly::new(self.vars.clone(), sub));
            quot[shift] = q;
        }
        (UPoly::new(self.vars.clone(), quot), rem)
    }

    pub fn rem(&self, divisor: &UPoly) -> UPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> UPoly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s)` with `s·self ≡ g (mod modulus)` and
    /// `g` the monic gcd.
    pub fn gcd_ext(&self, modulus: &UPoly) -> (UPoly, UPoly) {
        let vars = self.vars.clone();
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut s0, mut s1) = (UPoly::zero(vars.clone()), UPoly::constant(RatFunc::one(vars)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.lead().inv() {
            Some(inv) => (r0.scale(&inv), s0.scale(&inv)),
            None => (r0, s0),
        }
    }
}
