//! Simple algebraic extensions `K[y]/(p)` of a rational function field `K`.
//!
//! Elements are coefficient vectors `c_0 + c_1 y + … + c_{d-1} y^{d-1}` with
//! `d = deg_y p`. All products are reduced modulo the monic form of `p`.

use std::sync::Arc;

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::upoly::UPoly;

/// An element of the extension, reduced modulo the minimal relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtElem {
    coeffs: Vec<RatFunc>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// The element as a base-field value when no power of the generator survives.
    pub fn as_base(&self) -> Option<&RatFunc> {
        if self.coeffs[1..].iter().all(RatFunc::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

/// The algebraic generator of a context together with its relation.
#[derive(Clone, Debug)]
pub struct Extension {
    pub(crate) generator: String,
    pub(crate) index: usize,
    pub(crate) relation: MultiPoly,
    pub(crate) modulus: UPoly,
    /// ∂y/∂x for each transcendental, `None` when ∂p/∂y is not invertible.
    pub(crate) generator_derivatives: Option<Vec<ExtElem>>,
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator && self.relation == other.relation
    }
}

impl Extension {
    /// `relation` lives over the full variable list, the generator at `index`.
    pub(crate) fn new(generator: String, index: usize, relation: MultiPoly, transcendentals: &[usize]) -> Self {
        let vars = relation.vars().clone();
        let coeffs: Vec<RatFunc> = relation
            .coeffs_in(index)
            .into_iter()
            .map(RatFunc::from_poly)
            .collect();
        let modulus = UPoly::new(vars, coeffs).monic();
        let mut ext = Extension {
            generator,
            index,
            relation,
            modulus,
            generator_derivatives: None,
        };
        ext.generator_derivatives = ext.compute_generator_derivatives(transcendentals);
        ext
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn relation(&self) -> &MultiPoly {
        &self.relation
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub(crate) fn vars(&self) -> &Arc<[String]> {
        self.relation.vars()
    }

    /// True when the relation and its generator derivative are coprime.
    pub fn is_separable(&self) -> bool {
        let dp = self.modulus.derivative();
        !dp.is_zero() && self.modulus.gcd(&dp).degree() == Some(0)
    }

    fn compute_generator_derivatives(&self, transcendentals: &[usize]) -> Option<Vec<ExtElem>> {
        let dp_dy = self.from_poly(&self.relation.derivative(self.index));
        let inv = self.inv(&dp_dy)?;
        Some(
            transcendentals
                .iter()
                .map(|&v| {
                    let dp_dx = self.from_poly(&self.relation.derivative(v));
                    self.neg(&self.mul(&dp_dx, &inv))
                })
                .collect(),
        )
    }

    fn to_upoly(&self, a: &ExtElem) -> UPoly {
        UPoly::new(self.vars().clone(), a.coeffs.clone())
    }

    fn from_upoly(&self, p: &UPoly) -> ExtElem {
        let d = self.degree();
        let r = if p.degree().is_some_and(|k| k >= d) {
            p.rem(&self.modulus)
        } else {
            p.clone()
        };
        ExtElem {
            coeffs: (0..d).map(|k| r.coeff(k)).collect(),
        }
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![RatFunc::zero(self.vars().clone()); self.degree()],
        }
    }

    pub fn from_base(&self, c: RatFunc) -> ExtElem {
        let mut coeffs = vec![RatFunc::zero(self.vars().clone()); self.degree()];
        coeffs[0] = c;
        ExtElem { coeffs }
    }

    pub fn generator_elem(&self) -> ExtElem {
        self.from_upoly(&UPoly::new(
            self.vars().clone(),
            vec![RatFunc::zero(self.vars().clone()), RatFunc::one(self.vars().clone())],
        ))
    }

    /// Reduces a polynomial that may involve the generator.
    pub fn from_poly(&self, p: &MultiPoly) -> ExtElem {
        let coeffs = p
            .coeffs_in(self.index)
            .into_iter()
            .map(RatFunc::from_poly)
            .collect();
        self.from_upoly(&UPoly::new(self.vars().clone(), coeffs))
    }

    /// Reduces a rational function that may involve the generator.
    pub fn from_ratfunc(&self, f: &RatFunc) -> Option<ExtElem> {
        let n = self.from_poly(f.num());
        let d = self.from_poly(f.den());
        Some(self.mul(&n, &self.inv(&d)?))
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().map(RatFunc::neg).collect(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.from_upoly(&self.to_upoly(a).mul(&self.to_upoly(b)))
    }

    pub fn scale(&self, a: &ExtElem, c: &RatFunc) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Inverse through the extended Euclidean algorithm; `None` for zero and
    /// for zero divisors of a reducible relation.
    pub fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if a.is_zero() {
            return None;
        }
        let (g, s) = self.to_upoly(a).gcd_ext(&self.modulus);
        if g.degree() != Some(0) {
            return None;
        }
        Some(self.from_upoly(&s))
    }

    /// Partial derivative with respect to the `t`-th transcendental, whose
    /// variable index is `var`.
    pub fn derivative(&self, a: &ExtElem, t: usize, var: usize) -> Option<ExtElem> {
        let dy = &self.generator_derivatives.as_ref()?[t];
        let direct = ExtElem {
            coeffs: a.coeffs.iter().map(|c| c.derivative(var)).collect(),
        };
        // d/dy of Σ c_k y^k, times ∂y/∂x
        let d = self.degree();
        let mut dcoeffs = vec![RatFunc::zero(self.vars().clone()); d];
        for k in 1..d {
            dcoeffs[k - 1] = a.coeffs[k].scale(&super::poly::rational(k as i64, 1));
        }
        let chain = self.mul(&ExtElem { coeffs: dcoeffs }, dy);
        Some(self.add(&direct, &chain))
    }

    /// Lifts to the polynomial ring in the generator, i.e. returns the
    /// numerator over a common denominator: `(Σ N_k y^k, D)`.
    pub fn common_denominator_form(&self, a: &ExtElem) -> (MultiPoly, MultiPoly) {
        let vars = self.vars().clone();
        let mut den = MultiPoly::one(vars.clone());
        for c in &a.coeffs {
            if !c.is_zero() {
                let g = super::gcd::poly_gcd(&den, c.den());
                den = &den * &c.den().exact_div(&g).expect("gcd divides");
            }
        }
        let den = den.monic();
        let mut num = MultiPoly::zero(vars.clone());
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let factor = den.exact_div(c.den()).expect("lcm is a multiple");
            let mut shift = vec![0; vars.len()];
            shift[self.index] = k as u32;
            num = &num + &(&factor * c.num()).mul_monomial(&shift, &num_traits::One::one());
        }
        (num, den)
    }
}
