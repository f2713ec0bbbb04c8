//! Quotients of polynomials in canonical form: coprime numerator and
//! denominator, denominator monic in graded-lexicographic order.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::{MultiPoly, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn zero(vars: Arc<[String]>) -> Self {
        RatFunc {
            num: MultiPoly::zero(vars.clone()),
            den: MultiPoly::one(vars),
        }
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        RatFunc {
            num: MultiPoly::one(vars.clone()),
            den: MultiPoly::one(vars),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars().clone());
        RatFunc { num: p, den }
    }

    pub fn from_rational(vars: Arc<[String]>, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    /// Reduces `num / den` to canonical form. Panics if `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(num.vars().clone());
        }
        if den.is_constant() {
            let c = den.leading_coeff().recip();
            return RatFunc {
                num: num.scale(&c),
                den: MultiPoly::one(den.vars().clone()),
            };
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        Self::fix_lead(num, den)
    }

    /// Assumes the inputs are already coprime.
    fn fix_lead(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<[String]> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &other.num);
            }
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        let g = poly_gcd(&self.den, &other.den);
        let da = self.den.exact_div(&g).expect("gcd divides");
        let db = other.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &db) + &(&other.num * &da);
        let den = &self.den * &db;
        if g.is_one() {
            // coprime denominators: only factors of the denominators can cancel,
            // and none does, so the sum is already reduced
            Self::fix_lead(num, den)
        } else {
            RatFunc::new(num, den)
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(&self.num * &other.num);
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = other.den.exact_div(&g1).expect("gcd divides");
        let n2 = other.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        Self::fix_lead(&n1 * &n2, &d1 * &d2)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::fix_lead(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        // powers of coprime polynomials stay coprime
        Self::fix_lead(self.num.pow(e), self.den.pow(e))
    }

    pub fn derivative(&self, var: usize) -> RatFunc {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RatFunc::new(num, &self.den * &self.den)
    }

    /// True when the denominator involves none of the given variables.
    pub fn den_free_of(&self, vars: &[usize]) -> bool {
        vars.iter().all(|&v| !self.den.involves(v))
    }
}
