//! Sparse multivariate polynomials over ℚ.
//!
//! Terms are kept sorted in strictly descending graded-lexicographic order
//! on the variable order of the owning list, with no zero coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;
pub type Monomial = Vec<u32>;

/// Graded lexicographic comparison: total degree first, then the exponent
/// of the earliest variable.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", crate::scalar::render::render_poly(self))
    }
}

impl MultiPoly {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MultiPoly {
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: Arc<[String]>, c: Rational) -> Self {
        let n = vars.len();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(vec![0; n], c)]
        };
        MultiPoly { vars, terms }
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The variable with the given index.
    pub fn var(vars: Arc<[String]>, index: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[index] = 1;
        MultiPoly {
            vars,
            terms: vec![(m, Rational::one())],
        }
    }

    pub fn monomial(vars: Arc<[String]>, exps: Monomial, c: Rational) -> Self {
        debug_assert_eq!(exps.len(), vars.len());
        let terms = if c.is_zero() { Vec::new() } else { vec![(exps, c)] };
        MultiPoly { vars, terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), vars.len());
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MultiPoly { vars, terms }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .first()
            .map(|t| t.0.iter().sum())
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0[var] > 0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.involves(v)).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.iter().zip(exps).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        }
    }

    /// Normalizes so that the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
            let mut m2 = m.clone();
            let e = m2[var];
            m2[var] -= 1;
            (m2, c * Rational::from_integer(BigInt::from(e)))
        });
        // differentiation by one variable keeps distinct monomials distinct
        // but may reorder them
        let mut terms: Vec<_> = terms.collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = divisor.terms.first()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        if divisor.is_constant() {
            return Some(self.scale(&lc.recip()));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            if rm.iter().zip(lm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(lm).map(|(a, b)| a - b).collect();
            let qc = rc / lc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quotient.push((qm, qc));
        }
        // quotient terms were produced in descending order
        Some(MultiPoly {
            vars: self.vars.clone(),
            terms: quotient,
        })
    }

    /// Coefficients with respect to one variable: `self = Σ_k c_k · var^k`,
    /// the `c_k` not involving `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m[var] as usize;
            let mut m2 = m.clone();
            m2[var] = 0;
            buckets[k].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut terms| {
                terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
                MultiPoly {
                    vars: self.vars.clone(),
                    terms,
                }
            })
            .collect()
    }

    /// Leading coefficient with respect to one variable.
    pub fn lead_coeff_in(&self, var: usize) -> MultiPoly {
        let deg = self.degree_in(var);
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] == deg)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[var] = 0;
                (m2, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(vars: Arc<[String]>, var: usize, coeffs: &[MultiPoly]) -> Self {
        let terms = coeffs.iter().enumerate().flat_map(|(k, c)| {
            c.terms.iter().map(move |(m, q)| {
                let mut m2 = m.clone();
                m2[var] += k as u32;
                (m2, q.clone())
            })
        });
        MultiPoly::from_terms(vars, terms)
    }

    /// Substitutes every variable by a polynomial over `target` variables.
    pub fn compose(&self, images: &[MultiPoly], target: Arc<[String]>) -> MultiPoly {
        debug_assert_eq!(images.len(), self.nvars());
        let mut powers: Vec<Vec<MultiPoly>> = vec![Vec::new(); images.len()];
        let mut acc = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target.clone(), c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(MultiPoly::one(target.clone()));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[v];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Drops all terms of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() <= max_degree)
                .cloned()
                .collect(),
        }
    }

    /// Re-expresses the polynomial over another variable list with the
    /// given index map (`map[i]` is the new index of old variable `i`).
    pub fn remap(&self, target: Arc<[String]>, map: &[usize]) -> Self {
        let n = target.len();
        MultiPoly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut m2 = vec![0; n];
                for (i, &e) in m.iter().enumerate() {
                    m2[map[i]] += e;
                }
                (m2, c.clone())
            }),
        )
    }

    fn merge(&self, other: &MultiPoly, negate_other: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grlex_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: out,
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Arc<[String]> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        assert_eq!(grlex_cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        assert_eq!(grlex_cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(grlex_cmp(&[1, 1], &[0, 2]), Ordering::Greater);
    }

    #[test]
    fn difference_of_squares() {
        let v = vars(&["x", "y"]);
        let x = MultiPoly::var(v.clone(), 0);
        let y = MultiPoly::var(v.clone(), 1);
        let p = &(&x + &y) * &(&x - &y);
        let expected = &(&x * &x) - &(&y * &y);
        assert_eq!(p, expected);
        assert_eq!(p.exact_div(&(&x + &y)), Some(&x - &y));
        assert_eq!(p.exact_div(&(&x + &MultiPoly::one(v.clone()))), None);
    }

    #[test]
    fn coefficient_split_round_trips() {
        let v = vars(&["x", "y"]);
        let x = MultiPoly::var(v.clone(), 0);
        let y = MultiPoly::var(v.clone(), 1);
        let p = &(&(&x * &y) * &y) + &(&x.pow(3) + &y);
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(MultiPoly::from_coeffs_in(v, 1, &cs), p);
    }
}
