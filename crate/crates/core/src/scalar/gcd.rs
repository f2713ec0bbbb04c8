//! Multivariate polynomial GCD over ℚ.
//!
//! Recursive content/primitive-part scheme: pick a main variable, split off
//! the contents (a GCD in one fewer variable), and run a primitive
//! pseudo-remainder sequence on the primitive parts.

use super::poly::{Monomial, MultiPoly};

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let one = || MultiPoly::one(a.vars().clone());
    if a.is_constant() || b.is_constant() {
        return one();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    // cheap divisibility probes before the full sequence
    if a.len() <= b.len() && b.exact_div(a).is_some() {
        return a.monic();
    }
    if b.len() < a.len() && a.exact_div(b).is_some() {
        return b.monic();
    }

    let sa = a.support();
    let sb = b.support();
    // a variable present in only one argument cannot occur in the gcd
    if let Some(&v) = sa.iter().find(|v| !sb.contains(v)) {
        return gcd_with_content(b, a, v);
    }
    if let Some(&v) = sb.iter().find(|v| !sa.contains(v)) {
        return gcd_with_content(a, b, v);
    }
    // main variable: the one of smallest joint degree keeps the PRS short
    let v = *sa
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable");

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g_content = gcd_inner(&ca, &cb);
    let g_prim = primitive_prs(pa, pb, v);
    (&g_content * &g_prim).monic()
}

/// gcd(a, b) where `b` involves `v` but `a` does not.
fn gcd_with_content(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = a.monic();
    for c in b.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_inner(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn monomial_gcd(m: &MultiPoly, f: &MultiPoly) -> MultiPoly {
    let mut exps: Monomial = m.terms()[0].0.clone();
    for (t, _) in f.terms() {
        for (e, &te) in exps.iter_mut().zip(t) {
            *e = (*e).min(te);
        }
    }
    MultiPoly::monomial(m.vars().clone(), exps, num_traits::One::one())
}

/// Content with respect to `v`: the gcd of the coefficients of powers of `v`.
pub(crate) fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = p.coeffs_in(v);
    let mut nonzero = coeffs.iter().filter(|c| !c.is_zero());
    let mut g = match nonzero.next() {
        Some(c) => c.monic(),
        None => return MultiPoly::zero(p.vars().clone()),
    };
    for c in nonzero {
        if g.is_one() {
            break;
        }
        g = gcd_inner(&g, c);
    }
    g
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").monic()
}

/// Lazy pseudo-remainder of `f` by `g` in the variable `v`.
fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let dg = g.degree_in(v);
    let lg = g.lead_coeff_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.involves(v) && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let mut shift = vec![0; r.nvars()];
        shift[v] = dr - dg;
        let shifted = (&lr * g).mul_monomial(&shift, &num_traits::One::one());
        r = &(&lg * &r) - &shifted;
    }
    r
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return primitive_part(&g, v);
        }
        if !r.involves(v) {
            return MultiPoly::one(f.vars().clone());
        }
        f = g;
        g = primitive_part(&r, v);
    }
}
