//! Canonical text form. Terms in descending graded-lexicographic order,
//! explicit `*` and `^`, monic denominators. The output parses back to the
//! same value.

use num_traits::{One, Signed};

use super::poly::{Monomial, MultiPoly, Rational};
use super::ratfunc::RatFunc;
use super::{Repr, ScalarValue};

pub fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn render_monomial(vars: &[String], m: &Monomial) -> String {
    let factors: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars[i].clone()
            } else {
                format!("{}^{}", vars[i], e)
            }
        })
        .collect();
    factors.join(" * ")
}

fn render_term(vars: &[String], m: &Monomial, c: &Rational) -> String {
    let mono = render_monomial(vars, m);
    if mono.is_empty() {
        render_rational(c)
    } else if c.is_one() {
        mono
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{} * {}", render_rational(c), mono)
    }
}

pub fn render_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        if i == 0 {
            out.push_str(&render_term(p.vars(), m, c));
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&render_term(p.vars(), m, &-c));
        } else {
            out.push_str(" + ");
            out.push_str(&render_term(p.vars(), m, c));
        }
    }
    out
}

fn render_quotient(num: &MultiPoly, den: &MultiPoly) -> String {
    if den.is_one() {
        return render_poly(num);
    }
    let n = render_poly(num);
    let n = if num.len() > 1 { format!("({n})") } else { n };
    let d = render_poly(den);
    let single_power = den.len() == 1 && den.terms()[0].0.iter().filter(|&&e| e > 0).count() == 1;
    let d = if single_power { d } else { format!("({d})") };
    format!("{n} / {d}")
}

pub fn render_ratfunc(f: &RatFunc) -> String {
    render_quotient(f.num(), f.den())
}

pub fn render_scalar(a: &ScalarValue) -> String {
    match a.repr() {
        Repr::Rational(q) => render_rational(q),
        Repr::Poly(p) => render_poly(p),
        Repr::RatFunc(f) => render_ratfunc(f),
        Repr::Ext(x) => {
            let e = a.context().extension().expect("extension context");
            let (num, den) = e.common_denominator_form(x);
            render_quotient(&num, &den)
        }
    }
}
