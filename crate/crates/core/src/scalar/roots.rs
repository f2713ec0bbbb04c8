//! Root search for low-degree relations over the base function field.
//!
//! A relation of degree 2 or 3 in its generator is reducible exactly when it
//! has a root in the base field. The relation is first brought to the monic
//! integral form `Q(Y) = Y^d + Σ b_k Y^k` with `Y = c_d·y`, whose base-field
//! roots are polynomials of bounded degree. Such a root specializes to a
//! rational root of `Q` at an integer point; every simple rational root is
//! lifted back to a truncated power series around that point and tested.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{MultiPoly, Rational};
use super::ratfunc::RatFunc;

pub(crate) enum RootSearch {
    NoRoot,
    Root(RatFunc),
    Inconclusive,
}

const MAX_POINTS: usize = 24;
const MAX_TRIAL: u64 = 1_000_000_000_000;

pub(crate) fn base_root(relation: &MultiPoly, generator: usize) -> RootSearch {
    let vars = relation.vars().clone();
    let c = relation.coeffs_in(generator);
    let d = c.len() - 1;
    if d == 0 {
        return RootSearch::NoRoot;
    }
    let cd = &c[d];
    let b: Vec<MultiPoly> = (0..d)
        .map(|k| &c[k] * &cd.pow((d - 1 - k) as u32))
        .collect();
    let bound = b
        .iter()
        .enumerate()
        .filter(|(_, bk)| !bk.is_zero())
        .map(|(k, bk)| bk.total_degree() / (d - k) as u32)
        .max()
        .unwrap_or(0);
    let active: Vec<usize> = (0..vars.len())
        .filter(|&v| b.iter().any(|bk| bk.involves(v)))
        .collect();

    for attempt in 0..MAX_POINTS {
        let mut point = vec![Rational::zero(); vars.len()];
        for (j, &v) in active.iter().enumerate() {
            let raw = (attempt * 7 + j * 5 + 3) % 13;
            point[v] = Rational::from_integer(BigInt::from(raw as i64 - 6));
        }
        let special: Vec<Rational> = b.iter().map(|bk| bk.eval(&point)).collect();
        let Some(roots) = monic_rational_roots(&special) else {
            continue;
        };
        if roots.is_empty() {
            return RootSearch::NoRoot;
        }
        if roots.iter().any(|r| eval_monic_derivative(&special, r).is_zero()) {
            continue;
        }
        for r in &roots {
            if let Some(z) = lift(&b, &point, r, bound) {
                return RootSearch::Root(RatFunc::new(z, cd.clone()));
            }
        }
        return RootSearch::NoRoot;
    }
    RootSearch::Inconclusive
}

/// `Q(Z)` for the monic integral form, truncated when `trunc` is set.
fn eval_q(b: &[MultiPoly], z: &MultiPoly, trunc: Option<u32>) -> MultiPoly {
    let vars = z.vars().clone();
    let mut acc = MultiPoly::one(vars);
    for bk in b.iter().rev() {
        acc = &(&acc * z) + bk;
        if let Some(t) = trunc {
            acc = acc.truncate(t);
        }
    }
    acc
}

fn lift(b: &[MultiPoly], point: &[Rational], r: &Rational, bound: u32) -> Option<MultiPoly> {
    let vars = b[0].vars().clone();
    let n = vars.len();
    let shift_by = |sign: i64| -> Vec<MultiPoly> {
        (0..n)
            .map(|v| {
                let x = MultiPoly::var(vars.clone(), v);
                let a = MultiPoly::constant(vars.clone(), &point[v] * Rational::from_integer(BigInt::from(sign)));
                &x + &a
            })
            .collect()
    };
    let forward = shift_by(1);
    let shifted: Vec<MultiPoly> = b.iter().map(|bk| bk.compose(&forward, vars.clone())).collect();
    let special: Vec<Rational> = b.iter().map(|bk| bk.eval(point)).collect();
    let slope_inv = eval_monic_derivative(&special, r).recip();

    let mut z = MultiPoly::constant(vars.clone(), r.clone());
    for _ in 0..=bound {
        let q = eval_q(&shifted, &z, Some(bound));
        z = (&z - &q.scale(&slope_inv)).truncate(bound);
    }
    let back = shift_by(-1);
    let candidate = z.compose(&back, vars);
    eval_q(b, &candidate, None).is_zero().then_some(candidate)
}

fn eval_monic_derivative(coeffs: &[Rational], x: &Rational) -> Rational {
    let d = coeffs.len();
    let mut acc = Rational::from_integer(BigInt::from(d as i64));
    for k in (1..d).rev() {
        acc = acc * x + &coeffs[k] * Rational::from_integer(BigInt::from(k as i64));
    }
    acc
}

fn eval_monic(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::one();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Rational roots of `Y^d + Σ coeffs[k] Y^k`; `None` when the integers
/// involved are too large to enumerate divisors.
fn monic_rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    // integer coefficients, low to high, leading = lcm
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    ints.push(lcm);

    let mut roots = Vec::new();
    let mut low = 0;
    while low < ints.len() - 1 && ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rational::zero());
    }
    if low == ints.len() - 1 {
        return Some(roots);
    }
    let constant = ints[low].abs().to_u64().filter(|&v| v <= MAX_TRIAL)?;
    let leading = ints.last().unwrap().abs().to_u64().filter(|&v| v <= MAX_TRIAL)?;
    for p in divisors(constant) {
        for q in divisors(leading) {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(p) * sign, BigInt::from(q));
                if !roots.contains(&cand) && eval_monic(coeffs, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}
